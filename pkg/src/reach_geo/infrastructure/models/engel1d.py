"""
Modelo 1D de Engel - fluxo hamiltoniano, conectividade admissível e diagnósticos
"""
import logging
import math
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np

from ...domain.errors import AdmissibilityError, DomainError, HorizonError, PreconditionError
from ...domain.models import (
    COVECTOR_1D,
    STATE_1D,
    ConservationReport,
    HamState1D,
    HorizontalControls,
    JerkPolynomial,
    State1D,
    StepControl,
    Trajectory,
)
from ..integrators.odeint import integrate

logger = logging.getLogger(__name__)

H_MIN = 1e-6
# passo de conectividade: (a, v, x) em t = 1 contra (e0, e1, e2)
CONNECTIVITY_MATRIX = np.array([
    [1.0, 1 / 2, 1 / 6],
    [1 / 2, 1 / 6, 1 / 24],
    [1 / 6, 1 / 24, 1 / 120],
])
CONNECTIVITY_INVERSE = np.array([
    [3.0, -24.0, 60.0],
    [-24.0, 168.0, -360.0],
    [60.0, -360.0, 720.0],
])
ROUND_TRIP_CONTROL = StepControl(abs_tol=1e-12, rel_tol=1e-12)
# |p_a| da semente; em 1 o fluxo nasce com h = 0
SEED_ACCEL_CAP = 0.95
_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(16)

PhasePoint = Union[HamState1D, Sequence[float], np.ndarray]


def _as_phase(hs: PhasePoint) -> np.ndarray:
    if isinstance(hs, HamState1D):
        return hs.to_array()
    return np.asarray(hs, dtype=float)


def horizontal_momentum(y) -> float:
    """h = v p_x + a p_v + p_t"""
    _, _, v, a, p_t, p_x, p_v, _ = y
    return v * p_x + a * p_v + p_t


def hamiltonian_1d(hs: PhasePoint) -> float:
    y = _as_phase(hs)
    return 0.5 * (horizontal_momentum(y) ** 2 + y[7] ** 2)


def phase_rhs_1d(s: float, y: np.ndarray) -> np.ndarray:
    _, _, v, a, p_t, p_x, p_v, p_a = y
    h = v * p_x + a * p_v + p_t
    return np.array([h, v * h, a * h, p_a, 0.0, 0.0, -p_x * h, -p_v * h])


def ham_rhs_1d(hs: PhasePoint) -> np.ndarray:
    """Lado direito das equações normais na ordem (t, x, v, a, p_t, p_x, p_v, p_a)"""
    return phase_rhs_1d(0.0, _as_phase(hs))


def _trajectory(solution, steps) -> Trajectory:
    return Trajectory(model="1d", parameter=solution.s, states=solution.y[:, :4],
                      covectors=solution.y[:, 4:], steps=steps)


def flow_1d(
    initial: HamState1D,
    span: Tuple[float, float] = (0.0, 1.0),
    ctrl: Optional[StepControl] = None,
    samples: Optional[Sequence[float]] = None,
    admissible: bool = True,
    h_min: float = H_MIN,
) -> Trajectory:
    """Integra o fluxo normal a partir de initial

    Com admissible, o fluxo só é aceito enquanto h > h_min; ao sair da
    região levanta AdmissibilityError com a trajetória parcial.
    """
    y0 = _as_phase(initial)
    guard = None
    if admissible:
        if horizontal_momentum(y0) <= h_min:
            raise AdmissibilityError(f"h(0) = {horizontal_momentum(y0):.3g} não é admissível")
        guard = lambda s, y: horizontal_momentum(y) > h_min  # noqa: E731
    solution = integrate(phase_rhs_1d, y0, span, ctrl, samples=samples, guard=guard)
    if not solution.complete:
        raise AdmissibilityError(f"h atingiu o piso {h_min:g} em s={solution.s_end:.6g}",
                                 partial=_trajectory(solution, solution.steps))
    return _trajectory(solution, solution.steps)


def flow_controls_1d(traj: Trajectory) -> HorizontalControls:
    """Coeficientes no referencial horizontal no parâmetro nativo: α1 = h, α2 = p_a"""
    h = traj.column("v") * traj.column("p_x") + traj.column("a") * traj.column("p_v") + traj.column("p_t")
    return HorizontalControls(alpha1=h, alpha2=traj.column("p_a").copy())


def admissible_controls_1d(traj: Trajectory) -> Tuple[Trajectory, HorizontalControls]:
    """Reescreve o fluxo no parâmetro tempo: α1 ≡ 1 e j = p_a / h"""
    controls = flow_controls_1d(traj)
    if np.any(controls.alpha1 <= 0):
        raise AdmissibilityError("h não positivo: o fluxo não é admissível")
    in_time = traj.with_parameter(traj.column("t"))
    return in_time, HorizontalControls.admissible_1d(controls.alpha2 / controls.alpha1)


def conservation_report_1d(traj: Trajectory) -> ConservationReport:
    """Derivas de H, p_t, p_x e das leis fechadas de p_v e p_a em t"""
    phase = np.hstack([traj.states, traj.covectors])
    hamiltonians = np.array([hamiltonian_1d(y) for y in phase])
    controls = flow_controls_1d(traj)
    speed = controls.squared_speed()

    dt = traj.column("t") - traj.column("t")[0]
    p_x = traj.column("p_x")[0]
    p_v0 = traj.column("p_v")[0]
    p_a0 = traj.column("p_a")[0]
    return ConservationReport(
        hamiltonian_drift=float(np.max(np.abs(hamiltonians - hamiltonians[0]))),
        momentum_drift={
            name: float(np.max(np.abs(traj.column(name) - traj.column(name)[0]))) for name in ("p_t", "p_x")
        },
        law_drift={
            "p_v": float(np.max(np.abs(traj.column("p_v") + p_x * dt - p_v0))),
            "p_a": float(np.max(np.abs(traj.column("p_a") - (p_x * dt ** 2 / 2 - p_v0 * dt + p_a0)))),
        },
        speed_constant=float(speed[0]),
        speed_drift=float(np.max(np.abs(speed - speed[0]))),
    )


def connect_admissible_1d(
    target: Tuple[float, float, float],
    start: Tuple[float, float, float] = (0.0, 0.0, 0.0),
    duration: float = 1.0,
) -> JerkPolynomial:
    """Jerk quadrático que leva (x, v, a) de start a target em duration

    Resolve o sistema no intervalo unitário com a inversa exata e reescala os
    coeficientes para a duração pedida.
    """
    if not duration > 0:
        raise DomainError("duração deve ser positiva")
    x0, v0, a0 = (float(c) for c in start)
    x1, v1, a1 = (float(c) for c in target)
    if not all(math.isfinite(c) for c in (x0, v0, a0, x1, v1, a1)):
        raise DomainError("alvo e início devem ser finitos")
    T = duration
    rhs = np.array([
        a1 - a0,
        (v1 - v0 - a0 * T) / T,
        (x1 - x0 - v0 * T - a0 * T ** 2 / 2) / T ** 2,
    ])
    e = CONNECTIVITY_INVERSE @ rhs
    return JerkPolynomial(e0=e[0] / T, e1=e[1] / T ** 2, e2=e[2] / T ** 3)


def integrate_admissible_1d(
    jerk: JerkPolynomial,
    start: State1D = State1D(),
    duration: float = 1.0,
    samples: int = 101,
    ctrl: StepControl = ROUND_TRIP_CONTROL,
) -> Trajectory:
    """Integra t' = 1, x' = v, v' = a, a' = j(t) a partir de start"""
    t0 = start.t

    def rhs(t, y):
        return np.array([1.0, y[2], y[3], float(jerk(t - t0))])

    grid = np.linspace(t0, t0 + duration, samples)
    solution = integrate(rhs, start.to_array(), (t0, t0 + duration), ctrl, samples=grid)
    return Trajectory(model="1d", parameter=solution.s, states=solution.y, steps=solution.steps)


def admissible_length_bound_1d(jerk: JerkPolynomial, duration: float = 1.0, panels: int = 8) -> float:
    """∫√(1 + j²): cota superior da distância admissível entre os extremos"""
    edges = np.linspace(0.0, duration, panels + 1)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        t = 0.5 * (hi - lo) * _GAUSS_NODES + 0.5 * (hi + lo)
        total += 0.5 * (hi - lo) * float(np.dot(_GAUSS_WEIGHTS, np.sqrt(1.0 + jerk(t) ** 2)))
    return total


class AccelReparam:
    """ȧ(t) = p_a(t) / √(p_t² + p_a(0)² − p_a(t)²) até o horizonte de admissibilidade"""

    def __init__(self, p_t: float, p_v0: float, p_a0: float, p_x: float, horizon: float):
        self.p_t = p_t
        self.p_v0 = p_v0
        self.p_a0 = p_a0
        self.p_x = p_x
        self.horizon = horizon
        self.constant = p_t ** 2 + p_a0 ** 2

    def p_a(self, t):
        t = np.asarray(t, dtype=float)
        return self.p_x * t ** 2 / 2 - self.p_v0 * t + self.p_a0

    def _check(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if np.any(t < 0):
            raise DomainError("t deve ser não negativo")
        if np.any(t > self.horizon):
            raise HorizonError(f"t além do horizonte {self.horizon:.6g}", horizon=self.horizon)
        return t

    def h(self, t):
        t = self._check(t)
        return np.sqrt(np.maximum(self.constant - self.p_a(t) ** 2, 0.0))

    def __call__(self, t):
        t = self._check(t)
        with np.errstate(divide="ignore"):
            value = self.p_a(t) / np.sqrt(np.maximum(self.constant - self.p_a(t) ** 2, 0.0))
        return float(value) if np.ndim(value) == 0 else value

    def flow(self, until: float, start: State1D = State1D(), samples: Optional[Sequence[float]] = None,
             ctrl: Optional[StepControl] = None) -> Trajectory:
        """Curva admissível em t a partir de start (v = a = 0) até until"""
        if start.v != 0.0 or start.a != 0.0:
            raise PreconditionError("a reparametrização parte de v = a = 0")
        t0 = start.t

        def rhs(t, y):
            return np.array([1.0, y[2], y[3], self(t - t0)])

        solution = integrate(rhs, start.to_array(), (t0, t0 + until), ctrl, samples=samples)
        return Trajectory(model="1d", parameter=solution.s, states=solution.y, steps=solution.steps)


def reparam_accel_1d(p_t: float, p_v0: float, p_a0: float, p_x: float, max_horizon: float = 10.0) -> AccelReparam:
    """Reparametrização temporal do fluxo 1D e seu horizonte

    O horizonte é a primeira raiz positiva de p_a(t)² = p_t² + p_a(0)²,
    limitada a max_horizon quando não há raiz.
    """
    if not p_t > 0:
        raise PreconditionError(f"p_t deve ser positivo, recebeu {p_t}")
    bound = math.sqrt(p_t ** 2 + p_a0 ** 2)
    roots = []
    for level in (bound, -bound):
        for root in np.roots([p_x / 2, -p_v0, p_a0 - level]):
            if abs(root.imag) < 1e-12 and root.real > 0:
                roots.append(float(root.real))
    horizon = min(roots + [max_horizon])
    logger.debug("horizonte de admissibilidade 1D: %.6g", horizon)
    return AccelReparam(p_t, p_v0, p_a0, p_x, horizon)


class Engel1DModel:
    """Modelo de Engel: fluxo normal sobre (t, x, v, a)"""

    name = "1d"
    tag = "1d"
    state_names = STATE_1D
    covector_names = COVECTOR_1D
    angle_index: Optional[int] = None
    frozen_covector: Tuple[str, ...] = ()

    def __init__(self, h_min: float = H_MIN):
        self.h_min = h_min

    def hamiltonian(self, y: np.ndarray) -> float:
        return hamiltonian_1d(y)

    def flow(self, y0: np.ndarray, span: Tuple[float, float], ctrl: Optional[StepControl] = None,
             samples: Optional[Sequence[float]] = None) -> Trajectory:
        return flow_1d(y0, span, ctrl, samples=samples, h_min=self.h_min)

    def controls(self, traj: Trajectory) -> HorizontalControls:
        return flow_controls_1d(traj)

    def admissible(self, traj: Trajectory) -> Tuple[Trajectory, HorizontalControls]:
        return admissible_controls_1d(traj)

    def conservation(self, traj: Trajectory) -> ConservationReport:
        return conservation_report_1d(traj)

    def seed(self, initial: Dict[str, float], final: Dict[str, float]) -> Tuple[np.ndarray, float]:
        """Covetor inicial e span a partir da curva admissível de conexão

        A curva é normalizada para velocidade unitária: p_a(0) = j(0) / √(1 + j(0)²),
        limitado a SEED_ACCEL_CAP, e h(0) = √(1 − p_a(0)²). p_x e p_v(0) vêm do
        ajuste quadrático de p_a(t). O span devolvido é o comprimento da curva.
        """
        duration = final["t"] - initial["t"]
        jerk = connect_admissible_1d(
            (final["x"], final["v"], final["a"]),
            start=(initial["x"], initial["v"], initial["a"]),
            duration=duration,
        )
        t = np.linspace(0.0, duration, 41)
        j = jerk(t)
        c2, c1, _ = np.polyfit(t, j / np.sqrt(1.0 + j ** 2), 2)
        p_x, p_v0 = 2.0 * c2, -c1
        j0 = float(j[0])
        p_a0 = float(np.clip(j0 / math.sqrt(1.0 + j0 ** 2), -SEED_ACCEL_CAP, SEED_ACCEL_CAP))
        h0 = math.sqrt(1.0 - p_a0 ** 2)
        p_t = h0 - initial["v"] * p_x - initial["a"] * p_v0
        return np.array([p_t, p_x, p_v0, p_a0]), admissible_length_bound_1d(jerk, duration)
