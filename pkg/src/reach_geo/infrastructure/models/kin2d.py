"""
Modelo cinemático 2D - fluxo hamiltoniano em M = R³ × S¹ × R², conectividade e reparametrização
"""
import logging
import math
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np

from ...domain.errors import (
    AdmissibilityError,
    ConnectivityError,
    DomainError,
    HorizonError,
    InfeasibleCurvatureError,
    IntegrationError,
    PreconditionError,
)
from ...domain.models import (
    COVECTOR_2D,
    STATE_2D,
    ConservationReport,
    ControlPolynomials2D,
    HamState2D,
    HorizontalControls,
    State2D,
    StepControl,
    Trajectory,
    wrap_angle,
)
from ..integrators.odeint import integrate
from .engel1d import SEED_ACCEL_CAP

logger = logging.getLogger(__name__)

PSI_MIN = 1e-6
THETA_TOLERANCE = 1e-6
ROUND_TRIP_CONTROL = StepControl(abs_tol=1e-12, rel_tol=1e-12)
_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(40)

PhasePoint = Union[HamState2D, Sequence[float], np.ndarray]


def _as_phase(hs: PhasePoint) -> np.ndarray:
    if isinstance(hs, HamState2D):
        return hs.to_array()
    return np.asarray(hs, dtype=float)


def _psi(y) -> float:
    _, _, _, theta, v, a, p_t, p_x, p_y, _, p_v, _ = y
    return v * (math.cos(theta) * p_x + math.sin(theta) * p_y) + a * p_v + p_t


def momenta_2d(hs: PhasePoint) -> Tuple[float, float, float]:
    """(P1, P2, P3): o covetor aplicado a X1, X2 e X3"""
    y = _as_phase(hs)
    return _psi(y), float(y[9]), float(y[11])


def hamiltonian_2d(hs: PhasePoint) -> float:
    p1, p2, p3 = momenta_2d(hs)
    return 0.5 * (p1 ** 2 + p2 ** 2 + p3 ** 2)


def phase_rhs_2d(s: float, y: np.ndarray) -> np.ndarray:
    _, _, _, theta, v, a, p_t, p_x, p_y, p_theta, p_v, p_a = y
    c, sn = math.cos(theta), math.sin(theta)
    along = c * p_x + sn * p_y
    psi = v * along + a * p_v + p_t
    return np.array([
        psi, v * c * psi, v * sn * psi, p_theta, a * psi, p_a,
        0.0, 0.0, 0.0, v * (sn * p_x - c * p_y) * psi, -along * psi, -p_v * psi,
    ])


def phase_rhs_frozen(s: float, y: np.ndarray) -> np.ndarray:
    """Sistema reduzido com θ' = 0 e p_θ' = 0"""
    out = phase_rhs_2d(s, y)
    out[3] = 0.0
    out[9] = 0.0
    return out


def ham_rhs_2d(hs: PhasePoint) -> np.ndarray:
    """Lado direito na ordem (t, x, y, θ, v, a, p_t, p_x, p_y, p_θ, p_v, p_a)"""
    return phase_rhs_2d(0.0, _as_phase(hs))


def _trajectory(solution) -> Trajectory:
    return Trajectory(model="2d", parameter=solution.s, states=solution.y[:, :6],
                      covectors=solution.y[:, 6:], steps=solution.steps)


def flow_2d(
    initial: HamState2D,
    span: Tuple[float, float] = (0.0, 1.0),
    ctrl: Optional[StepControl] = None,
    samples: Optional[Sequence[float]] = None,
    admissible: bool = True,
    psi_min: float = PSI_MIN,
    theta_frozen: bool = False,
) -> Trajectory:
    """Integra o fluxo normal 2D; θ é acumulado, sem redução, ao longo da integração"""
    y0 = _as_phase(initial)
    rhs = phase_rhs_frozen if theta_frozen else phase_rhs_2d
    guard = None
    if admissible:
        if _psi(y0) <= psi_min:
            raise AdmissibilityError(f"ψ(0) = {_psi(y0):.3g} não é admissível")
        guard = lambda s, y: _psi(y) > psi_min  # noqa: E731
    solution = integrate(rhs, y0, span, ctrl, samples=samples, guard=guard)
    if not solution.complete:
        raise AdmissibilityError(f"ψ atingiu o piso {psi_min:g} em s={solution.s_end:.6g}",
                                 partial=_trajectory(solution))
    return _trajectory(solution)


def _psi_column(traj: Trajectory) -> np.ndarray:
    theta = traj.raw_column("theta")
    along = np.cos(theta) * traj.column("p_x") + np.sin(theta) * traj.column("p_y")
    return traj.column("v") * along + traj.column("a") * traj.column("p_v") + traj.column("p_t")


def flow_controls_2d(traj: Trajectory) -> HorizontalControls:
    """α1 = ψ, k = p_θ, j = p_a no parâmetro nativo"""
    return HorizontalControls(alpha1=_psi_column(traj), k=traj.column("p_theta").copy(), j=traj.column("p_a").copy())


def admissible_controls_2d(traj: Trajectory) -> Tuple[Trajectory, HorizontalControls]:
    """No parâmetro tempo: α1 ≡ 1, k = p_θ / ψ, j = p_a / ψ"""
    controls = flow_controls_2d(traj)
    if np.any(controls.alpha1 <= 0):
        raise AdmissibilityError("ψ não positivo: o fluxo não é admissível")
    in_time = traj.with_parameter(traj.column("t"))
    return in_time, HorizontalControls.admissible_2d(controls.k / controls.alpha1, controls.j / controls.alpha1)


def conservation_report_2d(traj: Trajectory) -> ConservationReport:
    """Derivas de H, de p_t, p_x, p_y e de ψ² + p_θ² + p_a²"""
    phase = np.hstack([traj.states, traj.covectors])
    hamiltonians = np.array([hamiltonian_2d(y) for y in phase])
    speed = flow_controls_2d(traj).squared_speed()
    theta = traj.raw_column("theta")
    return ConservationReport(
        hamiltonian_drift=float(np.max(np.abs(hamiltonians - hamiltonians[0]))),
        momentum_drift={
            name: float(np.max(np.abs(traj.column(name) - traj.column(name)[0]))) for name in ("p_t", "p_x", "p_y")
        },
        law_drift={"theta_rate": float(np.max(np.abs(np.gradient(theta, traj.parameter) - traj.column("p_theta"))))
                   if len(traj) > 2 else 0.0},
        speed_constant=float(speed[0]),
        speed_drift=float(np.max(np.abs(speed - speed[0]))),
    )


def _gauss(duration: float):
    return 0.5 * duration * (_GAUSS_NODES + 1.0), 0.5 * duration * _GAUSS_WEIGHTS


def connect_admissible_2d(start: State2D, target: State2D, k: float, duration: float = 1.0) -> ControlPolynomials2D:
    """Jerk cúbico que, com curvatura constante k, liga start a target em duration

    Linhas do sistema: a, v e as duas integrais de posição em t = duration.
    Com k = 0 as integrais de posição são fechadas; caso contrário usa
    Gauss-Legendre. Sistemas de posto incompleto mas consistentes aceitam a
    solução de norma mínima.
    """
    if not duration > 0:
        raise DomainError("duração deve ser positiva")
    T = duration
    theta_gap = wrap_angle(target.theta - (start.theta + k * T))
    if abs(theta_gap) > THETA_TOLERANCE:
        raise InfeasibleCurvatureError(
            f"θ final {target.theta:.6g} incompatível com θ0 + kT = {start.theta + k * T:.6g}")

    order = np.arange(4)
    fact2 = np.array([math.factorial(i + 2) for i in order], dtype=float)
    rows_a = T ** (order + 1) / np.array([math.factorial(i + 1) for i in order], dtype=float)
    rows_v = T ** (order + 2) / fact2

    if k == 0.0:
        c, sn = math.cos(start.theta), math.sin(start.theta)
        moment = T ** (order + 3) / np.array([math.factorial(i + 3) for i in order], dtype=float)
        base_moment = start.v * T + start.a * T ** 2 / 2
        rows_x, rows_y = c * moment, sn * moment
        base_x, base_y = c * base_moment, sn * base_moment
    else:
        t, w = _gauss(T)
        heading = start.theta + k * t
        cos_w, sin_w = w * np.cos(heading), w * np.sin(heading)
        powers = t[None, :] ** (order[:, None] + 2) / fact2[:, None]
        rows_x, rows_y = powers @ cos_w, powers @ sin_w
        base_speed = start.v + start.a * t
        base_x, base_y = float(base_speed @ cos_w), float(base_speed @ sin_w)

    matrix = np.vstack([rows_a, rows_v, rows_x, rows_y])
    rhs = np.array([
        target.a - start.a,
        target.v - start.v - start.a * T,
        target.x - start.x - base_x,
        target.y - start.y - base_y,
    ])
    solution, _, rank, singular = np.linalg.lstsq(matrix, rhs, rcond=None)
    condition = float(singular[0] / singular[-1]) if singular[-1] > 0 else math.inf
    mismatch = float(np.linalg.norm(matrix @ solution - rhs))
    if mismatch > 1e-9 * max(1.0, float(np.linalg.norm(rhs))):
        raise ConnectivityError(f"sistema de conexão inconsistente (posto {rank}, resíduo {mismatch:.3g})",
                                condition_number=condition)
    if rank < 4:
        logger.debug("sistema de conexão com posto %d; usando solução de norma mínima", rank)
    return ControlPolynomials2D(k=k, j0=solution[0], j1=solution[1], j2=solution[2], j3=solution[3])


def integrate_admissible_2d(
    controls: ControlPolynomials2D,
    start: State2D = State2D(),
    duration: float = 1.0,
    samples: int = 101,
    ctrl: StepControl = ROUND_TRIP_CONTROL,
) -> Trajectory:
    """Integra θ' = k, v' = a, a' = j(t), x' = v cos θ, y' = v sin θ a partir de start"""
    t0 = start.t

    def rhs(t, y):
        theta, v = y[3], y[4]
        return np.array([1.0, v * math.cos(theta), v * math.sin(theta), controls.k, y[5],
                         float(controls.jerk(t - t0))])

    grid = np.linspace(t0, t0 + duration, samples)
    solution = integrate(rhs, start.to_array(), (t0, t0 + duration), ctrl, samples=grid)
    return Trajectory(model="2d", parameter=solution.s, states=solution.y, steps=solution.steps)


def admissible_length_bound_2d(controls: ControlPolynomials2D, duration: float = 1.0) -> float:
    """∫√(1 + k² + j²) da curva de conexão"""
    t, w = _gauss(duration)
    return float(w @ np.sqrt(1.0 + controls.k ** 2 + controls.jerk(t) ** 2))


class Reparam2D:
    """θ̇ = p_θ/ψ e ȧ = p_a/ψ em t, com ψ = √(C − p_θ² − p_a²)

    p_θ(t) não tem forma fechada; os momentos são integrados em t junto com
    o estado.
    """

    def __init__(self, y0: np.ndarray, horizon: float, solution, rhs, ctrl: Optional[StepControl] = None,
                 guard=None):
        self.y0 = y0
        self.horizon = horizon
        self.constant = float(y0[6] ** 2 + y0[9] ** 2 + y0[11] ** 2)
        self._solution = solution
        self._rhs = rhs
        self._ctrl = ctrl
        self._guard = guard

    def _check(self, t: float) -> float:
        if t < 0:
            raise DomainError("t deve ser não negativo")
        if t > self.horizon:
            raise HorizonError(f"t além do horizonte {self.horizon:.6g}", horizon=self.horizon)
        return t

    def _phase(self, t: float) -> np.ndarray:
        self._check(t)
        s = self._solution.s
        index = int(np.searchsorted(s, t))
        if index < len(s) and s[index] == t:
            return self._solution.y[index]
        # integra a partir do nó anterior
        node = max(index - 1, 0)
        solution = integrate(self._rhs, self._solution.y[node], (float(s[node]), t), self._ctrl, guard=self._guard)
        if not solution.complete:
            raise HorizonError(f"ψ se anula antes de t = {t:.6g}", horizon=solution.s_end)
        return solution.y_end

    def rates(self, t: float) -> Tuple[float, float]:
        """(θ̇, ȧ) em t"""
        y = self._phase(t)
        psi = math.sqrt(max(self.constant - y[9] ** 2 - y[11] ** 2, 0.0))
        with np.errstate(divide="ignore"):
            return float(np.divide(y[9], psi)), float(np.divide(y[11], psi))

    def trajectory(self, samples: Optional[Sequence[float]] = None) -> Trajectory:
        """Estado e covetor em t até o horizonte"""
        s = self._solution.s
        if samples is None:
            return Trajectory(model="2d", parameter=s, states=self._solution.y[:, :6],
                              covectors=self._solution.y[:, 6:], steps=self._solution.steps)
        phase = np.array([self._phase(float(t)) for t in samples])
        return Trajectory(model="2d", parameter=np.asarray(samples, dtype=float), states=phase[:, :6],
                          covectors=phase[:, 6:])


def _time_rhs(constant: float):
    def rhs(t, y):
        _, _, _, theta, v, a, p_t, p_x, p_y, p_theta, p_v, p_a = y
        squared = constant - p_theta ** 2 - p_a ** 2
        # fora da região admissível a derivada é NaN e o integrador rejeita o passo
        psi = math.sqrt(squared) if squared > 0 else math.nan
        with np.errstate(invalid="ignore"):
            c, sn = np.cos(theta), np.sin(theta)
        return np.array([
            1.0, v * c, v * sn, p_theta / psi, a, p_a / psi,
            0.0, 0.0, 0.0, v * (sn * p_x - c * p_y), -(c * p_x + sn * p_y), -p_v,
        ])
    return rhs


def reparam_2d(
    p_t: float,
    k: float,
    p_a0: float,
    small: Dict[str, float],
    max_horizon: float = 10.0,
    delta: float = 0.5,
    ctrl: Optional[StepControl] = None,
    samples: Optional[Sequence[float]] = None,
) -> Reparam2D:
    """Fluxo 2D reparametrizado pelo tempo a partir da origem

    small traz p_x, p_y e p_v (módulo ≤ delta); k é o valor de p_θ(0). O
    horizonte é onde p_t² + k² + p_a(0)² − p_θ² − p_a² se anula, limitado
    a max_horizon.
    """
    if not p_t > 0:
        raise PreconditionError(f"p_t deve ser positivo, recebeu {p_t}")
    components = {name: float(small.get(name, 0.0)) for name in ("p_x", "p_y", "p_v")}
    oversized = {n: v for n, v in components.items() if abs(v) > delta}
    if oversized or abs(p_a0) > delta:
        raise PreconditionError(f"covetor fora da caixa δ={delta}: {oversized or {'p_a': p_a0}}")
    y0 = np.array([0.0, 0.0, 0.0, 0.0, 0.0, 0.0, p_t, components["p_x"], components["p_y"], k,
                   components["p_v"], p_a0])
    constant = p_t ** 2 + k ** 2 + p_a0 ** 2
    floor = PSI_MIN ** 2
    guard = lambda t, y: constant - y[9] ** 2 - y[11] ** 2 > floor  # noqa: E731
    rhs = _time_rhs(constant)

    def run(end: float, points=None):
        # perto do horizonte ȧ e θ̇ divergem; o passo mínimo marca o fim útil
        try:
            return integrate(rhs, y0, (0.0, end), ctrl, samples=points, guard=guard)
        except IntegrationError as exc:
            if exc.partial is None or len(exc.partial.s) == 0:
                raise
            return exc.partial

    solution = run(max_horizon)
    horizon = solution.s_end
    if samples is not None:
        samples = [t for t in samples if t <= horizon]
        solution = run(horizon, samples)
    logger.debug("horizonte de admissibilidade 2D: %.6g (%s)", horizon, solution.status)
    return Reparam2D(y0, horizon, solution, rhs, ctrl, guard)


class Kinematic2DModel:
    """Fluxo normal completo do modelo 2D"""

    name = "2d"
    tag = "2d"
    state_names = STATE_2D
    covector_names = COVECTOR_2D
    angle_index: Optional[int] = STATE_2D.index("theta")
    frozen_covector: Tuple[str, ...] = ()
    theta_frozen = False

    def __init__(self, psi_min: float = PSI_MIN):
        self.psi_min = psi_min

    def hamiltonian(self, y: np.ndarray) -> float:
        return hamiltonian_2d(y)

    def flow(self, y0: np.ndarray, span: Tuple[float, float], ctrl: Optional[StepControl] = None,
             samples: Optional[Sequence[float]] = None) -> Trajectory:
        return flow_2d(y0, span, ctrl, samples=samples, psi_min=self.psi_min, theta_frozen=self.theta_frozen)

    def controls(self, traj: Trajectory) -> HorizontalControls:
        return flow_controls_2d(traj)

    def admissible(self, traj: Trajectory) -> Tuple[Trajectory, HorizontalControls]:
        return admissible_controls_2d(traj)

    def conservation(self, traj: Trajectory) -> ConservationReport:
        return conservation_report_2d(traj)

    def _curvature(self, initial: Dict[str, float], final: Dict[str, float], duration: float) -> Tuple[float, float]:
        turn = wrap_angle(final.get("theta", initial["theta"]) - initial["theta"])
        return turn / duration, initial["theta"] + turn

    def seed(self, initial: Dict[str, float], final: Dict[str, float]) -> Tuple[np.ndarray, float]:
        """Covetor inicial e span a partir da curva de conexão com k = Δθ / T"""
        duration = final["t"] - initial["t"]
        k, theta1 = self._curvature(initial, final, duration)
        start = State2D(**initial)
        target = State2D(**{**final, "theta": theta1})
        controls = connect_admissible_2d(start, target, k, duration)

        t = np.linspace(0.0, duration, 41)
        j = controls.jerk(t)
        c2, c1, _ = np.polyfit(t, j / np.sqrt(1.0 + k ** 2 + j ** 2), 2)
        p_v0 = -c1
        j0 = float(j[0])
        p_a0 = float(np.clip(j0 / math.sqrt(1.0 + k ** 2 + j0 ** 2), -SEED_ACCEL_CAP, SEED_ACCEL_CAP))
        # velocidade unitária: ψ²(1 + k²) + p_a² = 1
        psi0 = math.sqrt((1.0 - p_a0 ** 2) / (1.0 + k ** 2))
        p_theta0 = 0.0 if self.theta_frozen else k * psi0
        along = 2.0 * c2
        theta0 = initial["theta"]
        p_x, p_y = along * math.cos(theta0), along * math.sin(theta0)
        p_t = psi0 - initial["v"] * along - initial["a"] * p_v0
        covector = np.array([p_t, p_x, p_y, p_theta0, p_v0, p_a0])
        return covector, admissible_length_bound_2d(controls, duration)


class ThetaFrozen2DModel(Kinematic2DModel):
    """Modelo 2D com a restrição θ' = 0 (linhas de θ e p_θ congeladas)

    O hamiltoniano omite p_θ: H = ½(ψ² + p_a²), conservado pelo sistema reduzido.
    """

    name = "2d-theta-frozen"
    frozen_covector = ("p_theta",)
    theta_frozen = True

    def _curvature(self, initial: Dict[str, float], final: Dict[str, float], duration: float) -> Tuple[float, float]:
        return 0.0, initial["theta"]

    def hamiltonian(self, y: np.ndarray) -> float:
        p1, _, p3 = momenta_2d(y)
        return 0.5 * (p1 ** 2 + p3 ** 2)
