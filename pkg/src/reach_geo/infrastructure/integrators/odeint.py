"""
Integrador explícito compartilhado: RK4 de passo fixo e Dormand-Prince 5(4) adaptativo
"""
import logging
import math
from typing import Callable, List, Literal, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from ...domain.errors import DomainError, IntegrationError
from ...domain.models import StepControl

logger = logging.getLogger(__name__)

Rhs = Callable[[float, np.ndarray], np.ndarray]
Guard = Callable[[float, np.ndarray], bool]

# Tableau de Dormand-Prince; a última linha de A coincide com os pesos de 5a ordem (FSAL)
_DP_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_DP_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
_DP_E = np.array([-71 / 57600, 0.0, 71 / 16695, -71 / 1920, 17253 / 339200, -22 / 525, 1 / 40])
# saída densa de 4a ordem: y(s_old + xh) = y_old + h K^T P [x, x², x³, x⁴]
_DP_P = np.array([
    [1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
    [0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
    [0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
    [0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
    [0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
])

SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 10.0
BETA1 = 0.7 / 5
BETA2 = 0.4 / 5


class OdeSolution(BaseModel):
    """Solução amostrada; status "guard" indica parada pelo predicado de admissibilidade"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    s: np.ndarray
    y: np.ndarray
    steps: Tuple[float, ...] = ()
    status: Literal["ok", "guard"] = "ok"
    rejected: int = 0
    nfev: int = 0

    @property
    def y_end(self) -> np.ndarray:
        return self.y[-1]

    @property
    def s_end(self) -> float:
        return float(self.s[-1])

    @property
    def complete(self) -> bool:
        return self.status == "ok"


class _Sampler:
    """Coleta as amostras pedidas pelo chamador à medida que os passos avançam"""

    def __init__(self, samples: Optional[Sequence[float]], s0: float, s1: float):
        self._requested = None
        if samples is not None:
            requested = np.asarray(samples, dtype=float)
            slack = 1e-12 * max(1.0, abs(s0), abs(s1))
            if requested.ndim != 1 or len(requested) == 0:
                raise DomainError("amostras devem formar um vetor não vazio")
            if np.any(np.diff(requested) <= 0):
                raise DomainError("amostras devem ser estritamente crescentes")
            if requested[0] < s0 - slack or requested[-1] > s1 + slack:
                raise DomainError(f"amostras fora do intervalo [{s0}, {s1}]")
            self._requested = np.clip(requested, s0, s1)
        self._next = 0
        self.s: List[float] = []
        self.y: List[np.ndarray] = []

    def start(self, s0: float, y0: np.ndarray) -> None:
        if self._requested is None:
            self._append(s0, y0)
            return
        while self._next < len(self._requested) and self._requested[self._next] <= s0:
            self._append(float(self._requested[self._next]), y0)
            self._next += 1

    def advance(self, s_new: float, y_new: np.ndarray, interpolant: Callable[[float], np.ndarray]) -> None:
        if self._requested is None:
            self._append(s_new, y_new)
            return
        while self._next < len(self._requested) and self._requested[self._next] <= s_new:
            s = float(self._requested[self._next])
            self._append(s, y_new if s == s_new else interpolant(s))
            self._next += 1

    def _append(self, s: float, y: np.ndarray) -> None:
        self.s.append(s)
        self.y.append(np.array(y, dtype=float))

    def solution(self, width: int, steps: List[float], status: str = "ok", rejected: int = 0, nfev: int = 0) -> OdeSolution:
        y = np.array(self.y) if self.y else np.empty((0, width))
        return OdeSolution(s=np.array(self.s), y=y, steps=tuple(steps), status=status, rejected=rejected, nfev=nfev)


def integrate(
    rhs: Rhs,
    y0,
    span: Tuple[float, float],
    ctrl: Optional[StepControl] = None,
    samples: Optional[Sequence[float]] = None,
    guard: Optional[Guard] = None,
) -> OdeSolution:
    """Integra y' = rhs(s, y) em span

    Sem samples, devolve os nós aceitos; com samples, devolve a saída densa
    nesses pontos. guard(s, y) falso rejeita o passo: o passo é reduzido à
    metade até min_step e então a integração para com status "guard".
    """
    ctrl = ctrl or StepControl()
    s0, s1 = float(span[0]), float(span[1])
    if not (math.isfinite(s0) and math.isfinite(s1)) or s1 < s0:
        raise DomainError(f"intervalo de integração inválido: [{s0}, {s1}]")
    y0 = np.array(y0, dtype=float)
    sampler = _Sampler(samples, s0, s1)
    sampler.start(s0, y0)
    if s1 == s0:
        return sampler.solution(len(y0), [])
    if ctrl.mode == "fixed":
        return _integrate_fixed(rhs, y0, s0, s1, ctrl, sampler, guard)
    return _integrate_adaptive(rhs, y0, s0, s1, ctrl, sampler, guard)


def _rk4_step(rhs: Rhs, s: float, y: np.ndarray, f: np.ndarray, h: float) -> np.ndarray:
    k2 = rhs(s + h / 2, y + h / 2 * f)
    k3 = rhs(s + h / 2, y + h / 2 * k2)
    k4 = rhs(s + h, y + h * k3)
    return y + h / 6 * (f + 2 * k2 + 2 * k3 + k4)


def _hermite(s_old: float, y_old: np.ndarray, f_old: np.ndarray, h: float, y_new: np.ndarray, f_new: np.ndarray):
    def evaluate(s: float) -> np.ndarray:
        x = (s - s_old) / h
        h00 = 2 * x ** 3 - 3 * x ** 2 + 1
        h10 = x ** 3 - 2 * x ** 2 + x
        h01 = -2 * x ** 3 + 3 * x ** 2
        h11 = x ** 3 - x ** 2
        return h00 * y_old + h10 * h * f_old + h01 * y_new + h11 * h * f_new
    return evaluate


def _integrate_fixed(rhs: Rhs, y0, s0, s1, ctrl: StepControl, sampler: _Sampler, guard: Optional[Guard]) -> OdeSolution:
    n = max(1, math.ceil((s1 - s0) / ctrl.step - 1e-9))
    if n > ctrl.max_steps:
        raise IntegrationError(f"{n} passos excedem max_steps={ctrl.max_steps}", partial=sampler.solution(len(y0), []))
    h = (s1 - s0) / n
    y, f = y0, rhs(s0, y0)
    steps: List[float] = []
    for i in range(n):
        s_old = s0 + i * h
        s_new = s1 if i == n - 1 else s0 + (i + 1) * h
        y_new = _rk4_step(rhs, s_old, y, f, h)
        if not np.all(np.isfinite(y_new)):
            raise IntegrationError(f"valor não finito em s={s_new:.6g}", partial=sampler.solution(len(y0), steps))
        if guard is not None and not guard(s_new, y_new):
            logger.debug("guarda interrompeu RK4 em s=%.6g", s_new)
            return sampler.solution(len(y0), steps, status="guard", nfev=4 * i + 1)
        f_new = rhs(s_new, y_new)
        sampler.advance(s_new, y_new, _hermite(s_old, y, f, h, y_new, f_new))
        steps.append(h)
        y, f = y_new, f_new
    return sampler.solution(len(y0), steps, nfev=4 * n + 1)


def _rms(values: np.ndarray) -> float:
    return float(np.sqrt(np.mean(np.square(values))))


def _initial_step(rhs: Rhs, s0: float, y0: np.ndarray, f0: np.ndarray, ctrl: StepControl, limit: float) -> float:
    scale = ctrl.abs_tol + np.abs(y0) * ctrl.rel_tol
    d0, d1 = _rms(y0 / scale), _rms(f0 / scale)
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, limit)
    f1 = rhs(s0 + h0, y0 + h0 * f0)
    if not np.all(np.isfinite(f1)):
        return h0
    d2 = _rms((f1 - f0) / scale) / h0
    if d1 <= 1e-15 and d2 <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / 5)
    return min(100 * h0, h1, limit)


def _dp_stages(rhs: Rhs, s: float, y: np.ndarray, f: np.ndarray, h: float) -> Tuple[np.ndarray, np.ndarray]:
    K = np.empty((7, len(y)))
    K[0] = f
    for i in range(1, 7):
        dy = K[:i].T @ _DP_A[i] * h
        K[i] = rhs(s + _DP_C[i] * h, y + dy)
    y_new = y + h * (K[:6].T @ _DP_A[6])
    return y_new, K


def _dense_dp(s_old: float, y_old: np.ndarray, h: float, K: np.ndarray):
    Q = K.T @ _DP_P

    def evaluate(s: float) -> np.ndarray:
        x = (s - s_old) / h
        powers = np.cumprod(np.full(4, x))
        return y_old + h * (Q @ powers)
    return evaluate


def _integrate_adaptive(rhs: Rhs, y0, s0, s1, ctrl: StepControl, sampler: _Sampler, guard: Optional[Guard]) -> OdeSolution:
    limit = min(ctrl.max_step or (s1 - s0), s1 - s0)
    s, y = s0, y0
    f = rhs(s, y)
    nfev = 1
    h = _initial_step(rhs, s0, y0, f, ctrl, limit)
    nfev += 1
    steps: List[float] = []
    rejected = 0
    err_prev: Optional[float] = None
    width = len(y0)

    while s < s1:
        if len(steps) >= ctrl.max_steps:
            raise IntegrationError(f"max_steps={ctrl.max_steps} excedido em s={s:.6g}",
                                   partial=sampler.solution(width, steps, rejected=rejected, nfev=nfev))
        remaining = s1 - s
        h = min(h, limit, remaining)
        last = h >= remaining
        step_rejected = False

        while True:
            y_new, K = _dp_stages(rhs, s, y, f, h)
            nfev += 6
            if np.all(np.isfinite(K)) and np.all(np.isfinite(y_new)):
                scale = ctrl.abs_tol + ctrl.rel_tol * np.maximum(np.abs(y), np.abs(y_new))
                err_norm = _rms(h * (K.T @ _DP_E) / scale)
            else:
                err_norm = math.inf

            if err_norm <= 1.0:
                s_new = s1 if last else s + h
                if guard is not None and not guard(s_new, y_new):
                    h *= 0.5
                    rejected += 1
                    last = False
                    if h < ctrl.min_step:
                        logger.debug("guarda interrompeu DP5 em s=%.6g", s)
                        return sampler.solution(width, steps, status="guard", rejected=rejected, nfev=nfev)
                    continue
                break

            rejected += 1
            step_rejected = True
            factor = MIN_FACTOR if not math.isfinite(err_norm) else max(MIN_FACTOR, SAFETY * err_norm ** (-1 / 5))
            h *= factor
            last = False
            if h < ctrl.min_step:
                raise IntegrationError(f"passo mínimo {ctrl.min_step:g} atingido em s={s:.6g}",
                                       partial=sampler.solution(width, steps, rejected=rejected, nfev=nfev))

        if err_norm == 0.0:
            factor = MAX_FACTOR
        else:
            factor = SAFETY * err_norm ** (-BETA1) * (err_prev ** BETA2 if err_prev is not None else 1.0)
            factor = min(MAX_FACTOR, max(MIN_FACTOR, factor))
        if step_rejected:
            factor = min(1.0, factor)

        sampler.advance(s_new, y_new, _dense_dp(s, y, h, K))
        steps.append(h)
        s, y, f = s_new, y_new, K[6]
        err_prev = max(err_norm, 1e-4)
        h *= factor

    logger.debug("DP5: %d passos aceitos, %d rejeitados", len(steps), rejected)
    return sampler.solution(width, steps, rejected=rejected, nfev=nfev)
