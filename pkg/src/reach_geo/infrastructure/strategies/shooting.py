"""
Método de shooting - Newton amortecido sobre o covetor inicial com múltiplos pontos de partida
"""
import copy
import itertools
import logging
import math
from typing import Dict, List, Optional, Tuple

import numpy as np

from ...domain.errors import (
    BoundarySpecError,
    IntegrationError,
    NonConvergenceError,
    ReachGeoError,
)
from ...domain.models import (
    BoundarySpec,
    Fixed,
    Free,
    IterationRecord,
    ShootingOptions,
    ShootingResult,
    Trajectory,
    wrap_angle,
)
from ...application.interfaces import FlowModelInterface
from ..models.engel1d import Engel1DModel
from ..models.kin2d import Kinematic2DModel, ThetaFrozen2DModel

logger = logging.getLogger(__name__)

ARMIJO = 1e-4
DEFAULT_SPAN = 1.0
# iterações de Newton por passo de continuação e limite de passos em λ
CONTINUATION_ITERATIONS = 8
CONTINUATION_STEPS = 80


def _duration(spec: BoundarySpec) -> Optional[float]:
    """T = t final − t inicial quando os dois tempos são fixos e T > 0"""
    start, end = spec.initial.get("t"), spec.final.get("t")
    if isinstance(start, Fixed) and isinstance(end, Fixed) and end.value > start.value:
        return end.value - start.value
    return None


def model_for(spec: BoundarySpec) -> FlowModelInterface:
    """Modelo de fluxo correspondente à etiqueta do problema"""
    if spec.model == "1d":
        return Engel1DModel()
    if spec.model == "2d-theta-frozen":
        return ThetaFrozen2DModel()
    return Kinematic2DModel()


class ShootingProblem:
    """Problema de contorno com incógnitas [covetor livre, coordenadas iniciais livres]"""

    def __init__(self, spec: BoundarySpec, options: Optional[ShootingOptions] = None,
                 model: Optional[FlowModelInterface] = None):
        issues = spec.issues()
        if issues:
            raise BoundarySpecError("; ".join(issue.message for issue in issues))
        if spec.intervals():
            raise BoundarySpecError("intervalos devem ser resolvidos antes do shooting")
        self.spec = spec
        self.options = options or ShootingOptions()
        self.model = model or model_for(spec)
        self.covector_unknowns = spec.unknown_covector
        self.free_initial = spec.free_initial()
        self.unknown_names = tuple(self.covector_unknowns) + tuple(f"initial.{n}" for n in self.free_initial)
        self.final_names = spec.fixed_final()
        self.targets = np.array([spec.final_value(n) for n in self.final_names])
        self._final_index = [self.model.state_names.index(n) for n in self.final_names]
        self._angle_rows = [i for i, n in enumerate(self.final_names) if n == "theta"]
        self.span = spec.span or self.options.span or _duration(spec) or DEFAULT_SPAN

    @property
    def size(self) -> int:
        return len(self.unknown_names)

    def retarget(self, targets: np.ndarray) -> "ShootingProblem":
        """Cópia com outro alvo nas mesmas coordenadas finais"""
        other = copy.copy(self)
        other.targets = np.asarray(targets, dtype=float)
        return other

    def relaxed(self) -> Optional["ShootingProblem"]:
        """Problema com a posição final livre

        A transversalidade anula p_x e p_y; as linhas de posição saem do
        sistema junto com essas incógnitas, que continua quadrado.
        """
        positions = [n for n in ("x", "y") if n in self.final_names]
        pinned = {f"p_{n}" for n in positions}
        if not positions or self.free_initial or not pinned <= set(self.covector_unknowns):
            return None
        rows = [i for i, n in enumerate(self.final_names) if n not in positions]
        other = copy.copy(self)
        other.covector_unknowns = tuple(n for n in self.covector_unknowns if n not in pinned)
        other.unknown_names = other.covector_unknowns
        other.final_names = [self.final_names[i] for i in rows]
        other.targets = self.targets[rows]
        other._final_index = [self._final_index[i] for i in rows]
        other._angle_rows = [i for i, n in enumerate(other.final_names) if n == "theta"]
        return other

    def lift(self, other: "ShootingProblem", u: np.ndarray) -> np.ndarray:
        """Incógnitas de other reescritas neste problema; as ausentes valem 0"""
        values = dict(zip(other.unknown_names, u))
        return np.array([float(values.get(n, 0.0)) for n in self.unknown_names])

    def drift(self) -> np.ndarray:
        """Covetor canônico p_t = 1: o fluxo só avança o tempo e integra v e a"""
        u = np.zeros(self.size)
        u[self.unknown_names.index("p_t")] = 1.0
        return u

    def reached(self, u: np.ndarray) -> np.ndarray:
        """Fim do fluxo nas coordenadas finais impostas"""
        return self.flow(np.asarray(u, dtype=float)).states[-1][self._final_index]

    def initial_values(self, u: np.ndarray) -> Dict[str, float]:
        values = {n: self.spec.initial_value(n) for n in self.model.state_names}
        for offset, name in enumerate(self.free_initial):
            values[name] = float(u[len(self.covector_unknowns) + offset])
        return values

    def covector(self, u: np.ndarray) -> np.ndarray:
        full = dict(zip(self.covector_unknowns, u[: len(self.covector_unknowns)]))
        return np.array([float(full.get(name, 0.0)) for name in self.model.covector_names])

    def initial_phase(self, u: np.ndarray) -> np.ndarray:
        values = self.initial_values(u)
        state = np.array([values[n] for n in self.model.state_names])
        return np.concatenate([state, self.covector(u)])

    def flow(self, u: np.ndarray, samples=None) -> Trajectory:
        return self.model.flow(self.initial_phase(u), (0.0, self.span), self.options.step_control, samples=samples)

    def residual(self, u: np.ndarray) -> np.ndarray:
        """Diferença entre as coordenadas finais impostas e o fim do fluxo"""
        final = self.flow(np.asarray(u, dtype=float)).states[-1]
        out = final[self._final_index] - self.targets
        for row in self._angle_rows:
            out[row] = wrap_angle(out[row])
        return out

    def evaluate(self, u: np.ndarray) -> Tuple[Optional[np.ndarray], Optional[str]]:
        """(resíduo, None) ou (None, motivo) quando o fluxo não é integrável"""
        try:
            out = self.residual(u)
        except (IntegrationError, FloatingPointError, OverflowError) as exc:
            logger.debug("avaliação falhou em u=%s: %s", np.array2string(u, precision=4), exc)
            return None, f"{type(exc).__name__}: {exc}"
        if not np.all(np.isfinite(out)):
            return None, "resíduo não finito"
        return out, None

    def try_residual(self, u: np.ndarray) -> Optional[np.ndarray]:
        return self.evaluate(u)[0]

    def jacobian(self, u: np.ndarray, f: np.ndarray) -> np.ndarray:
        """Diferenças finitas progressivas, regressivas quando a progressiva falha"""
        J = np.zeros((len(f), self.size))
        for i in range(self.size):
            step = self.options.fd_step * max(1.0, abs(u[i]))
            for direction in (1.0, -1.0):
                shifted = u.copy()
                shifted[i] += direction * step
                g = self.try_residual(shifted)
                if g is not None:
                    J[:, i] = direction * (g - f) / step
                    break
            else:
                logger.debug("coluna %d do jacobiano indisponível", i)
        return J

    def seed(self) -> Optional[Tuple[np.ndarray, float]]:
        """Ponto de partida a partir da curva admissível de conexão"""
        if self.free_initial:
            return None
        initial = {n: self.spec.initial_value(n) for n in self.model.state_names}
        try:
            final = {n: self.spec.final_value(n) for n in self.final_names}
            covector, length = self.model.seed(initial, final)
        except (KeyError, ReachGeoError, ValueError, ZeroDivisionError) as exc:
            logger.debug("semente de conexão indisponível: %s", exc)
            return None
        named = dict(zip(self.model.covector_names, covector))
        return np.array([named[n] for n in self.covector_unknowns]), length


def lattice_starts(base: np.ndarray, names: Tuple[str, ...], delta: float, limit: int) -> List[np.ndarray]:
    """Reticulado base + {ε, −δ, +δ} por componente, ordenado pela distância à base

    p_t é sempre mantido positivo.
    """
    epsilon = 0.01 * delta
    offsets = sorted(
        itertools.product((epsilon, -delta, delta), repeat=len(base)),
        key=lambda o: (float(np.linalg.norm(o)), o),
    )
    pt = names.index("p_t") if "p_t" in names else None
    starts = []
    for offset in offsets[:limit]:
        start = base + np.array(offset)
        if pt is not None and start[pt] <= 0:
            start[pt] = max(abs(start[pt]), epsilon)
        starts.append(start)
    return starts


def _newton(problem: ShootingProblem, u0: np.ndarray, index: int, tol: Optional[float] = None,
            max_iterations: Optional[int] = None,
            homotopy: Optional[float] = None) -> Tuple[np.ndarray, Optional[np.ndarray], int, List[IterationRecord]]:
    opts = problem.options
    tol = opts.tol if tol is None else tol
    max_iterations = opts.max_iterations if max_iterations is None else max_iterations
    trace: List[IterationRecord] = []
    u = np.array(u0, dtype=float)
    f, error = problem.evaluate(u)
    if f is None:
        trace.append(IterationRecord(start_index=index, iteration=0, homotopy=homotopy, error=error))
        logger.debug("partida %d sem fluxo integrável: %s", index, error)
        return u, None, 0, trace
    norm = float(np.linalg.norm(f))
    for iteration in range(1, max_iterations + 1):
        if norm <= tol:
            return u, f, iteration - 1, trace
        J = problem.jacobian(u, f)
        step = np.linalg.lstsq(J, -f, rcond=None)[0]
        scale = 1.0
        accepted = False
        for _ in range(opts.max_halvings + 1):
            candidate = u + scale * step
            g = problem.try_residual(candidate)
            if g is not None:
                g_norm = float(np.linalg.norm(g))
                if g_norm <= (1.0 - ARMIJO * scale) * norm:
                    u, f, norm = candidate, g, g_norm
                    accepted = True
                    break
            scale *= 0.5
        trace.append(IterationRecord(start_index=index, iteration=iteration, residual_norm=norm,
                                     step_scale=scale if accepted else 0.0, homotopy=homotopy))
        logger.debug("partida %d, iteração %d: |G| = %.3e (escala %.3g)", index, iteration, norm, scale)
        if not accepted:
            break
    return u, f, len(trace), trace


def continuation(problem: ShootingProblem, u0: np.ndarray,
                 index: int = 0) -> Tuple[np.ndarray, float, List[IterationRecord]]:
    """Continuação no alvo a partir de u0

    O alvo intermediário é fim(u0) + λ (alvo − fim(u0)), com a diferença de θ
    reduzida a (−π, π], e u0 resolve λ = 0 exatamente. O passo em λ dobra a
    cada sucesso e cai à metade a cada falha; o preditor é a secante das
    duas últimas soluções. Devolve (u, λ alcançado, registros).
    """
    opts = problem.options
    origin = problem.reached(u0)
    gap = problem.targets - origin
    for row in problem._angle_rows:
        gap[row] = wrap_angle(gap[row])

    iterations = min(CONTINUATION_ITERATIONS, opts.max_iterations)
    u, lam, step = np.array(u0, dtype=float), 0.0, 1.0
    previous: Optional[Tuple[float, np.ndarray]] = None
    trace: List[IterationRecord] = []
    for _ in range(CONTINUATION_STEPS):
        if lam >= 1.0 or step < opts.continuation_min_step:
            break
        target = min(1.0, lam + step)
        guess = u if previous is None else u + (u - previous[1]) * (target - lam) / (lam - previous[0])
        stage = problem.retarget(origin + target * gap)
        candidate, f, _, records = _newton(stage, guess, index, tol=opts.continuation_tol,
                                           max_iterations=iterations, homotopy=target)
        trace.extend(records)
        if f is not None and float(np.linalg.norm(f)) <= opts.continuation_tol:
            previous, u, lam = (lam, u), candidate, target
            step *= 2.0
        else:
            step *= 0.5
    logger.debug("continuação parou em λ = %.4g", lam)
    return u, lam, trace


def continuation_start(problem: ShootingProblem,
                       index: int = 0) -> Tuple[Optional[np.ndarray], float, List[IterationRecord]]:
    """Partida obtida por continuação a partir do covetor canônico

    Com posição final imposta, resolve antes o problema de posição livre; o
    fim dessa geodésica é o ponto de partida da continuação completa. Se o
    problema relaxado não chega a λ = 1, a continuação parte do covetor
    canônico.
    """
    trace: List[IterationRecord] = []
    origin = problem.drift()
    relaxed = problem.relaxed()
    if relaxed is not None:
        try:
            u, lam, records = continuation(relaxed, relaxed.drift(), index)
            trace.extend(records)
            if lam >= 1.0:
                origin = problem.lift(relaxed, u)
            else:
                logger.debug("posição livre: continuação parou em λ = %.4g", lam)
        except (IntegrationError, FloatingPointError, OverflowError) as exc:
            trace.append(IterationRecord(start_index=index, iteration=0, error=f"{type(exc).__name__}: {exc}"))
    try:
        u, lam, records = continuation(problem, origin, index)
    except (IntegrationError, FloatingPointError, OverflowError) as exc:
        trace.append(IterationRecord(start_index=index, iteration=0, error=f"{type(exc).__name__}: {exc}"))
        return None, 0.0, trace
    trace.extend(records)
    return u, lam, trace


def solve(spec: BoundarySpec, opts: Optional[ShootingOptions] = None,
          model: Optional[FlowModelInterface] = None) -> ShootingResult:
    """Resolve o problema de contorno por shooting com múltiplos pontos de partida

    O span padrão é a duração T do problema. As partidas são, em ordem: a
    continuação a partir do covetor canônico, a curva de conexão (covetor
    reescalado de span = comprimento para span = T) e o reticulado δ em
    torno do covetor canônico. O melhor resultado é escolhido por
    (convergiu, resíduo, índice da partida).
    """
    opts = opts or ShootingOptions()
    problem = ShootingProblem(spec, opts, model)

    trace: List[IterationRecord] = []
    starts: List[Tuple[int, np.ndarray]] = []
    reach: Optional[float] = None
    if opts.continuation:
        u, reach, records = continuation_start(problem, index=0)
        trace.extend(records)
        logger.info("continuação alcançou λ = %.4g", reach)
        if u is not None:
            starts.append((0, u))
    next_index = 1 if opts.continuation else 0

    seeded = problem.seed() if opts.seed_from_connectivity else None
    if seeded is not None:
        covector, length = seeded
        scale = length / problem.span if math.isfinite(length) and length > 0 else 1.0
        start = problem.drift()
        start[: len(covector)] = scale * covector
        starts.append((next_index, start))
        next_index += 1
    room = max(opts.max_starts - next_index, 0)
    for offset, start in enumerate(lattice_starts(problem.drift(), problem.unknown_names, opts.delta, room)):
        starts.append((next_index + offset, start))

    best: Optional[Tuple[Tuple[bool, float, int], np.ndarray, np.ndarray, int]] = None
    tried = 0
    for index, start in starts:
        tried += 1
        u, f, iterations, records = _newton(problem, start, index)
        trace.extend(records)
        if f is None:
            continue
        norm = float(np.linalg.norm(f))
        key = (norm > opts.tol, norm, index)
        if best is None or key < best[0]:
            best = (key, u, f, iterations)
        if norm <= opts.tol and not opts.exhaustive:
            break

    if best is None:
        raise NonConvergenceError(f"nenhuma das {tried} partidas produziu um fluxo integrável", trace=trace)

    (_, norm, index), u, f, iterations = best
    converged = norm <= opts.tol
    trajectory = None
    try:
        trajectory = problem.flow(u, samples=np.linspace(0.0, problem.span, opts.samples))
    except IntegrationError as exc:
        logger.warning("trajetória final não pôde ser amostrada: %s", exc)
        converged = False
    result = ShootingResult(
        beta0=problem.covector(u),
        residual_norm=norm,
        iterations=iterations,
        trajectory=trajectory,
        converged=converged,
        tolerance=opts.tol,
        span=problem.span,
        model=spec.model,
        free_values={n: float(u[len(problem.covector_unknowns) + i]) for i, n in enumerate(problem.free_initial)},
        residual=f,
        start_index=index,
        starts_tried=tried,
        trace=trace,
        continuation_reach=reach,
    )
    if not converged:
        raise NonConvergenceError(
            f"shooting não convergiu: melhor resíduo {norm:.3e} após {tried} partidas", best=result, trace=trace)
    logger.info("shooting convergiu na partida %d em %d iterações (|G| = %.2e)", index, iterations, norm)
    return result


def residual(beta0, spec: BoundarySpec, opts: Optional[ShootingOptions] = None,
             model: Optional[FlowModelInterface] = None) -> np.ndarray:
    """G(β0) = estado final nas coordenadas impostas − alvo"""
    problem = ShootingProblem(spec, opts, model)
    beta0 = np.asarray(beta0, dtype=float)
    if beta0.shape != (problem.size,):
        raise BoundarySpecError(f"β0 deve ter {problem.size} componentes: {', '.join(problem.unknown_names)}")
    return problem.residual(beta0)


def freeze_theta(spec: BoundarySpec, theta_fixed: float) -> BoundarySpec:
    """Reescreve um problema 2D como problema com θ congelado em theta_fixed"""
    if spec.model == "1d":
        raise BoundarySpecError("θ congelado exige um problema 2D")
    initial = {**spec.initial, "theta": Fixed(value=theta_fixed)}
    final = {name: cond for name, cond in spec.final.items() if name != "theta"}
    final["theta"] = Free()
    return spec.model_copy(update={"model": "2d-theta-frozen", "initial": initial, "final": final})


def solve_constrained_theta(spec: BoundarySpec, theta_fixed: float,
                            opts: Optional[ShootingOptions] = None) -> ShootingResult:
    """Shooting com θ' = 0 imposto: linhas de θ e p_θ congeladas"""
    return solve(freeze_theta(spec, theta_fixed), opts)
