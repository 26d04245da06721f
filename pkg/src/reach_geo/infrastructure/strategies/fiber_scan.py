"""
Estratégias de busca - shooting direto e varredura de fibras (ponto-conjunto e conjunto-conjunto)
"""
import asyncio
import concurrent.futures
import itertools
import logging
from typing import Any, Coroutine, Dict, List, Optional, Tuple, TypeVar

import numpy as np

from ...domain.errors import ReachGeoError
from ...domain.geometry import curve_length
from ...domain.models import (
    BoundarySpec,
    FiberCandidate,
    FiberSearchResult,
    FiberSet,
    Fixed,
    Interval,
    ShootingOptions,
    State2D,
)
from ...application.interfaces import SearchStrategyInterface
from ...application.services import select_minimum
from ..ranking.length_ranking import LengthRankingService
from .shooting import model_for, solve

logger = logging.getLogger(__name__)

GridPoint = Tuple[Tuple[int, ...], Dict[str, float], Dict[str, float]]
T = TypeVar("T")


def fiber_grid(spec: BoundarySpec, counts: Dict[Tuple[str, str], int], default_count: int = 16) -> List[GridPoint]:
    """Produto das grades de cada intervalo, em ordem lexicográfica do índice"""
    axes = []
    for end, name, interval in spec.intervals():
        count = counts.get((end, name), default_count)
        values = [interval.lo] if interval.lo == interval.hi or count == 1 else \
            list(np.linspace(interval.lo, interval.hi, count))
        axes.append((end, name, values))

    points: List[GridPoint] = []
    for index in itertools.product(*(range(len(values)) for _, _, values in axes)):
        initial: Dict[str, float] = {}
        final: Dict[str, float] = {}
        for (end, name, values), i in zip(axes, index):
            (initial if end == "initial" else final)[name] = float(values[i])
        points.append((tuple(index), initial, final))
    return points


def _solve_point(spec: BoundarySpec, point: GridPoint, opts: ShootingOptions) -> FiberCandidate:
    index, initial, final = point
    resolved = spec.resolve(initial, final)
    try:
        result = solve(resolved, opts)
    except ReachGeoError as exc:
        return FiberCandidate(index=index, initial=initial, final=final, error=str(exc))
    model = model_for(resolved)
    length = curve_length(result.trajectory, model.controls(result.trajectory))
    return FiberCandidate(index=index, initial=initial, final=final, result=result, length=length)


async def scan_fibers(
    spec: BoundarySpec,
    opts: Optional[ShootingOptions] = None,
    counts: Optional[Dict[Tuple[str, str], int]] = None,
    default_count: int = 16,
    threads: int = 4,
) -> List[FiberCandidate]:
    """Resolve cada ponto da grade em threads, limitado por threads simultâneos"""
    opts = opts or ShootingOptions()
    points = fiber_grid(spec, counts or {}, default_count)
    semaphore = asyncio.Semaphore(max(1, threads))

    async def run(point: GridPoint) -> FiberCandidate:
        async with semaphore:
            return await asyncio.to_thread(_solve_point, spec, point, opts)

    candidates = await asyncio.gather(*(run(point) for point in points))
    failed = [c for c in candidates if not c.converged]
    for candidate in failed:
        logger.warning("ponto %s da fibra ignorado: %s", candidate.index, candidate.error)
    logger.info("varredura: %d/%d pontos convergiram", len(candidates) - len(failed), len(candidates))
    return list(candidates)


def _fixed(state: State2D, names=("t", "x", "y", "theta", "v", "a")) -> Dict[str, Fixed]:
    return {name: Fixed(value=getattr(state, name)) for name in names}


def _fiber_conditions(fiber: FiberSet) -> Dict[str, object]:
    conditions: Dict[str, object] = {name: Fixed(value=value) for name, value in fiber.base.items()}
    for name, (lo, hi) in (("theta", fiber.theta_range), ("a", fiber.accel_range)):
        conditions[name] = Fixed(value=lo) if lo == hi else Interval(lo=lo, hi=hi)
    return conditions


def _fiber_counts(end: str, fiber: FiberSet) -> Dict[Tuple[str, str], int]:
    return {(end, "theta"): fiber.counts[0], (end, "a"): fiber.counts[1]}


def _run_sync(coro: Coroutine[Any, Any, T]) -> T:
    """asyncio.run fora de um laço; dentro de um laço ativo, numa thread própria"""
    try:
        asyncio.get_running_loop()
    except RuntimeError:
        return asyncio.run(coro)
    with concurrent.futures.ThreadPoolExecutor(max_workers=1) as pool:
        return pool.submit(asyncio.run, coro).result()


async def distance_point_to_set_async(eta: State2D, fiber: FiberSet, opts: Optional[ShootingOptions] = None,
                                      threads: int = 4) -> FiberSearchResult:
    """Menor comprimento de geodésica admissível de eta até a fibra"""
    spec = BoundarySpec(model="2d", initial=_fixed(eta), final=_fiber_conditions(fiber),
                        span=opts.span if opts else None)
    candidates = await scan_fibers(spec, opts, _fiber_counts("final", fiber), threads=threads)
    return select_minimum(candidates, LengthRankingService())


async def distance_set_to_set_async(start: FiberSet, target: FiberSet, opts: Optional[ShootingOptions] = None,
                                    threads: int = 4) -> FiberSearchResult:
    """Menor comprimento sobre a grade produto das duas fibras"""
    spec = BoundarySpec(model="2d", initial=_fiber_conditions(start), final=_fiber_conditions(target),
                        span=opts.span if opts else None)
    counts = {**_fiber_counts("initial", start), **_fiber_counts("final", target)}
    candidates = await scan_fibers(spec, opts, counts, threads=threads)
    return select_minimum(candidates, LengthRankingService())


def distance_point_to_set(eta: State2D, fiber: FiberSet, opts: Optional[ShootingOptions] = None,
                          threads: int = 4) -> FiberSearchResult:
    return _run_sync(distance_point_to_set_async(eta, fiber, opts, threads))


def distance_set_to_set(start: FiberSet, target: FiberSet, opts: Optional[ShootingOptions] = None,
                        threads: int = 4) -> FiberSearchResult:
    return _run_sync(distance_set_to_set_async(start, target, opts, threads))


def heading_change(candidate: FiberCandidate, spec: BoundarySpec) -> float:
    """|θ1 − θ0| do ponto da grade"""
    theta0 = candidate.initial.get("theta", spec.initial_value("theta"))
    theta1 = candidate.final.get("theta")
    if theta1 is None:
        cond = spec.final.get("theta")
        theta1 = cond.value if isinstance(cond, Fixed) else theta0
    return abs(theta1 - theta0)


def minimal_turn_check(best: FiberCandidate, candidates: List[FiberCandidate], spec: BoundarySpec,
                       slack: float = 0.1) -> bool:
    """O argmin muda de direção no máximo slack rad a mais que qualquer outro convergido"""
    changes = [heading_change(c, spec) for c in candidates if c.converged]
    return heading_change(best, spec) <= min(changes) + slack


class DirectShootingStrategy(SearchStrategyInterface):
    """Problema de dois pontos sem intervalos"""

    def __init__(self, options: ShootingOptions):
        self._options = options

    def accepts(self, spec: BoundarySpec) -> bool:
        return not spec.intervals()

    async def execute(self, spec: BoundarySpec) -> List[FiberCandidate]:
        candidate = await asyncio.to_thread(_solve_point, spec, ((), {}, {}), self._options)
        if candidate.error:
            logger.warning("shooting falhou: %s", candidate.error)
        return [candidate]


class FiberScanStrategy(SearchStrategyInterface):
    """Varredura exaustiva das fibras de θ e a nos extremos"""

    def __init__(self, options: ShootingOptions, grid: int = 16, threads: int = 4):
        self._options = options
        self._grid = grid
        self._threads = threads

    def accepts(self, spec: BoundarySpec) -> bool:
        return bool(spec.intervals())

    async def execute(self, spec: BoundarySpec) -> List[FiberCandidate]:
        return await scan_fibers(spec, self._options, default_count=self._grid, threads=self._threads)
