"""
Application Services - Casos de uso principais
"""
import logging
from typing import List, Optional

from ..domain.errors import BoundarySpecError, NoGeodesicFoundError
from ..domain.models import FiberCandidate, FiberSearchResult, ReachReport, Scenario
from .interfaces import DiagnosticsInterface, RankingServiceInterface, SearchStrategyInterface

logger = logging.getLogger(__name__)


def select_minimum(candidates: List[FiberCandidate], ranking: RankingServiceInterface) -> FiberSearchResult:
    """Mínimo de comprimento entre os candidatos convergidos; empate pelo índice da grade"""
    ranked = ranking.rank(list(candidates))
    if not ranked or not ranked[0].converged:
        diagnostics = [
            {"index": list(c.index), "initial": c.initial, "final": c.final, "error": c.error}
            for c in candidates
        ]
        raise NoGeodesicFoundError(f"nenhum dos {len(candidates)} pontos convergiu", diagnostics=diagnostics)
    ordered = sorted(candidates, key=lambda c: c.index)
    return FiberSearchResult(min_length=ranked[0].length, argmin=ranked[0], candidates=ordered)


class ReachingService:
    """Serviço principal: resolve o cenário e resume a geodésica escolhida"""

    def __init__(
        self,
        strategies: List[SearchStrategyInterface],
        ranking: RankingServiceInterface,
        diagnostics: DiagnosticsInterface,
    ):
        self._strategies = strategies
        self._ranking = ranking
        self._diagnostics = diagnostics

    async def run(self, scenario: Scenario) -> ReachReport:
        """Executa o cenário com a primeira estratégia que o aceita"""
        spec = scenario.boundary
        issues = spec.issues()
        if issues:
            raise BoundarySpecError("; ".join(issue.message for issue in issues))

        strategy = self._pick_strategy(spec)
        if strategy is None:
            raise BoundarySpecError(f"nenhuma estratégia aceita o cenário {scenario.name}")
        logger.info("cenário %s: estratégia %s", scenario.name, type(strategy).__name__)

        candidates = await strategy.execute(spec)
        search = select_minimum(candidates, self._ranking)
        summary = self._diagnostics.summarize(scenario.name, spec, search.argmin, search.candidates)

        return ReachReport(
            summary=summary,
            best=search.argmin,
            candidates=self._ranking.rank(search.candidates),
        )

    def _pick_strategy(self, spec) -> Optional[SearchStrategyInterface]:
        for strategy in self._strategies:
            if strategy.accepts(spec):
                return strategy
        return None
