"""
Factory para criar instâncias configuradas dos serviços
"""
from typing import List, Optional

from .config import Config
from .diagnostics import ReachDiagnostics
from .ranking.length_ranking import LengthRankingService
from .strategies.fiber_scan import DirectShootingStrategy, FiberScanStrategy
from ..application.interfaces import SearchStrategyInterface
from ..application.services import ReachingService
from ..domain.models import Scenario


class ReachingServiceFactory:
    """Factory para criar o serviço de geodésicas configurado"""

    @staticmethod
    def create(scenario: Scenario, config: Optional[Config] = None) -> ReachingService:
        """Cria o serviço com as opções do cenário e o paralelismo do ambiente"""
        if config is None:
            config = Config()

        strategies = ReachingServiceFactory._create_strategies(scenario, config)

        return ReachingService(
            strategies=strategies,
            ranking=LengthRankingService(),
            diagnostics=ReachDiagnostics(),
        )

    @staticmethod
    def _create_strategies(scenario: Scenario, config: Config) -> List[SearchStrategyInterface]:
        """Shooting direto para dois pontos, varredura para fibras"""
        return [
            DirectShootingStrategy(scenario.solver),
            FiberScanStrategy(scenario.solver, grid=scenario.grid, threads=config.THREADS),
        ]
