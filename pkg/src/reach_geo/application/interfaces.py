"""
Interfaces/Contratos para Application Layer
"""
from abc import ABC, abstractmethod
from typing import Dict, List, Optional, Protocol, Sequence, Tuple

import numpy as np

from ..domain.models import (
    BoundarySpec,
    ConservationReport,
    FiberCandidate,
    HorizontalControls,
    ReachSummary,
    Trajectory,
)


class FlowModelInterface(Protocol):
    """Modelo com fluxo hamiltoniano normal"""
    name: str
    tag: str
    state_names: Tuple[str, ...]
    covector_names: Tuple[str, ...]
    angle_index: Optional[int]
    frozen_covector: Tuple[str, ...]

    def hamiltonian(self, y: np.ndarray) -> float:
        """Valor de H no ponto de fase"""
        ...

    def flow(self, y0: np.ndarray, span: Tuple[float, float], ctrl=None,
             samples: Optional[Sequence[float]] = None) -> Trajectory:
        """Integra o fluxo admissível"""
        ...

    def controls(self, traj: Trajectory) -> HorizontalControls:
        """Coeficientes no referencial horizontal ao longo do fluxo"""
        ...

    def admissible(self, traj: Trajectory) -> Tuple[Trajectory, HorizontalControls]:
        """Fluxo reescrito no parâmetro tempo"""
        ...

    def conservation(self, traj: Trajectory) -> ConservationReport:
        """Derivas das quantidades conservadas"""
        ...

    def seed(self, initial: Dict[str, float], final: Dict[str, float]) -> Tuple[np.ndarray, float]:
        """Covetor inicial e span sugeridos pela curva de conexão"""
        ...


class RankingServiceInterface(ABC):
    """Interface para ordenação de candidatos"""

    @abstractmethod
    def rank(self, candidates: List[FiberCandidate]) -> List[FiberCandidate]:
        """Ordena candidatos do melhor para o pior"""
        pass


class SearchStrategyInterface(ABC):
    """Interface para estratégias de busca de geodésicas"""

    @abstractmethod
    def accepts(self, spec: BoundarySpec) -> bool:
        """Diz se a estratégia trata este problema"""
        pass

    @abstractmethod
    async def execute(self, spec: BoundarySpec) -> List[FiberCandidate]:
        """Executa a estratégia de busca"""
        pass


class DiagnosticsInterface(ABC):
    """Interface para o resumo numérico de uma geodésica resolvida"""

    @abstractmethod
    def summarize(self, name: str, spec: BoundarySpec, best: FiberCandidate,
                  candidates: List[FiberCandidate]) -> ReachSummary:
        """Comprimento, energia, derivas e verificações de forma"""
        pass
