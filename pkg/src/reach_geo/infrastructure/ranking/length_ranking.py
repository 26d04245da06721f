"""
Ordenação de candidatos da fibra por comprimento
"""
from typing import List

import numpy as np

from ...domain.models import FiberCandidate
from ...application.interfaces import RankingServiceInterface


class LengthRankingService(RankingServiceInterface):
    """Convergidos primeiro, depois menor comprimento, depois índice da grade"""

    def rank(self, candidates: List[FiberCandidate]) -> List[FiberCandidate]:
        if not candidates:
            return candidates

        lengths = [c.length for c in candidates if c.converged and c.length is not None]
        reference = float(np.min(lengths)) if lengths else None

        for candidate in candidates:
            candidate.rank_score = self._score(candidate, reference)
            candidate.explanation = self._build_explanation(candidate)

        return sorted(candidates, key=self._key)

    @staticmethod
    def _key(candidate: FiberCandidate):
        usable = candidate.converged and candidate.length is not None
        return (not usable, candidate.length if usable else float("inf"), candidate.index)

    @staticmethod
    def _score(candidate: FiberCandidate, reference) -> float:
        """100 para o mínimo, proporcional a mínimo/comprimento para os demais"""
        if reference is None or not candidate.converged or not candidate.length:
            return 0.0
        return float(np.clip(100.0 * reference / candidate.length, 0.0, 100.0))

    @staticmethod
    def _build_explanation(candidate: FiberCandidate) -> str:
        point = ", ".join(f"{k}={v:.4g}" for k, v in {**candidate.initial, **candidate.final}.items())
        if not candidate.converged:
            return f"{point} | falhou: {candidate.error or 'sem convergência'}"
        return f"{point} | comprimento {candidate.length:.6g} | score {candidate.rank_score:.1f}/100"
