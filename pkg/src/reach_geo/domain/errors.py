"""
Erros de domínio - hierarquia única para o solver de geodésicas
"""
from typing import Any, List, Optional


class ReachGeoError(Exception):
    """Erro base do projeto"""


class DimensionError(ReachGeoError):
    """Amostras com tamanhos incompatíveis"""


class DomainError(ReachGeoError):
    """Argumento fora do domínio da função"""


class PreconditionError(ReachGeoError):
    """Pré-condição da operação violada"""


class IntegrationError(ReachGeoError):
    """Falha do integrador; guarda a solução parcial"""

    def __init__(self, message: str, partial: Any = None):
        super().__init__(message)
        self.partial = partial


class AdmissibilityError(IntegrationError):
    """O fluxo saiu da região admissível (h ou ψ abaixo do piso)"""


class HorizonError(ReachGeoError):
    """Avaliação além do horizonte de admissibilidade"""

    def __init__(self, message: str, horizon: float):
        super().__init__(message)
        self.horizon = horizon


class ConnectivityError(ReachGeoError):
    """Sistema linear de conexão singular ou inconsistente"""

    def __init__(self, message: str, condition_number: float = float("inf")):
        super().__init__(message)
        self.condition_number = condition_number


class InfeasibleCurvatureError(ConnectivityError):
    """θ final incompatível com a curvatura constante dada"""


class SingularFrameError(ReachGeoError):
    """v = 0 numa amostra onde a matriz B exige divisão por v"""


class BoundarySpecError(ReachGeoError):
    """Condições de contorno inválidas para o problema de shooting"""


class NonConvergenceError(ReachGeoError):
    """Nenhum ponto de partida convergiu"""

    def __init__(self, message: str, best: Any = None, trace: Optional[List[Any]] = None):
        super().__init__(message)
        self.best = best
        self.trace = trace or []


class NoGeodesicFoundError(ReachGeoError):
    """Todos os pontos da fibra falharam"""

    def __init__(self, message: str, diagnostics: Optional[List[dict]] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or []


class ScenarioParseError(ReachGeoError):
    """Arquivo de cenário mal formado"""

    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(f"linha {line}: {message}" if line is not None else message)
        self.line = line
