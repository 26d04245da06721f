"""
Configuração da aplicação
"""
import logging
import os

from dotenv import load_dotenv

from ..domain.models import ShootingOptions, StepControl

load_dotenv()

logger = logging.getLogger(__name__)


def _env_float(name: str, default: float, positive: bool = True) -> float:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        value = float(raw)
    except ValueError:
        logger.warning("%s=%r inválido; usando %s", name, raw, default)
        return default
    if positive and not value > 0:
        logger.warning("%s=%r deve ser positivo; usando %s", name, raw, default)
        return default
    return value


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning("%s=%r inválido; usando %s", name, raw, default)
        return default
    if value < 1:
        logger.warning("%s=%r deve ser >= 1; usando %s", name, raw, default)
        return default
    return value


class Config:
    """Configuração centralizada"""

    # Paralelismo e saída
    THREADS = _env_int("REACHGEO_THREADS", 4)
    LOG_LEVEL = os.getenv("REACHGEO_LOG_LEVEL", "WARNING").upper()
    OUTPUT_DIR = os.getenv("REACHGEO_OUTPUT_DIR", "out")

    # Solver
    DELTA = _env_float("REACHGEO_DELTA", 0.5)
    TOL = _env_float("REACHGEO_TOL", 1e-8)
    ABS_TOL = _env_float("REACHGEO_ABS_TOL", 1e-10)
    REL_TOL = _env_float("REACHGEO_REL_TOL", 1e-10)
    GRID = _env_int("REACHGEO_GRID", 16)

    @classmethod
    def step_control(cls) -> StepControl:
        return StepControl(abs_tol=cls.ABS_TOL, rel_tol=cls.REL_TOL)

    @classmethod
    def shooting_options(cls) -> ShootingOptions:
        """Opções padrão do shooting a partir do ambiente"""
        return ShootingOptions(tol=cls.TOL, delta=cls.DELTA, step_control=cls.step_control())

    @classmethod
    def log_level(cls) -> int:
        level = logging.getLevelName(cls.LOG_LEVEL)
        return level if isinstance(level, int) else logging.WARNING
