"""
Logging com rich
"""
import logging
from typing import Optional

from rich.console import Console
from rich.logging import RichHandler

PACKAGE_LOGGER = "reach_geo"


def configure_logging(level: int = logging.WARNING, console: Optional[Console] = None) -> logging.Logger:
    """Instala um RichHandler no logger do pacote; chamadas repetidas só ajustam o nível"""
    logger = logging.getLogger(PACKAGE_LOGGER)
    logger.setLevel(level)
    if not any(isinstance(h, RichHandler) for h in logger.handlers):
        handler = RichHandler(console=console or Console(stderr=True), show_path=False, rich_tracebacks=True)
        handler.setFormatter(logging.Formatter("%(message)s"))
        logger.addHandler(handler)
    return logger
