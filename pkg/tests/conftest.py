"""
Fixtures compartilhadas dos testes
"""
import os
import sys

import numpy as np
import pytest

# Adiciona o diretório src ao path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from reach_geo.domain.models import StepControl  # noqa: E402


@pytest.fixture
def tight_control() -> StepControl:
    return StepControl(abs_tol=1e-10, rel_tol=1e-10)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240517)


@pytest.fixture
def random_covector(rng):
    """Covetores na caixa δ = 0.5 com p_t em [0.5, 2]"""
    def make(size: int, delta: float = 0.5) -> np.ndarray:
        covector = rng.uniform(-delta, delta, size)
        covector[0] = rng.uniform(0.5, 2.0)
        return covector
    return make
