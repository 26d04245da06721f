"""
Modelo de mínimo jerk - quíntica fechada usada como oráculo independente
"""
from typing import Tuple

import numpy as np

from ...domain.errors import DomainError
from ...domain.models import QuinticReach

# coeficientes em τ, grau crescente: 10τ³ − 15τ⁴ + 6τ⁵
QUINTIC = np.array([0.0, 0.0, 0.0, 10.0, -15.0, 6.0])
_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(8)


def _tau(r: QuinticReach, t):
    t = np.asarray(t, dtype=float)
    slack = 1e-12 * r.T
    if np.any(t < -slack) or np.any(t > r.T + slack):
        raise DomainError(f"t fora de [0, {r.T}]")
    return np.clip(t / r.T, 0.0, 1.0)


def _profile(order: int, tau):
    coeffs = np.polynomial.polynomial.polyder(QUINTIC, order) if order else QUINTIC
    return np.polynomial.polynomial.polyval(tau, coeffs)


def _displacement(r: QuinticReach) -> np.ndarray:
    return np.array([r.xT - r.x0, r.yT - r.y0])


def quintic_position(r: QuinticReach, t) -> Tuple:
    """(x, y) no instante t"""
    s = _profile(0, _tau(r, t))
    dx, dy = _displacement(r)
    return r.x0 + dx * s, r.y0 + dy * s


def quintic_derivatives(r: QuinticReach, t) -> Tuple[Tuple, Tuple, Tuple]:
    """Velocidade, aceleração e jerk, cada um como par (x, y)"""
    tau = _tau(r, t)
    dx, dy = _displacement(r)
    out = []
    for order in (1, 2, 3):
        scale = _profile(order, tau) / r.T ** order
        out.append((dx * scale, dy * scale))
    return tuple(out)


def minjerk_cost(r: QuinticReach, panels: int = 4) -> float:
    """½∫(jerk)² por Gauss-Legendre; exato para o integrando polinomial de grau 4"""
    edges = np.linspace(0.0, r.T, panels + 1)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        t = 0.5 * (hi - lo) * _GAUSS_NODES + 0.5 * (hi + lo)
        _, _, (jx, jy) = quintic_derivatives(r, t)
        total += 0.5 * (hi - lo) * float(np.dot(_GAUSS_WEIGHTS, jx ** 2 + jy ** 2))
    return 0.5 * total


def closed_form_cost(r: QuinticReach) -> float:
    """360·D²/T⁵ com D² a soma dos quadrados dos deslocamentos"""
    return 360.0 * float(np.sum(_displacement(r) ** 2)) / r.T ** 5
