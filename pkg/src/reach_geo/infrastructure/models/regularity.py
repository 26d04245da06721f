"""
Regularidade de curvas horizontais pelo sistema Λ' = ΛB, ΛA = 0
"""
import logging
from typing import Optional, Sequence, Tuple

import numpy as np

from ...domain.errors import DimensionError, DomainError, SingularFrameError
from ...domain.models import AdmissibilityMatrices, ClassificationResult, StepControl
from ..integrators.odeint import integrate

logger = logging.getLogger(__name__)

FAMILIES = ("x3-integral", "kx2-jx3", "admissible", "engel-x2")
CONSTRAINT_TOLERANCE = 1e-8
WITNESS_FLOOR = 1e-6


def _samples(values, n: int, name: str) -> np.ndarray:
    if values is None:
        raise DomainError(f"família exige a amostra {name}")
    out = np.broadcast_to(np.asarray(values, dtype=float), (n,)).copy()
    if not np.all(np.isfinite(out)):
        raise DomainError(f"{name} contém valores não finitos")
    return out


def _checked_speed(v, n: int) -> np.ndarray:
    v = _samples(v, n, "v")
    zeros = np.flatnonzero(np.abs(v) < 1e-12)
    if zeros.size:
        raise SingularFrameError(f"v = 0 em {zeros.size} amostra(s); B exige divisão por v")
    return v


def build_matrices(
    family: str,
    parameter: Sequence[float],
    k=None,
    j=None,
    v=None,
    a=None,
) -> AdmissibilityMatrices:
    """Matrizes A e B de cada família de curvas

    x3-integral: curvas integrais de X3; kx2-jx3: tangente kX2 + jX3;
    admissible: tangente X1 + kX2 + jX3; engel-x2: curvas integrais de X2 no
    modelo de Engel.
    """
    parameter = np.asarray(parameter, dtype=float)
    n = len(parameter)
    zeros = np.zeros(n)
    ones = np.ones(n)

    if family == "x3-integral":
        A = np.stack([[zeros, zeros, zeros], [ones, zeros, zeros], [zeros, zeros, zeros]])
        B = np.zeros((3, 3, n))
    elif family == "kx2-jx3":
        k, j = _samples(k, n, "k"), _samples(j, n, "j")
        v = _checked_speed(v, n)
        A = np.stack([[-k, zeros, zeros], [j, zeros, zeros], [zeros, zeros, zeros]])
        B = np.stack([[zeros, zeros, -k / v], [zeros, zeros, zeros], [k * v, zeros, zeros]])
    elif family == "admissible":
        k, j, a = _samples(k, n, "k"), _samples(j, n, "j"), _samples(a, n, "a")
        v = _checked_speed(v, n)
        A = np.stack([[-k, ones, zeros], [j, zeros, ones], [zeros, zeros, zeros]])
        B = np.stack([[a / v, zeros, -k / v], [zeros, zeros, zeros], [k * v, -ones, zeros]])
    elif family == "engel-x2":
        A = np.stack([[ones, zeros], [zeros, zeros]])
        B = np.zeros((2, 2, n))
    else:
        raise DomainError(f"família desconhecida: {family}; use uma de {', '.join(FAMILIES)}")

    return AdmissibilityMatrices(
        family=family,
        parameter=parameter,
        A=np.moveaxis(A, -1, 0),
        B=np.moveaxis(B, -1, 0),
    )


def _restrict(m: AdmissibilityMatrices, interval: Optional[Tuple[float, float]]) -> AdmissibilityMatrices:
    if interval is None:
        return m
    lo, hi = interval
    mask = (m.parameter >= lo - 1e-12) & (m.parameter <= hi + 1e-12)
    if np.count_nonzero(mask) < 2:
        raise DomainError(f"intervalo {interval} contém menos de duas amostras")
    return m.model_copy(update={"parameter": m.parameter[mask], "A": m.A[mask], "B": m.B[mask]})


def _grid_step(parameter: np.ndarray) -> float:
    steps = np.diff(parameter)
    if len(steps) == 0 or np.any(steps <= 0):
        raise DimensionError("a grade deve ter ao menos duas amostras crescentes")
    if np.max(steps) - np.min(steps) > 1e-9 * max(1.0, float(np.max(np.abs(parameter)))):
        raise DimensionError("classify exige grade uniforme")
    return float(steps.mean())


def left_kernel(matrix: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Base (linhas) de {λ : λ matrix = 0}"""
    u, singular, _ = np.linalg.svd(matrix)
    scale = max(1.0, float(singular[0])) if singular.size else 1.0
    rank = int(np.count_nonzero(singular > tol * scale))
    return u[:, rank:].T


def _propagate(m: AdmissibilityMatrices, row: np.ndarray, step: float) -> np.ndarray:
    """Λ' = ΛB por RK4 na própria grade"""
    def rhs(s, lam):
        return lam @ m.B_at(s)

    span = (float(m.parameter[0]), float(m.parameter[-1]))
    solution = integrate(rhs, row, span, StepControl.fixed(step), samples=m.parameter)
    return solution.y


def classify(m: AdmissibilityMatrices, interval: Optional[Tuple[float, float]] = None) -> ClassificationResult:
    """Regular ou singular (com testemunha Λ amostrada) pelo critério Λ

    O núcleo à esquerda de A(0) é propagado por Λ' = ΛB; uma combinação
    dessas soluções é testemunha quando ΛA se anula em toda a grade e Λ não
    se anula em nenhuma amostra.
    """
    m = _restrict(m, interval)
    step = _grid_step(m.parameter)
    kernel = left_kernel(m.A[0])
    if kernel.shape[0] == 0:
        logger.debug("%s: núcleo vazio em s=0, regular por vacuidade", m.family)
        return ClassificationResult(verdict="regular")

    # fundamental[i] = solução que parte da i-ésima linha do núcleo, forma (N, n-k)
    fundamental = np.stack([_propagate(m, row, step) for row in kernel])
    constraint = np.einsum("isr,src->sci", fundamental, m.A)
    stacked = constraint.reshape(-1, kernel.shape[0])
    _, singular, vt = np.linalg.svd(stacked, full_matrices=True)

    best = None
    candidates = 0
    for c in vt[::-1]:
        lam = np.einsum("i,isr->sr", c, fundamental)
        residual = float(np.max(np.abs(np.einsum("sr,src->sc", lam, m.A))))
        floor = float(np.min(np.linalg.norm(lam, axis=1)))
        if residual <= CONSTRAINT_TOLERANCE:
            candidates += 1
        if best is None or residual < best[0]:
            best = (residual, floor, lam)
        if residual <= CONSTRAINT_TOLERANCE and floor >= WITNESS_FLOOR:
            logger.debug("%s: testemunha com resíduo %.2e e norma mínima %.2e", m.family, residual, floor)
            return ClassificationResult(
                verdict="singular",
                witness=lam,
                constraint_residual=residual,
                min_witness_norm=floor,
                solution_norm=float(np.max(np.linalg.norm(lam, axis=1))),
                kernel_dimension=kernel.shape[0],
            )

    residual, floor, _ = best
    logger.debug("%s: nenhuma testemunha (melhor resíduo %.2e)", m.family, residual)
    return ClassificationResult(
        verdict="regular",
        constraint_residual=residual,
        min_witness_norm=floor,
        solution_norm=0.0,
        kernel_dimension=kernel.shape[0],
    )


def holonomy_image(m: AdmissibilityMatrices, horizontal) -> np.ndarray:
    """V_V amostrado de V_V' = −B V_V − A V_H com V_V(0) = 0

    horizontal é V_H amostrado na grade, forma (N, k), ou uma função s -> V_H.
    """
    step = _grid_step(m.parameter)
    if callable(horizontal):
        control = horizontal
    else:
        horizontal = np.asarray(horizontal, dtype=float)
        if horizontal.shape != (len(m.parameter), m.A.shape[2]):
            raise DimensionError(f"V_H deve ter forma ({len(m.parameter)}, {m.A.shape[2]})")
        columns = horizontal.T

        def control(s):
            return np.array([np.interp(s, m.parameter, col) for col in columns])

    def rhs(s, vv):
        return -m.B_at(s) @ vv - m.A_at(s) @ np.asarray(control(s), dtype=float)

    span = (float(m.parameter[0]), float(m.parameter[-1]))
    solution = integrate(rhs, np.zeros(m.A.shape[1]), span, StepControl.fixed(step), samples=m.parameter)
    return solution.y
