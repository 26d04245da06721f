"""
Geometria - campos horizontais e funcionais de curva comuns aos dois modelos
"""
import math
from typing import Optional, Tuple

import numpy as np

from .errors import DimensionError
from .models import HorizontalControls, State1D, State2D, Trajectory


def eval_fields_1d(s: State1D) -> Tuple[np.ndarray, np.ndarray]:
    """X1 = ∂t + v∂x + a∂v e X2 = ∂a em coordenadas (t, x, v, a)"""
    x1 = np.array([1.0, s.v, s.a, 0.0])
    x2 = np.array([0.0, 0.0, 0.0, 1.0])
    return x1, x2


def eval_fields_2d(s: State2D) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Referencial horizontal do modelo 2D em coordenadas (t, x, y, θ, v, a)"""
    x1 = np.array([1.0, s.v * math.cos(s.theta), s.v * math.sin(s.theta), 0.0, s.a, 0.0])
    x2 = np.array([0.0, 0.0, 0.0, 1.0, 0.0, 0.0])
    x3 = np.array([0.0, 0.0, 0.0, 0.0, 0.0, 1.0])
    return x1, x2, x3


def _squared_speed(traj: Trajectory, controls: HorizontalControls) -> np.ndarray:
    if len(controls) != len(traj):
        raise DimensionError(f"{len(controls)} amostras de controle para {len(traj)} amostras da trajetória")
    if controls.model != traj.model:
        raise DimensionError(f"controles {controls.model} para trajetória {traj.model}")
    return controls.squared_speed()


def curve_length(traj: Trajectory, controls: HorizontalControls) -> float:
    """Comprimento pela regra do trapézio na grade da trajetória"""
    speed = np.sqrt(_squared_speed(traj, controls))
    return float(np.trapz(speed, traj.parameter))


def curve_energy(traj: Trajectory, controls: HorizontalControls) -> float:
    """Energia ½∫|γ̇|² pela regra do trapézio"""
    return 0.5 * float(np.trapz(_squared_speed(traj, controls), traj.parameter))


def rescale_to_unit_interval(traj: Trajectory, controls: HorizontalControls) -> Tuple[Trajectory, HorizontalControls]:
    """Reparametriza afimmente para [0, 1]; os controles escalam com a duração"""
    span = traj.span
    if span <= 0:
        raise DimensionError("trajetória com um único ponto não pode ser reescalada")
    parameter = (traj.parameter - traj.parameter[0]) / span
    scaled = {
        name: None if value is None else np.asarray(value) * span
        for name, value in controls.model_dump().items()
    }
    return traj.with_parameter(parameter), HorizontalControls(**scaled)


def is_unimodal(values, rel_tol: float = 1e-9) -> bool:
    """Um único máximo interior: não decrescente até o pico, não crescente depois"""
    values = np.asarray(values, dtype=float)
    if len(values) < 3:
        return False
    peak = int(np.argmax(values))
    if peak in (0, len(values) - 1):
        return False
    tol = rel_tol * max(float(np.max(np.abs(values))), 1.0)
    rising = np.diff(values[: peak + 1])
    falling = np.diff(values[peak:])
    return bool(np.all(rising >= -tol) and np.all(falling <= tol))


def sign_relevant_zero_count(values, tol: Optional[float] = None) -> int:
    """Zeros nas extremidades mais trocas de sinal no interior

    Valores com módulo abaixo de tol contam como zero e não participam das
    trocas de sinal.
    """
    values = np.asarray(values, dtype=float)
    if tol is None:
        tol = 1e-6 * max(float(np.max(np.abs(values))), 1e-300)
    count = int(abs(values[0]) <= tol) + int(abs(values[-1]) <= tol)
    signs = np.sign(values[np.abs(values) > tol])
    count += int(np.count_nonzero(np.diff(signs)))
    return count


def collinearity_residual(x, y) -> float:
    """Maior distância dos pontos (x, y) à reta que liga o primeiro ao último"""
    points = np.column_stack([np.asarray(x, dtype=float), np.asarray(y, dtype=float)])
    offsets = points - points[0]
    chord = offsets[-1]
    norm = float(np.hypot(*chord))
    if norm == 0.0:
        return float(np.max(np.hypot(offsets[:, 0], offsets[:, 1])))
    cross = chord[0] * offsets[:, 1] - chord[1] * offsets[:, 0]
    return float(np.max(np.abs(cross)) / norm)
