"""
Diagnósticos da geodésica escolhida: comprimento, energia, conservação e forma do perfil
"""
import logging
from typing import List, Optional

import numpy as np

from ..application.interfaces import DiagnosticsInterface
from ..domain.geometry import (
    collinearity_residual,
    curve_energy,
    curve_length,
    is_unimodal,
    rescale_to_unit_interval,
    sign_relevant_zero_count,
)
from ..domain.models import BoundarySpec, FiberCandidate, QuinticReach, ReachSummary
from .models.minjerk import quintic_position
from .strategies.fiber_scan import minimal_turn_check
from .strategies.shooting import model_for

logger = logging.getLogger(__name__)

MINJERK_TOLERANCE = 2e-2


class ReachDiagnostics(DiagnosticsInterface):
    """Resume o candidato vencedor com as verificações de conservação e de forma"""

    def summarize(self, name: str, spec: BoundarySpec, best: FiberCandidate,
                  candidates: List[FiberCandidate]) -> ReachSummary:
        result = best.result
        resolved = spec.resolve(best.initial, best.final)
        model = model_for(resolved)
        traj = result.trajectory
        controls = model.controls(traj)
        length = curve_length(traj, controls)
        unit_traj, unit_controls = rescale_to_unit_interval(traj, controls)
        unit_energy = curve_energy(unit_traj, unit_controls)

        converged = [c for c in candidates if c.converged]
        minimal_turn = None
        if any(n == "theta" for _, n, _ in spec.intervals()) and spec.model == "2d":
            minimal_turn = minimal_turn_check(best, candidates, spec)

        return ReachSummary(
            name=name,
            model=spec.model,
            length=length,
            energy=curve_energy(traj, controls),
            unit_energy=unit_energy,
            energy_length_gap=abs(unit_energy - length ** 2 / 2),
            residual_norm=result.residual_norm,
            iterations=result.iterations,
            start_index=result.start_index,
            span=result.span,
            hamiltonian=model.hamiltonian(np.concatenate([traj.states[0], traj.covectors[0]])),
            conservation=model.conservation(traj),
            speed_unimodal=is_unimodal(traj.column("v")),
            accel_zero_count=sign_relevant_zero_count(traj.column("a")),
            collinearity=collinearity_residual(traj.column("x"), traj.column("y")) if traj.model == "2d" else None,
            minjerk_max_error=self._minjerk_error(resolved, traj),
            argmin={"initial": best.initial, "final": best.final},
            converged_points=len(converged),
            total_points=len(candidates),
            minimal_turn=minimal_turn,
        )

    @staticmethod
    def _minjerk_error(spec: BoundarySpec, traj) -> Optional[float]:
        """Maior desvio de x(t) em relação à quíntica com os mesmos extremos (só 1D em repouso)"""
        if spec.model != "1d":
            return None
        try:
            at_rest = all(spec.initial_value(n) == 0.0 and spec.final_value(n) == 0.0 for n in ("v", "a"))
        except KeyError:
            return None
        if not at_rest:
            return None
        t = traj.column("t")
        reach = QuinticReach(x0=traj.column("x")[0], xT=spec.final_value("x"), T=spec.final_value("t") - t[0])
        expected, _ = quintic_position(reach, np.clip(t - t[0], 0.0, reach.T))
        error = float(np.max(np.abs(traj.column("x") - expected)))
        if error > MINJERK_TOLERANCE:
            logger.warning("geodésica difere da quíntica de mínimo jerk: desvio máximo %.3g", error)
        return error
