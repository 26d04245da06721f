"""
Exportação dos resultados: trajetória em CSV, resumo JSON, roteiro de gráfico e diagnósticos de falha
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Tuple

import numpy as np

from ...domain.errors import NoGeodesicFoundError, NonConvergenceError, ReachGeoError
from ...domain.models import FiberCandidate, ReachReport, Scenario, Trajectory
from ..strategies.shooting import model_for

logger = logging.getLogger(__name__)

CSV_FORMAT = "%.17g"


def trajectory_table(traj: Trajectory, model) -> Tuple[List[str], np.ndarray]:
    """Colunas s, estado, covetor e H, na ordem canônica do modelo"""
    if traj.covectors is None:
        raise ReachGeoError("trajetória sem covetor não pode ser exportada")
    header = ["s", *traj.state_names, *traj.covector_names, "H"]
    states = np.column_stack([traj.column(name) for name in traj.state_names])
    phase = np.hstack([traj.states, traj.covectors])
    energy = np.array([model.hamiltonian(row) for row in phase])
    table = np.column_stack([traj.parameter, states, traj.covectors, energy])
    return header, table


def write_csv(path: Path, traj: Trajectory, model) -> Path:
    header, table = trajectory_table(traj, model)
    np.savetxt(path, table, fmt=CSV_FORMAT, delimiter=",", header=",".join(header), comments="")
    return path


def read_csv(path: Path) -> Tuple[List[str], np.ndarray]:
    """Lê de volta um CSV exportado"""
    with open(path, encoding="utf-8") as handle:
        header = handle.readline().strip().split(",")
    table = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return header, table


def _candidate_row(candidate: FiberCandidate, best: FiberCandidate) -> Dict[str, Any]:
    return {
        "index": list(candidate.index),
        "initial": candidate.initial,
        "final": candidate.final,
        "converged": candidate.converged,
        "length": candidate.length,
        "residual_norm": candidate.result.residual_norm if candidate.result else None,
        "rank_score": candidate.rank_score,
        "error": candidate.error,
        "argmin": candidate.index == best.index,
    }


def summary_payload(report: ReachReport, scenario: Scenario) -> Dict[str, Any]:
    payload = report.summary.model_dump(mode="json")
    payload["description"] = scenario.description
    payload["argmin_index"] = list(report.best.index)
    payload["candidates"] = [
        _candidate_row(c, report.best) for c in sorted(report.candidates, key=lambda c: c.index)
    ]
    return payload


def write_summary(path: Path, report: ReachReport, scenario: Scenario) -> Path:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(summary_payload(report, scenario), handle, indent=2, sort_keys=True)
        handle.write("\n")
    return path


def plot_script(name: str, csv_name: str, model: str) -> str:
    """Roteiro declarativo com os três painéis: caminho, t-v e t-a"""
    path_panel = "panel path x=t y=x" if model == "1d" else "panel path x=x y=y aspect=equal"
    lines = [
        f"# {name}",
        f"data {csv_name}",
        "layout 1x3",
        f"{path_panel} style=line color=black",
        "mark first color=red",
        "mark last color=black",
        "panel speed x=t y=v style=line color=black",
        "panel accel x=t y=a style=line color=black",
        "hline accel y=0 style=dashed",
    ]
    return "\n".join(lines) + "\n"


def write_plot_script(path: Path, name: str, csv_name: str, model: str) -> Path:
    path.write_text(plot_script(name, csv_name, model), encoding="utf-8")
    return path


def export_report(report: ReachReport, scenario: Scenario, directory: Path) -> List[Path]:
    """Grava <nome>.csv, <nome>.summary.json e <nome>.plot.txt"""
    directory.mkdir(parents=True, exist_ok=True)
    best = report.best
    resolved = scenario.boundary.resolve(best.initial, best.final)
    model = model_for(resolved)
    csv_path = write_csv(directory / f"{scenario.name}.csv", best.result.trajectory, model)
    paths = [
        csv_path,
        write_summary(directory / f"{scenario.name}.summary.json", report, scenario),
        write_plot_script(directory / f"{scenario.name}.plot.txt", scenario.name, csv_path.name,
                          best.result.trajectory.model),
    ]
    logger.info("resultados de %s gravados em %s", scenario.name, directory)
    return paths


def failure_payload(error: ReachGeoError) -> Dict[str, Any]:
    payload: Dict[str, Any] = {"error": type(error).__name__, "message": str(error)}
    if isinstance(error, NoGeodesicFoundError):
        payload["points"] = error.diagnostics
    if isinstance(error, NonConvergenceError):
        best = error.best
        payload["best_residual_norm"] = getattr(best, "residual_norm", None)
        payload["continuation_reach"] = getattr(best, "continuation_reach", None)
        payload["trace"] = [record.model_dump(mode="json") for record in error.trace]
    return payload


def write_diagnostics(directory: Path, name: str, error: ReachGeoError) -> Path:
    """Grava <nome>.diagnostics.json quando o solver falha"""
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"{name}.diagnostics.json"
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(failure_payload(error), handle, indent=2, sort_keys=True, default=str)
        handle.write("\n")
    return path
