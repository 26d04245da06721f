"""
Interface de linha de comando
"""
import argparse
import asyncio
import logging
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError
from rich.console import Console
from rich.panel import Panel
from rich.progress import Progress, SpinnerColumn, TextColumn
from rich.table import Table

from ..domain.errors import (
    BoundarySpecError,
    NoGeodesicFoundError,
    NonConvergenceError,
    ReachGeoError,
    ScenarioParseError,
)
from ..domain.models import ReachReport, Scenario
from ..infrastructure.config import Config
from ..infrastructure.factory import ReachingServiceFactory
from ..infrastructure.logging_setup import configure_logging
from ..infrastructure.scenarios.exporters import export_report, write_diagnostics
from ..infrastructure.scenarios.parser import apply_overrides, describe_bundled, load_scenario, validate_file

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_SOLVER = 3


class ReachGeoCLI:
    """Interface CLI para o reach-geo"""

    def __init__(self, console: Optional[Console] = None):
        self.console = console or Console()

    def run(self, argv: Optional[List[str]] = None) -> int:
        """Executa o subcomando e devolve o código de saída"""
        args = self._parse_arguments(argv)
        configure_logging(Config.log_level(), console=Console(stderr=True))
        if args.command == "run":
            return self._run(args)
        if args.command == "validate":
            return self._validate(args.scenario, strict=args.strict)
        return self._list_scenarios()

    def _parse_arguments(self, argv: Optional[List[str]]) -> argparse.Namespace:
        """Configura e processa argumentos da linha de comando"""
        parser = argparse.ArgumentParser(
            prog="reach-geo",
            description="reach-geo - Geodésicas sub-riemannianas para movimentos de alcance",
            formatter_class=argparse.RawDescriptionHelpFormatter,
            epilog="""
Exemplos de uso:
  python -m reach_geo list-scenarios
  python -m reach_geo run centerout-1d --out out
  python -m reach_geo run meu_cenario.scn --tol 1e-9 --grid 8
  python -m reach_geo validate meu_cenario.scn
            """
        )
        sub = parser.add_subparsers(dest="command", required=True)

        run = sub.add_parser("run", help="Resolve um cenário e grava CSV, resumo e roteiro de gráfico")
        run.add_argument("scenario", help="Arquivo de cenário (.scn ou .json) ou nome de cenário distribuído")
        run.add_argument("--out", help=f"Diretório de saída (padrão: {Config.OUTPUT_DIR})")
        run.add_argument("--tol", type=float, help="Tolerância do resíduo do shooting")
        run.add_argument("--grid", type=int, help="Pontos por dimensão variável da fibra")
        run.add_argument("--fixed-step", type=float, help="Usa RK4 de passo fixo com este passo")
        run.add_argument("--samples", type=int, help="Amostras da trajetória exportada")

        validate = sub.add_parser("validate", help="Validação estática do cenário (não integra)")
        validate.add_argument("scenario", help="Arquivo de cenário ou nome de cenário distribuído")
        validate.add_argument("--strict", action="store_true",
                              help="Sai com código 2 quando houver problemas")

        sub.add_parser("list-scenarios", help="Lista os cenários distribuídos")

        return parser.parse_args(argv)

    def _load(self, args: argparse.Namespace) -> Scenario:
        scenario = load_scenario(args.scenario, defaults=Config.shooting_options(), grid=Config.GRID)
        return apply_overrides(scenario, tol=args.tol, grid=args.grid, fixed_step=args.fixed_step,
                               samples=args.samples)

    def _run(self, args: argparse.Namespace) -> int:
        try:
            scenario = self._load(args)
        except (ScenarioParseError, ValidationError) as exc:
            self._error("Cenário inválido", str(exc))
            return EXIT_INPUT

        issues = scenario.boundary.issues()
        if issues:
            self._error("Condições de contorno inválidas", "\n".join(f"• {i.message}" for i in issues))
            return EXIT_INPUT

        directory = Path(args.out or scenario.output.directory or Config.OUTPUT_DIR)
        service = ReachingServiceFactory.create(scenario)

        with Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            console=self.console,
        ) as progress:
            task = progress.add_task(f"Resolvendo {scenario.name}...", total=None)
            try:
                report = asyncio.run(service.run(scenario))
            except BoundarySpecError as exc:
                self._error("Condições de contorno inválidas", str(exc))
                return EXIT_INPUT
            except (NonConvergenceError, NoGeodesicFoundError) as exc:
                path = write_diagnostics(directory, scenario.name, exc)
                self._error("Solver não convergiu", f"{exc}\nDiagnósticos: {path}")
                return EXIT_SOLVER
            except ReachGeoError as exc:
                path = write_diagnostics(directory, scenario.name, exc)
                self._error("Falha do solver", f"{exc}\nDiagnósticos: {path}")
                return EXIT_SOLVER
            progress.update(task, description="Geodésica encontrada!")

        paths = export_report(report, scenario, directory)
        self._display_report(report, paths)
        return EXIT_OK

    def _validate(self, reference: str, strict: bool = False) -> int:
        """Lista os problemas; só falha com --strict"""
        issues = validate_file(reference)
        if not issues:
            self.console.print(Panel.fit(f"[green]{reference}: nenhum problema encontrado[/green]",
                                         title="Validação", border_style="green"))
            return EXIT_OK

        table = Table(title=f"Problemas em {reference}")
        table.add_column("Código", style="bold yellow")
        table.add_column("Mensagem")
        for issue in issues:
            table.add_row(issue.code, issue.message)
        self.console.print(table)
        return EXIT_INPUT if strict else EXIT_OK

    def _list_scenarios(self) -> int:
        table = Table(title="Cenários distribuídos")
        table.add_column("Nome", style="bold cyan")
        table.add_column("Modelo", style="yellow")
        table.add_column("Descrição")
        for name, model, description in describe_bundled():
            table.add_row(name, model, description)
        self.console.print(table)
        return EXIT_OK

    def _display_report(self, report: ReachReport, paths: List[Path]):
        """Exibe o resumo da geodésica escolhida"""
        summary = report.summary
        table = Table(show_lines=False, title=f"Geodésica {summary.name} ({summary.model})")
        table.add_column("Grandeza", style="bold cyan")
        table.add_column("Valor", justify="right", style="green")

        table.add_row("comprimento", f"{summary.length:.10g}")
        table.add_row("energia (intervalo unitário)", f"{summary.unit_energy:.10g}")
        table.add_row("|E - l²/2|", f"{summary.energy_length_gap:.3e}")
        table.add_row("resíduo", f"{summary.residual_norm:.3e}")
        table.add_row("iterações / partida", f"{summary.iterations} / {summary.start_index}")
        table.add_row("span", f"{summary.span:.6g}")
        table.add_row("deriva de H", f"{summary.conservation.hamiltonian_drift:.3e}")
        table.add_row("velocidade unimodal", "sim" if summary.speed_unimodal else "não")
        table.add_row("zeros da aceleração", str(summary.accel_zero_count))
        if summary.collinearity is not None:
            table.add_row("colinearidade", f"{summary.collinearity:.3e}")
        if summary.minjerk_max_error is not None:
            table.add_row("desvio do mínimo jerk", f"{summary.minjerk_max_error:.3e}")
        if summary.total_points > 1:
            table.add_row("pontos convergidos", f"{summary.converged_points}/{summary.total_points}")
            table.add_row("argmin", ", ".join(f"{end}.{k}={v:.4f}" for end, values in summary.argmin.items()
                                               for k, v in values.items()))
        if summary.minimal_turn is not None:
            table.add_row("menor mudança de direção", "sim" if summary.minimal_turn else "não")
        self.console.print(table)

        files = "\n".join(f"• {path}" for path in paths)
        self.console.print(Panel.fit(files, title="Arquivos gerados", border_style="blue"))

    def _error(self, title: str, message: str):
        self.console.print(Panel.fit(f"[red]{message}[/red]", title=title, border_style="red"))


def main(argv: Optional[List[str]] = None):
    """Função principal"""
    cli = ReachGeoCLI()
    sys.exit(cli.run(argv))


if __name__ == "__main__":
    main()
