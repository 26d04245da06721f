"""
Leitura de cenários - formato texto com seções (estilo INI) ou JSON

Formato texto::

    # comentário
    name = centerout-1d
    model = 1d
    description = alcance centro-fora em repouso

    [initial]
    t = 0
    x = 0
    v = 0
    a = 0

    [final]
    t = 1
    x = 1
    theta = [0, pi/2]     # intervalo (só theta e a)
    a = free              # coordenada livre

    [solver]
    tol = 1e-8
    grid = 16

    [output]
    samples = 101

Valores numéricos aceitam expressões com pi, e, sin, cos, tan, sqrt, exp e log.
"""
import ast
import json
import logging
import operator
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

import numpy as np
from pydantic import ValidationError

from ...domain.errors import ScenarioParseError
from ...domain.models import (
    BoundarySpec,
    Fixed,
    Free,
    Interval,
    OutputOptions,
    Scenario,
    ShootingOptions,
    SpecIssue,
    StepControl,
)

logger = logging.getLogger(__name__)

BUNDLED_DIR = Path(__file__).parent / "bundled"
# nomes alternativos aceitos na linha de comando
SCENARIO_ALIASES = {
    "fig2-1d-centerout": "centerout-1d",
    "fig4-prescribed": "prescribed-heading",
    "fig5-free-theta1": "point-to-set",
}

TOP_KEYS = ("name", "model", "description")
SECTIONS = ("initial", "final", "solver", "output")

FLOAT_KEYS = {"tol", "delta", "fd_step", "span"}
INT_KEYS = {"max_iterations", "max_halvings", "max_starts"}
BOOL_KEYS = {"exhaustive": "exhaustive", "seed": "seed_from_connectivity"}
STEP_KEYS = {"abs_tol", "rel_tol", "fixed_step", "min_step", "max_step"}
SOLVER_KEYS = FLOAT_KEYS | INT_KEYS | set(BOOL_KEYS) | STEP_KEYS | {"grid"}
OUTPUT_KEYS = {"samples", "directory"}

_CONSTANTS = {"pi": float(np.pi), "e": float(np.e)}
_FUNCTIONS: Dict[str, Callable[[float], float]] = {
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "sqrt": np.sqrt,
    "exp": np.exp,
    "log": np.log,
}
_BINARY = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_UNARY = {ast.UAdd: operator.pos, ast.USub: operator.neg}

RawValue = Union[float, str, List[Any]]


def _eval_node(node: ast.AST) -> float:
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
        return float(node.value)
    if isinstance(node, ast.Name) and node.id in _CONSTANTS:
        return _CONSTANTS[node.id]
    if isinstance(node, ast.BinOp) and type(node.op) in _BINARY:
        return float(_BINARY[type(node.op)](_eval_node(node.left), _eval_node(node.right)))
    if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
        return float(_UNARY[type(node.op)](_eval_node(node.operand)))
    if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _FUNCTIONS
            and len(node.args) == 1 and not node.keywords):
        return float(_FUNCTIONS[node.func.id](_eval_node(node.args[0])))
    raise ValueError(f"expressão não suportada: {ast.dump(node)[:60]}")


def evaluate(expression: str, line: Optional[int] = None) -> float:
    """Avalia uma expressão numérica percorrendo a AST (sem eval)"""
    try:
        tree = ast.parse(expression.strip(), mode="eval")
        value = _eval_node(tree.body)
    except (SyntaxError, ValueError, ZeroDivisionError, OverflowError) as exc:
        raise ScenarioParseError(f"valor inválido {expression!r}: {exc}", line) from exc
    if not np.isfinite(value):
        raise ScenarioParseError(f"valor não finito {expression!r}", line)
    return value


def parse_condition(raw: RawValue, line: Optional[int] = None):
    """'free', '[lo, hi]', lista de dois valores ou expressão numérica"""
    if isinstance(raw, bool):
        raise ScenarioParseError(f"valor booleano não é uma condição: {raw!r}", line)
    if isinstance(raw, (int, float)):
        return Fixed(value=float(raw))
    if isinstance(raw, list):
        if len(raw) != 2:
            raise ScenarioParseError("intervalo deve ter exatamente dois extremos", line)
        lo, hi = (v if isinstance(v, (int, float)) else evaluate(str(v), line) for v in raw)
        return _interval(float(lo), float(hi), line)

    text = str(raw).strip()
    if text.lower() == "free":
        return Free()
    if text.startswith("["):
        if not text.endswith("]"):
            raise ScenarioParseError(f"intervalo sem ']': {text!r}", line)
        parts = _split_top_level(text[1:-1])
        if len(parts) != 2:
            raise ScenarioParseError("intervalo deve ter exatamente dois extremos", line)
        return _interval(evaluate(parts[0], line), evaluate(parts[1], line), line)
    return Fixed(value=evaluate(text, line))


def _interval(lo: float, hi: float, line: Optional[int]) -> Interval:
    try:
        return Interval(lo=lo, hi=hi)
    except ValidationError as exc:
        raise ScenarioParseError(f"intervalo inválido [{lo}, {hi}]: lo > hi", line) from exc


def _split_top_level(text: str) -> List[str]:
    parts, depth, current = [], 0, []
    for char in text:
        if char == "(":
            depth += 1
        elif char == ")":
            depth -= 1
        if char == "," and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(char)
    parts.append("".join(current))
    return [p.strip() for p in parts]


def _parse_bool(raw: Any, line: Optional[int]) -> bool:
    if isinstance(raw, bool):
        return raw
    text = str(raw).strip().lower()
    if text in ("true", "yes", "on", "1"):
        return True
    if text in ("false", "no", "off", "0"):
        return False
    raise ScenarioParseError(f"booleano inválido: {raw!r}", line)


def _parse_int(raw: Any, line: Optional[int]) -> int:
    value = raw if isinstance(raw, (int, float)) and not isinstance(raw, bool) else evaluate(str(raw), line)
    if float(value) != int(value):
        raise ScenarioParseError(f"inteiro esperado: {raw!r}", line)
    return int(value)


def _parse_float(raw: Any, line: Optional[int]) -> float:
    if isinstance(raw, (int, float)) and not isinstance(raw, bool):
        return float(raw)
    return evaluate(str(raw), line)


class _Document:
    """Conteúdo bruto do arquivo com a linha de cada chave"""

    def __init__(self):
        self.top: Dict[str, Any] = {}
        self.sections: Dict[str, Dict[str, Any]] = {name: {} for name in SECTIONS}
        self.lines: Dict[Tuple[str, str], Optional[int]] = {}

    def put(self, section: str, key: str, value: Any, line: Optional[int]):
        target = self.top if section == "" else self.sections[section]
        if key in target:
            raise ScenarioParseError(f"chave repetida '{key}'", line)
        target[key] = value
        self.lines[(section, key)] = line

    def line(self, section: str, key: str) -> Optional[int]:
        return self.lines.get((section, key))


def _read_text(text: str) -> _Document:
    doc = _Document()
    section = ""
    for number, raw_line in enumerate(text.splitlines(), start=1):
        content = raw_line.split("#", 1)[0].strip()
        if not content:
            continue
        if content.startswith("["):
            if not content.endswith("]"):
                raise ScenarioParseError(f"cabeçalho de seção mal formado: {content!r}", number)
            section = content[1:-1].strip().lower()
            if section not in SECTIONS:
                raise ScenarioParseError(f"seção desconhecida [{section}]", number)
            continue
        if "=" not in content:
            raise ScenarioParseError(f"esperado 'chave = valor': {content!r}", number)
        key, value = (part.strip() for part in content.split("=", 1))
        if not key or not value:
            raise ScenarioParseError(f"chave ou valor vazio: {content!r}", number)
        if section == "" and key not in TOP_KEYS:
            raise ScenarioParseError(f"chave '{key}' fora de seção", number)
        doc.put(section, key, value, number)
    return doc


def _read_json(text: str) -> _Document:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(f"JSON inválido: {exc.msg}", exc.lineno) from exc
    if not isinstance(data, dict):
        raise ScenarioParseError("o JSON do cenário deve ser um objeto")
    doc = _Document()
    for key, value in data.items():
        if key in TOP_KEYS:
            doc.put("", key, value, None)
        elif key in SECTIONS:
            if not isinstance(value, dict):
                raise ScenarioParseError(f"'{key}' deve ser um objeto")
            for inner, inner_value in value.items():
                doc.put(key, inner, inner_value, None)
        else:
            raise ScenarioParseError(f"chave desconhecida '{key}'")
    return doc


def _build(doc: _Document, defaults: Optional[ShootingOptions], grid: int) -> Scenario:
    for key in ("name", "model"):
        if key not in doc.top:
            raise ScenarioParseError(f"chave obrigatória '{key}' ausente")

    conditions = {
        end: {name: parse_condition(value, doc.line(end, name)) for name, value in doc.sections[end].items()}
        for end in ("initial", "final")
    }

    solver_fields: Dict[str, Any] = {}
    step_fields: Dict[str, Any] = {}
    for key, value in doc.sections["solver"].items():
        line = doc.line("solver", key)
        if key not in SOLVER_KEYS:
            raise ScenarioParseError(f"opção de solver desconhecida '{key}'", line)
        if key in FLOAT_KEYS:
            solver_fields[key] = _parse_float(value, line)
        elif key in INT_KEYS:
            solver_fields[key] = _parse_int(value, line)
        elif key in BOOL_KEYS:
            solver_fields[BOOL_KEYS[key]] = _parse_bool(value, line)
        elif key == "grid":
            grid = _parse_int(value, line)
        elif key == "fixed_step":
            step_fields.update(mode="fixed", step=_parse_float(value, line))
        else:
            step_fields[key] = _parse_float(value, line)

    output_fields: Dict[str, Any] = {}
    for key, value in doc.sections["output"].items():
        line = doc.line("output", key)
        if key not in OUTPUT_KEYS:
            raise ScenarioParseError(f"opção de saída desconhecida '{key}'", line)
        output_fields[key] = _parse_int(value, line) if key == "samples" else str(value)

    base = defaults or ShootingOptions()
    try:
        step_control = StepControl(**{**base.step_control.model_dump(), **step_fields})
        output = OutputOptions(**output_fields)
        solver = ShootingOptions(**{**base.model_dump(exclude={"step_control"}), **solver_fields,
                                    "samples": output.samples, "step_control": step_control})
        boundary = BoundarySpec(model=doc.top["model"], initial=conditions["initial"], final=conditions["final"])
        return Scenario(
            name=str(doc.top["name"]),
            description=str(doc.top.get("description", "")),
            boundary=boundary,
            solver=solver,
            grid=grid,
            output=output,
        )
    except ValidationError as exc:
        raise ScenarioParseError(_first_error(exc), _error_line(exc, doc)) from exc


def _first_error(exc: ValidationError) -> str:
    error = exc.errors()[0]
    where = ".".join(str(part) for part in error.get("loc", ()))
    return f"{where}: {error.get('msg', 'valor inválido')}" if where else str(error.get("msg"))


def _error_line(exc: ValidationError, doc: _Document) -> Optional[int]:
    loc = exc.errors()[0].get("loc", ())
    if "model" in loc:
        return doc.line("", "model")
    for field in ("grid", "name"):
        if field in loc:
            return doc.line("solver" if field == "grid" else "", field)
    for key in loc:
        for section in ("solver", "output"):
            if isinstance(key, str) and doc.line(section, key) is not None:
                return doc.line(section, key)
    return None


def parse_text(text: str, defaults: Optional[ShootingOptions] = None, grid: int = 16) -> Scenario:
    """Lê um cenário do texto (JSON quando começa com '{')"""
    doc = _read_json(text) if text.lstrip().startswith("{") else _read_text(text)
    return _build(doc, defaults, grid)


def bundled_scenarios() -> Dict[str, Path]:
    """Cenários distribuídos com o pacote, por nome"""
    return {path.stem: path for path in sorted(BUNDLED_DIR.glob("*.scn"))}


def resolve_path(reference: Union[str, Path]) -> Path:
    """Caminho existente ou nome de um cenário distribuído"""
    path = Path(reference)
    if path.exists():
        return path
    bundled = bundled_scenarios()
    name = SCENARIO_ALIASES.get(str(reference), str(reference))
    if name in bundled:
        return bundled[name]
    raise ScenarioParseError(f"cenário não encontrado: {reference}")


def load_scenario(reference: Union[str, Path], defaults: Optional[ShootingOptions] = None,
                  grid: int = 16) -> Scenario:
    """Carrega um cenário de arquivo ou pelo nome do cenário distribuído"""
    path = resolve_path(reference)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ScenarioParseError(f"não foi possível ler {path}: {exc}") from exc
    scenario = parse_text(text, defaults, grid)
    logger.debug("cenário %s carregado de %s", scenario.name, path)
    return scenario


def describe_bundled() -> List[Tuple[str, str, str]]:
    """(nome, modelo, descrição) de cada cenário distribuído"""
    rows = []
    for name, path in bundled_scenarios().items():
        try:
            scenario = load_scenario(path)
        except ScenarioParseError as exc:
            logger.warning("cenário distribuído %s inválido: %s", name, exc)
            continue
        rows.append((name, scenario.model, scenario.description))
    return rows


def validate_file(reference: Union[str, Path]) -> List[SpecIssue]:
    """Validação estática do arquivo; nunca integra e nunca levanta"""
    try:
        scenario = load_scenario(reference)
    except ScenarioParseError as exc:
        return [SpecIssue(code="parse-error", message=str(exc))]
    return scenario.boundary.issues()


def apply_overrides(scenario: Scenario, tol: Optional[float] = None, grid: Optional[int] = None,
                    fixed_step: Optional[float] = None, samples: Optional[int] = None) -> Scenario:
    """Aplica as opções da linha de comando sobre o cenário"""
    solver_update: Dict[str, Any] = {}
    scenario_update: Dict[str, Any] = {}
    if tol is not None:
        solver_update["tol"] = tol
    if fixed_step is not None:
        solver_update["step_control"] = StepControl(
            **{**scenario.solver.step_control.model_dump(), "mode": "fixed", "step": fixed_step})
    if samples is not None:
        solver_update["samples"] = samples
        scenario_update["output"] = OutputOptions(**{**scenario.output.model_dump(), "samples": samples})
    if grid is not None:
        scenario_update["grid"] = grid
    if solver_update:
        scenario_update["solver"] = ShootingOptions(**{**scenario.solver.model_dump(exclude={"step_control"}),
                                                       "step_control": scenario.solver.step_control,
                                                       **solver_update})
    return Scenario(**{**dict(scenario), **scenario_update}) if scenario_update else scenario
