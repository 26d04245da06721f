"""
Domain Models - Entidades puras do modelo de alcance (estados, covetores, trajetórias)
"""
import math
from typing import Annotated, ClassVar, Dict, Iterator, List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, field_validator, model_validator

FiniteFloat = Annotated[float, Field(allow_inf_nan=False)]
ModelTag = Literal["1d", "2d"]
ProblemModel = Literal["1d", "2d", "2d-theta-frozen"]

STATE_1D: Tuple[str, ...] = ("t", "x", "v", "a")
COVECTOR_1D: Tuple[str, ...] = ("p_t", "p_x", "p_v", "p_a")
STATE_2D: Tuple[str, ...] = ("t", "x", "y", "theta", "v", "a")
COVECTOR_2D: Tuple[str, ...] = ("p_t", "p_x", "p_y", "p_theta", "p_v", "p_a")

# coordenadas de fibra: as únicas que aceitam intervalos
FIBER_COORDINATES = ("theta", "a")


def wrap_angle(theta):
    """Leva ângulos para (−π, π]"""
    wrapped = np.mod(np.asarray(theta, dtype=float) + math.pi, 2.0 * math.pi) - math.pi
    wrapped = np.where(wrapped <= -math.pi, wrapped + 2.0 * math.pi, wrapped)
    if np.ndim(wrapped) == 0:
        return float(wrapped)
    return wrapped


def state_names(model: str) -> Tuple[str, ...]:
    return STATE_1D if model == "1d" else STATE_2D


def covector_names(model: str) -> Tuple[str, ...]:
    return COVECTOR_1D if model == "1d" else COVECTOR_2D


class _Coordinates(BaseModel):
    """Base para pontos em coordenadas fixas"""
    model_config = ConfigDict(frozen=True)

    names: ClassVar[Tuple[str, ...]] = ()

    def to_array(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in self.names], dtype=float)

    @classmethod
    def from_array(cls, values) -> "_Coordinates":
        values = np.asarray(values, dtype=float)
        if values.shape != (len(cls.names),):
            raise ValueError(f"{cls.__name__} espera {len(cls.names)} componentes, recebeu {values.shape}")
        return cls(**{name: float(v) for name, v in zip(cls.names, values)})


class State1D(_Coordinates):
    """Ponto do espaço de 2-jatos (t, x, v, a)"""
    names: ClassVar[Tuple[str, ...]] = STATE_1D
    t: FiniteFloat = 0.0
    x: FiniteFloat = 0.0
    v: FiniteFloat = 0.0
    a: FiniteFloat = 0.0


class Covector1D(_Coordinates):
    """Momentos duais a State1D"""
    names: ClassVar[Tuple[str, ...]] = COVECTOR_1D
    p_t: FiniteFloat = 0.0
    p_x: FiniteFloat = 0.0
    p_v: FiniteFloat = 0.0
    p_a: FiniteFloat = 0.0


class State2D(_Coordinates):
    """Ponto de M = R³ × S¹ × R²; theta sempre em (−π, π]"""
    names: ClassVar[Tuple[str, ...]] = STATE_2D
    t: FiniteFloat = 0.0
    x: FiniteFloat = 0.0
    y: FiniteFloat = 0.0
    theta: FiniteFloat = 0.0
    v: FiniteFloat = 0.0
    a: FiniteFloat = 0.0

    @field_validator("theta")
    @classmethod
    def _wrap_theta(cls, value: float) -> float:
        return wrap_angle(value)


class Covector2D(_Coordinates):
    """Momentos duais a State2D"""
    names: ClassVar[Tuple[str, ...]] = COVECTOR_2D
    p_t: FiniteFloat = 0.0
    p_x: FiniteFloat = 0.0
    p_y: FiniteFloat = 0.0
    p_theta: FiniteFloat = 0.0
    p_v: FiniteFloat = 0.0
    p_a: FiniteFloat = 0.0


class HamState1D(BaseModel):
    """Ponto do fibrado cotangente do modelo 1D"""
    model_config = ConfigDict(frozen=True)
    state: State1D = State1D()
    covector: Covector1D = Covector1D()

    def to_array(self) -> np.ndarray:
        return np.concatenate([self.state.to_array(), self.covector.to_array()])

    @classmethod
    def from_array(cls, values) -> "HamState1D":
        values = np.asarray(values, dtype=float)
        return cls(state=State1D.from_array(values[:4]), covector=Covector1D.from_array(values[4:]))


class HamState2D(BaseModel):
    """Ponto do fibrado cotangente do modelo 2D"""
    model_config = ConfigDict(frozen=True)
    state: State2D = State2D()
    covector: Covector2D = Covector2D()

    def to_array(self) -> np.ndarray:
        return np.concatenate([self.state.to_array(), self.covector.to_array()])

    @classmethod
    def from_array(cls, values) -> "HamState2D":
        values = np.asarray(values, dtype=float)
        return cls(state=State2D.from_array(values[:6]), covector=Covector2D.from_array(values[6:]))


class HorizontalControls(BaseModel):
    """Coeficientes do vetor tangente no referencial horizontal, amostrados"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    alpha1: np.ndarray
    alpha2: Optional[np.ndarray] = None
    k: Optional[np.ndarray] = None
    j: Optional[np.ndarray] = None

    @model_validator(mode="after")
    def _check_layout(self) -> "HorizontalControls":
        if self.alpha2 is None and (self.k is None or self.j is None):
            raise ValueError("controles 1D exigem alpha2; controles 2D exigem k e j")
        sizes = {len(np.atleast_1d(arr)) for arr in (self.alpha1, self.alpha2, self.k, self.j) if arr is not None}
        if len(sizes) != 1:
            raise ValueError("todos os controles devem ter o mesmo número de amostras")
        return self

    @property
    def model(self) -> ModelTag:
        return "1d" if self.alpha2 is not None else "2d"

    def __len__(self) -> int:
        return len(np.atleast_1d(self.alpha1))

    def squared_speed(self) -> np.ndarray:
        """Norma ao quadrado do tangente na métrica ortonormal"""
        if self.alpha2 is not None:
            return np.square(self.alpha1) + np.square(self.alpha2)
        return np.square(self.alpha1) + np.square(self.k) + np.square(self.j)

    @classmethod
    def admissible_1d(cls, j) -> "HorizontalControls":
        j = np.asarray(j, dtype=float)
        return cls(alpha1=np.ones_like(j), alpha2=j)

    @classmethod
    def admissible_2d(cls, k, j) -> "HorizontalControls":
        j = np.asarray(j, dtype=float)
        k = np.broadcast_to(np.asarray(k, dtype=float), j.shape).copy()
        return cls(alpha1=np.ones_like(j), k=k, j=j)


class Trajectory(BaseModel):
    """Sequência de estados indexada pelo parâmetro do fluxo"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    model: ModelTag
    parameter: np.ndarray
    states: np.ndarray
    covectors: Optional[np.ndarray] = None
    steps: Tuple[float, ...] = ()

    @model_validator(mode="after")
    def _check_shapes(self) -> "Trajectory":
        n = len(self.parameter)
        width = len(state_names(self.model))
        if self.states.shape != (n, width):
            raise ValueError(f"states deve ter forma ({n}, {width}), tem {self.states.shape}")
        if self.covectors is not None and self.covectors.shape != (n, width):
            raise ValueError(f"covectors deve ter forma ({n}, {width}), tem {self.covectors.shape}")
        if n > 1 and not np.all(np.diff(self.parameter) > 0):
            raise ValueError("o parâmetro deve ser estritamente crescente")
        return self

    @property
    def state_names(self) -> Tuple[str, ...]:
        return state_names(self.model)

    @property
    def covector_names(self) -> Tuple[str, ...]:
        return covector_names(self.model)

    @property
    def span(self) -> float:
        return float(self.parameter[-1] - self.parameter[0])

    def __len__(self) -> int:
        return len(self.parameter)

    def column(self, name: str) -> np.ndarray:
        """Coluna por nome; theta é lido já reduzido a (−π, π]"""
        if name in self.state_names:
            values = self.states[:, self.state_names.index(name)]
            return wrap_angle(values) if name == "theta" else values
        if self.covectors is not None and name in self.covector_names:
            return self.covectors[:, self.covector_names.index(name)]
        raise KeyError(name)

    def raw_column(self, name: str) -> np.ndarray:
        """Coluna sem redução de ângulo (theta acumulado)"""
        if name in self.state_names:
            return self.states[:, self.state_names.index(name)]
        return self.column(name)

    def state_at(self, index: int) -> Union[State1D, State2D]:
        cls = State1D if self.model == "1d" else State2D
        return cls.from_array(self.states[index])

    def covector_at(self, index: int) -> Optional[Union[Covector1D, Covector2D]]:
        if self.covectors is None:
            return None
        cls = Covector1D if self.model == "1d" else Covector2D
        return cls.from_array(self.covectors[index])

    @property
    def samples(self) -> Iterator[Tuple[float, Union[State1D, State2D], Optional[Union[Covector1D, Covector2D]]]]:
        for i in range(len(self)):
            yield float(self.parameter[i]), self.state_at(i), self.covector_at(i)

    def endpoint(self) -> Union[State1D, State2D]:
        return self.state_at(len(self) - 1)

    def with_parameter(self, parameter: np.ndarray) -> "Trajectory":
        return Trajectory(
            model=self.model, parameter=np.asarray(parameter, dtype=float),
            states=self.states, covectors=self.covectors, steps=self.steps,
        )


class QuinticReach(BaseModel):
    """Alcance ponto a ponto do modelo de mínimo jerk"""
    model_config = ConfigDict(frozen=True)
    x0: FiniteFloat = 0.0
    y0: FiniteFloat = 0.0
    xT: FiniteFloat = 0.0
    yT: FiniteFloat = 0.0
    T: PositiveFloat = 1.0


class JerkPolynomial(BaseModel):
    """j(t) = e0 + e1 t + e2 t²/2"""
    model_config = ConfigDict(frozen=True)
    e0: FiniteFloat = 0.0
    e1: FiniteFloat = 0.0
    e2: FiniteFloat = 0.0

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return self.e0 + self.e1 * t + self.e2 * t ** 2 / 2.0

    def coefficients(self) -> np.ndarray:
        return np.array([self.e0, self.e1, self.e2])


class ControlPolynomials2D(BaseModel):
    """Curvatura constante k e jerk cúbico j(t) = j0 + j1 t + j2 t²/2 + j3 t³/3!"""
    model_config = ConfigDict(frozen=True)
    k: FiniteFloat = 0.0
    j0: FiniteFloat = 0.0
    j1: FiniteFloat = 0.0
    j2: FiniteFloat = 0.0
    j3: FiniteFloat = 0.0

    def jerk(self, t):
        t = np.asarray(t, dtype=float)
        return self.j0 + self.j1 * t + self.j2 * t ** 2 / 2.0 + self.j3 * t ** 3 / 6.0

    def coefficients(self) -> np.ndarray:
        return np.array([self.j0, self.j1, self.j2, self.j3])


class StepControl(BaseModel):
    """Controle de passo do integrador"""
    model_config = ConfigDict(frozen=True)
    mode: Literal["fixed", "adaptive"] = "adaptive"
    step: Optional[PositiveFloat] = None
    abs_tol: PositiveFloat = 1e-10
    rel_tol: PositiveFloat = 1e-10
    min_step: PositiveFloat = 1e-12
    max_step: Optional[PositiveFloat] = None
    max_steps: int = Field(default=200_000, gt=0)

    @model_validator(mode="after")
    def _check(self) -> "StepControl":
        if self.mode == "fixed" and self.step is None:
            raise ValueError("modo fixo exige step")
        if self.max_step is not None and self.min_step > self.max_step:
            raise ValueError("min_step deve ser <= max_step")
        return self

    @classmethod
    def fixed(cls, step: float) -> "StepControl":
        return cls(mode="fixed", step=step)


class Fixed(BaseModel):
    model_config = ConfigDict(frozen=True)
    kind: Literal["fixed"] = "fixed"
    value: FiniteFloat


class Free(BaseModel):
    model_config = ConfigDict(frozen=True)
    kind: Literal["free"] = "free"


class Interval(BaseModel):
    model_config = ConfigDict(frozen=True)
    kind: Literal["interval"] = "interval"
    lo: FiniteFloat
    hi: FiniteFloat

    @model_validator(mode="after")
    def _ordered(self) -> "Interval":
        if self.lo > self.hi:
            raise ValueError("intervalo vazio: lo > hi")
        return self


Condition = Annotated[Union[Fixed, Free, Interval], Field(discriminator="kind")]


class SpecIssue(BaseModel):
    """Problema encontrado na validação estática"""
    code: str
    message: str


class BoundarySpec(BaseModel):
    """Condições de contorno por coordenada em cada extremo"""
    model_config = ConfigDict(frozen=True)

    model: ProblemModel
    initial: Dict[str, Condition]
    final: Dict[str, Condition] = Field(default_factory=dict)
    span: Optional[PositiveFloat] = None

    @property
    def tag(self) -> ModelTag:
        return "1d" if self.model == "1d" else "2d"

    @property
    def state_names(self) -> Tuple[str, ...]:
        return state_names(self.model)

    @property
    def unknown_covector(self) -> Tuple[str, ...]:
        names = covector_names(self.model)
        if self.model == "2d-theta-frozen":
            return tuple(n for n in names if n != "p_theta")
        return names

    def free_initial(self) -> List[str]:
        return [n for n in self.state_names if isinstance(self.initial.get(n), Free)]

    def fixed_final(self) -> List[str]:
        """Coordenadas finais impostas (intervalos contam como impostas), na ordem canônica"""
        return [n for n in self.state_names if isinstance(self.final.get(n), (Fixed, Interval))]

    def unknown_count(self) -> int:
        return len(self.unknown_covector) + len(self.free_initial())

    def intervals(self) -> List[Tuple[str, str, Interval]]:
        found = []
        for end, conditions in (("initial", self.initial), ("final", self.final)):
            for name in self.state_names:
                cond = conditions.get(name)
                if isinstance(cond, Interval):
                    found.append((end, name, cond))
        return found

    def issues(self) -> List[SpecIssue]:
        """Validação estática; nunca integra"""
        found: List[SpecIssue] = []
        names = set(self.state_names)
        for end, conditions in (("initial", self.initial), ("final", self.final)):
            for name, cond in conditions.items():
                if name not in names:
                    found.append(SpecIssue(code="unknown-coordinate",
                                           message=f"{end}.{name}: coordenada desconhecida para o modelo {self.model}"))
                elif isinstance(cond, Interval) and name not in FIBER_COORDINATES:
                    found.append(SpecIssue(code="interval-coordinate",
                                           message=f"{end}.{name}: intervals allowed only on theta/accel"))
        for name in self.state_names:
            if name not in self.initial:
                found.append(SpecIssue(code="missing-initial", message=f"initial.{name}: condição inicial ausente"))
        if self.model == "2d-theta-frozen":
            if not isinstance(self.initial.get("theta"), (Fixed, Interval)):
                found.append(SpecIssue(code="frozen-theta", message="initial.theta: deve ser fixo com theta congelado"))
            if isinstance(self.final.get("theta"), (Fixed, Interval)):
                found.append(SpecIssue(code="frozen-theta", message="final.theta: não pode ser imposto com theta congelado"))
        fixed = len(self.fixed_final())
        unknowns = self.unknown_count()
        if fixed != unknowns:
            found.append(SpecIssue(
                code="non-square",
                message=f"sistema não quadrado: {fixed} coordenadas finais impostas para {unknowns} incógnitas "
                        f"(diferença {fixed - unknowns:+d})",
            ))
        return found

    def resolve(self, initial: Dict[str, float], final: Dict[str, float]) -> "BoundarySpec":
        """Substitui intervalos por valores fixos"""
        def _apply(conditions, values):
            out = dict(conditions)
            for name, value in values.items():
                out[name] = Fixed(value=value)
            return out
        return self.model_copy(update={"initial": _apply(self.initial, initial), "final": _apply(self.final, final)})

    def initial_value(self, name: str) -> float:
        cond = self.initial.get(name)
        return cond.value if isinstance(cond, Fixed) else 0.0

    def final_value(self, name: str) -> float:
        cond = self.final.get(name)
        if not isinstance(cond, Fixed):
            raise KeyError(name)
        return cond.value


class IterationRecord(BaseModel):
    """Uma iteração do método de Newton amortecido

    iteration = 0 sem residual_norm marca uma partida cujo fluxo não pôde ser
    integrado; error guarda a mensagem. homotopy é o λ da continuação.
    """
    start_index: int
    iteration: int
    residual_norm: Optional[float] = None
    step_scale: float = 0.0
    homotopy: Optional[float] = None
    error: Optional[str] = None


class ShootingOptions(BaseModel):
    """Opções do método de shooting"""
    model_config = ConfigDict(frozen=True)
    tol: PositiveFloat = 1e-8
    delta: PositiveFloat = 0.5
    max_iterations: int = Field(default=200, gt=0)
    max_halvings: int = Field(default=20, ge=0)
    fd_step: PositiveFloat = 1e-6
    max_starts: int = Field(default=64, gt=0)
    exhaustive: bool = False
    seed_from_connectivity: bool = True
    continuation: bool = True
    continuation_tol: PositiveFloat = 1e-6
    continuation_min_step: PositiveFloat = 1e-4
    span: Optional[PositiveFloat] = None
    samples: int = Field(default=101, ge=2)
    admissibility_floor: PositiveFloat = 1e-6
    step_control: StepControl = StepControl()


class ShootingResult(BaseModel):
    """Resultado de um problema de contorno resolvido por shooting"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    beta0: np.ndarray
    residual_norm: float
    iterations: int
    trajectory: Optional[Trajectory] = None
    converged: bool
    tolerance: float
    span: float
    model: ProblemModel = "1d"
    free_values: Dict[str, float] = Field(default_factory=dict)
    residual: Optional[np.ndarray] = None
    start_index: int = 0
    starts_tried: int = 1
    trace: List[IterationRecord] = Field(default_factory=list)
    continuation_reach: Optional[float] = None

    @model_validator(mode="after")
    def _converged_means_small(self) -> "ShootingResult":
        if self.converged and not self.residual_norm <= self.tolerance:
            raise ValueError("resultado marcado como convergido com resíduo acima da tolerância")
        return self


class FiberSet(BaseModel):
    """Conjunto-fibra: (t, x, y, v) fixos, (theta, a) em intervalos"""
    model_config = ConfigDict(frozen=True)

    base: Dict[str, FiniteFloat]
    theta_range: Tuple[FiniteFloat, FiniteFloat]
    accel_range: Tuple[FiniteFloat, FiniteFloat]
    counts: Tuple[int, int] = (16, 16)

    @model_validator(mode="after")
    def _check(self) -> "FiberSet":
        missing = {"t", "x", "y", "v"} - set(self.base)
        if missing:
            raise ValueError(f"base sem coordenadas {sorted(missing)}")
        for lo, hi in (self.theta_range, self.accel_range):
            if lo > hi:
                raise ValueError("intervalo vazio na fibra")
        if min(self.counts) < 1:
            raise ValueError("contagens da grade devem ser >= 1")
        return self

    @classmethod
    def singleton(cls, state: State2D) -> "FiberSet":
        return cls(base={"t": state.t, "x": state.x, "y": state.y, "v": state.v},
                   theta_range=(state.theta, state.theta), accel_range=(state.a, state.a), counts=(1, 1))

    def theta_values(self) -> np.ndarray:
        lo, hi = self.theta_range
        return np.array([lo]) if lo == hi else np.linspace(lo, hi, self.counts[0])

    def accel_values(self) -> np.ndarray:
        lo, hi = self.accel_range
        return np.array([lo]) if lo == hi else np.linspace(lo, hi, self.counts[1])

    def grid(self) -> List[Tuple[Tuple[int, int], State2D]]:
        """Pontos da grade em ordem lexicográfica do índice"""
        points = []
        for i, theta in enumerate(self.theta_values()):
            for j, accel in enumerate(self.accel_values()):
                points.append(((i, j), State2D(theta=theta, a=accel, **self.base)))
        return points

    def spacing(self) -> Tuple[float, float]:
        thetas, accels = self.theta_values(), self.accel_values()
        return (float(np.max(np.diff(thetas))) if len(thetas) > 1 else 0.0,
                float(np.max(np.diff(accels))) if len(accels) > 1 else 0.0)

    def contains(self, state: State2D, tol: float = 1e-8) -> bool:
        for name, value in self.base.items():
            if abs(getattr(state, name) - value) > tol:
                return False
        lo, hi = self.theta_range
        theta_ok = abs(wrap_angle(state.theta - min(max(state.theta, lo), hi))) <= tol or \
            lo - tol <= state.theta <= hi + tol or \
            lo - tol <= state.theta + 2 * math.pi <= hi + tol or \
            lo - tol <= state.theta - 2 * math.pi <= hi + tol
        return theta_ok and self.accel_range[0] - tol <= state.a <= self.accel_range[1] + tol


class FiberCandidate(BaseModel):
    """Um ponto da grade de fibra e o resultado do shooting correspondente"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    index: Tuple[int, ...]
    initial: Dict[str, float]
    final: Dict[str, float]
    result: Optional[ShootingResult] = None
    length: Optional[float] = None
    error: Optional[str] = None
    rank_score: Optional[float] = None
    explanation: Optional[str] = None

    @property
    def converged(self) -> bool:
        return self.result is not None and self.result.converged


class FiberSearchResult(BaseModel):
    """Mínimo sobre a grade de fibras"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    min_length: float
    argmin: FiberCandidate
    candidates: List[FiberCandidate]

    @property
    def converged_fraction(self) -> float:
        if not self.candidates:
            return 0.0
        return sum(c.converged for c in self.candidates) / len(self.candidates)

    @property
    def result(self) -> ShootingResult:
        return self.argmin.result


class AdmissibilityMatrices(BaseModel):
    """Matrizes A e B do sistema de admissibilidade amostradas numa grade uniforme"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    family: str
    parameter: np.ndarray
    A: np.ndarray
    B: np.ndarray

    @model_validator(mode="after")
    def _check(self) -> "AdmissibilityMatrices":
        n = len(self.parameter)
        if self.A.ndim != 3 or self.A.shape[0] != n:
            raise ValueError("A deve ter forma (N, n-k, k)")
        rows = self.A.shape[1]
        if self.B.shape != (n, rows, rows):
            raise ValueError("B deve ter forma (N, n-k, n-k)")
        return self

    def A_at(self, s: float) -> np.ndarray:
        return _interp_matrix(self.parameter, self.A, s)

    def B_at(self, s: float) -> np.ndarray:
        return _interp_matrix(self.parameter, self.B, s)


def _interp_matrix(grid: np.ndarray, values: np.ndarray, s: float) -> np.ndarray:
    flat = values.reshape(len(grid), -1)
    out = np.array([np.interp(s, grid, flat[:, i]) for i in range(flat.shape[1])])
    return out.reshape(values.shape[1:])


class ClassificationResult(BaseModel):
    """Veredito do critério Λ"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    verdict: Literal["regular", "singular"]
    witness: Optional[np.ndarray] = None
    constraint_residual: float = 0.0
    min_witness_norm: float = 0.0
    solution_norm: float = 0.0
    kernel_dimension: int = 0

    @property
    def is_singular(self) -> bool:
        return self.verdict == "singular"


class ConservationReport(BaseModel):
    """Derivas máximas das quantidades conservadas ao longo de um fluxo"""
    hamiltonian_drift: float
    momentum_drift: Dict[str, float]
    law_drift: Dict[str, float] = Field(default_factory=dict)
    speed_constant: float
    speed_drift: float


class OutputOptions(BaseModel):
    """Opções de saída de um cenário"""
    samples: int = Field(default=101, ge=2)
    directory: Optional[str] = None


class Scenario(BaseModel):
    """Cenário executável pela CLI"""
    name: str
    description: str = ""
    boundary: BoundarySpec
    solver: ShootingOptions = ShootingOptions()
    grid: int = Field(default=16, ge=1)
    output: OutputOptions = OutputOptions()

    @property
    def model(self) -> ProblemModel:
        return self.boundary.model


class ReachSummary(BaseModel):
    """Resumo numérico da geodésica escolhida"""
    name: str
    model: ProblemModel
    length: float
    energy: float
    unit_energy: float
    energy_length_gap: float
    residual_norm: float
    iterations: int
    start_index: int
    span: float
    hamiltonian: float
    conservation: ConservationReport
    speed_unimodal: bool
    accel_zero_count: int
    collinearity: Optional[float] = None
    minjerk_max_error: Optional[float] = None
    argmin: Dict[str, Dict[str, float]] = Field(default_factory=dict)
    converged_points: int = 1
    total_points: int = 1
    minimal_turn: Optional[bool] = None


class ReachReport(BaseModel):
    """Resultado de um cenário: resumo, melhor candidato e candidatos ordenados"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    summary: ReachSummary
    best: FiberCandidate
    candidates: List[FiberCandidate]
