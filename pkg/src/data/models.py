from decimal import Decimal, InvalidOperation
from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, NonNegativeInt, PositiveInt, field_validator, model_validator


def _decimal(value: Any) -> float:
    """Parse a decimal string (or plain number) without locale ambiguity."""
    if isinstance(value, bool):
        raise ValueError("booleans are not numbers")
    try:
        return float(Decimal(str(value).strip()))
    except (InvalidOperation, ValueError) as e:
        raise ValueError(f"not a decimal number: {value!r}") from e


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


# -- run configuration -------------------------------------------------------

class ModelBlock(StrictModel):
    kind: Literal["octagon", "arithmetic"]
    genus: Optional[int] = None
    n: Optional[int] = None
    p: Optional[int] = None
    generators: List[Tuple[int, int, int, int]] = Field(default_factory=list)
    certified_generation: bool = False
    volume: Optional[float] = None

    @field_validator("volume", mode="before")
    @classmethod
    def parse_volume(cls, v):
        return None if v is None else _decimal(v)

    @model_validator(mode="after")
    def check_kind(self):
        if self.kind == "octagon" and self.genus not in (None, 2):
            raise ValueError("the octagon model has genus 2")
        if self.kind == "arithmetic" and (self.n is None or self.p is None or not self.generators):
            raise ValueError("arithmetic models need n, p and at least one generator quadruple")
        if self.kind == "arithmetic" and self.genus is not None:
            if self.genus < 2 or 2 * self.genus != len(self.generators):
                raise ValueError("a genus-g arithmetic surface group (g >= 2) is given by 2g generators")
        return self

    def descriptor(self) -> Dict[str, Any]:
        return self.model_dump(exclude_none=True)


class EnumerationBlock(StrictModel):
    strategy: Literal["bfs", "dfs"] = "bfs"
    max_words: Optional[PositiveInt] = None


class PressureBlock(StrictModel):
    halfwidth: float = 0.5
    centers: List[float] = Field(default_factory=list)
    scales: List[float] = Field(default_factory=lambda: [0.0, 1.0, 2.0, 4.0])
    correction: Optional[bool] = None

    @field_validator("halfwidth", mode="before")
    @classmethod
    def parse_halfwidth(cls, v):
        value = _decimal(v)
        if not value > 0:
            raise ValueError("halfwidth must be positive")
        return value

    @field_validator("centers", "scales", mode="before")
    @classmethod
    def parse_lists(cls, v):
        return [_decimal(x) for x in v]


class BoundsBlock(StrictModel):
    betas: List[float] = Field(default_factory=lambda: [1e-3, 0.1, 0.25, 0.5, 0.75])
    press_betas: List[float] = Field(default_factory=lambda: [1e-3, 0.1, 0.25, 0.4])
    scales: List[float] = Field(default_factory=lambda: [0.0, 0.5, 1.0, 2.0, 4.0])

    @field_validator("betas", "press_betas", "scales", mode="before")
    @classmethod
    def parse_lists(cls, v):
        return [_decimal(x) for x in v]


class TraceSumBlock(StrictModel):
    eps: float = 0.5
    d: Optional[float] = None
    k: PositiveInt = 1
    t_values: List[float] = Field(default_factory=list)
    sigmas: List[float] = Field(default_factory=lambda: [1.0, 5.0])
    order: PositiveInt = 3
    pw_points: PositiveInt = 401
    modulated_t: float = 2.0
    modulated_xi: float = 3.0
    identity_term: bool = True

    @field_validator("eps", mode="before")
    @classmethod
    def parse_eps(cls, v):
        value = _decimal(v)
        if not value > 0:
            raise ValueError("eps must be positive")
        return value

    @field_validator("d", "modulated_t", "modulated_xi", mode="before")
    @classmethod
    def parse_reals(cls, v):
        return None if v is None else _decimal(v)

    @field_validator("t_values", "sigmas", mode="before")
    @classmethod
    def parse_lists(cls, v):
        return [_decimal(x) for x in v]


class ZetaBlock(StrictModel):
    s_values: List[Tuple[float, float]] = Field(default_factory=lambda: [(2.0, 0.0), (2.0, 1.0), (3.0, 0.0)])
    k_max: Optional[NonNegativeInt] = None
    check_convergence: bool = True

    @field_validator("s_values", mode="before")
    @classmethod
    def parse_points(cls, v):
        return [(_decimal(re), _decimal(im)) for re, im in v]


class RunConfig(StrictModel):
    """Validated run configuration (JSON, unknown keys rejected)."""

    model: ModelBlock
    periods: List[float]
    cutoff_L: float
    enumeration: EnumerationBlock = Field(default_factory=EnumerationBlock)
    pressure: PressureBlock = Field(default_factory=PressureBlock)
    bounds: BoundsBlock = Field(default_factory=BoundsBlock)
    trace_sum: TraceSumBlock = Field(default_factory=TraceSumBlock)
    zeta: ZetaBlock = Field(default_factory=ZetaBlock)
    output_dir: Optional[str] = None
    threads: Optional[PositiveInt] = None

    @field_validator("periods", mode="before")
    @classmethod
    def parse_periods(cls, v):
        if not isinstance(v, list):
            raise ValueError("periods must be a JSON array of decimals")
        return [_decimal(x) for x in v]

    @field_validator("cutoff_L", mode="before")
    @classmethod
    def parse_cutoff(cls, v):
        value = _decimal(v)
        if not value > 0:
            raise ValueError("cutoff_L must be positive")
        return value


# -- results -----------------------------------------------------------------

class EnumerationSummary(BaseModel):
    count: int
    primitive_count: int
    systole: Optional[float] = None
    systole_flag: str = "empirical"
    cutoff: float
    complete_below: float
    label: str


class PressureResult(BaseModel):
    value: float
    t: float
    halfwidth: float
    cutoff: float
    slack: Optional[float] = None
    n_terms: int
    corrected: bool = False


class CriticalExponentResult(BaseModel):
    value: float
    slack: float
    n_windows: int
    combined_slack: Optional[float] = None
    coherent: Optional[bool] = None


class ThermoSummary(BaseModel):
    pressure: PressureResult
    pressure_double: PressureResult
    stable_norm_lb: float
    critical_exponent: Optional[CriticalExponentResult] = None
    band_lower_ok: bool
    band_upper_ok: bool
    scan: List[Dict[str, Optional[float]]] = Field(default_factory=list)


class GapInputs(BaseModel):
    pr1: float
    pr2: float
    snorm: float
    slack_pr1: Optional[float] = 0.0
    slack_pr2: Optional[float] = 0.0


class GapReport(BaseModel):
    lb_weak: float
    lb_press: float
    lb_arith: float
    ub_press: float
    ub_stable: float
    best_lb: float
    best_lb_valid: float
    im_r0: float
    conjecture_line: float
    weak_minus_press: float
    weak_minus_arith: float
    conservative_lb_weak: float
    conservative_lb_press: float
    conservative_lb_arith: float
    arithmetic_only: bool = True
    inputs: GapInputs


class AdmissibleRow(BaseModel):
    beta: float
    threshold: float
    positive: bool
    family: Literal["stable", "pressure"]


class WitnessResult(BaseModel):
    word: Optional[List[int]] = None
    length: Optional[float] = None
    mean: Optional[float] = None
    threshold: float


class BoundsSummary(BaseModel):
    gap: GapReport
    admissible: List[AdmissibleRow]
    nonque_witness: WitnessResult
    arithmetic_witness: WitnessResult


class GaussianAverageRow(BaseModel):
    t: float
    sigma: float
    direct: float
    quadrature: float
    diagonal_bound: float


class PaleyWienerRow(BaseModel):
    family: str
    scaled: bool
    constant: float
    order: int
    support_radius: float
    r_max: float
    points: int
    argmax: float


class LevelCheckRow(BaseModel):
    t: float
    sigma: float
    levels: List[int]
    level_sum: float
    average: float
    holds: bool


class GrowthRatioRow(BaseModel):
    t: float
    sigma: float
    average: float
    ratio: float


class TraceSumSummary(BaseModel):
    eps: float
    d: float
    geometric_sum: float
    n_terms: int
    certified: bool
    orbit_bound: Optional[float] = None
    identity_term: Optional[float] = None
    identity_term_imag: Optional[float] = None
    gaussian_averages: List[GaussianAverageRow] = Field(default_factory=list)
    paley_wiener: List[PaleyWienerRow] = Field(default_factory=list)
    level_checks: List[LevelCheckRow] = Field(default_factory=list)
    growth_ratios: List[GrowthRatioRow] = Field(default_factory=list)


class ZetaRow(BaseModel):
    re_s: float
    im_s: float
    re_log_z: float
    im_log_z: float
    tail_bound: Optional[float] = None
    n_terms: int


class ReportBundle(BaseModel):
    """Everything ``report`` emits, one JSON document per run."""

    model_label: str
    model_digest: str
    periods: List[float]
    enumeration: EnumerationSummary
    thermo: ThermoSummary
    bounds: BoundsSummary
    trace_sum: TraceSumSummary
    zeta: List[ZetaRow] = Field(default_factory=list)
