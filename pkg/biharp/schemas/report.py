from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from .ensemble import EnsembleSpec

REPORT_SCHEMA = "biharp.run-report/1"


class SuiteConfig(BaseModel):
    ensembles: list[EnsembleSpec] = Field(..., min_length=1)
    p_values: list[float] = Field(default_factory=lambda: [0.5, 1.0, 1.5, 2.0], min_length=1)
    grid: Optional[int] = Field(None, ge=1, le=9)
    theta: float = Field(0.5, gt=0, lt=1)
    trials: int = Field(100, ge=0, le=10_000)
    adversarial_budget: int = Field(2000, ge=1, le=200_000)
    restarts: int = Field(4, ge=1, le=64)
    two_summing_sequences: int = Field(10, ge=0, le=1000)
    x0_budget: int = Field(200, ge=0, le=100_000)
    fs_epsilon: float = Field(0.5, ge=0, lt=1)

    @field_validator("p_values")
    @classmethod
    def _exponents_in_range(cls, values: list[float]) -> list[float]:
        for p in values:
            if not 0 < p <= 2:
                raise ValueError(f"p must lie in (0, 2], got {p}")
        return values


class FixtureRecord(BaseModel):
    ensemble: int
    kind: str
    seed: int
    index: int
    p: float
    support_size: int
    levels: int
    hp_norm: float
    l2_norm: float
    b: float
    ap_sample: float
    weight_total: float
    random_max_ratio: float
    worst_ratio: float
    operator_ratio: float
    two_summing_slack: Optional[float] = None
    level_set_constant: float
    cp_sample: float
    level_mass_ratio: float
    interpolation_margin: float
    lower_constant: Optional[float] = None
    reverse_holder_gap: Optional[float] = None
    fs_constant: Optional[float] = None
    factor_defect: Optional[float] = None
    x0_lower: Optional[float] = None
    x0_upper: Optional[float] = None
    implied_c: Optional[float] = None
    implied_c_rescaled: Optional[float] = None


class FailureRecord(BaseModel):
    ensemble: int
    kind: str
    seed: int
    index: int
    p: float
    stage: str
    error: str
    message: str


class Aggregate(BaseModel):
    count: int
    minimum: float
    median: float
    maximum: float


class RunReport(BaseModel):
    schema_tag: str = Field(REPORT_SCHEMA, alias="schema")
    generated_at: Optional[str] = None
    config: SuiteConfig
    fixtures: list[FixtureRecord]
    failures: list[FailureRecord]
    aggregates: dict[str, Aggregate]

    model_config = ConfigDict(populate_by_name=True)

    @property
    def passed(self) -> bool:
        return not self.failures


class ConstantRow(BaseModel):
    """One row of the implied-constant table for a fixed (p, theta)."""

    p: float
    theta: float
    q: float
    count: int
    ap_min: float
    ap_median: float
    ap_max: float
    lower_min: float
    lower_median: float
    lower_max: float
    cp_min: float
    cp_median: float
    cp_max: float
    fs_min: float
    fs_median: float
    fs_max: float
