from typing import Optional

from pydantic import BaseModel, Field, model_validator

from ..core.pietsch import (
    AdversarialResult,
    DominationReport,
    Normalization,
    PietschWeights,
    TwoSummingReport,
)
from .expansion import HaarExpansionIn, RectangleRef


class WeightsRequest(BaseModel):
    expansion: HaarExpansionIn
    p: float = Field(1.0, gt=0, le=2)
    grid: Optional[int] = Field(None, ge=0)
    mode: Normalization = Normalization.B_NORMALIZED
    a_p: Optional[float] = Field(None, gt=0)

    @model_validator(mode="after")
    def _ap_needs_constant(self) -> "WeightsRequest":
        if self.mode is Normalization.AP_NORMALIZED and self.a_p is None:
            raise ValueError("mode 'ap' needs a_p")
        return self


class WeightEntry(RectangleRef):
    omega: float
    level: int


class WeightsOut(BaseModel):
    p: float
    normalization: Normalization
    b: float
    norm: float
    total: float
    domination_constant: float
    a_p: Optional[float] = None
    display_constant: Optional[float] = None
    over_budget: bool = False
    weights: list[WeightEntry]

    @classmethod
    def from_weights(cls, weights: PietschWeights, assignment: dict) -> "WeightsOut":
        entries = []
        for rect, omega in weights.weights.items():
            ref = RectangleRef.from_rectangle(rect)
            entries.append(WeightEntry(**ref.model_dump(), omega=omega, level=assignment[rect]))
        return cls(
            p=weights.p,
            normalization=weights.normalization,
            b=weights.b,
            norm=weights.norm,
            total=weights.total(),
            domination_constant=weights.domination_constant,
            a_p=weights.a_p,
            display_constant=weights.display_constant,
            over_budget=weights.over_budget,
            weights=entries,
        )


class MultiplierEntry(RectangleRef):
    value: float = Field(..., allow_inf_nan=False)


class DominationRequest(BaseModel):
    expansion: HaarExpansionIn
    p: float = Field(1.0, gt=0, le=2)
    grid: Optional[int] = Field(None, ge=0)
    phi: Optional[list[MultiplierEntry]] = None
    phi_fill: float = Field(1.0, allow_inf_nan=False)
    trials: int = Field(100, ge=0, le=10_000)
    iterations: int = Field(2000, ge=1, le=200_000)
    restarts: int = Field(4, ge=1, le=64)
    sequences: int = Field(10, ge=0, le=1000)
    seed: int = Field(42, ge=0, lt=2**64)


class DominationOut(BaseModel):
    lhs: float
    rhs: float
    ratio: float
    estimate_only: bool = False

    @classmethod
    def from_report(cls, report: DominationReport) -> "DominationOut":
        return cls(lhs=report.lhs, rhs=report.rhs, ratio=report.ratio, estimate_only=report.estimate_only)


class AdversarialOut(BaseModel):
    worst_ratio: float
    operator_ratio: float
    evaluations: int
    worst_phi: list[MultiplierEntry]

    @classmethod
    def from_result(cls, result: AdversarialResult) -> "AdversarialOut":
        return cls(
            worst_ratio=result.worst_ratio,
            operator_ratio=result.operator_ratio,
            evaluations=result.evaluations,
            worst_phi=[
                MultiplierEntry(**RectangleRef.from_rectangle(rect).model_dump(), value=value)
                for rect, value in result.worst_phi.entries.items()
            ],
        )


class TwoSummingOut(BaseModel):
    lhs: float
    rhs: float
    slack: float
    sequences: int
    estimate_only: bool = False

    @classmethod
    def from_report(cls, report: TwoSummingReport) -> "TwoSummingOut":
        return cls(
            lhs=report.lhs,
            rhs=report.rhs,
            slack=report.slack,
            sequences=report.sequences,
            estimate_only=report.estimate_only,
        )


class VerifyDominationOut(BaseModel):
    given: DominationOut
    random_max_ratio: float
    trials: int
    adversarial: Optional[AdversarialOut] = None
    two_summing: TwoSummingOut
