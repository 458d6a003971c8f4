from typing import Optional

from pydantic import BaseModel, Field

from ..core.factorize import FactorPair, InterpolationReport, X0Estimate
from .expansion import HaarExpansionIn


class FactorizeRequest(BaseModel):
    expansion: HaarExpansionIn
    p: float = Field(1.5, ge=1, le=2)
    grid: Optional[int] = Field(None, ge=0)
    budget: int = Field(200, ge=0, le=100_000)
    seed: int = Field(42, ge=0, lt=2**64)


class FactorPairOut(BaseModel):
    x: HaarExpansionIn
    y: HaarExpansionIn
    theta: float
    defect: float
    x_x0_estimate: float
    x_x0_upper: float
    y_h2: float
    f_norm: float
    implied_c: float
    implied_c_rescaled: float

    @classmethod
    def from_pair(cls, pair: FactorPair) -> "FactorPairOut":
        return cls(
            x=HaarExpansionIn.from_expansion(pair.x),
            y=HaarExpansionIn.from_expansion(pair.y),
            theta=pair.theta,
            defect=pair.defect,
            x_x0_estimate=pair.x_x0_estimate,
            x_x0_upper=pair.x_x0_upper,
            y_h2=pair.y_h2,
            f_norm=pair.f_norm,
            implied_c=pair.implied_c,
            implied_c_rescaled=pair.implied_c_rescaled,
        )


class X0Request(BaseModel):
    expansion: HaarExpansionIn
    theta: Optional[float] = Field(None, gt=0, lt=1)
    target_p: float = Field(1.5, gt=1, lt=2)
    grid: Optional[int] = Field(None, ge=0)
    budget: int = Field(200, ge=0, le=100_000)
    seed: int = Field(42, ge=0, lt=2**64)


class X0Out(BaseModel):
    theta: float
    target_p: float
    lower: float
    upper: float
    h1_norm: float
    rescaled_lower: float
    rescaled_upper: float
    evaluations: int
    witness: HaarExpansionIn

    @classmethod
    def from_estimate(cls, estimate: X0Estimate, theta: float, target_p: float) -> "X0Out":
        return cls(
            theta=theta,
            target_p=target_p,
            lower=estimate.lower,
            upper=estimate.upper,
            h1_norm=estimate.h1_norm,
            rescaled_lower=estimate.rescaled_lower,
            rescaled_upper=estimate.rescaled_upper,
            evaluations=estimate.evaluations,
            witness=HaarExpansionIn.from_expansion(estimate.witness),
        )


class InterpolationOut(BaseModel):
    q: float
    theta: float
    f_norm: float
    g_norm: float
    h_norm: float
    upper_bound: float
    upper_margin: float
    lower_constant: Optional[float] = None

    @classmethod
    def from_report(cls, report: InterpolationReport) -> "InterpolationOut":
        return cls(
            q=report.q,
            theta=report.theta,
            f_norm=report.f_norm,
            g_norm=report.g_norm,
            h_norm=report.h_norm,
            upper_bound=report.upper_bound,
            upper_margin=report.upper_margin,
            lower_constant=report.lower_constant,
        )
