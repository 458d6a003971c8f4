from fractions import Fraction
from typing import Optional

from pydantic import BaseModel, Field

from ..core.atomic import (
    AtomicChainReport,
    AtomicDecomposition,
    FSCheckReport,
    L2AtomLevelReport,
)
from .expansion import HaarExpansionIn, RectangleRef


class MeasureFraction(BaseModel):
    """An exact dyadic measure numerator / denominator, the denominator a power of 2."""

    numerator: int
    denominator: int

    @classmethod
    def of(cls, value: Fraction) -> "MeasureFraction":
        return cls(numerator=value.numerator, denominator=value.denominator)


class DecompositionRequest(BaseModel):
    expansion: HaarExpansionIn
    p: float = Field(1.0, gt=0, le=2)
    grid: Optional[int] = Field(None, ge=0)


class AtomicLevelOut(BaseModel):
    n: int
    rectangles: list[RectangleRef]
    star_measure: MeasureFraction
    l2_norm: float
    hp_norm: float
    contribution: float


class DecompositionOut(BaseModel):
    p: float
    grid: int
    levels: list[AtomicLevelOut]
    b: float
    norm: float
    ap_sample: float
    scan_range: tuple[int, int]
    near_ties: int = 0

    @classmethod
    def from_decomposition(cls, dec: AtomicDecomposition) -> "DecompositionOut":
        return cls(
            p=dec.p,
            grid=dec.resolution,
            levels=[
                AtomicLevelOut(
                    n=level.n,
                    rectangles=[RectangleRef.from_rectangle(rect) for rect in level.rectangles],
                    star_measure=MeasureFraction.of(level.star_measure),
                    l2_norm=level.l2_norm,
                    hp_norm=level.hp_norm,
                    contribution=level.contribution,
                )
                for level in dec.levels
            ],
            b=dec.b,
            norm=dec.norm,
            ap_sample=dec.ap_sample,
            scan_range=dec.scan_range,
            near_ties=dec.near_ties,
        )


class ChainOut(BaseModel):
    norm_p: float
    atom_sum: float
    b: float
    ap_sample: float

    @classmethod
    def from_report(cls, report: AtomicChainReport) -> "ChainOut":
        return cls(norm_p=report.norm_p, atom_sum=report.atom_sum, b=report.b, ap_sample=report.ap_sample)


class L2LevelOut(BaseModel):
    n: int
    l2_squared: float
    outside_integral: float
    star_bound: float
    maximal_count: int
    maximal_bound: float
    inclusion: bool
    level_set_constant: float

    @classmethod
    def from_report(cls, report: L2AtomLevelReport) -> "L2LevelOut":
        return cls(
            n=report.n,
            l2_squared=report.l2_squared,
            outside_integral=report.outside_integral,
            star_bound=report.star_bound,
            maximal_count=report.maximal_count,
            maximal_bound=report.maximal_bound,
            inclusion=report.inclusion,
            level_set_constant=report.level_set_constant,
        )


class FSCheckOut(BaseModel):
    epsilon: float
    lhs: float
    rhs: float
    implied_constant: Optional[float] = None
    degenerate: bool = False

    @classmethod
    def from_report(cls, report: FSCheckReport) -> "FSCheckOut":
        return cls(
            epsilon=report.epsilon,
            lhs=report.lhs,
            rhs=report.rhs,
            implied_constant=report.implied_constant,
            degenerate=report.degenerate,
        )


class VerifyAtomicOut(BaseModel):
    decomposition: DecompositionOut
    chain: ChainOut
    levels: list[L2LevelOut]
    fefferman_stein: FSCheckOut
