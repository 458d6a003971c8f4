"""
Explicit Pietsch weights for the Haar multiplication operator

    M_f : l^inf -> H^p,   phi |-> sum phi_IJ f_IJ h_{IxJ}.

For I x J in R_n the weight is

    omega_IJ = |R_n^*|^(1-p/2) f_IJ^2 |I||J| / ||f_n||_2^(2-p) / D,

where D is either B (the atomic-decomposition quantity, so sum omega = 1 and
the domination constant B^(1/p) is known exactly) or A_p ||f||^p for a caller
supplied A_p.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from statistics import median
from types import MappingProxyType
from typing import Mapping, Optional, Sequence

import numpy as np

from .atomic import AtomicDecomposition, classify
from .dyadic import DyadicRectangle
from .errors import (
    DegenerateInputError,
    DomainError,
    PreconditionError,
    ensure_le,
)
from .haar import (
    HaarExpansion,
    MultiplierSequence,
    batch_hp_norms,
    hp_norm,
    multiplier_apply,
)
from .search import coordinate_ascent

logger = logging.getLogger(__name__)

# At p = 2 the weights give equality for every phi with nonzero weighted l2 mass.
IDENTITY_P = 2.0
IDENTITY_TOLERANCE = 1e-9


class Normalization(str, Enum):
    B_NORMALIZED = "b"
    AP_NORMALIZED = "ap"


@dataclass(frozen=True, eq=False)
class PietschWeights:
    p: float
    weights: Mapping[DyadicRectangle, float]
    normalization: Normalization
    b: float
    norm: float
    domination_constant: float
    a_p: Optional[float] = None
    display_constant: Optional[float] = None
    over_budget: bool = False
    level_totals: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "weights", MappingProxyType(dict(self.weights)))
        object.__setattr__(self, "level_totals", MappingProxyType(dict(self.level_totals)))

    @property
    def assertable(self) -> bool:
        return self.normalization is Normalization.B_NORMALIZED

    def total(self) -> float:
        return math.fsum(self.weights.values())

    def on(self, rects: Sequence[DyadicRectangle]) -> np.ndarray:
        return np.array([self.weights.get(rect, 0.0) for rect in rects], dtype=np.float64)


@dataclass(frozen=True)
class DominationReport:
    lhs: float
    rhs: float
    ratio: float
    estimate_only: bool = False


@dataclass(frozen=True, eq=False)
class AdversarialResult:
    worst_phi: MultiplierSequence
    worst_ratio: float
    evaluations: int
    operator_ratio: float  # max ||M_f phi|| / (||phi||_inf ||f||)
    lowest_ratio: float  # over evaluated phi that are not identically zero


@dataclass(frozen=True)
class TwoSummingReport:
    lhs: float
    rhs: float
    slack: float
    sequences: int
    estimate_only: bool = False


@dataclass(frozen=True)
class ConstantSummary:
    samples: tuple[float, ...]
    minimum: float
    median: float
    maximum: float

    @classmethod
    def of(cls, samples: Sequence[float]) -> "ConstantSummary":
        values = tuple(float(s) for s in samples)
        if not values:
            nan = float("nan")
            return cls((), nan, nan, nan)
        return cls(values, min(values), float(median(values)), max(values))


def pietsch_weights(
    f: HaarExpansion,
    dec: AtomicDecomposition,
    mode: Normalization = Normalization.B_NORMALIZED,
    a_p: Optional[float] = None,
) -> PietschWeights:
    if f.is_zero:
        raise DegenerateInputError("weights are undefined for the zero expansion")
    p = dec.p
    cells = 1 << (2 * dec.resolution)

    if mode is Normalization.B_NORMALIZED:
        denominator = dec.b
        constant = dec.b ** (1.0 / p)
        display = None
        over_budget = False
    else:
        if a_p is None or a_p <= 0:
            raise DomainError("Ap-normalized weights need a positive A_p")
        denominator = a_p * dec.norm ** p
        constant = denominator ** (1.0 / p)
        display = a_p * dec.norm
        over_budget = a_p < dec.ap_sample
        if over_budget:
            logger.warning(
                "A_p=%g is below B/||f||^p=%g: weights sum above 1 and the domination bound is not guaranteed",
                a_p,
                dec.ap_sample,
            )

    weights: dict[DyadicRectangle, float] = {}
    level_totals: dict[int, float] = {}
    for level in dec.levels:
        star_factor = (level.star_count / cells) ** (1.0 - p / 2.0)
        atom_factor = level.l2_norm ** (2.0 - p)
        for rect in level.rectangles:
            weights[rect] = star_factor * f[rect] ** 2 * rect.area / atom_factor / denominator
        level_totals[level.n] = math.fsum(weights[rect] for rect in level.rectangles)

    return PietschWeights(
        p=p,
        weights=weights,
        normalization=mode,
        b=dec.b,
        norm=dec.norm,
        domination_constant=constant,
        a_p=a_p,
        display_constant=display,
        over_budget=over_budget,
        level_totals=level_totals,
    )


class DominationEvaluator:
    """Batched evaluation of ||M_f(phi)||_{H^p} / (C (sum phi^2 omega)^(1/2))."""

    def __init__(self, f: HaarExpansion, weights: PietschWeights, resolution: Optional[int] = None):
        self.rects = f.support
        self.coefficients = np.asarray(f.values)
        self.omega = weights.on(self.rects)
        self.p = weights.p
        self.constant = weights.domination_constant
        self.resolution = f.default_resolution if resolution is None else resolution
        self.norm = hp_norm(f, self.p, self.resolution)

    def lhs(self, phis: np.ndarray) -> np.ndarray:
        return batch_hp_norms(self.rects, np.atleast_2d(phis) * self.coefficients, self.p, self.resolution)

    def rhs(self, phis: np.ndarray) -> np.ndarray:
        terms = np.atleast_2d(phis) ** 2 * self.omega
        return self.constant * np.sqrt([math.fsum(row) for row in terms])

    def ratios(self, phis: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Domination ratios and operator-norm ratios ||M_f phi|| / (||phi||_inf ||f||)."""
        phis = np.atleast_2d(phis)
        lhs = self.lhs(phis)
        rhs = self.rhs(phis)
        sup = np.max(np.abs(phis), axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(rhs > 0, lhs / rhs, 0.0)
            operator = np.where(sup > 0, lhs / (sup * self.norm), 0.0)
        return ratio, operator


def domination_check(
    f: HaarExpansion,
    p: float,
    weights: PietschWeights,
    phi: MultiplierSequence,
    resolution: Optional[int] = None,
) -> DominationReport:
    if f.is_zero:
        raise DegenerateInputError("domination check needs a nonzero expansion")
    if p != weights.p:
        raise DomainError(f"weights were built for p={weights.p}, not p={p}")
    grid = f.default_resolution if resolution is None else resolution
    lhs = hp_norm(multiplier_apply(f, phi), p, grid)
    rhs = weights.domination_constant * math.sqrt(
        math.fsum(phi[rect] ** 2 * omega for rect, omega in weights.weights.items())
    )
    ratio = lhs / rhs if rhs > 0 else 0.0
    if weights.assertable:
        ensure_le(ratio, 1.0, "Pietsch domination ratio")
        if p == IDENTITY_P and rhs > 0:
            ensure_le(abs(1.0 - ratio), IDENTITY_TOLERANCE, "domination ratio is 1 at p=2", rel=0.0)
    return DominationReport(lhs=lhs, rhs=rhs, ratio=ratio, estimate_only=not weights.assertable)


def _require_assertable(weights: PietschWeights) -> None:
    if not weights.assertable:
        raise PreconditionError("this check needs B-normalized weights")


def adversarial_search(
    f: HaarExpansion,
    p: float,
    weights: PietschWeights,
    iterations: int = 2000,
    seed: int = 0,
    restarts: int = 4,
    resolution: Optional[int] = None,
) -> AdversarialResult:
    """
    Falsification search for a multiplier with domination ratio above 1:
    random Gaussian phi, random {-1, 0, 1} patterns, then multiplicative
    coordinate ascent (the ratio is scale invariant in phi). The evaluation
    sequence depends only on (seed, iterations, restarts).
    """
    _require_assertable(weights)
    if f.is_zero:
        raise DegenerateInputError("adversarial search needs a nonzero expansion")
    if p != weights.p:
        raise DomainError(f"weights were built for p={weights.p}, not p={p}")
    evaluator = DominationEvaluator(f, weights, resolution)
    size = len(evaluator.rects)
    budget = max(int(iterations), 1)

    best_phi = np.ones(size)
    ratio, operator = evaluator.ratios(best_phi)
    best_ratio, best_operator = float(ratio[0]), float(operator[0])
    lowest_ratio = best_ratio
    used = 1

    def track_lowest(phis: np.ndarray, ratios: np.ndarray) -> None:
        nonlocal lowest_ratio
        live = np.any(phis != 0, axis=1)
        if live.any():
            lowest_ratio = min(lowest_ratio, float(np.min(ratios[live])))

    def absorb(phis: np.ndarray) -> None:
        nonlocal best_phi, best_ratio, best_operator, used
        ratios, operators = evaluator.ratios(phis)
        track_lowest(phis, ratios)
        used += len(phis)
        best_operator = max(best_operator, float(np.max(operators)))
        top = int(np.argmax(ratios))
        if ratios[top] > best_ratio:
            best_ratio = float(ratios[top])
            best_phi = np.array(phis[top])

    sampler = np.random.default_rng(np.random.SeedSequence(seed))
    random_budget = min(budget - used, budget // 4)
    if random_budget > 0:
        absorb(sampler.standard_normal((random_budget, size)))
    sign_budget = min(budget - used, budget // 4)
    if sign_budget > 0:
        absorb(sampler.choice(np.array([-1.0, 0.0, 1.0]), size=(sign_budget, size)))

    def objective(phis: np.ndarray) -> np.ndarray:
        nonlocal best_operator
        phis = np.atleast_2d(phis)
        ratios, operators = evaluator.ratios(phis)
        track_lowest(phis, ratios)
        best_operator = max(best_operator, float(np.max(operators)))
        return ratios

    restarts = max(restarts, 1)
    share = (budget - used) // restarts
    for restart in range(restarts):
        if share <= 0:
            break
        stream = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(restart + 1,)))
        start = np.array(best_phi) if restart == 0 else np.abs(stream.standard_normal(size)) + 1e-3
        current, current_ratio, spent = coordinate_ascent(objective, start, share, stream)
        used += spent
        if current_ratio > best_ratio:
            best_ratio, best_phi = current_ratio, np.array(current)

    ensure_le(best_ratio, 1.0, "adversarial domination ratio")
    ensure_le(best_operator, 1.0, "||M_f phi|| <= ||phi||_inf ||f||")
    if p == IDENTITY_P:
        ensure_le(1.0 - lowest_ratio, IDENTITY_TOLERANCE, "adversarial domination ratio is 1 at p=2", rel=0.0)
    return AdversarialResult(
        worst_phi=MultiplierSequence.from_values(evaluator.rects, best_phi),
        worst_ratio=best_ratio,
        evaluations=used,
        operator_ratio=best_operator,
        lowest_ratio=lowest_ratio,
    )


def two_summing_check(
    f: HaarExpansion,
    p: float,
    weights: PietschWeights,
    phis: Sequence[MultiplierSequence],
    resolution: Optional[int] = None,
) -> TwoSummingReport:
    """(sum_i ||M_f phi_i||^2)^(1/2) <= C sup_IJ (sum_i phi_i,IJ^2)^(1/2)."""
    if not phis:
        return TwoSummingReport(lhs=0.0, rhs=0.0, slack=0.0, sequences=0, estimate_only=not weights.assertable)
    if p != weights.p:
        raise DomainError(f"weights were built for p={weights.p}, not p={p}")
    grid = f.default_resolution if resolution is None else resolution
    rects = f.support
    matrix = np.vstack([phi.on(rects) for phi in phis])
    norms = batch_hp_norms(rects, matrix * np.asarray(f.values), p, grid)
    lhs = math.sqrt(math.fsum(norms ** 2))
    column_sums = [math.fsum(column) for column in (matrix ** 2).T]
    rhs = weights.domination_constant * math.sqrt(max(column_sums, default=0.0))
    if weights.assertable:
        ensure_le(lhs, rhs, "2-summing inequality")
    return TwoSummingReport(lhs=lhs, rhs=rhs, slack=rhs - lhs, sequences=len(phis), estimate_only=not weights.assertable)


def estimate_ap(ensemble: Sequence[HaarExpansion], p: float, resolution: Optional[int] = None) -> ConstantSummary:
    """Distribution of B / ||f||^p over an ensemble; never compared to a bound."""
    return ConstantSummary.of([classify(f, p, resolution).ap_sample for f in ensemble])
