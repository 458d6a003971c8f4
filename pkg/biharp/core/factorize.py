"""
Lattice interpolation between H^p and H^2 and the factorization |f| = |x|^(1-theta) |y|^theta.

Products such as |x|^(1-theta) |y|^theta are taken coefficientwise in the Haar
basis. With 1/q = (1-theta)/p + theta/2, Hoelder gives

    ||sum |f_IJ|^(1-theta) |g_IJ|^theta h_IJ||_{H^q} <= ||f||_{H^p}^(1-theta) ||g||_2^theta,

which is asserted. The reverse direction has an unknown constant and is only
ever reported.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .atomic import AtomicDecomposition, classify
from .dyadic import CellSet, GridFunction
from .errors import (
    IDENTITY_TOL,
    DegenerateInputError,
    DomainError,
    PreconditionError,
    ResolutionError,
    check_exponent,
    check_theta,
    ensure,
    ensure_le,
)
from .haar import (
    HaarExpansion,
    batch_hp_norms,
    h2_norm_coeff,
    hp_norm,
    lattice_interpolant,
    square_function_squared,
)
from .pietsch import PietschWeights
from .search import coordinate_ascent


@dataclass(frozen=True)
class InterpolationParams:
    p: float
    theta: float

    def __post_init__(self) -> None:
        check_exponent(self.p)
        check_theta(self.theta)

    @property
    def q(self) -> float:
        return 1.0 / ((1.0 - self.theta) / self.p + self.theta / 2.0)

    @classmethod
    def from_q(cls, p: float, q: float) -> "InterpolationParams":
        """Back-solve theta from 1/q = (1-theta)/p + theta/2; needs p < q < 2."""
        check_exponent(p)
        if not p < q < 2.0:
            raise DomainError(f"q must lie strictly between p={p} and 2, got {q}")
        return cls(p, (1.0 / p - 1.0 / q) / (1.0 / p - 0.5))

    def identity_defect(self) -> float:
        """|(q - p) - (q theta / 2)(2 - p)|, zero in exact arithmetic."""
        q = self.q
        return abs((q - self.p) - q * self.theta / 2.0 * (2.0 - self.p))

    def check(self) -> None:
        ensure_le(self.identity_defect(), IDENTITY_TOL, "q - p = (q theta/2)(2 - p)", rel=0.0)


def pisier_theta(p: float) -> float:
    """theta = 2 - 2/p, the exponent pairing H^p with X0 and H^2."""
    return 2.0 - 2.0 / p


@dataclass(frozen=True, eq=False)
class GCandidate:
    g: HaarExpansion
    l2_squared: float
    cp_sample: float  # ||g||_2^2 / ||f||_{H^p}^p
    level_mass: float  # sum_n 2^(np) |F_n|
    level_mass_ratio: float  # ||g||_2^2 / level_mass


@dataclass(frozen=True, eq=False)
class InterpolationReport:
    q: float
    theta: float
    f_norm: float
    g_norm: float
    h_norm: float
    upper_bound: float
    upper_margin: float
    lower_constant: Optional[float]


@dataclass(frozen=True)
class ModifiedHolderReport:
    r: float
    lhs: float
    rhs: float


@dataclass(frozen=True)
class LowerChainReport:
    reverse_holder: ModifiedHolderReport
    level_bound_margin: float  # min over F_n of 2^(-n(q-p)) - S^(p-q)


@dataclass(frozen=True, eq=False)
class X0Estimate:
    lower: float
    upper: float
    witness: HaarExpansion
    h1_norm: float
    rescaled_lower: float
    rescaled_upper: float
    evaluations: int


@dataclass(frozen=True, eq=False)
class FactorPair:
    x: HaarExpansion
    y: HaarExpansion
    theta: float
    x_x0_estimate: float
    x_x0_upper: float
    y_h2: float
    defect: float
    f_norm: float
    implied_c: float  # verbatim sup reading: est^(1-theta) ||y||^theta / ||f||
    implied_c_rescaled: float  # est ||y||^theta / ||f||


def _level_mass(f: HaarExpansion, p: float, resolution: int) -> float:
    """
    sum_n 2^(np) |F_n| over all integers n, in closed form: a cell with
    S^2 in (2^(c-1), 2^c] lies in F_n exactly for n <= floor((c-1)/2).
    """
    squared = square_function_squared(f, resolution).values.ravel()
    positive = squared[squared > 0]
    mantissa, exponent = np.frexp(positive)
    ceiling = np.where(mantissa == 0.5, exponent - 1, exponent)
    top = (ceiling - 1) // 2
    cells = float(1 << (2 * resolution))
    return math.fsum(2.0 ** (top * p)) / (1.0 - 2.0 ** (-p)) / cells


def g_candidate(f: HaarExpansion, dec: AtomicDecomposition, p: Optional[float] = None) -> GCandidate:
    """|g_IJ| = 2^(-(n/2)(2-p)) |f_IJ| for I x J in R_n."""
    if f.is_zero:
        raise DegenerateInputError("g is undefined for the zero expansion")
    p = dec.p if p is None else check_exponent(p)
    if p != dec.p:
        raise DomainError(f"decomposition was built for p={dec.p}, not p={p}")
    coeffs = {}
    per_level = []
    for level in dec.levels:
        factor = 2.0 ** (-level.n * (2.0 - p) / 2.0)
        for rect in level.rectangles:
            coeffs[rect] = factor * abs(f[rect])
        per_level.append(2.0 ** (-level.n * (2.0 - p)) * level.l2_norm ** 2)
    g = HaarExpansion(coeffs, f.max_level)
    l2_squared = h2_norm_coeff(g) ** 2
    ensure_le(abs(l2_squared - math.fsum(per_level)), 1e-9 * l2_squared, "||g||^2 = sum 2^(-n(2-p)) ||f_n||^2", rel=0.0)
    mass = _level_mass(f, p, dec.resolution)
    return GCandidate(
        g=g,
        l2_squared=l2_squared,
        cp_sample=l2_squared / dec.norm ** p,
        level_mass=mass,
        level_mass_ratio=l2_squared / mass,
    )


def interpolation_check(
    f: HaarExpansion,
    params: InterpolationParams,
    g: Optional[HaarExpansion] = None,
    dec: Optional[AtomicDecomposition] = None,
    resolution: Optional[int] = None,
) -> InterpolationReport:
    """
    Upper direction asserted for g scaled into the unit ball of H^2; the lower
    direction's constant ||h||_{H^q} / ||f||^(1-theta) is reported. When g is
    omitted the g-function candidate, normalized to ||g||_2 = 1, is used.
    """
    params.check()
    p, theta, q = params.p, params.theta, params.q
    if g is None:
        if f.is_zero:
            raise DegenerateInputError("no g candidate for the zero expansion")
        dec = dec if dec is not None else classify(f, p, resolution)
        g = g_candidate(f, dec).g
        g = g.scale(1.0 / h2_norm_coeff(g))
    g_norm = h2_norm_coeff(g)
    if g_norm > 1.0:
        g = g.scale(1.0 / g_norm)
        g_norm = h2_norm_coeff(g)

    grid = max(f.max_level, g.max_level) + 1 if resolution is None else resolution
    f_norm = hp_norm(f, p, grid)
    h_norm = hp_norm(lattice_interpolant(f, g, theta), q, grid) if not g.is_zero else 0.0
    upper = f_norm ** (1.0 - theta) * g_norm ** theta
    margin = ensure_le(h_norm, upper, "||h||_{H^q} <= ||f||_{H^p}^(1-theta) ||g||_2^theta", abs_tol=1e-9)

    lower = None
    if not g.is_zero and f_norm > 0:
        lower = h_norm / f_norm ** (1.0 - theta)
    return InterpolationReport(
        q=q,
        theta=theta,
        f_norm=f_norm,
        g_norm=g_norm,
        h_norm=h_norm,
        upper_bound=upper,
        upper_margin=margin,
        lower_constant=lower,
    )


def modified_holder_check(
    u: GridFunction,
    v: GridFunction,
    r: float,
    where: Optional[CellSet] = None,
) -> ModifiedHolderReport:
    """int u^r v^(1-r) >= (int u)^r (int v)^(1-r) for r > 1 or r < 0, over `where` if given."""
    if 0.0 <= r <= 1.0:
        raise DomainError(f"modified Hoelder needs r > 1 or r < 0, got {r}")
    if u.resolution != v.resolution or (where is not None and where.resolution != u.resolution):
        raise ResolutionError("u, v and the domain must share one grid")
    mask = np.ones_like(u.values, dtype=bool) if where is None else where.mask
    a, b = u.values[mask], v.values[mask]
    if np.any(a < 0) or np.any(b < 0):
        raise PreconditionError("modified Hoelder needs nonnegative functions")
    if r > 1 and np.any(b == 0):
        raise PreconditionError("v vanishes on a cell where it carries the negative exponent 1 - r")
    if r < 0 and np.any(a == 0):
        raise PreconditionError("u vanishes on a cell where it carries the negative exponent r")

    scale = -2 * u.resolution
    lhs = math.ldexp(math.fsum(a ** r * b ** (1.0 - r)), scale)
    rhs = math.ldexp(math.fsum(a), scale) ** r * math.ldexp(math.fsum(b), scale) ** (1.0 - r)
    ensure_le(rhs, lhs, "modified Hoelder inequality")
    return ModifiedHolderReport(r=r, lhs=lhs, rhs=rhs)


def lower_chain_check(f: HaarExpansion, dec: AtomicDecomposition, params: InterpolationParams) -> LowerChainReport:
    """
    The two exact steps inside the lower direction: the reverse Hoelder step with
    r = q/p applied to h^p and S^p(f), where h^2 = sum |f_IJ|^2 1_{IxJ ∩ F_n},
    and the pointwise bound S(f)^(p-q) < 2^(-n(q-p)) on each F_n.
    """
    if params.p != dec.p:
        raise DomainError(f"decomposition was built for p={dec.p}, not p={params.p}")
    p, q = params.p, params.q
    grid = dec.resolution
    squared = square_function_squared(f, grid).values
    restricted = np.zeros_like(squared)
    for level in dec.levels:
        for rect in level.rectangles:
            window = rect.cell_slices(grid)
            restricted[window] += f[rect] ** 2 * level.level_set.mask[window]

    positive = CellSet(grid, squared > 0)
    u = GridFunction(grid, restricted ** (p / 2.0))
    v = GridFunction(grid, squared ** (p / 2.0))
    reverse = modified_holder_check(u, v, q / p, where=positive)

    margin = math.inf
    for level in dec.levels:
        inside = squared[level.level_set.mask]
        if inside.size == 0:
            continue
        bound = 2.0 ** (-level.n * (q - p))
        margin = min(margin, float(np.min(bound - inside ** ((p - q) / 2.0))))
    ensure(margin >= -IDENTITY_TOL, "S(f)^(p-q) < 2^(-n(q-p)) on F_n")
    return LowerChainReport(reverse_holder=reverse, level_bound_margin=margin)


def x0_norm_estimate(
    x: HaarExpansion,
    theta: float,
    target_p: float,
    budget: int = 0,
    seed: int = 0,
    resolution: Optional[int] = None,
    restart_budget: int = 200,
) -> X0Estimate:
    """
    Lower estimate of sup{||sum |x_IJ|^(1-theta) |y_IJ|^theta h_IJ||_{H^target_p} : ||y||_2 <= 1}
    from deterministic witnesses plus `budget` evaluations of seeded coordinate
    ascent; upper bound ||x||_{H^1}^(1-theta) from Hoelder with base exponent 1.
    """
    theta = check_theta(theta)
    target_p = check_exponent(target_p, "targetP")
    if abs(1.0 / target_p - ((1.0 - theta) + theta / 2.0)) > IDENTITY_TOL:
        raise DomainError(f"theta={theta} does not pair base exponent 1 with targetP={target_p}")
    grid = x.default_resolution if resolution is None else resolution
    if x.is_zero:
        return X0Estimate(0.0, 0.0, HaarExpansion.zero(x.max_level), 0.0, 0.0, 0.0, 0)

    rects = x.support
    base = np.abs(np.asarray(x.values)) ** (1.0 - theta)
    areas = x.areas

    def unit(rows: np.ndarray) -> np.ndarray:
        rows = np.abs(np.atleast_2d(rows))
        return rows / np.sqrt(np.sum(rows ** 2 * areas, axis=1))[:, None]

    def objective(rows: np.ndarray) -> np.ndarray:
        return batch_hp_norms(rects, base * unit(rows) ** theta, target_p, grid)

    dec = classify(x, 1.0, grid)
    witnesses = np.vstack([g_candidate(x, dec).g.values, np.abs(x.values)])
    values = objective(witnesses)
    top = int(np.argmax(values))
    best, lower = witnesses[top], float(values[top])
    used = len(witnesses)

    restart = 0
    while used < 2 + budget:
        stream = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(restart,)))
        start = np.abs(stream.standard_normal(len(rects))) + 1e-3
        share = min(restart_budget, 2 + budget - used)
        point, value, spent = coordinate_ascent(objective, start, share, stream)
        used += spent
        if value > lower:
            best, lower = point, value
        restart += 1

    h1 = hp_norm(x, 1.0, grid)
    upper = h1 ** (1.0 - theta)
    ensure_le(lower, upper, "X0 witness below the Hoelder bound", abs_tol=1e-9)
    witness = HaarExpansion(dict(zip(rects, unit(best)[0])), x.max_level)
    return X0Estimate(
        lower=lower,
        upper=upper,
        witness=witness,
        h1_norm=h1,
        rescaled_lower=lower ** (1.0 / (1.0 - theta)),
        rescaled_upper=h1,
        evaluations=used,
    )


def pisier_split(
    f: HaarExpansion,
    p: float,
    weights: PietschWeights,
    budget: int = 0,
    seed: int = 0,
    resolution: Optional[int] = None,
) -> FactorPair:
    """
    y_IJ = (omega_IJ / |I||J|)^(1/2) and x_IJ = (|f_IJ| / y_IJ^theta)^(1/(1-theta)),
    theta = 2 - 2/p, so that |f| = |x|^(1-theta) |y|^theta and ||y||_2^2 = sum omega.
    """
    if not 1.0 < p < 2.0:
        raise DomainError(f"pisier_split needs p in (1, 2), got {p}; use endpoint_split at p = 1 or 2")
    if f.is_zero:
        raise DegenerateInputError("the zero expansion has no factorization")
    if not weights.assertable or weights.p != p:
        raise PreconditionError("pisier_split needs B-normalized weights built for the same p")
    theta = pisier_theta(p)

    y_coeffs = {rect: math.sqrt(weights.weights[rect] / rect.area) for rect in f.support}
    x_coeffs = {
        rect: (abs(value) / y_coeffs[rect] ** theta) ** (1.0 / (1.0 - theta))
        for rect, value in f.coeffs.items()
    }
    x = HaarExpansion(x_coeffs, f.max_level)
    y = HaarExpansion(y_coeffs, f.max_level)
    defect = max(
        abs(x_coeffs[rect] ** (1.0 - theta) * y_coeffs[rect] ** theta - abs(value))
        for rect, value in f.coeffs.items()
    )
    scale = float(np.max(np.abs(f.values)))
    ensure_le(defect, 1e-9 * scale, "|f| = |x|^(1-theta) |y|^theta", rel=0.0)
    y_h2 = h2_norm_coeff(y)
    ensure_le(abs(y_h2 - 1.0), 1e-9, "||y||_2 = 1", rel=0.0)

    grid = f.default_resolution if resolution is None else resolution
    estimate = x0_norm_estimate(x, theta, p, budget, seed, grid)
    f_norm = hp_norm(f, p, grid)
    return FactorPair(
        x=x,
        y=y,
        theta=theta,
        x_x0_estimate=estimate.lower,
        x_x0_upper=estimate.upper,
        y_h2=y_h2,
        defect=defect,
        f_norm=f_norm,
        implied_c=estimate.lower ** (1.0 - theta) * y_h2 ** theta / f_norm,
        implied_c_rescaled=estimate.lower * y_h2 ** theta / f_norm,
    )


def endpoint_split(f: HaarExpansion, p: float) -> FactorPair:
    """
    The degenerate ends theta = 0 (p = 1: |f| = |x|) and theta = 1 (p = 2: |f| = |y|).
    The free factor is |f| itself.
    """
    if f.is_zero:
        raise DegenerateInputError("the zero expansion has no factorization")
    if p not in (1.0, 2.0):
        raise DomainError(f"endpoint_split handles p = 1 and p = 2 only, got {p}")
    modulus = f.abs()
    f_norm = hp_norm(f, p)
    h1 = hp_norm(f, 1.0)
    y_h2 = h2_norm_coeff(modulus)
    if p == 1.0:
        implied = h1 / f_norm
    else:
        implied = y_h2 / f_norm
    return FactorPair(
        x=modulus,
        y=modulus,
        theta=pisier_theta(p),
        x_x0_estimate=h1,
        x_x0_upper=h1,
        y_h2=y_h2,
        defect=0.0,
        f_norm=f_norm,
        implied_c=implied,
        implied_c_rescaled=implied,
    )
