"""
Atomic decomposition of a finite Haar expansion.

F_n = {S(f) > 2^n}; a rectangle I x J belongs to R_n when more than half of it
lies in F_n and at most half of it lies in F_{n+1}. f_n is the part of f
supported on R_n and R_n^* is the union of R_n.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Optional

import numpy as np

from .dyadic import (
    CellSet,
    DyadicRectangle,
    GridFunction,
    intersect_counts,
    rect_measure,
    union_pointset,
)
from .errors import (
    DegenerateInputError,
    PreconditionError,
    ResolutionError,
    check_exponent,
    ensure,
    ensure_le,
)
from .haar import HaarExpansion, h2_norm_coeff, hp_norm, square_function_squared

logger = logging.getLogger(__name__)

TIE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class AtomicLevel:
    n: int
    rectangles: tuple[DyadicRectangle, ...]
    atom: HaarExpansion
    star: CellSet
    level_set: CellSet
    next_level_set: CellSet
    l2_norm: float
    hp_norm: float
    contribution: float  # |R_n^*|^(1-p/2) ||f_n||_2^p

    @property
    def star_count(self) -> int:
        return self.star.cell_count

    @property
    def star_measure(self) -> Fraction:
        return self.star.measure


@dataclass(frozen=True, eq=False)
class AtomicDecomposition:
    p: float
    resolution: int
    levels: tuple[AtomicLevel, ...]
    b: float
    norm: float
    scan_range: tuple[int, int]
    near_ties: int = 0

    @property
    def ap_sample(self) -> float:
        """B / ||f||^p, one empirical sample of the constant A_p."""
        return self.b / self.norm ** self.p

    @cached_property
    def assignment(self) -> dict[DyadicRectangle, int]:
        return {rect: level.n for level in self.levels for rect in level.rectangles}

    def level(self, n: int) -> Optional[AtomicLevel]:
        for level in self.levels:
            if level.n == n:
                return level
        return None

    def atoms_sum(self) -> HaarExpansion:
        total = HaarExpansion.zero()
        for level in self.levels:
            total = total + level.atom
        return total


@dataclass(frozen=True)
class AtomicChainReport:
    norm_p: float  # ||f||^p
    atom_sum: float  # sum ||f_n||^p
    b: float
    ap_sample: float


@dataclass(frozen=True)
class L2AtomLevelReport:
    n: int
    l2_squared: float
    outside_integral: float  # int S^2(f_n) 1_{F_{n+1}^c}
    star_bound: float  # 2^(2(n+1)) |R_n^*|
    maximal_count: int  # cells of {M_S(1_{F_n}) > 1/2}
    maximal_bound: float  # 8 * 2^(2n) |{M_S(1_{F_n}) > 1/2}|
    inclusion: bool
    level_set_constant: float  # ||f_n||_2^2 / (2^(2n) |F_n|), not asserted


@dataclass(frozen=True)
class FSCheckReport:
    epsilon: float
    lhs: float
    rhs: float
    implied_constant: Optional[float]
    degenerate: bool = False


def _floor_log2(x: float) -> int:
    mantissa, exponent = math.frexp(x)
    return exponent - 1


def _ceil_log2(x: float) -> int:
    mantissa, exponent = math.frexp(x)
    return exponent - 1 if mantissa == 0.5 else exponent


def level_set(f: HaarExpansion, n: int, resolution: Optional[int] = None) -> CellSet:
    """F_n = {S(f) > 2^n}, thresholded as S^2 > 4^n."""
    squared = square_function_squared(f, resolution)
    return CellSet(squared.resolution, squared.values > math.ldexp(1.0, 2 * n))


def classify(f: HaarExpansion, p: float, resolution: Optional[int] = None) -> AtomicDecomposition:
    p = check_exponent(p)
    if f.is_zero:
        raise DegenerateInputError("the zero expansion has no atomic decomposition")
    squared = square_function_squared(f, resolution)
    grid = squared.resolution
    rects = f.support

    low = _floor_log2(float(np.min(np.abs(f.values)))) - 2
    high = _ceil_log2(math.sqrt(float(np.max(squared.values)))) + 1
    scan = list(range(low, high + 1))
    logger.debug("classify: %d rectangles, scan range [%d, %d], G=%d", len(rects), low, high, grid)

    sizes = np.array([rect_measure(rect, grid) for rect in rects], dtype=np.int64)
    level_sets: dict[int, CellSet] = {}
    majority = np.zeros((len(scan), len(rects)), dtype=bool)
    near_ties = 0
    for row, n in enumerate(scan):
        threshold = math.ldexp(1.0, 2 * n)
        level_sets[n] = CellSet(grid, squared.values > threshold)
        majority[row] = 2 * intersect_counts(rects, level_sets[n]) > sizes
        near_ties += int(np.count_nonzero(np.abs(squared.values - threshold) < TIE_TOL * threshold))
    if near_ties:
        logger.warning("classify: %d cells within relative %g of a threshold 4^n", near_ties, TIE_TOL)

    ensure(bool(np.all(majority[0])), "every rectangle has a majority in the lowest scanned level set")
    ensure(not bool(np.any(majority[-1])), "no rectangle has a majority in the highest scanned level set")
    # F_m is nested, so majority[:, j] is a block of True followed by False.
    top = len(scan) - 1 - np.argmax(majority[::-1], axis=0)
    assigned = np.array(scan)[top]

    levels: list[AtomicLevel] = []
    cells = 1 << (2 * grid)
    for n in sorted(set(assigned.tolist())):
        members = tuple(rect for rect, m in zip(rects, assigned) if m == n)
        atom = f.restrict(members)
        star = union_pointset(members, grid)
        l2 = h2_norm_coeff(atom)
        contribution = (star.cell_count / cells) ** (1.0 - p / 2.0) * l2 ** p
        levels.append(
            AtomicLevel(
                n=n,
                rectangles=members,
                atom=atom,
                star=star,
                level_set=level_sets[n],
                next_level_set=level_sets[n + 1],
                l2_norm=l2,
                hp_norm=hp_norm(atom, p, grid),
                contribution=contribution,
            )
        )

    return AtomicDecomposition(
        p=p,
        resolution=grid,
        levels=tuple(levels),
        b=math.fsum(level.contribution for level in levels),
        norm=hp_norm(f, p, grid),
        scan_range=(low, high),
        near_ties=near_ties,
    )


def verify_atomic_chain(dec: AtomicDecomposition, f: HaarExpansion) -> AtomicChainReport:
    """
    ||f||^p <= sum ||f_n||^p <= sum |R_n^*|^(1-p/2) ||f_n||_2^p = B, both asserted.
    B / ||f||^p is returned as a sample of A_p and never asserted.
    """
    ensure(dec.atoms_sum() == f, "atoms sum to f coefficientwise")
    norm_p = dec.norm ** dec.p
    atom_sum = math.fsum(level.hp_norm ** dec.p for level in dec.levels)
    ensure_le(norm_p, atom_sum, "||f||^p <= sum ||f_n||^p")
    ensure_le(atom_sum, dec.b, "sum ||f_n||^p <= B")
    return AtomicChainReport(norm_p=norm_p, atom_sum=atom_sum, b=dec.b, ap_sample=dec.ap_sample)


def _dyadic_block_counts(mask: np.ndarray, resolution: int, a: int, b: int) -> np.ndarray:
    rows, cols = 1 << a, 1 << b
    block = mask.reshape(rows, 1 << (resolution - a), cols, 1 << (resolution - b))
    return block.sum(axis=(1, 3), dtype=np.int64)


def _expand(blocks: np.ndarray, resolution: int, a: int, b: int) -> np.ndarray:
    return np.repeat(np.repeat(blocks, 1 << (resolution - a), axis=0), 1 << (resolution - b), axis=1)


def strong_maximal(cells: CellSet) -> GridFunction:
    """
    Dyadic strong maximal function of 1_cells: at each cell, the largest
    fraction |R ∩ cells| / |R| over dyadic rectangles R containing it.
    """
    grid = cells.resolution
    best = np.zeros((cells.side, cells.side))
    for a in range(grid + 1):
        for b in range(grid + 1):
            counts = _dyadic_block_counts(cells.mask, grid, a, b)
            fraction = counts / float(1 << (2 * grid - a - b))
            best = np.maximum(best, _expand(fraction, grid, a, b))
    return GridFunction(grid, best)


def majority_region(cells: CellSet) -> CellSet:
    """{M_S(1_cells) > 1/2} computed with integer counts."""
    grid = cells.resolution
    region = np.zeros((cells.side, cells.side), dtype=bool)
    for a in range(grid + 1):
        for b in range(grid + 1):
            counts = _dyadic_block_counts(cells.mask, grid, a, b)
            region |= _expand(2 * counts > (1 << (2 * grid - a - b)), grid, a, b)
    return CellSet(grid, region)


def verify_l2_atom_bound(dec: AtomicDecomposition) -> tuple[L2AtomLevelReport, ...]:
    grid = dec.resolution
    reports = []
    for level in dec.levels:
        n = level.n
        squares = level.atom.values ** 2
        sizes = np.array([rect_measure(rect, grid) for rect in level.rectangles], dtype=np.int64)
        outside = sizes - intersect_counts(level.rectangles, level.next_level_set)
        outside_integral = math.ldexp(math.fsum(squares * outside), -2 * grid)
        l2_squared = level.l2_norm ** 2

        ensure_le(l2_squared, 2.0 * outside_integral, f"l2 atom bound (a) at n={n}", abs_tol=1e-9)
        star_bound = math.ldexp(level.star_count, 2 * (n + 1) - 2 * grid)
        ensure_le(outside_integral, star_bound, f"l2 atom bound (b) at n={n}", abs_tol=1e-9)

        region = majority_region(level.level_set)
        inclusion = level.star.issubset(region)
        ensure(inclusion, f"R_n^* inside {{M_S(1_F_n) > 1/2}} at n={n}")
        maximal_bound = math.ldexp(region.cell_count, 2 * n + 3 - 2 * grid)
        ensure_le(l2_squared, maximal_bound, f"l2 atom bound (c) at n={n}", abs_tol=1e-9)

        level_measure = math.ldexp(level.level_set.cell_count, 2 * n - 2 * grid)
        reports.append(
            L2AtomLevelReport(
                n=n,
                l2_squared=l2_squared,
                outside_integral=outside_integral,
                star_bound=star_bound,
                maximal_count=region.cell_count,
                maximal_bound=maximal_bound,
                inclusion=inclusion,
                level_set_constant=l2_squared / level_measure,
            )
        )
    return tuple(reports)


def atomic_e_family(dec: AtomicDecomposition) -> dict[DyadicRectangle, CellSet]:
    """E_{IxJ} = I x J ∩ F_n for I x J in R_n; each has fraction > 1/2."""
    family = {}
    for level in dec.levels:
        for rect in level.rectangles:
            family[rect] = CellSet.from_rectangle(rect, dec.resolution).intersection(level.level_set)
    return family


def fefferman_stein_check(
    f: HaarExpansion,
    p: float,
    e_family: Mapping[DyadicRectangle, CellSet],
    epsilon: float,
    resolution: Optional[int] = None,
) -> FSCheckReport:
    """
    Both sides of ||f||_{H^p} <= C_p(eps) ||(sum |f_IJ|^2 1_E_IJ)^(1/2)||_{L^p}.
    The constant is reported, never asserted against a value.
    """
    p = check_exponent(p)
    grid = f.default_resolution if resolution is None else resolution
    if f.is_zero:
        return FSCheckReport(epsilon=epsilon, lhs=0.0, rhs=0.0, implied_constant=None, degenerate=True)

    threshold = Fraction(epsilon)
    accumulated = np.zeros((1 << grid, 1 << grid))
    for rect, value in f.coeffs.items():
        subset = e_family.get(rect)
        if subset is None:
            raise PreconditionError(f"no set E given for rectangle {rect}")
        if subset.resolution != grid:
            raise ResolutionError(f"E for {rect} has grid exponent {subset.resolution}, expected {grid}")
        inside = int(np.count_nonzero(subset.mask[rect.cell_slices(grid)]))
        if inside != subset.cell_count:
            raise PreconditionError(f"E for {rect} is not contained in the rectangle")
        if not inside > threshold * rect_measure(rect, grid):
            raise PreconditionError(f"E for {rect} covers {inside}/{rect_measure(rect, grid)} <= epsilon")
        accumulated[subset.mask] += value * value

    lhs = hp_norm(f, p, grid)
    rhs = GridFunction(grid, accumulated ** (p / 2.0)).integral() ** (1.0 / p)
    ensure(rhs > 0.0, "Fefferman-Stein right-hand side is positive")
    ensure_le(rhs, lhs, "restricted square function does not exceed S(f)")
    return FSCheckReport(epsilon=float(epsilon), lhs=lhs, rhs=rhs, implied_constant=lhs / rhs)
