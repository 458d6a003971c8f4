"""
Dyadic intervals, rectangles and grid-cell sets on the unit square.

Every set measure is carried as an integer number of cells of side 2^-G, so
comparisons such as |I x J ∩ F| > |I x J| / 2 are integer comparisons.
Grid arrays are indexed [s-cell, t-cell] and flattened row-major.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np
from scipy import sparse

from .errors import DomainError, ResolutionError


@dataclass(frozen=True, order=True)
class DyadicInterval:
    """[index * 2^-level, (index + 1) * 2^-level)"""

    level: int
    index: int

    def __post_init__(self) -> None:
        if self.level < 0:
            raise DomainError(f"interval level must be nonnegative, got {self.level}")
        if not 0 <= self.index < (1 << self.level):
            raise DomainError(f"interval index {self.index} outside [0, 2^{self.level})")

    @property
    def measure(self) -> Fraction:
        return Fraction(1, 1 << self.level)

    @property
    def left(self) -> Fraction:
        return Fraction(self.index, 1 << self.level)

    def cell_range(self, resolution: int) -> tuple[int, int]:
        if self.level > resolution:
            raise ResolutionError(f"interval level {self.level} exceeds grid exponent {resolution}")
        shift = resolution - self.level
        return self.index << shift, (self.index + 1) << shift

    def contains(self, other: "DyadicInterval") -> bool:
        if other.level < self.level:
            return False
        return other.index >> (other.level - self.level) == self.index

    def children(self) -> tuple["DyadicInterval", "DyadicInterval"]:
        return (
            DyadicInterval(self.level + 1, 2 * self.index),
            DyadicInterval(self.level + 1, 2 * self.index + 1),
        )

    def __str__(self) -> str:
        return f"[{self.left},{self.left + self.measure})"


@dataclass(frozen=True, order=True)
class DyadicRectangle:
    iside: DyadicInterval
    jside: DyadicInterval

    @classmethod
    def of(cls, i_level: int, i_index: int, j_level: int, j_index: int) -> "DyadicRectangle":
        return cls(DyadicInterval(i_level, i_index), DyadicInterval(j_level, j_index))

    @classmethod
    def unit(cls) -> "DyadicRectangle":
        return cls.of(0, 0, 0, 0)

    @property
    def levels(self) -> tuple[int, int]:
        return self.iside.level, self.jside.level

    @property
    def max_level(self) -> int:
        return max(self.iside.level, self.jside.level)

    @property
    def measure(self) -> Fraction:
        return self.iside.measure * self.jside.measure

    @property
    def area(self) -> float:
        """|I||J| as a float; exact because it is a power of two."""
        return math.ldexp(1.0, -(self.iside.level + self.jside.level))

    def cell_slices(self, resolution: int) -> tuple[slice, slice]:
        s0, s1 = self.iside.cell_range(resolution)
        t0, t1 = self.jside.cell_range(resolution)
        return slice(s0, s1), slice(t0, t1)

    def contains(self, other: "DyadicRectangle") -> bool:
        return self.iside.contains(other.iside) and self.jside.contains(other.jside)

    def __str__(self) -> str:
        return f"{self.iside}x{self.jside}"


def all_rectangles(max_level: int) -> Iterator[DyadicRectangle]:
    """Every dyadic rectangle with both side levels <= max_level, in sorted order."""
    intervals = [
        DyadicInterval(level, index)
        for level in range(max_level + 1)
        for index in range(1 << level)
    ]
    for iside in intervals:
        for jside in intervals:
            yield DyadicRectangle(iside, jside)


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class CellSet:
    """A subset of the 2^G x 2^G grid cells."""

    resolution: int
    mask: np.ndarray

    def __post_init__(self) -> None:
        side = 1 << self.resolution
        mask = np.asarray(self.mask, dtype=bool)
        if mask.shape != (side, side):
            raise ResolutionError(f"mask shape {mask.shape} does not match grid exponent {self.resolution}")
        object.__setattr__(self, "mask", _frozen(mask))

    @classmethod
    def empty(cls, resolution: int) -> "CellSet":
        side = 1 << resolution
        return cls(resolution, np.zeros((side, side), dtype=bool))

    @classmethod
    def full(cls, resolution: int) -> "CellSet":
        side = 1 << resolution
        return cls(resolution, np.ones((side, side), dtype=bool))

    @classmethod
    def from_rectangle(cls, rect: DyadicRectangle, resolution: int) -> "CellSet":
        side = 1 << resolution
        mask = np.zeros((side, side), dtype=bool)
        mask[rect.cell_slices(resolution)] = True
        return cls(resolution, mask)

    @property
    def side(self) -> int:
        return 1 << self.resolution

    @cached_property
    def cell_count(self) -> int:
        return int(np.count_nonzero(self.mask))

    @property
    def measure(self) -> Fraction:
        return Fraction(self.cell_count, 1 << (2 * self.resolution))

    def _same_grid(self, other: "CellSet") -> None:
        if other.resolution != self.resolution:
            raise ResolutionError(f"grid exponents differ: {self.resolution} vs {other.resolution}")

    def union(self, other: "CellSet") -> "CellSet":
        self._same_grid(other)
        return CellSet(self.resolution, self.mask | other.mask)

    def intersection(self, other: "CellSet") -> "CellSet":
        self._same_grid(other)
        return CellSet(self.resolution, self.mask & other.mask)

    def complement(self) -> "CellSet":
        return CellSet(self.resolution, ~self.mask)

    def issubset(self, other: "CellSet") -> bool:
        self._same_grid(other)
        return not bool(np.any(self.mask & ~other.mask))

    def refine(self) -> "CellSet":
        """The same point set on the grid with exponent G + 1."""
        return CellSet(self.resolution + 1, np.repeat(np.repeat(self.mask, 2, axis=0), 2, axis=1))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CellSet):
            return NotImplemented
        return self.resolution == other.resolution and bool(np.array_equal(self.mask, other.mask))

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True, eq=False)
class GridFunction:
    """A function constant on each cell of the 2^G x 2^G grid."""

    resolution: int
    values: np.ndarray

    def __post_init__(self) -> None:
        side = 1 << self.resolution
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != (side, side):
            raise ResolutionError(f"values shape {values.shape} does not match grid exponent {self.resolution}")
        object.__setattr__(self, "values", _frozen(values))

    @classmethod
    def constant(cls, resolution: int, value: float) -> "GridFunction":
        side = 1 << resolution
        return cls(resolution, np.full((side, side), float(value)))

    @property
    def side(self) -> int:
        return 1 << self.resolution

    def integral(self, where: CellSet | None = None) -> float:
        values = self.values if where is None else self.values[where.mask]
        return math.ldexp(math.fsum(np.ravel(values)), -2 * self.resolution)

    def lp_norm(self, p: float) -> float:
        if p <= 0:
            raise DomainError(f"Lp exponent must be positive, got {p}")
        return GridFunction(self.resolution, np.abs(self.values) ** p).integral() ** (1.0 / p)

    def super_level_set(self, threshold: float) -> CellSet:
        return CellSet(self.resolution, self.values > threshold)


def rect_measure(rect: DyadicRectangle, resolution: int) -> int:
    """Number of grid cells covered by `rect`; its measure is that count times 4^-G."""
    if rect.max_level > resolution:
        raise ResolutionError(f"rectangle levels {rect.levels} exceed grid exponent {resolution}")
    return 1 << (2 * resolution - rect.iside.level - rect.jside.level)


def intersect_count(rect: DyadicRectangle, cells: CellSet) -> int:
    return int(np.count_nonzero(cells.mask[rect.cell_slices(cells.resolution)]))


def union_pointset(rects: Iterable[DyadicRectangle], resolution: int) -> CellSet:
    side = 1 << resolution
    mask = np.zeros((side, side), dtype=bool)
    for rect in rects:
        mask[rect.cell_slices(resolution)] = True
    return CellSet(resolution, mask)


# Entries are keyed by support tuple; the suite clears the cache after each fixture.
INDICATOR_CACHE_SIZE = 8


@lru_cache(maxsize=INDICATOR_CACHE_SIZE)
def indicator_matrix(rects: tuple[DyadicRectangle, ...], resolution: int) -> sparse.csr_matrix:
    """
    Sparse (4^G x len(rects)) matrix whose column j is the indicator of rects[j]
    on the flattened grid. Used for batched square functions and cell counts.
    """
    side = 1 << resolution
    rows: list[np.ndarray] = []
    cols: list[np.ndarray] = []
    for column, rect in enumerate(rects):
        s0, s1 = rect.iside.cell_range(resolution)
        t0, t1 = rect.jside.cell_range(resolution)
        cells = (np.arange(s0, s1)[:, None] * side + np.arange(t0, t1)[None, :]).ravel()
        rows.append(cells)
        cols.append(np.full(cells.size, column))
    if rows:
        row_index = np.concatenate(rows)
        col_index = np.concatenate(cols)
    else:
        row_index = col_index = np.zeros(0, dtype=np.int64)
    data = np.ones(row_index.size, dtype=np.int8)
    return sparse.csr_matrix((data, (row_index, col_index)), shape=(side * side, len(rects)))


def intersect_counts(rects: Sequence[DyadicRectangle], cells: CellSet) -> np.ndarray:
    """intersect_count for many rectangles at once (int64 vector)."""
    matrix = indicator_matrix(tuple(rects), cells.resolution)
    return np.asarray(matrix.T @ cells.mask.ravel().astype(np.int64), dtype=np.int64)
