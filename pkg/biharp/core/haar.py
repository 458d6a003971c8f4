"""
Finite anisotropic 2D Haar expansions f = sum f_IJ h_{IxJ}.

h_I is +1 on the left half of I and -1 on the right half; h_{IxJ}(s, t) = h_I(s) h_J(t).
The H^p quasi-norm is the L^p norm of the square function
S(f) = (sum f_IJ^2 1_{IxJ})^(1/2), which is constant on the cells of any grid
with exponent G >= maxLevel(f).
"""

import math
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Mapping, Optional

import numpy as np

from .dyadic import DyadicRectangle, GridFunction, indicator_matrix
from .errors import ResolutionError, check_exponent, check_theta


@dataclass(frozen=True, eq=False)
class HaarExpansion:
    coeffs: Mapping[DyadicRectangle, float]
    max_level: Optional[int] = None

    def __post_init__(self) -> None:
        cleaned = {rect: float(value) for rect, value in sorted(self.coeffs.items()) if value != 0.0}
        needed = max((rect.max_level for rect in cleaned), default=0)
        if self.max_level is None:
            max_level = needed
        elif self.max_level < needed:
            raise ResolutionError(f"coefficient at level {needed} exceeds maxLevel {self.max_level}")
        else:
            max_level = self.max_level
        object.__setattr__(self, "coeffs", MappingProxyType(cleaned))
        object.__setattr__(self, "max_level", max_level)

    @classmethod
    def zero(cls, max_level: int = 0) -> "HaarExpansion":
        return cls({}, max_level)

    @classmethod
    def single(cls, rect: DyadicRectangle, value: float = 1.0, max_level: Optional[int] = None) -> "HaarExpansion":
        return cls({rect: value}, max_level)

    @cached_property
    def support(self) -> tuple[DyadicRectangle, ...]:
        return tuple(self.coeffs)

    @cached_property
    def values(self) -> np.ndarray:
        """Coefficients aligned with `support`."""
        values = np.array([self.coeffs[rect] for rect in self.support], dtype=np.float64)
        values.setflags(write=False)
        return values

    @cached_property
    def areas(self) -> np.ndarray:
        """|I||J| aligned with `support`."""
        return np.array([rect.area for rect in self.support], dtype=np.float64)

    @property
    def default_resolution(self) -> int:
        return self.max_level + 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, rect: DyadicRectangle) -> float:
        return self.coeffs.get(rect, 0.0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HaarExpansion):
            return NotImplemented
        return dict(self.coeffs) == dict(other.coeffs)

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: "HaarExpansion") -> "HaarExpansion":
        total = dict(self.coeffs)
        for rect, value in other.coeffs.items():
            total[rect] = total.get(rect, 0.0) + value
        return HaarExpansion(total, max(self.max_level, other.max_level))

    def scale(self, factor: float) -> "HaarExpansion":
        return HaarExpansion({rect: factor * value for rect, value in self.coeffs.items()}, self.max_level)

    def abs(self) -> "HaarExpansion":
        """Lattice modulus |f|."""
        return HaarExpansion({rect: abs(value) for rect, value in self.coeffs.items()}, self.max_level)

    def restrict(self, rects: Iterable[DyadicRectangle]) -> "HaarExpansion":
        keep = set(rects)
        return HaarExpansion({rect: v for rect, v in self.coeffs.items() if rect in keep}, self.max_level)


@dataclass(frozen=True, eq=False)
class MultiplierSequence:
    """
    A bounded sequence phi indexed by dyadic rectangles. Rectangles without an
    explicit entry take the value `fill`.
    """

    entries: Mapping[DyadicRectangle, float] = field(default_factory=dict)
    fill: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", MappingProxyType({r: float(v) for r, v in self.entries.items()}))

    @classmethod
    def constant(cls, value: float) -> "MultiplierSequence":
        return cls({}, fill=value)

    @classmethod
    def from_values(cls, rects: Iterable[DyadicRectangle], values: Iterable[float]) -> "MultiplierSequence":
        return cls(dict(zip(rects, values)))

    @property
    def sup_norm(self) -> float:
        return max([abs(v) for v in self.entries.values()] + [abs(self.fill)])

    def __getitem__(self, rect: DyadicRectangle) -> float:
        return self.entries.get(rect, self.fill)

    def on(self, rects: Iterable[DyadicRectangle]) -> np.ndarray:
        return np.array([self[rect] for rect in rects], dtype=np.float64)

    def abs(self) -> "MultiplierSequence":
        return MultiplierSequence({r: abs(v) for r, v in self.entries.items()}, abs(self.fill))


def _resolution(f: HaarExpansion, resolution: Optional[int], minimum: int) -> int:
    if resolution is None:
        return f.default_resolution
    if resolution < minimum:
        raise ResolutionError(f"grid exponent {resolution} is below the required {minimum}")
    return resolution


def evaluate(f: HaarExpansion, resolution: Optional[int] = None) -> GridFunction:
    """Pointwise values of f on the grid (needs G >= maxLevel + 1)."""
    grid = _resolution(f, resolution, f.max_level + 1)
    side = 1 << grid
    values = np.zeros((side, side))
    for rect, coefficient in f.coeffs.items():
        s_slice, t_slice = rect.cell_slices(grid)
        h_i = np.ones(s_slice.stop - s_slice.start)
        h_i[h_i.size // 2:] = -1.0
        h_j = np.ones(t_slice.stop - t_slice.start)
        h_j[h_j.size // 2:] = -1.0
        values[s_slice, t_slice] += coefficient * np.outer(h_i, h_j)
    return GridFunction(grid, values)


def _squared_sums(rects: tuple[DyadicRectangle, ...], squares: np.ndarray, resolution: int) -> np.ndarray:
    """sum_r squares[..., r] 1_r on the flattened grid; squares may be (n,) or (k, n)."""
    matrix = indicator_matrix(rects, resolution)
    if squares.ndim == 1:
        return np.asarray(matrix @ squares)
    return np.asarray((matrix @ squares.T).T)


def square_function_squared(f: HaarExpansion, resolution: Optional[int] = None) -> GridFunction:
    grid = _resolution(f, resolution, f.max_level)
    side = 1 << grid
    if f.is_zero:
        return GridFunction.constant(grid, 0.0)
    flat = _squared_sums(f.support, f.values ** 2, grid)
    return GridFunction(grid, flat.reshape(side, side))


def square_function(f: HaarExpansion, resolution: Optional[int] = None) -> GridFunction:
    squared = square_function_squared(f, resolution)
    return GridFunction(squared.resolution, np.sqrt(squared.values))


def hp_norm(f: HaarExpansion, p: float, resolution: Optional[int] = None) -> float:
    p = check_exponent(p)
    squared = square_function_squared(f, resolution)
    if f.is_zero:
        return 0.0
    return GridFunction(squared.resolution, squared.values ** (p / 2.0)).integral() ** (1.0 / p)


def batch_hp_norms(
    rects: tuple[DyadicRectangle, ...],
    coefficient_rows: np.ndarray,
    p: float,
    resolution: int,
) -> np.ndarray:
    """
    H^p norms of the expansions sum_r coefficient_rows[k, r] h_r, one per row.
    Quasi-norms for p < 1; exponent checks are the caller's responsibility.
    """
    rows = np.atleast_2d(np.asarray(coefficient_rows, dtype=np.float64))
    if not rects:
        return np.zeros(rows.shape[0])
    squared = _squared_sums(rects, rows ** 2, resolution)
    cells = float(1 << (2 * resolution))
    return (np.sum(squared ** (p / 2.0), axis=1) / cells) ** (1.0 / p)


def h2_norm_coeff(f: HaarExpansion) -> float:
    """(sum f_IJ^2 |I||J|)^(1/2), computed from coefficients only."""
    return math.sqrt(math.fsum(f.values ** 2 * f.areas))


def multiplier_apply(f: HaarExpansion, phi: MultiplierSequence) -> HaarExpansion:
    return HaarExpansion({rect: phi[rect] * value for rect, value in f.coeffs.items()}, f.max_level)


def lattice_interpolant(x: HaarExpansion, y: HaarExpansion, theta: float) -> HaarExpansion:
    """Coefficientwise |x|^(1-theta) |y|^theta; zero wherever either factor is zero."""
    theta = check_theta(theta)
    coeffs = {
        rect: abs(value) ** (1.0 - theta) * abs(y[rect]) ** theta
        for rect, value in x.coeffs.items()
        if y[rect] != 0.0
    }
    return HaarExpansion(coeffs, max(x.max_level, y.max_level))
