"""
Brute-force recomputation of the main quantities for tiny expansions.

The oracle itself never touches numpy or the core grid code: cells are
enumerated one by one, containment is decided from dyadic indices, and
multipliers run over every nonzero pattern in {-1, 0, 1}^support. Cost is
exponential in the support size. tiny_fixtures draws seeded inputs within the
oracle limits.
"""

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Optional

from ..core.atomic import classify
from ..core.dyadic import DyadicRectangle, all_rectangles
from ..core.errors import DegenerateInputError, PreconditionError, check_exponent, ensure_le
from ..core.haar import HaarExpansion, MultiplierSequence
from ..core.pietsch import domination_check, pietsch_weights
from .ensembles import fixture_stream

MAX_COEFFS = 6
MAX_LEVEL = 2
AGREEMENT_TOL = 1e-9

Cell = tuple[int, int]


@dataclass(frozen=True)
class OracleRecord:
    p: float
    resolution: int
    norm: float
    assignment: dict[DyadicRectangle, int]
    level_norms: dict[int, float]
    b: float
    weights: dict[DyadicRectangle, float]
    ratios: dict[tuple[int, ...], float]


@dataclass(frozen=True)
class OracleComparison:
    record: OracleRecord
    max_discrepancy: float
    patterns: int


def _inside(rect: DyadicRectangle, cell: Cell, resolution: int) -> bool:
    s, t = cell
    return (
        s >> (resolution - rect.iside.level) == rect.iside.index
        and t >> (resolution - rect.jside.level) == rect.jside.index
    )


def _cells(resolution: int) -> list[Cell]:
    side = 2 ** resolution
    return [(s, t) for s in range(side) for t in range(side)]


def _squares(coeffs: dict[DyadicRectangle, float], resolution: int) -> dict[Cell, float]:
    return {
        cell: sum(value * value for rect, value in coeffs.items() if _inside(rect, cell, resolution))
        for cell in _cells(resolution)
    }


def _norm(coeffs: dict[DyadicRectangle, float], p: float, resolution: int) -> float:
    squares = _squares(coeffs, resolution)
    total = sum(value ** (p / 2) for value in squares.values() if value > 0)
    return (total / 4 ** resolution) ** (1 / p)


def brute_force_oracle(
    f: HaarExpansion,
    p: float,
    resolution: Optional[int] = None,
    max_coeffs: int = MAX_COEFFS,
) -> OracleRecord:
    p = check_exponent(p)
    if f.is_zero:
        raise DegenerateInputError("the oracle needs a nonzero expansion")
    if len(f) > max_coeffs or f.max_level > MAX_LEVEL:
        raise PreconditionError(
            f"oracle refuses {len(f)} coefficients at level {f.max_level} "
            f"(limits {max_coeffs} and {MAX_LEVEL})"
        )
    grid = f.max_level + 1 if resolution is None else resolution
    coeffs = dict(f.coeffs)
    squares = _squares(coeffs, grid)
    cells = _cells(grid)

    smallest = min(abs(v) for v in coeffs.values())
    largest = max(squares.values())
    low = math.floor(math.log2(smallest)) - 3
    high = math.ceil(math.log2(largest) / 2) + 2

    assignment = {}
    for rect in coeffs:
        mine = [cell for cell in cells if _inside(rect, cell, grid)]
        best = None
        for n in range(low, high + 1):
            hits = sum(1 for cell in mine if squares[cell] > 4.0 ** n)
            if 2 * hits > len(mine):
                best = n
        assignment[rect] = best

    b = 0.0
    level_norms = {}
    level_factors = {}
    for n in sorted(set(assignment.values())):
        members = [rect for rect in coeffs if assignment[rect] == n]
        star = [cell for cell in cells if any(_inside(rect, cell, grid) for rect in members)]
        star_measure = len(star) / 4 ** grid
        l2 = math.sqrt(sum(coeffs[rect] ** 2 * rect.area for rect in members))
        level_norms[n] = _norm({rect: coeffs[rect] for rect in members}, p, grid)
        level_factors[n] = star_measure ** (1 - p / 2) / l2 ** (2 - p)
        b += star_measure ** (1 - p / 2) * l2 ** p

    weights = {
        rect: level_factors[assignment[rect]] * coeffs[rect] ** 2 * rect.area / b
        for rect in coeffs
    }
    norm = _norm(coeffs, p, grid)

    ratios = {}
    support = list(coeffs)
    for pattern in itertools.product((-1, 0, 1), repeat=len(support)):
        if not any(pattern):
            continue
        applied = {rect: sign * coeffs[rect] for rect, sign in zip(support, pattern) if sign}
        lhs = _norm(applied, p, grid)
        rhs = b ** (1 / p) * math.sqrt(sum(sign * sign * weights[rect] for rect, sign in zip(support, pattern)))
        ratios[pattern] = lhs / rhs

    return OracleRecord(
        p=p,
        resolution=grid,
        norm=norm,
        assignment=assignment,
        level_norms=level_norms,
        b=b,
        weights=weights,
        ratios=ratios,
    )


def tiny_fixtures(
    count: int,
    seed: int = 0,
    max_coeffs: int = MAX_COEFFS,
    max_level: int = MAX_LEVEL,
) -> Iterator[HaarExpansion]:
    """
    Seeded expansions the oracle accepts: fixture i draws a depth in
    0..max_level, between 1 and max_coeffs distinct rectangles of that depth,
    and standard Gaussian coefficients.
    """
    if max_coeffs > MAX_COEFFS or max_level > MAX_LEVEL:
        raise PreconditionError(f"oracle fixtures are limited to {MAX_COEFFS} coefficients at level {MAX_LEVEL}")
    for index in range(count):
        stream = fixture_stream(seed, index)
        level = int(stream.integers(max_level + 1))
        rects = list(all_rectangles(level))
        size = 1 + int(stream.integers(min(max_coeffs, len(rects))))
        picks = stream.choice(len(rects), size=size, replace=False)
        values = stream.standard_normal(size)
        yield HaarExpansion({rects[int(k)]: float(v) for k, v in zip(picks, values)}, level)


def compare_with_main_path(f: HaarExpansion, p: float, resolution: Optional[int] = None) -> OracleComparison:
    """Run the oracle and the library on f; every quantity must agree to 1e-9 relative."""
    record = brute_force_oracle(f, p, resolution)
    grid = record.resolution
    dec = classify(f, p, grid)
    weights = pietsch_weights(f, dec)

    worst = 0.0

    def agree(main: float, oracle: float, label: str) -> None:
        nonlocal worst
        gap = abs(main - oracle) / max(1.0, abs(oracle))
        worst = max(worst, gap)
        ensure_le(gap, AGREEMENT_TOL, f"oracle agreement on {label}", rel=0.0)

    agree(float(len(dec.assignment)), float(len(record.assignment)), "classified rectangles")
    for rect, n in record.assignment.items():
        agree(float(dec.assignment[rect]), float(n), f"level of {rect}")
    agree(dec.norm, record.norm, "H^p norm")
    agree(dec.b, record.b, "B")
    for level in dec.levels:
        agree(level.hp_norm, record.level_norms[level.n], f"||f_{level.n}||")
    for rect, omega in record.weights.items():
        agree(weights.weights[rect], omega, f"omega at {rect}")

    support = f.support
    for pattern, ratio in record.ratios.items():
        phi = MultiplierSequence.from_values(support, pattern)
        report = domination_check(f, p, weights, phi, grid)
        agree(report.ratio, ratio, f"domination ratio at {pattern}")

    return OracleComparison(record=record, max_discrepancy=worst, patterns=len(record.ratios))
