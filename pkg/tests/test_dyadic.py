from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from biharp.core.dyadic import (
    CellSet,
    DyadicInterval,
    DyadicRectangle,
    GridFunction,
    all_rectangles,
    indicator_matrix,
    intersect_count,
    intersect_counts,
    rect_measure,
    union_pointset,
)
from biharp.core.errors import DomainError, ResolutionError


def test_interval_measure_and_children():
    interval = DyadicInterval(2, 3)
    assert interval.measure == Fraction(1, 4)
    assert interval.left == Fraction(3, 4)
    left, right = interval.children()
    assert (left.level, left.index, right.index) == (3, 6, 7)
    assert interval.contains(left) and not left.contains(interval)


@pytest.mark.parametrize("level,index", [(-1, 0), (0, 1), (2, 4), (3, -1)])
def test_interval_rejects_bad_indices(level, index):
    with pytest.raises(DomainError):
        DyadicInterval(level, index)


def test_cell_range_needs_fine_enough_grid():
    assert DyadicInterval(1, 1).cell_range(3) == (4, 8)
    with pytest.raises(ResolutionError):
        DyadicInterval(3, 0).cell_range(2)


def test_rectangle_measure_is_exact():
    rect = DyadicRectangle.of(1, 1, 2, 3)
    assert rect.measure == Fraction(1, 8)
    assert rect.area == 0.125
    assert rect_measure(rect, 3) == 8


def test_all_rectangles_counts():
    assert len(list(all_rectangles(0))) == 1
    assert len(list(all_rectangles(1))) == 9
    assert len(list(all_rectangles(2))) == 49


def test_cell_set_operations():
    quarter = CellSet.from_rectangle(DyadicRectangle.of(1, 0, 1, 0), 2)
    full = CellSet.full(2)
    assert quarter.cell_count == 4
    assert quarter.measure == Fraction(1, 4)
    assert quarter.issubset(full)
    assert quarter.union(quarter.complement()) == full
    assert quarter.intersection(quarter.complement()) == CellSet.empty(2)
    assert quarter.refine().measure == quarter.measure
    with pytest.raises(ResolutionError):
        quarter.union(CellSet.full(3))


def test_cell_set_mask_is_read_only():
    cells = CellSet.full(1)
    with pytest.raises(ValueError):
        cells.mask[0, 0] = False


def test_grid_function_integral_and_norm():
    values = np.array([[1.0, 3.0], [1.0, 3.0]])
    g = GridFunction(1, values)
    assert g.integral() == pytest.approx(2.0)
    assert g.lp_norm(2.0) == pytest.approx(np.sqrt(5.0))
    assert g.super_level_set(2.0).cell_count == 2
    with pytest.raises(ResolutionError):
        GridFunction(2, values)


def test_union_pointset_of_overlapping_rectangles():
    union = union_pointset([DyadicRectangle.of(1, 0, 0, 0), DyadicRectangle.of(0, 0, 1, 0)], 2)
    assert union.measure == Fraction(3, 4)


@given(st.integers(0, 3), st.data())
def test_intersect_counts_match_single_counts(depth, data):
    rects = list(all_rectangles(depth))
    grid = depth + 1
    side = 1 << grid
    mask = np.array(data.draw(st.lists(st.booleans(), min_size=side * side, max_size=side * side))).reshape(side, side)
    cells = CellSet(grid, mask)
    batch = intersect_counts(rects, cells)
    assert list(batch) == [intersect_count(rect, cells) for rect in rects]


def test_indicator_matrix_columns_cover_rectangles():
    rects = (DyadicRectangle.unit(), DyadicRectangle.of(2, 1, 1, 1))
    matrix = indicator_matrix(rects, 2).toarray()
    assert matrix.shape == (16, 2)
    assert matrix[:, 0].sum() == 16
    assert matrix[:, 1].sum() == rect_measure(rects[1], 2)


def _masks(data, grid):
    side = 1 << grid
    cells = data.draw(st.lists(st.booleans(), min_size=side * side, max_size=side * side))
    return CellSet(grid, np.array(cells).reshape(side, side))


@given(st.integers(0, 3), st.integers(0, 3), st.data())
def test_same_level_rectangles_are_disjoint_and_additive(a, b, data):
    grid = max(a, b) + 1
    indices = st.tuples(st.integers(0, (1 << a) - 1), st.integers(0, (1 << b) - 1))
    picks = data.draw(st.lists(indices, min_size=1, max_size=8, unique=True))
    rects = [DyadicRectangle.of(a, i, b, j) for i, j in picks]
    assert union_pointset(rects, grid).cell_count == sum(rect_measure(rect, grid) for rect in rects)


@given(st.integers(0, 3), st.data())
def test_intersect_count_is_monotone_in_the_point_set(depth, data):
    grid = depth + 1
    smaller = _masks(data, grid)
    larger = smaller.union(_masks(data, grid))
    assert smaller.issubset(larger)
    for rect in all_rectangles(depth):
        assert intersect_count(rect, smaller) <= intersect_count(rect, larger)


@given(st.integers(0, 3), st.data())
def test_refinement_multiplies_counts_by_four(depth, data):
    grid = depth + 1
    cells = _masks(data, grid)
    finer = cells.refine()
    assert finer.measure == cells.measure
    for rect in all_rectangles(depth):
        assert rect_measure(rect, grid + 1) == 4 * rect_measure(rect, grid)
        assert intersect_count(rect, finer) == 4 * intersect_count(rect, cells)
