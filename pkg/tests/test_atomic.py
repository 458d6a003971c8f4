import math

import numpy as np
import pytest
from hypothesis import given

from biharp.core.atomic import (
    atomic_e_family,
    classify,
    fefferman_stein_check,
    level_set,
    majority_region,
    strong_maximal,
    verify_atomic_chain,
    verify_l2_atom_bound,
)
from biharp.core.dyadic import CellSet, DyadicRectangle
from biharp.core.errors import DegenerateInputError, PreconditionError
from biharp.core.haar import HaarExpansion

from conftest import QUARTER, UNIT
from strategies import expansions, exponents


def test_level_sets_of_two_coefficient(two_coefficient):
    quarter = CellSet.from_rectangle(QUARTER, 2)
    assert level_set(two_coefficient, 0) == quarter
    assert level_set(two_coefficient, 1) == quarter
    assert level_set(two_coefficient, 2) == CellSet.empty(2)
    assert level_set(two_coefficient, -1) == CellSet.full(2)


def test_classify_two_coefficient_at_p1(two_coefficient):
    dec = classify(two_coefficient, 1.0)
    assert dec.assignment == {UNIT: -1, QUARTER: 1}
    assert [level.n for level in dec.levels] == [-1, 1]
    assert dec.level(1).star_measure == 0.25
    assert dec.level(0) is None
    assert dec.b == pytest.approx(1.75, rel=1e-12)
    assert dec.ap_sample == pytest.approx(1.75 / (0.75 + math.sqrt(10.0) / 4.0), rel=1e-9)


def test_classify_two_coefficient_at_p2(two_coefficient):
    assert classify(two_coefficient, 2.0).b == pytest.approx(3.25, rel=1e-12)


@pytest.mark.parametrize("c,n", [(1.0, -1), (-3.0, 1), (0.3, -2), (4.0, 1)])
def test_single_atom_level(c, n):
    dec = classify(HaarExpansion.single(UNIT, c), 1.0)
    assert dec.assignment == {UNIT: n}
    assert dec.ap_sample == pytest.approx(1.0)


def test_classify_zero_is_degenerate():
    with pytest.raises(DegenerateInputError):
        classify(HaarExpansion.zero(1), 1.0)


def test_atomic_chain_of_two_coefficient(two_coefficient):
    report = verify_atomic_chain(classify(two_coefficient, 1.0), two_coefficient)
    assert report.norm_p == pytest.approx(0.75 + math.sqrt(10.0) / 4.0)
    assert report.atom_sum == pytest.approx(1.75)
    assert report.b == pytest.approx(1.75)


@given(expansions(), exponents)
def test_classification_is_a_partition(f, p):
    dec = classify(f, p)
    assert set(dec.assignment) == set(f.support)
    assert sum(len(level.rectangles) for level in dec.levels) == len(f)
    assert dec.atoms_sum() == f
    verify_atomic_chain(dec, f)


@given(expansions(), exponents)
def test_level_sets_are_nested(f, p):
    dec = classify(f, p)
    for level in dec.levels:
        assert level.next_level_set.issubset(level.level_set)
        # majority in F_n, not in F_{n+1}
        for rect in level.rectangles:
            size = rect.measure * (1 << (2 * dec.resolution))
            inside = np.count_nonzero(level.level_set.mask[rect.cell_slices(dec.resolution)])
            above = np.count_nonzero(level.next_level_set.mask[rect.cell_slices(dec.resolution)])
            assert 2 * inside > size
            assert 2 * above <= size


def test_strong_maximal_of_a_cell():
    cells = CellSet.from_rectangle(DyadicRectangle.of(1, 0, 1, 0), 1)
    assert strong_maximal(cells).values.tolist() == [[1.0, 0.5], [0.5, 0.25]]
    assert majority_region(cells) == cells


@given(expansions(max_depth=2))
def test_majority_region_matches_strong_maximal(f):
    cells = level_set(f, 0)
    expected = strong_maximal(cells).values > 0.5
    assert np.array_equal(majority_region(cells).mask, expected)


def test_l2_atom_bound_of_two_coefficient(two_coefficient):
    reports = verify_l2_atom_bound(classify(two_coefficient, 1.0))
    assert [r.n for r in reports] == [-1, 1]
    low, high = reports
    assert low.l2_squared == pytest.approx(1.0)
    assert low.outside_integral == pytest.approx(0.75)
    assert high.l2_squared == pytest.approx(2.25)
    assert all(r.inclusion for r in reports)


@given(expansions(), exponents)
def test_l2_atom_bound_holds(f, p):
    verify_l2_atom_bound(classify(f, p))


def test_fefferman_stein_with_whole_rectangles(two_coefficient):
    family = {rect: CellSet.from_rectangle(rect, 2) for rect in two_coefficient.support}
    report = fefferman_stein_check(two_coefficient, 1.0, family, 0.5)
    assert report.implied_constant == pytest.approx(1.0)
    assert not report.degenerate


@given(expansions(), exponents)
def test_fefferman_stein_with_atomic_sets(f, p):
    dec = classify(f, p)
    report = fefferman_stein_check(f, p, atomic_e_family(dec), 0.5, dec.resolution)
    assert report.implied_constant >= 1.0 - 1e-9


def test_fefferman_stein_zero_is_degenerate():
    report = fefferman_stein_check(HaarExpansion.zero(1), 1.0, {}, 0.5)
    assert report.degenerate
    assert report.implied_constant is None


def test_fefferman_stein_rejects_small_sets(unit_atom):
    tiny = CellSet.from_rectangle(QUARTER, 1)
    with pytest.raises(PreconditionError):
        fefferman_stein_check(unit_atom, 1.0, {UNIT: tiny}, 0.5)
    with pytest.raises(PreconditionError):
        fefferman_stein_check(unit_atom, 1.0, {}, 0.5)
