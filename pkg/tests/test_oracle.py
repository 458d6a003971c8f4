import pytest

from biharp.core.dyadic import DyadicRectangle
from biharp.core.errors import PreconditionError
from biharp.core.haar import HaarExpansion
from biharp.harness.oracle import MAX_COEFFS, MAX_LEVEL, brute_force_oracle, compare_with_main_path, tiny_fixtures

from conftest import QUARTER, UNIT


def test_oracle_on_two_coefficient(two_coefficient):
    record = brute_force_oracle(two_coefficient, 1.0)
    assert record.assignment == {UNIT: -1, QUARTER: 1}
    assert record.b == pytest.approx(1.75)
    assert record.weights[UNIT] == pytest.approx(4.0 / 7.0)
    assert record.weights[QUARTER] == pytest.approx(3.0 / 7.0)
    assert len(record.ratios) == 8
    assert max(record.ratios.values()) <= 1.0 + 1e-12


def test_oracle_refuses_large_inputs():
    many = HaarExpansion({DyadicRectangle.of(1, i, 1, j): 1.0 + i + 2 * j for i in range(2) for j in range(2)})
    assert len(many) == 4
    brute_force_oracle(many, 1.0)
    with pytest.raises(PreconditionError):
        brute_force_oracle(many, 1.0, max_coeffs=3)
    with pytest.raises(PreconditionError):
        brute_force_oracle(HaarExpansion.single(DyadicRectangle.of(3, 0, 0, 0)), 1.0)


@pytest.mark.parametrize("p", [0.5, 1.0, 1.5, 2.0])
def test_oracle_agrees_on_two_coefficient(two_coefficient, p):
    comparison = compare_with_main_path(two_coefficient, p)
    assert comparison.patterns == 8
    assert comparison.max_discrepancy <= 1e-9


def test_tiny_fixtures_stay_within_oracle_limits():
    fixtures = list(tiny_fixtures(50, seed=11))
    assert len(fixtures) == 50
    assert all(1 <= len(f) <= MAX_COEFFS and f.max_level <= MAX_LEVEL for f in fixtures)
    assert {f.max_level for f in fixtures} == {0, 1, 2}
    assert [dict(f.coeffs) for f in tiny_fixtures(5, seed=11)] == [dict(f.coeffs) for f in fixtures[:5]]
    with pytest.raises(PreconditionError):
        next(tiny_fixtures(1, max_coeffs=MAX_COEFFS + 1))


def _agree_on(fixtures, p):
    for f in fixtures:
        comparison = compare_with_main_path(f, p)
        assert comparison.patterns == 3 ** len(f) - 1
        assert comparison.max_discrepancy <= 1e-9


@pytest.mark.parametrize("p", [0.5, 1.0, 1.5, 2.0])
def test_oracle_agrees_on_tiny_fixtures(p):
    _agree_on(tiny_fixtures(8, seed=3), p)


@pytest.mark.slow
@pytest.mark.parametrize("p", [0.5, 1.0, 1.5, 2.0])
def test_oracle_agrees_on_fifty_tiny_fixtures(p):
    _agree_on(tiny_fixtures(50, seed=2024), p)
