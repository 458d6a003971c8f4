import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from biharp.core.atomic import classify
from biharp.core.errors import DomainError, PreconditionError
from biharp.core.haar import HaarExpansion, MultiplierSequence
from biharp.core.pietsch import (
    ConstantSummary,
    DominationEvaluator,
    Normalization,
    adversarial_search,
    domination_check,
    estimate_ap,
    pietsch_weights,
    two_summing_check,
)

from conftest import QUARTER, UNIT
from strategies import expansions, exponents

H1_FIXTURE = 0.75 + math.sqrt(10.0) / 4.0


def weights_for(f, p, **kwargs):
    return pietsch_weights(f, classify(f, p), **kwargs)


def test_weights_of_two_coefficient_at_p1(two_coefficient):
    w = weights_for(two_coefficient, 1.0)
    assert w.weights[UNIT] == pytest.approx(4.0 / 7.0, rel=1e-12)
    assert w.weights[QUARTER] == pytest.approx(3.0 / 7.0, rel=1e-12)
    assert w.domination_constant == pytest.approx(1.75)
    assert dict(w.level_totals) == pytest.approx({-1: 4.0 / 7.0, 1: 3.0 / 7.0})
    assert w.assertable


def test_weights_of_two_coefficient_at_p2(two_coefficient):
    w = weights_for(two_coefficient, 2.0)
    assert w.weights[UNIT] == pytest.approx(1.0 / 3.25, rel=1e-12)
    assert w.weights[QUARTER] == pytest.approx(2.25 / 3.25, rel=1e-12)


@given(expansions(), exponents)
def test_b_normalized_weights_sum_to_one(f, p):
    w = weights_for(f, p)
    assert w.total() == pytest.approx(1.0, abs=1e-12)
    assert all(value > 0 for value in w.weights.values())


@given(expansions(), exponents, st.sampled_from((1e-3, 0.5, 7.0, 1e3)))
def test_weights_are_scale_invariant(f, p, c):
    base = weights_for(f, p)
    scaled = weights_for(f.scale(c), p)
    for rect, value in base.weights.items():
        assert scaled.weights[rect] == pytest.approx(value, rel=1e-9)


def test_domination_at_constant_phi(two_coefficient):
    w = weights_for(two_coefficient, 1.0)
    report = domination_check(two_coefficient, 1.0, w, MultiplierSequence.constant(1.0))
    assert report.lhs == pytest.approx(H1_FIXTURE)
    assert report.rhs == pytest.approx(1.75)
    assert report.ratio == pytest.approx(H1_FIXTURE / 1.75, rel=1e-9)
    assert report.ratio == pytest.approx(0.8803, abs=1e-4)


def test_domination_is_an_identity_at_p2(two_coefficient):
    w = weights_for(two_coefficient, 2.0)
    phi = MultiplierSequence({UNIT: -0.3, QUARTER: 2.0})
    assert domination_check(two_coefficient, 2.0, w, phi).ratio == pytest.approx(1.0, rel=1e-9)


@given(expansions(max_terms=6), st.integers(0, 2**32 - 1))
def test_every_multiplier_attains_the_bound_at_p2(f, seed):
    w = weights_for(f, 2.0)
    rng = np.random.default_rng(seed)
    for row in rng.standard_normal((5, len(f))):
        phi = MultiplierSequence.from_values(f.support, row)
        assert domination_check(f, 2.0, w, phi).ratio == pytest.approx(1.0, rel=1e-9)
    ratios, _ = DominationEvaluator(f, w).ratios(rng.standard_normal((20, len(f))))
    assert ratios == pytest.approx(np.ones(20), rel=1e-9)


def test_adversarial_search_records_the_lowest_ratio(two_coefficient):
    at_two = adversarial_search(two_coefficient, 2.0, weights_for(two_coefficient, 2.0), iterations=120, seed=4)
    assert at_two.lowest_ratio == pytest.approx(1.0, rel=1e-9)
    at_one = adversarial_search(two_coefficient, 1.0, weights_for(two_coefficient, 1.0), iterations=120, seed=4)
    assert at_one.lowest_ratio < 1.0


def test_domination_rejects_mismatched_p(two_coefficient):
    w = weights_for(two_coefficient, 1.0)
    with pytest.raises(DomainError):
        domination_check(two_coefficient, 1.5, w, MultiplierSequence.constant(1.0))


@given(expansions(max_terms=6), exponents, st.integers(0, 2**32 - 1))
def test_random_multipliers_are_dominated(f, p, seed):
    w = weights_for(f, p)
    rng = np.random.default_rng(seed)
    for _ in range(5):
        phi = MultiplierSequence.from_values(f.support, rng.standard_normal(len(f)))
        assert domination_check(f, p, w, phi).ratio <= 1.0 + 1e-9


def test_adversarial_search_stays_below_one(two_coefficient):
    w = weights_for(two_coefficient, 1.0)
    result = adversarial_search(two_coefficient, 1.0, w, iterations=400, seed=7)
    assert result.worst_ratio <= 1.0 + 1e-9
    assert result.worst_ratio >= H1_FIXTURE / 1.75 - 1e-12
    assert result.evaluations <= 400
    assert result.operator_ratio <= 1.0 + 1e-9


def test_adversarial_search_is_deterministic(two_coefficient):
    w = weights_for(two_coefficient, 0.5)
    first = adversarial_search(two_coefficient, 0.5, w, iterations=300, seed=11)
    second = adversarial_search(two_coefficient, 0.5, w, iterations=300, seed=11)
    assert first.worst_ratio == second.worst_ratio
    assert first.evaluations == second.evaluations


def test_adversarial_search_needs_b_normalized(two_coefficient):
    w = weights_for(two_coefficient, 1.0, mode=Normalization.AP_NORMALIZED, a_p=2.0)
    with pytest.raises(PreconditionError):
        adversarial_search(two_coefficient, 1.0, w, iterations=50)


def test_two_summing(two_coefficient):
    w = weights_for(two_coefficient, 1.0)
    phis = [MultiplierSequence.constant(1.0), MultiplierSequence({UNIT: 1.0}), MultiplierSequence({QUARTER: -1.0})]
    report = two_summing_check(two_coefficient, 1.0, w, phis)
    assert report.sequences == 3
    assert report.rhs == pytest.approx(1.75 * math.sqrt(2.0))
    assert report.slack >= 0


def test_two_summing_of_nothing(two_coefficient):
    w = weights_for(two_coefficient, 1.0)
    report = two_summing_check(two_coefficient, 1.0, w, [])
    assert (report.lhs, report.rhs, report.sequences) == (0.0, 0.0, 0)


def test_ap_mode_below_the_sample_is_over_budget(two_coefficient):
    w = weights_for(two_coefficient, 1.0, mode=Normalization.AP_NORMALIZED, a_p=1.0)
    assert w.over_budget
    assert not w.assertable
    assert w.total() > 1.0
    report = domination_check(two_coefficient, 1.0, w, MultiplierSequence.constant(1.0))
    assert report.estimate_only


def test_ap_mode_above_the_sample(two_coefficient):
    w = weights_for(two_coefficient, 1.0, mode=Normalization.AP_NORMALIZED, a_p=2.0)
    assert not w.over_budget
    assert w.total() == pytest.approx(1.75 / (2.0 * H1_FIXTURE))
    assert w.display_constant == pytest.approx(2.0 * H1_FIXTURE)


def test_ap_mode_needs_a_constant(two_coefficient):
    with pytest.raises(DomainError):
        weights_for(two_coefficient, 1.0, mode=Normalization.AP_NORMALIZED)


def test_estimate_ap(two_coefficient, unit_atom):
    summary = estimate_ap([two_coefficient, unit_atom.scale(5.0)], 1.0)
    assert summary.minimum == pytest.approx(1.0)
    assert summary.maximum == pytest.approx(1.75 / H1_FIXTURE)
    assert summary.maximum == pytest.approx(1.1359, abs=1e-4)


def test_constant_summary_of_nothing():
    summary = ConstantSummary.of([])
    assert summary.samples == ()
    assert math.isnan(summary.median)


def test_single_atom_ratio_is_one():
    f = HaarExpansion.single(UNIT, -2.5)
    for p in (0.5, 1.0, 1.5, 2.0):
        w = weights_for(f, p)
        assert domination_check(f, p, w, MultiplierSequence.constant(3.0)).ratio == pytest.approx(1.0)
