"""Closed forms, tail bounds, and the exact absorption solvers."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tlonemax import (
    MutationKind,
    aux_ineq,
    chernoff_additive,
    chernoff_geometric,
    chernoff_lower,
    g_fn,
    h1,
    h2,
    lemma2_bruteforce,
    lemma2_exact,
    markov_full_absorption,
    markov_lumped_absorption,
    min_population,
    theorem1_bound,
    theorem2_bound,
    theorem3_bound,
)
from tlonemax.oracle import (
    EVENT_I,
    EVENT_II,
    OPT,
    g_log,
    h1_log,
    h2_log,
    lemma2_lower_bound,
)


class TestConditionalProbability:
    def test_frozen_exact_values(self):
        # independently verified against the 2^n mask enumeration
        assert lemma2_exact(2, 1) == Fraction(1)
        assert lemma2_exact(4, 2) == Fraction(20, 23)
        assert lemma2_exact(6, 3) == Fraction(2103, 2518)
        assert lemma2_exact(5, 5) == Fraction(1280, 2101)

    def test_single_zero_makes_single_gain_certain(self):
        # with one zero left the gain can never exceed one
        for n in range(2, 9):
            assert lemma2_exact(n, 1) == 1

    def test_exact_equals_bruteforce(self):
        for n in range(2, 9):
            for a in range(1, n + 1):
                assert lemma2_exact(n, a) == lemma2_bruteforce(n, a)

    def test_lower_bound_holds(self):
        for n in range(2, 13):
            for a in range(1, n + 1):
                assert float(lemma2_exact(n, a)) > lemma2_lower_bound(n, a)

    def test_is_a_probability(self):
        for n in range(2, 10):
            for a in range(1, n + 1):
                assert 0 < lemma2_exact(n, a) <= 1

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            lemma2_exact(4, 0)
        with pytest.raises(ValueError):
            lemma2_exact(4, 5)
        with pytest.raises(ValueError):
            lemma2_bruteforce(15, 1)


class TestTailBounds:
    def test_zero_slack_gives_trivial_bound(self):
        assert chernoff_lower(12.0, 0.0) == 1.0
        assert chernoff_additive([1.0, 2.0], 0.0) == 1.0
        assert chernoff_geometric(5, 0.3, 0.0, "upper") == 1.0
        assert chernoff_geometric(5, 0.3, 0.0, "lower") == 1.0

    def test_known_values(self):
        assert chernoff_lower(8.0, 0.5) == pytest.approx(math.exp(-1.0))
        assert chernoff_additive([2.0, 2.0], 1.0) == pytest.approx(math.exp(-0.5))
        assert chernoff_geometric(11, 0.5, 1.0, "upper") == pytest.approx(math.exp(-2.5))
        assert chernoff_geometric(12, 0.5, 0.5, "lower") == pytest.approx(
            math.exp(-0.25 * 12 / (2 - 2 / 3))
        )

    @given(st.floats(0.01, 1.0), st.floats(0.0, 1.0))
    def test_lower_bound_in_unit_interval(self, expectation, delta):
        assert 0.0 < chernoff_lower(expectation * 100, delta) <= 1.0

    def test_monotone_in_slack(self):
        deltas = np.linspace(0, 1, 21)
        for evaluate in (
            lambda d: chernoff_lower(30.0, d),
            lambda d: chernoff_additive([0.5] * 10, d),
            lambda d: chernoff_geometric(40, 0.25, d, "upper"),
            lambda d: chernoff_geometric(40, 0.25, d, "lower"),
        ):
            values = [evaluate(d) for d in deltas]
            assert all(a > b for a, b in zip(values, values[1:]))

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            chernoff_lower(10.0, 1.5)
        with pytest.raises(ValueError):
            chernoff_additive([], 1.0)
        with pytest.raises(ValueError):
            chernoff_geometric(0, 0.5, 0.1)
        with pytest.raises(ValueError):
            chernoff_geometric(5, 0.5, 2.0, "lower")
        with pytest.raises(ValueError):
            chernoff_geometric(5, 0.5, 0.1, "sideways")


class TestMonotoneHelpers:
    def test_h_exact_values(self):
        assert h1(2, 5, 1, exact=True) == Fraction(2, 25)
        assert h2(2, 5, 2, exact=True) == Fraction(3, 25)

    def test_exact_and_log_agree(self):
        for a, n, d in ((1, 10, 3), (4, 12, 5), (2, 30, 20)):
            assert h1(a, n, d) == pytest.approx(float(h1(a, n, d, exact=True)), rel=1e-12)
            assert h2(a, n, d + 1) == pytest.approx(float(h2(a, n, d + 1, exact=True)), rel=1e-12)

    def test_strictly_decreasing_small_grid(self):
        for n in (5, 20, 80):
            for a in (1, 2, n // 2):
                v1 = h1_log(a, n, np.arange(0, n - a))
                v2 = h2_log(a, n, np.arange(1, n - a + 1))
                assert np.all(np.diff(v1) < 0)
                assert np.all(np.diff(v2) < 0)

    def test_g_values_and_monotonicity(self):
        assert g_fn(1, 100) == pytest.approx(1.0 / 100.0)
        values = g_log(np.arange(1, 11), 100)
        assert np.all(np.diff(values) < 0)

    def test_aux_inequality(self):
        assert aux_ineq(119)
        assert aux_ineq(1_000_000)
        with pytest.raises(ValueError):
            aux_ineq(118)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            h1(0, 5, 1)
        with pytest.raises(ValueError):
            h1(2, 5, 3)  # d beyond n-a-1
        with pytest.raises(ValueError):
            h2(2, 5, 0)
        with pytest.raises(ValueError):
            g_fn(11, 100)  # a beyond sqrt(n)


class TestTheoremBounds:
    def test_vacuous_at_desk_scale(self):
        assert theorem1_bound(100).value < 0
        assert theorem1_bound(100).vacuous
        assert theorem2_bound(20, 769, 1e-9).vacuous

    def test_eventually_meaningful(self):
        assert theorem1_bound(10**9).value > 0.9
        n = 10**6
        assert theorem2_bound(n, min_population(n, 0.1), 0.1).value > 0.0
        assert theorem3_bound(n, min_population(n, 0.1), 0.1).value > 0.0

    def test_increasing_beyond_numeric_onset(self):
        # the failure lower bound decreases up to n = 530 and increases after
        values = [theorem1_bound(n).value for n in range(520, 1200)]
        onset = 530 - 520
        assert all(a > b for a, b in zip(values[:onset], values[1 : onset + 1]))
        assert all(a < b for a, b in zip(values[onset:], values[onset + 1 :]))

    def test_three_n_term_ordering(self):
        # the conditioning-event bound subtracts one extra n-term
        for n in (100, 1000):
            mu = min_population(n, 1e-9)
            assert theorem3_bound(n, mu, 1e-9).value < theorem2_bound(n, mu, 1e-9).value

    def test_min_population_values(self):
        assert min_population(20, 1e-9) == 769
        assert min_population(100, 1e-9) == 3699
        # tracks 4 * (1 + delta) * (3e + 1) * (n + 1) within rounding
        for n in (10, 50, 333):
            raw = 4 * (1 + 1e-9) * (3 * math.e + 1) * (n + 1)
            assert abs(min_population(n, 1e-9) - raw) <= 0.5

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            theorem1_bound(1)
        with pytest.raises(ValueError):
            theorem2_bound(10, 0, 0.1)
        with pytest.raises(ValueError):
            min_population(10, 0.0)


class TestAbsorption:
    def test_probabilities_sum_to_one(self):
        for kind in MutationKind:
            result = markov_full_absorption(5, kind)
            assert np.max(np.abs(result.residual)) < 1e-10

    def test_absorbing_states_are_certain(self):
        result = markov_full_absorption(4, MutationKind.BITWISE)
        assert np.all(result.p_optimum[result.labels == OPT] == 1.0)
        assert np.all(result.p_event_i[result.labels == EVENT_I] == 1.0)
        assert np.all(result.p_event_ii[result.labels == EVENT_II] == 1.0)

    def test_frozen_uniform_start_values(self):
        uniform = markov_full_absorption(4, MutationKind.BITWISE).from_uniform()
        assert uniform["p_optimum"] == pytest.approx(0.167353678774032, abs=1e-12)
        assert uniform["p_event_i"] == pytest.approx(0.660985469145194, abs=1e-12)
        assert uniform["p_event_ii"] == pytest.approx(0.171660852080774, abs=1e-12)

    def test_frozen_failure_probabilities_n6(self):
        one_bit = markov_full_absorption(6, MutationKind.ONE_BIT).failure_probability()
        bitwise = markov_full_absorption(6, MutationKind.BITWISE).failure_probability()
        assert one_bit == pytest.approx(0.840494791666666, abs=1e-12)
        assert bitwise == pytest.approx(0.912696444232041, abs=1e-12)

    def test_start_weights_are_a_distribution(self):
        for solver in (markov_full_absorption, markov_lumped_absorption):
            result = solver(6, MutationKind.BITWISE)
            assert result.start_weights.sum() == pytest.approx(1.0, abs=1e-12)
            assert np.all(result.start_weights >= 0)

    def test_lumped_matches_full_small(self):
        for n in (2, 3, 5, 7):
            for kind in MutationKind:
                full = markov_full_absorption(n, kind).from_uniform()
                lumped = markov_lumped_absorption(n, kind).from_uniform()
                for key in full:
                    assert lumped[key] == pytest.approx(full[key], abs=1e-10)

    def test_lumped_scales_to_large_n(self):
        result = markov_lumped_absorption(400, MutationKind.BITWISE)
        assert np.max(np.abs(result.residual)) < 1e-8
        assert result.failure_probability() > 0.99

    def test_size_guards(self):
        with pytest.raises(ValueError):
            markov_full_absorption(11, MutationKind.BITWISE)
        with pytest.raises(ValueError):
            markov_lumped_absorption(1001, MutationKind.BITWISE)
        with pytest.raises(ValueError):
            markov_full_absorption(1, MutationKind.BITWISE)
