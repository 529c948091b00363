"""The two-step objective, its optimum, and the online discounted variant."""

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tlonemax import (
    BitString,
    OneMaxTimeLinkage,
    OnlineHistory,
    TimePair,
    is_optimum,
    onemax01,
    online_objective,
)
from tlonemax.fitness import discount_residual


def _pair(prev, bits):
    return TimePair(prev, BitString.from_bits(bits))


class TestObjective:
    def test_maximum_value(self):
        assert onemax01(_pair(0, [1, 1, 1, 1])) == 4

    def test_penalty_cancels_all_ones(self):
        assert onemax01(_pair(1, [1, 1, 1, 1])) == 0

    def test_minimum_value(self):
        assert onemax01(_pair(1, [0, 0, 0, 0])) == -4

    def test_prev_bit_validated(self):
        with pytest.raises(ValueError):
            TimePair(2, BitString(3, 0))

    @given(st.integers(0, 1), st.lists(st.integers(0, 1), min_size=1, max_size=40))
    def test_range_and_formula(self, prev, bits):
        pair = _pair(prev, bits)
        n = len(bits)
        value = onemax01(pair)
        assert -n <= value <= n
        assert value == sum(bits) - n * prev

    def test_optimum_is_unique_pattern(self):
        assert is_optimum(_pair(0, [1, 1, 1]))
        assert not is_optimum(_pair(1, [1, 1, 1]))
        assert not is_optimum(_pair(0, [1, 1, 0]))

    def test_function_object_matches_direct_formula(self):
        fn = OneMaxTimeLinkage(4)
        prev = BitString.from_bits([1, 0, 0, 0])
        cur = BitString.from_bits([1, 1, 0, 1])
        assert fn.evaluate([prev, cur]) == onemax01(TimePair(prev.first_bit, cur))
        assert fn.window == 1 and fn.dimension == 4

    def test_function_object_validates_inputs(self):
        fn = OneMaxTimeLinkage(4)
        with pytest.raises(ValueError):
            fn.evaluate([BitString(4, 0)])
        with pytest.raises(ValueError):
            fn.evaluate([BitString(3, 0), BitString(3, 0)])


class TestOnlineObjective:
    def test_requires_three_solutions(self):
        history = OnlineHistory([BitString(4, 1), BitString(4, 2)])
        with pytest.raises(ValueError):
            online_objective(history)

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError):
            OnlineHistory([BitString(4, 1), BitString(5, 2)])

    def test_residual_empty_below_t2(self):
        assert discount_residual([1, 1, 1], 1) == 0.0

    def test_residual_single_term(self):
        # only tau=2 contributes: e^(-t+1) * x1 of step 0
        assert discount_residual([1, 0, 0], 2) == pytest.approx(math.exp(-1))
        assert discount_residual([0, 1, 1], 2) == 0.0

    @given(st.lists(st.integers(0, 1), min_size=3, max_size=20))
    def test_residual_bounded_by_geometric_series(self, first_bits):
        t = len(first_bits) - 1
        r = discount_residual(first_bits, t)
        assert 0.0 <= r <= 1.0 / (math.e - 1.0) + 1e-12

    @given(st.lists(st.integers(0, 1), min_size=4, max_size=20))
    def test_residual_recurrence(self, first_bits):
        # r(t+1) = (r(t) + x1^(t-1)) / e
        t = len(first_bits) - 1
        lhs = discount_residual(first_bits, t)
        rhs = (discount_residual(first_bits, t - 1) + first_bits[t - 2]) / math.e
        assert lhs == pytest.approx(rhs, abs=1e-15)

    def test_objective_is_residual_plus_final_pair(self):
        sols = [BitString.from_bits(b) for b in ([1, 0, 0], [1, 1, 0], [0, 1, 1], [1, 1, 1])]
        history = OnlineHistory(sols)
        expected = discount_residual([s.first_bit for s in sols], 3) + onemax01(
            TimePair(sols[2].first_bit, sols[3])
        )
        assert online_objective(history) == pytest.approx(expected)
