"""The modified single-individual and population algorithms.

Selection always compares the candidate pair (parent's current first bit,
offspring) against the incumbent with >=, so ties accept the offspring in the
single-individual algorithm, while the population algorithm removes one
uniformly chosen lowest-fitness pair among the mu+1 candidates with no
secondary tie-break.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Sequence

from .core import (
    BitString,
    RandomStream,
    mutate_value_bitwise,
    mutate_value_one_bit,
    uniform_random_bitstring,
)
from .detection import event_I, event_I_prime, event_II, event_II_prime
from .fitness import TimePair, is_optimum, onemax01


class MutationKind(Enum):
    ONE_BIT = "one_bit"  # randomized local search
    BITWISE = "bitwise"  # standard 1/n per-bit flips


class OutcomeKind(str, Enum):
    OPTIMUM_FOUND = "optimum"
    STAGNATED_EVENT_I = "event_i"
    STAGNATED_EVENT_II = "event_ii"
    BUDGET_EXHAUSTED = "budget"


@dataclass(slots=True)
class TrialOutcome:
    """Terminal classification of one run."""

    kind: OutcomeKind
    generation: int

    @property
    def failed(self) -> bool:
        return self.kind in (OutcomeKind.STAGNATED_EVENT_I, OutcomeKind.STAGNATED_EVENT_II)


@dataclass(slots=True)
class Alg1State:
    pair: TimePair
    generation: int
    mutation_kind: MutationKind


def default_budget_alg1(n: int) -> int:
    """100 n^2: an order of magnitude above the expected hitting scale."""
    return 100 * n * n


def default_budget_alg2(n: int, mu: int) -> int:
    return 100 * mu * n


def _offspring(value: int, ones: int, n: int, kind: MutationKind, rng: RandomStream):
    if kind is MutationKind.ONE_BIT:
        return mutate_value_one_bit(value, ones, n, rng)
    return mutate_value_bitwise(value, ones, n, rng)


def initial_alg1_state(n: int, mutation_kind: MutationKind, rng: RandomStream) -> Alg1State:
    """Random initial two generations; the pair stores only the first bit of the older one."""
    x0 = uniform_random_bitstring(n, rng)
    x1 = uniform_random_bitstring(n, rng)
    return Alg1State(TimePair(x0.first_bit, x1), generation=1, mutation_kind=mutation_kind)


def alg1_step(state: Alg1State, rng: RandomStream) -> Alg1State:
    """One mutation/selection step; the incumbent fitness never decreases."""
    pair = state.pair
    cur = pair.current
    off_value, off_ones = _offspring(cur.value, cur.ones, cur.n, state.mutation_kind, rng)
    cur_first = cur.value & 1
    if off_ones - cur.n * cur_first >= onemax01(pair):
        pair = TimePair(cur_first, BitString(cur.n, off_value, off_ones))
    return Alg1State(pair, state.generation + 1, state.mutation_kind)


def run_alg1(
    n: int,
    mutation_kind: MutationKind,
    budget: int | None = None,
    rng: RandomStream | None = None,
    early_exit: bool = True,
) -> TrialOutcome:
    """Run until the optimum, a detected stagnation event, or the budget.

    Stagnation events are absorbing, so with ``early_exit`` the run stops the
    first generation an event holds; disabling it runs out the budget, which
    the absorption-persistence tests rely on.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if rng is None:
        rng = RandomStream(0)
    if budget is None:
        budget = default_budget_alg1(n)
    if budget < 1:
        raise ValueError("budget must be >= 1")

    full = (1 << n) - 1
    b = rng.random_bits(n) & 1
    value = rng.random_bits(n)
    ones = value.bit_count()
    fit = ones - n * b
    g = 1
    while True:
        if value == full:
            if b == 0:
                return TrialOutcome(OutcomeKind.OPTIMUM_FOUND, g)
            if early_exit:
                return TrialOutcome(OutcomeKind.STAGNATED_EVENT_II, g)
        elif early_exit and b == 0 and value & 1:
            return TrialOutcome(OutcomeKind.STAGNATED_EVENT_I, g)
        if g >= budget:
            return TrialOutcome(OutcomeKind.BUDGET_EXHAUSTED, budget)
        off_value, off_ones = _offspring(value, ones, n, mutation_kind, rng)
        cur_first = value & 1
        off_fit = off_ones - n * cur_first
        if off_fit >= fit:
            b, value, ones, fit = cur_first, off_value, off_ones, off_fit
        g += 1


class Population:
    """Ordered multiset of mu pairs with an incremental census.

    Pattern counts, the per-slot stagnation flags, and a fitness-bucket index
    are maintained on every replacement, so the minimum fitness, the
    stagnation checks, and uniform removal among the lowest-fitness pairs are
    all O(1) per generation.  ``validate()`` re-derives everything by a full
    scan and asserts agreement.
    """

    def __init__(self, pairs: Sequence[TimePair], generation: int = 1):
        if not pairs:
            raise ValueError("population must have at least one slot")
        n = pairs[0].current.n
        if any(p.current.n != n for p in pairs):
            raise ValueError("all slots must share one dimension")
        self.n = n
        self.mu = len(pairs)
        self.generation = generation
        self._full = (1 << n) - 1
        self._rest_full = (1 << (n - 1)) - 1
        self._prev = [p.prev_first_bit for p in pairs]
        self._value = [p.current.value for p in pairs]
        self._ones = [p.current.ones for p in pairs]
        self._fit = [o - n * b for o, b in zip(self._ones, self._prev)]

        self.pattern_counts: dict[tuple[int, int], int] = {
            (0, 0): 0, (0, 1): 0, (1, 0): 0, (1, 1): 0
        }
        self.event_i_count = 0
        self.event_ii_count = 0
        self._buckets: dict[int, list[int]] = {}
        self._bucket_pos = [0] * self.mu
        for i in range(self.mu):
            self._register(i)
        self.min_fitness = min(self._buckets)
        self.optimum_generated = any(
            b == 0 and v == self._full for b, v in zip(self._prev, self._value)
        )

    @classmethod
    def random(cls, n: int, mu: int, rng: RandomStream) -> "Population":
        pairs = []
        for _ in range(mu):
            x0 = uniform_random_bitstring(n, rng)
            x1 = uniform_random_bitstring(n, rng)
            pairs.append(TimePair(x0.first_bit, x1))
        return cls(pairs)

    # -- census bookkeeping -------------------------------------------------

    def _pattern(self, i: int) -> tuple[int, int]:
        return (self._prev[i], self._value[i] & 1)

    def _slot_event_i(self, i: int) -> bool:
        v = self._value[i]
        return self._prev[i] == 0 and v & 1 == 1 and v >> 1 != self._rest_full

    def _slot_event_ii(self, i: int) -> bool:
        return self._prev[i] == 1 and self._value[i] == self._full

    def _register(self, i: int) -> None:
        self.pattern_counts[self._pattern(i)] += 1
        self.event_i_count += self._slot_event_i(i)
        self.event_ii_count += self._slot_event_ii(i)
        bucket = self._buckets.setdefault(self._fit[i], [])
        self._bucket_pos[i] = len(bucket)
        bucket.append(i)

    def _unregister(self, i: int) -> None:
        self.pattern_counts[self._pattern(i)] -= 1
        self.event_i_count -= self._slot_event_i(i)
        self.event_ii_count -= self._slot_event_ii(i)
        bucket = self._buckets[self._fit[i]]
        pos = self._bucket_pos[i]
        last = bucket.pop()
        if last != i:
            bucket[pos] = last
            self._bucket_pos[last] = pos
        if not bucket:
            del self._buckets[self._fit[i]]

    def replace_slot(self, i: int, prev: int, value: int, ones: int) -> None:
        self._unregister(i)
        self._prev[i] = prev
        self._value[i] = value
        self._ones[i] = ones
        self._fit[i] = ones - self.n * prev
        self._register(i)
        if self.min_fitness not in self._buckets:
            m = self.min_fitness
            while m not in self._buckets:
                m += 1
            self.min_fitness = m

    # -- views ---------------------------------------------------------------

    def pairs(self) -> Iterator[TimePair]:
        for b, v, o in zip(self._prev, self._value, self._ones):
            yield TimePair(b, BitString(self.n, v, o))

    def slot(self, i: int) -> TimePair:
        return TimePair(self._prev[i], BitString(self.n, self._value[i], self._ones[i]))

    def min_fitness_slots(self) -> list[int]:
        return list(self._buckets[self.min_fitness])

    def validate(self) -> None:
        """Debug oracle: full rescan must agree with the incremental census."""
        counts = {(0, 0): 0, (0, 1): 0, (1, 0): 0, (1, 1): 0}
        ei = eii = 0
        for i in range(self.mu):
            assert self._ones[i] == self._value[i].bit_count()
            assert self._fit[i] == self._ones[i] - self.n * self._prev[i]
            counts[self._pattern(i)] += 1
            ei += self._slot_event_i(i)
            eii += self._slot_event_ii(i)
        assert counts == self.pattern_counts
        assert ei == self.event_i_count and eii == self.event_ii_count
        assert self.min_fitness == min(self._fit)
        for fit, bucket in self._buckets.items():
            for pos, i in enumerate(bucket):
                assert self._fit[i] == fit and self._bucket_pos[i] == pos
        assert sum(len(b) for b in self._buckets.values()) == self.mu


def alg2_step(pop: Population, rng: RandomStream) -> Population:
    """One generation: uniform parent, bitwise offspring, >=-min acceptance,
    then uniform removal among the lowest-fitness pairs of the mu+1.

    Mutates ``pop`` in place (and returns it); a trial owns its population.
    """
    n = pop.n
    i = rng.next_index(pop.mu)
    off_value, off_ones = mutate_value_bitwise(pop._value[i], pop._ones[i], n, rng)
    parent_first = pop._value[i] & 1
    off_fit = off_ones - n * parent_first
    if parent_first == 0 and off_ones == n:
        pop.optimum_generated = True
    if off_fit >= pop.min_fitness:
        bucket = pop._buckets[pop.min_fitness]
        k = len(bucket) + (1 if off_fit == pop.min_fitness else 0)
        r = rng.next_index(k) if k > 1 else 0
        if r < len(bucket):
            pop.replace_slot(bucket[r], parent_first, off_value, off_ones)
        # otherwise the offspring itself was the removed lowest pair
    pop.generation += 1
    return pop


def run_alg2(
    n: int,
    mu: int,
    budget: int | None = None,
    rng: RandomStream | None = None,
    early_exit: bool = True,
) -> TrialOutcome:
    """Population run; the optimum fires on the offspring pair at creation."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if mu < 1:
        raise ValueError(f"mu must be >= 1, got {mu}")
    if rng is None:
        rng = RandomStream(0)
    if budget is None:
        budget = default_budget_alg2(n, mu)

    pop = Population.random(n, mu, rng)
    if pop.optimum_generated:
        return TrialOutcome(OutcomeKind.OPTIMUM_FOUND, 0)
    for g in range(1, budget + 1):
        if early_exit:
            if event_I_prime(pop):
                return TrialOutcome(OutcomeKind.STAGNATED_EVENT_I, g)
            if event_II_prime(pop):
                return TrialOutcome(OutcomeKind.STAGNATED_EVENT_II, g)
        alg2_step(pop, rng)
        if pop.optimum_generated:
            return TrialOutcome(OutcomeKind.OPTIMUM_FOUND, g)
    return TrialOutcome(OutcomeKind.BUDGET_EXHAUSTED, budget)


@dataclass(slots=True)
class OnlineRecord:
    time_step: int
    pair: TimePair
    objective: float


def run_online(
    n: int,
    mutation_kind: MutationKind,
    time_horizon: int,
    budget_per_step: int,
    rng: RandomStream | None = None,
) -> list[OnlineRecord]:
    """Online driver: the fitness time step advances only on acceptance.

    Each accepted offspring becomes the decision for the next time step; the
    discounted residual is carried incrementally.  Stops at the horizon, when
    the two-step component reaches its maximum n, or when ``budget_per_step``
    generations pass without an acceptance.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if time_horizon < 1 or budget_per_step < 1:
        raise ValueError("horizons must be >= 1")
    if rng is None:
        rng = RandomStream(0)

    x0 = rng.random_bits(n)
    value = rng.random_bits(n)
    ones = value.bit_count()
    prev_first = x0 & 1
    fit = ones - n * prev_first
    residual = 0.0
    t = 1
    records: list[OnlineRecord] = []
    while t < time_horizon:
        accepted = False
        for _ in range(budget_per_step):
            off_value, off_ones = _offspring(value, ones, n, mutation_kind, rng)
            cur_first = value & 1
            off_fit = off_ones - n * cur_first
            if off_fit >= fit:
                accepted = True
                break
        if not accepted:
            break
        residual = (residual + prev_first) / math.e
        prev_first, value, ones, fit = cur_first, off_value, off_ones, off_fit
        t += 1
        pair = TimePair(prev_first, BitString(n, value, ones))
        records.append(OnlineRecord(t, pair, residual + fit))
        if fit == n:
            break
    return records


def stagnation_event(pair: TimePair) -> OutcomeKind | None:
    """Which single-individual stagnation event, if any, a pair is in."""
    if event_I(pair):
        return OutcomeKind.STAGNATED_EVENT_I
    if event_II(pair):
        return OutcomeKind.STAGNATED_EVENT_II
    if is_optimum(pair):
        return OutcomeKind.OPTIMUM_FOUND
    return None
