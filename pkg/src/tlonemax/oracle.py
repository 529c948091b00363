"""Exact and closed-form mathematics backing the simulations.

Contains the conditional single-step-gain probability (closed form plus an
independent brute-force enumeration), the tail-bound evaluators, the
monotone helper functions, the probability bounds of the main results, and
exact Markov absorption solvers for the single-individual algorithm, both
over the full 2^(n+1)-state chain and over its symmetry-lumped 4n-state
reduction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np
from scipy import stats

from .algorithms import MutationKind

_E = math.e


# ---------------------------------------------------------------------------
# Conditional improvement probability
# ---------------------------------------------------------------------------

def lemma2_exact(n: int, a: int) -> Fraction:
    """P[gain = 1 | gain > 0] for bitwise mutation of a string with a zeros.

    Closed-form ratio of the two combinatorial sums, evaluated in exact
    rational arithmetic (every term shares the denominator n^n, so both sums
    reduce to integer accumulation).
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if not 1 <= a <= n:
        raise ValueError(f"a must be in [1..n], got a={a}")
    num = 0  # terms for exactly one net new one
    den = 0  # terms for any positive gain
    for i in range(1, a + 1):
        ca = comb(a, i)
        t = comb(n - a, i - 1)
        if t:
            num += ca * t * (n - 1) ** (n - 2 * i + 1)
        for j in range(0, i):
            t = comb(n - a, j)
            if t:
                den += ca * t * (n - 1) ** (n - i - j)
    return Fraction(num, den)


def lemma2_bruteforce(n: int, a: int) -> Fraction:
    """Same conditional probability by enumerating all 2^n flip masks.

    Independent verification path: fixes one string with a zeros (symmetry
    makes the choice irrelevant), weights each mask by its exact flip
    probability, and accumulates the two event masses directly.
    """
    if n > 14:
        raise ValueError(f"brute force limited to n <= 14, got {n}")
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if not 1 <= a <= n:
        raise ValueError(f"a must be in [1..n], got a={a}")
    x = ((1 << n) - 1) ^ ((1 << a) - 1)  # zeros in the low a positions
    ones_x = n - a
    weights = [(n - 1) ** (n - f) for f in range(n + 1)]  # numerators over n^n
    num_eq1 = 0
    num_pos = 0
    for mask in range(1 << n):
        gain = (x ^ mask).bit_count() - ones_x
        if gain > 0:
            w = weights[mask.bit_count()]
            num_pos += w
            if gain == 1:
                num_eq1 += w
    return Fraction(num_eq1, num_pos)


def lemma2_lower_bound(n: int, a: int) -> float:
    """The proven lower bound 1 - e*a/n."""
    return 1.0 - _E * a / n


# ---------------------------------------------------------------------------
# Tail bound evaluators
# ---------------------------------------------------------------------------

def chernoff_lower(expectation: float, delta: float) -> float:
    """exp(-delta^2 E / 2) for [0,1]-valued summands, delta in [0,1]."""
    if not 0.0 <= delta <= 1.0:
        raise ValueError(f"delta must be in [0,1], got {delta}")
    if expectation < 0:
        raise ValueError("expectation must be non-negative")
    return math.exp(-delta * delta * expectation / 2.0)


def chernoff_additive(lengths, lam: float) -> float:
    """exp(-2 lambda^2 / sum(c_i)) for summands confined to intervals of length c_i."""
    if lam < 0:
        raise ValueError(f"lambda must be >= 0, got {lam}")
    total = float(sum(lengths))
    if total <= 0:
        raise ValueError("interval lengths must sum to a positive value")
    return math.exp(-2.0 * lam * lam / total)


def chernoff_geometric(m: int, p: float, delta: float, side: str = "upper") -> float:
    """Tail bounds for a sum of m geometric variables with success probability p."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p must be in (0,1], got {p}")
    if side == "upper":
        if delta < 0:
            raise ValueError(f"delta must be >= 0, got {delta}")
        return math.exp(-delta * delta * (m - 1) / (2.0 * (1.0 + delta)))
    if side == "lower":
        if not 0.0 <= delta <= 1.0:
            raise ValueError(f"delta must be in [0,1], got {delta}")
        return math.exp(-delta * delta * m / (2.0 - 4.0 * delta / 3.0))
    raise ValueError(f"side must be 'upper' or 'lower', got {side!r}")


# ---------------------------------------------------------------------------
# Monotone helper functions
# ---------------------------------------------------------------------------

def h1(a: int, n: int, d: int, exact: bool = False):
    """C(a+d-1, d) / n^(d+1) on d in [0, n-a-1]; strictly decreasing in d."""
    _check_h_domain(a, n)
    if not 0 <= d <= n - a - 1:
        raise ValueError(f"d must be in [0, n-a-1], got d={d}")
    if exact:
        return Fraction(comb(a + d - 1, d), n ** (d + 1))
    return math.exp(h1_log(a, n, np.array([d]))[0])


def h2(a: int, n: int, d: int, exact: bool = False):
    """C(a+d-1, d-1) / n^d on d in [1, n-a]; strictly decreasing in d."""
    _check_h_domain(a, n)
    if not 1 <= d <= n - a:
        raise ValueError(f"d must be in [1, n-a], got d={d}")
    if exact:
        return Fraction(comb(a + d - 1, d - 1), n**d)
    return math.exp(h2_log(a, n, np.array([d]))[0])


def _check_h_domain(a: int, n: int) -> None:
    if a < 1 or a >= n:
        raise ValueError(f"need 1 <= a < n, got a={a}, n={n}")


def h1_log(a: int, n: int, d: np.ndarray) -> np.ndarray:
    """log h1 over an integer array of d; log-space avoids the rapid underflow."""
    from scipy.special import gammaln

    d = np.asarray(d, dtype=float)
    return gammaln(a + d) - gammaln(d + 1) - gammaln(a) - (d + 1) * math.log(n)


def h2_log(a: int, n: int, d: np.ndarray) -> np.ndarray:
    from scipy.special import gammaln

    d = np.asarray(d, dtype=float)
    return gammaln(a + d) - gammaln(d) - gammaln(a + 1) - d * math.log(n)


def g_fn(a: int, n: int) -> float:
    """a^a / n^(a^2) on a in [1, sqrt(n)]; strictly decreasing in a."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if not 1 <= a <= math.isqrt(n):
        raise ValueError(f"a must be in [1, sqrt(n)], got a={a}")
    return math.exp(g_log(a, n))


def g_log(a, n) -> float:
    a = np.asarray(a, dtype=float) if not np.isscalar(a) else float(a)
    return a * np.log(a) - a * a * math.log(n)


def aux_ineq(n: float) -> bool:
    """Whether (3/4)^(sqrt(n)-1) <= n^(-1/2); holds for all n > (4e)^2."""
    if n <= (4 * _E) ** 2:
        raise ValueError(f"n must exceed (4e)^2 ~ 118.22, got {n}")
    return (math.sqrt(n) - 1) * math.log(0.75) <= -0.5 * math.log(n)


# ---------------------------------------------------------------------------
# Probability bounds of the main results
# ---------------------------------------------------------------------------

@dataclass(slots=True)
class BoundValue:
    """Unclamped bound value; ``vacuous`` marks values that carry no information."""

    value: float
    vacuous: bool

    def __float__(self) -> float:
        return self.value


def theorem1_bound(n: int) -> BoundValue:
    """Lower bound on the failure probability of the single-individual algorithms."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    v = 1.0 - (n + 1) * math.exp(-n ** (1.0 / 3.0) / _E) - (_E + 1) / n ** (1.0 / 3.0)
    return BoundValue(v, v <= 0.0)


def theorem2_bound(n: int, mu: int, delta: float) -> BoundValue:
    """Lower bound on the success probability of the population algorithm."""
    _check_bound_args(n, mu, delta)
    v = (
        1.0
        - (mu + 2) * math.exp(-n / 8.0)
        - math.exp(-delta * delta * (n - 1) / (2.0 * (1.0 + delta)))
        - 2.0 * n * math.exp(-math.sqrt(n) / 20.0)
    )
    return BoundValue(v, v <= 0.0)


def theorem3_bound(n: int, mu: int, delta: float) -> BoundValue:
    """Lower bound on the probability of the conditioning event for the
    O(mu*n) expected-runtime statement (same shape with a 3n correction term)."""
    _check_bound_args(n, mu, delta)
    v = (
        1.0
        - (mu + 2) * math.exp(-n / 8.0)
        - math.exp(-delta * delta * (n - 1) / (2.0 * (1.0 + delta)))
        - 3.0 * n * math.exp(-math.sqrt(n) / 20.0)
    )
    return BoundValue(v, v <= 0.0)


def _check_bound_args(n: int, mu: int, delta: float) -> None:
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if mu < 1:
        raise ValueError(f"mu must be >= 1, got {mu}")
    if delta <= 0:
        raise ValueError(f"delta must be > 0, got {delta}")


def min_population(n: int, delta: float) -> int:
    """Smallest population size used with the success guarantee, 4(1+delta)(3e+1)(n+1).

    Rounded to the nearest integer (the value is within rounding noise of an
    integer for the deltas of interest).
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if delta <= 0:
        raise ValueError(f"delta must be > 0, got {delta}")
    return round(4.0 * (1.0 + delta) * (3.0 * _E + 1.0) * (n + 1))


# ---------------------------------------------------------------------------
# Markov absorption solvers
# ---------------------------------------------------------------------------

TRANSIENT, OPT, EVENT_I, EVENT_II = 0, 1, 2, 3


@dataclass
class AbsorptionResult:
    """Absorption probabilities per start state of the selection chain.

    ``labels`` classifies each state (0 transient, 1 optimum, 2/3 the two
    stagnation events).  ``start_weights`` is the probability of each state
    under uniform random initialization.
    """

    n: int
    mutation_kind: MutationKind
    labels: np.ndarray
    p_optimum: np.ndarray
    p_event_i: np.ndarray
    p_event_ii: np.ndarray
    start_weights: np.ndarray

    @property
    def residual(self) -> np.ndarray:
        return 1.0 - (self.p_optimum + self.p_event_i + self.p_event_ii)

    def from_uniform(self) -> dict[str, float]:
        w = self.start_weights
        return {
            "p_optimum": float(w @ self.p_optimum),
            "p_event_i": float(w @ self.p_event_i),
            "p_event_ii": float(w @ self.p_event_ii),
        }

    def failure_probability(self) -> float:
        u = self.from_uniform()
        return u["p_event_i"] + u["p_event_ii"]


def _solve_absorption(P: np.ndarray, labels: np.ndarray) -> tuple[np.ndarray, ...]:
    """Absorption probabilities into each labelled class by dense linear solve."""
    size = len(labels)
    trans = labels == TRANSIENT
    idx_t = np.flatnonzero(trans)
    Q = P[np.ix_(idx_t, idx_t)]
    A = np.eye(len(idx_t)) - Q
    probs = []
    for cls in (OPT, EVENT_I, EVENT_II):
        p = np.zeros(size)
        p[labels == cls] = 1.0
        if len(idx_t):
            r = P[np.ix_(idx_t, np.flatnonzero(labels == cls))].sum(axis=1)
            p[idx_t] = np.linalg.solve(A, r)
        probs.append(p)
    return tuple(probs)


def _popcounts(size: int) -> np.ndarray:
    counts = np.zeros(size, dtype=np.int64)
    for i in range(1, size):
        counts[i] = counts[i >> 1] + (i & 1)
    return counts


def markov_full_absorption(n: int, mutation_kind: MutationKind) -> AbsorptionResult:
    """Exact chain over all 2^(n+1) states (stored first bit, current string)."""
    if not 2 <= n <= 10:
        raise ValueError(f"full chain limited to 2 <= n <= 10, got {n}")
    size = 1 << n
    nstates = 2 * size
    ones = _popcounts(size)
    full = size - 1

    # offspring kernel M[x, y]
    xs = np.arange(size)
    ham = _popcounts(size)[np.bitwise_xor.outer(xs, xs)]
    if mutation_kind is MutationKind.BITWISE:
        p = 1.0 / n
        M = p**ham * (1 - p) ** (n - ham)
    else:
        M = np.where(ham == 1, 1.0 / n, 0.0)

    labels = np.zeros(nstates, dtype=np.int64)
    for b in (0, 1):
        for x in range(size):
            s = b * size + x
            if x == full:
                labels[s] = OPT if b == 0 else EVENT_II
            elif b == 0 and x & 1:
                labels[s] = EVENT_I

    P = np.zeros((nstates, nstates))
    x1 = xs & 1
    for b in (0, 1):
        for x in range(size):
            s = b * size + x
            if labels[s] != TRANSIENT:
                P[s, s] = 1.0
                continue
            fit = ones[x] - n * b
            accept = ones - n * x1[x] >= fit  # over offspring y
            row = M[x]
            tbase = x1[x] * size
            np.add.at(P[s], tbase + xs[accept], row[accept])
            P[s, s] += row[~accept].sum()

    p_opt, p_i, p_ii = _solve_absorption(P, labels)
    return AbsorptionResult(
        n=n,
        mutation_kind=mutation_kind,
        labels=labels,
        p_optimum=p_opt,
        p_event_i=p_i,
        p_event_ii=p_ii,
        start_weights=np.full(nstates, 1.0 / nstates),
    )


def lump_index(n: int, b: int, x1: int, k: int) -> int:
    """State index of the lumped chain: (stored bit, current first bit, ones in 2..n)."""
    return ((b << 1) | x1) * n + k


def markov_lumped_absorption(n: int, mutation_kind: MutationKind) -> AbsorptionResult:
    """Symmetry-lumped chain over 4n states.

    Positions 2..n are exchangeable under both the fitness and the mutation
    operators, so only their ones-count k matters; transition masses are
    exact binomial sums.
    """
    if not 2 <= n <= 1000:
        raise ValueError(f"lumped chain limited to 2 <= n <= 1000, got {n}")
    nstates = 4 * n
    ks = np.arange(n)

    labels = np.zeros(nstates, dtype=np.int64)
    labels[lump_index(n, 0, 1, n - 1)] = OPT
    for k in range(n - 1):
        labels[lump_index(n, 0, 1, k)] = EVENT_I
    labels[lump_index(n, 1, 1, n - 1)] = EVENT_II

    # offspring ones-count distribution over positions 2..n, per current k
    if mutation_kind is MutationKind.BITWISE:
        p = 1.0 / n
        kdist = np.zeros((n, n))
        for k in range(n):
            down = stats.binom.pmf(np.arange(k + 1), k, p)  # flips among ones
            up = stats.binom.pmf(np.arange(n - k), n - 1 - k, p)  # flips among zeros
            kdist[k] = np.convolve(down[::-1], up)  # pmf of k - i + j
        first_flip = p

    P = np.zeros((nstates, nstates))
    for b in (0, 1):
        for x1 in (0, 1):
            for k in range(n):
                s = lump_index(n, b, x1, k)
                if labels[s] != TRANSIENT:
                    P[s, s] = 1.0
                    continue
                fit = x1 + k - n * b
                if mutation_kind is MutationKind.BITWISE:
                    for y1 in (0, 1):
                        py1 = first_flip if y1 != x1 else 1.0 - first_flip
                        mass = py1 * kdist[k]
                        accept = y1 + ks - n * x1 >= fit
                        tgt = lump_index(n, x1, y1, 0) + ks
                        np.add.at(P[s], tgt[accept], mass[accept])
                        P[s, s] += mass[~accept].sum()
                else:
                    moves = [(1 - x1, k, 1.0 / n)]
                    if k:
                        moves.append((x1, k - 1, k / n))
                    if k < n - 1:
                        moves.append((x1, k + 1, (n - 1 - k) / n))
                    for y1, k2, prob in moves:
                        if y1 + k2 - n * x1 >= fit:
                            P[s, lump_index(n, x1, y1, k2)] += prob
                        else:
                            P[s, s] += prob

    # uniform initialization projects to binomial weights over k
    kw = np.array([comb(n - 1, k) for k in range(n)], dtype=float) / 2 ** (n - 1)
    weights = np.tile(kw, 4) / 4.0

    p_opt, p_i, p_ii = _solve_absorption(P, labels)
    return AbsorptionResult(
        n=n,
        mutation_kind=mutation_kind,
        labels=labels,
        p_optimum=p_opt,
        p_event_i=p_i,
        p_event_ii=p_ii,
        start_weights=weights,
    )
