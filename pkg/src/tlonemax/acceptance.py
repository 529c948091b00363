"""The built-in acceptance suite: ten numbered checks, one result line each.

Each criterion is a standalone function returning a :class:`CriterionResult`;
the CLI ``check`` subcommand and the test suite both call these, so the
release gate and the interactive report can never drift apart.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .algorithms import (
    Alg1State,
    MutationKind,
    Population,
    alg1_step,
    alg2_step,
)
from .core import BitString, RandomStream
from .fitness import TimePair
from .harness import (
    ExperimentConfig,
    report_csv,
    run_experiment,
    runtime_scaling_check,
    wilson_interval,
)
from .oracle import (
    aux_ineq,
    chernoff_additive,
    chernoff_geometric,
    chernoff_lower,
    g_log,
    h1_log,
    h2_log,
    lemma2_bruteforce,
    lemma2_exact,
    markov_full_absorption,
    markov_lumped_absorption,
    min_population,
)

_SEED = 20240901  # master seed shared by every stochastic criterion


@dataclass(slots=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} criterion {self.number}: {self.name} -- {self.detail}"


def criterion_1() -> CriterionResult:
    """Exact and brute-force conditional improvement probabilities agree."""
    worst = 0.0
    for n in range(2, 13):
        for a in range(1, n + 1):
            exact = lemma2_exact(n, a)
            brute = lemma2_bruteforce(n, a)
            worst = max(worst, abs(float(exact - brute)))
            if float(exact) <= 1.0 - math.e * a / n:
                return CriterionResult(
                    1, "conditional probability equivalence", False,
                    f"lower bound violated at n={n}, a={a}",
                )
    passed = worst <= 1e-12
    return CriterionResult(
        1, "conditional probability equivalence", passed,
        f"max |exact - brute| = {worst:.3g} over n in [2..12] (tolerance 1e-12)",
    )


def criterion_2(workers: int | None = None) -> CriterionResult:
    """Empirical failure rates at n=6 sit inside Wilson 99% of the exact chain."""
    details = []
    passed = True
    for alg, kind in (("rls", MutationKind.ONE_BIT), ("oea", MutationKind.BITWISE)):
        predicted = markov_full_absorption(6, kind).failure_probability()
        report = run_experiment(ExperimentConfig(
            algorithm=alg, n_values=[6], trials=100_000,
            master_seed=_SEED, workers=workers,
        ))
        point = report.points[0]
        failures = point.event_i_count + point.event_ii_count
        lo, hi = wilson_interval(failures, point.trials, 0.99)
        ok = lo <= predicted <= hi
        passed = passed and ok
        details.append(
            f"{alg}: predicted {predicted:.5f} vs empirical {failures / point.trials:.5f}"
            f" in [{lo:.5f}, {hi:.5f}]" + ("" if ok else " OUTSIDE")
        )
    return CriterionResult(2, "exact chain vs Monte Carlo at n=6", passed, "; ".join(details))


def criterion_3() -> CriterionResult:
    """Lumped chain reproduces the full chain for every small n."""
    worst = 0.0
    for n in range(2, 11):
        for kind in MutationKind:
            full = markov_full_absorption(n, kind).from_uniform()
            lumped = markov_lumped_absorption(n, kind).from_uniform()
            worst = max(worst, max(abs(full[k] - lumped[k]) for k in full))
    return CriterionResult(
        3, "lumped-chain validity", worst <= 1e-10,
        f"max |full - lumped| = {worst:.3g} over n in [2..10], both mutation kinds",
    )


def criterion_4(workers: int | None = None) -> CriterionResult:
    """Single-individual failure rates track the lumped-chain predictions."""
    n_values = [20, 50, 100, 200]
    trials = 1000
    report = run_experiment(ExperimentConfig(
        algorithm="oea", n_values=n_values, trials=trials,
        master_seed=_SEED, workers=workers,
    ))
    passed = True
    details = []
    for point in report.points:
        predicted = markov_lumped_absorption(point.n, MutationKind.BITWISE).failure_probability()
        empirical = point.failure_rate
        se = math.sqrt(predicted * (1.0 - predicted) / trials)
        ok = abs(empirical - predicted) <= 3.0 * se
        if point.n == 200:
            ok = ok and predicted >= 0.9
        passed = passed and ok
        details.append(f"n={point.n}: pred {predicted:.4f} emp {empirical:.4f}"
                       + ("" if ok else " OUTSIDE 3 SE"))
    return CriterionResult(4, "failure-rate trend vs lumped chain", passed, "; ".join(details))


def criterion_5(workers: int | None = None) -> CriterionResult:
    """The population algorithm at the guaranteed size almost always succeeds."""
    mu = min_population(20, 1e-9)
    if mu != 769:
        return CriterionResult(5, "population success at n=20", False,
                               f"min_population(20, 1e-9) = {mu}, expected 769")
    report = run_experiment(ExperimentConfig(
        algorithm="muea", n_values=[20], mu_values=[mu], trials=100,
        master_seed=_SEED, workers=workers,
    ))
    rate = report.points[0].success_rate
    return CriterionResult(
        5, "population success at n=20", rate >= 0.95,
        f"success rate {rate:.2f} with mu={mu} over 100 trials (threshold 0.95)",
    )


def criterion_6(workers: int | None = None) -> CriterionResult:
    """Conditional mean generations grow like mu*n across the sweep.

    Stated gate: the ratio (conditional mean generations)/(mu*n) varies by at
    most a factor of 2 over n in {10, 20, 40} with mu at the guaranteed size.
    """
    report = run_experiment(ExperimentConfig(
        algorithm="muea", n_values=[10, 20, 40], trials=50,
        master_seed=_SEED, workers=workers,
    ))
    table = runtime_scaling_check(report)
    ratios = [row.ratio for row in table.rows if row.ratio is not None]
    spread = max(ratios) / min(ratios) if len(ratios) >= 2 else float("inf")
    detail = "; ".join(
        f"n={row.n}: mu={row.mu} ratio={row.ratio:.3f}" for row in table.rows
        if row.ratio is not None
    ) + f"; spread {spread:.2f} (gate 2.0)"
    return CriterionResult(6, "runtime scaling ratio spread", not table.flagged, detail)


def _random_event_i_pair(n: int, rng: RandomStream) -> TimePair:
    # first bit 1, the rest anything except all-ones
    rest = rng.random_bits(n - 1)
    while rest == (1 << (n - 1)) - 1:
        rest = rng.random_bits(n - 1)
    return TimePair(0, BitString(n, (rest << 1) | 1))


def _event_ii_pair(n: int) -> TimePair:
    return TimePair(1, BitString(n, (1 << n) - 1))


def criterion_7() -> CriterionResult:
    """Stagnation states are absorbing: long continued runs never escape."""
    n, steps, trials_per_case = 10, 10_000, 250
    rng = RandomStream(_SEED, 7)

    def run_single(make_pair: Callable[[], TimePair], check) -> bool:
        state = Alg1State(make_pair(), 1, MutationKind.BITWISE)
        for _ in range(steps):
            state = alg1_step(state, rng)
            pair = state.pair
            if not check(pair) or (pair.prev_first_bit == 0 and pair.current.all_ones()):
                return False
        return True

    def is_event_i(p: TimePair) -> bool:
        v = p.current.value
        return p.prev_first_bit == 0 and v & 1 == 1 and v >> 1 != (1 << (n - 1)) - 1

    def is_event_ii(p: TimePair) -> bool:
        return p.prev_first_bit == 1 and p.current.all_ones()

    def run_population(make_pair: Callable[[], TimePair], counter: str) -> bool:
        mu = 4
        pop = Population([make_pair() for _ in range(mu)])
        for _ in range(steps):
            alg2_step(pop, rng)
            if getattr(pop, counter) != mu or pop.optimum_generated:
                return False
        return True

    cases = [
        ("event I", lambda: run_single(lambda: _random_event_i_pair(n, rng), is_event_i)),
        ("event II", lambda: run_single(lambda: _event_ii_pair(n), is_event_ii)),
        ("event I'", lambda: run_population(lambda: _random_event_i_pair(n, rng), "event_i_count")),
        ("event II'", lambda: run_population(lambda: _event_ii_pair(n), "event_ii_count")),
    ]
    for name, runner in cases:
        for _ in range(trials_per_case):
            if not runner():
                return CriterionResult(7, "absorption persistence", False,
                                       f"escape from {name} within {steps} generations")
    total = trials_per_case * len(cases)
    return CriterionResult(
        7, "absorption persistence", True,
        f"{total} trials x {steps} generations: no escape, no optimum, from any event",
    )


def _strictly_decreasing(values: np.ndarray) -> bool:
    return bool(np.all(np.diff(values) < 0)) if len(values) > 1 else True


def criterion_8() -> CriterionResult:
    """The three helper functions are strictly decreasing on their domains."""
    for n in range(2, 501):
        for a in range(1, n):
            d1 = np.arange(0, n - a)
            if not _strictly_decreasing(h1_log(a, n, d1)):
                return CriterionResult(8, "monotonicity suite", False,
                                       f"h1 not strictly decreasing at a={a}, n={n}")
            d2 = np.arange(1, n - a + 1)
            if not _strictly_decreasing(h2_log(a, n, d2)):
                return CriterionResult(8, "monotonicity suite", False,
                                       f"h2 not strictly decreasing at a={a}, n={n}")
    for n in range(2, 10_001):
        amax = math.isqrt(n)
        if amax >= 2 and not _strictly_decreasing(g_log(np.arange(1, amax + 1), n)):
            return CriterionResult(8, "monotonicity suite", False,
                                   f"g not strictly decreasing at n={n}")
    lo, hi = (4.0 * math.e) ** 2, 1e6
    samples = np.unique(np.round(np.geomspace(math.floor(lo) + 1, hi, 1000)).astype(int))
    bad = [int(n) for n in samples if not aux_ineq(int(n))]
    if bad:
        return CriterionResult(8, "monotonicity suite", False,
                               f"auxiliary inequality fails at n={bad[0]}")
    return CriterionResult(
        8, "monotonicity suite", True,
        f"h1/h2 decreasing for n <= 500, g for n <= 10^4, "
        f"auxiliary inequality at {len(samples)} sampled n up to 10^6",
    )


def criterion_9() -> CriterionResult:
    """Tail-bound evaluators: boundary values equal 1 and decrease monotonically."""
    boundary = (
        chernoff_lower(10.0, 0.0),
        chernoff_additive([1.0] * 5, 0.0),
        chernoff_geometric(10, 0.5, 0.0, "upper"),
        chernoff_geometric(10, 0.5, 0.0, "lower"),
    )
    if any(abs(b - 1.0) > 1e-15 for b in boundary):
        return CriterionResult(9, "tail-bound evaluators", False,
                               f"boundary values not 1: {boundary}")
    deltas = np.linspace(0.0, 1.0, 101)
    curves = [
        np.array([chernoff_lower(25.0, d) for d in deltas]),
        np.array([chernoff_additive([0.5] * 20, d) for d in deltas]),
        np.array([chernoff_geometric(50, 0.3, d, "upper") for d in deltas]),
        np.array([chernoff_geometric(50, 0.3, d, "lower") for d in deltas[deltas < 0.75]]),
    ]
    if not all(_strictly_decreasing(c[1:]) and c[1] < c[0] for c in curves):
        return CriterionResult(9, "tail-bound evaluators", False,
                               "a bound is not monotone decreasing on the grid")
    return CriterionResult(9, "tail-bound evaluators", True,
                           "boundaries equal 1; all four bounds decrease on a 101-point grid")


def criterion_10() -> CriterionResult:
    """Report bytes are identical under different worker counts."""
    configs = [
        ExperimentConfig(algorithm="rls", n_values=[6], trials=100_000, master_seed=_SEED),
        ExperimentConfig(algorithm="oea", n_values=[6], trials=100_000, master_seed=_SEED),
        ExperimentConfig(algorithm="muea", n_values=[20], mu_values=[769], trials=100,
                         master_seed=_SEED),
    ]
    for cfg in configs:
        csvs = []
        for workers in (1, 4):
            cfg.workers = workers
            csvs.append(report_csv(run_experiment(cfg)))
        if csvs[0] != csvs[1]:
            return CriterionResult(10, "worker-count determinism", False,
                                   f"CSV differs for {cfg.algorithm} with 1 vs 4 workers")
    return CriterionResult(10, "worker-count determinism", True,
                           "byte-identical CSV for all three reference configs at 1 vs 4 workers")


_CRITERIA: dict[int, Callable[[], CriterionResult]] = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
}


def run_criteria(numbers: Iterable[int] | None = None) -> list[CriterionResult]:
    """Run the selected criteria (all ten by default) in numeric order."""
    selected = sorted(_CRITERIA) if numbers is None else sorted(set(numbers))
    unknown = [k for k in selected if k not in _CRITERIA]
    if unknown:
        raise ValueError(f"unknown criteria: {unknown}; valid numbers are 1..10")
    return [_CRITERIA[k]() for k in selected]
