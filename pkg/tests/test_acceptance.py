"""Release gate: the ten numbered acceptance checks, one result line each.

These call the same functions as the ``tlonemax check`` subcommand.  They are
Monte Carlo heavy (several minutes total on one core) and intentionally not
marked slow: the gate is the point of the suite.
"""

from tlonemax import acceptance


def _gate(result):
    print(result.line())
    assert result.passed, result.line()


def test_criterion_01_conditional_probability_equivalence():
    _gate(acceptance.criterion_1())


def test_criterion_02_exact_chain_vs_monte_carlo():
    _gate(acceptance.criterion_2())


def test_criterion_03_lumped_chain_validity():
    _gate(acceptance.criterion_3())


def test_criterion_04_failure_rate_trend():
    _gate(acceptance.criterion_4())


def test_criterion_05_population_success_at_n20():
    _gate(acceptance.criterion_5())


def test_criterion_06_runtime_scaling_ratio():
    # Stated gate: (conditional mean generations)/(mu*n) within a factor of 2
    # over n in {10, 20, 40}.  Measured spreads are ~2.7 and stable, driven by
    # the small-n constant; counting the 2*mu initialization evaluations as
    # runtime would bring the spread to ~1.66.  The check is asserted exactly
    # as stated and currently fails; see the scaling table in the failure line.
    _gate(acceptance.criterion_6())


def test_criterion_07_absorption_persistence():
    _gate(acceptance.criterion_7())


def test_criterion_08_monotonicity_suite():
    _gate(acceptance.criterion_8())


def test_criterion_09_tail_bound_evaluators():
    _gate(acceptance.criterion_9())


def test_criterion_10_worker_count_determinism():
    _gate(acceptance.criterion_10())
