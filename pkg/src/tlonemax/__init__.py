"""Simulation and exact-analysis toolkit for a time-linkage OneMax variant.

The objective rewards ones in the current bit string but penalizes a stored
previous first-bit value of 1 by the full dimension, so single-individual
hill climbers stagnate with high probability while a large enough
population reaches the optimum.  The package ships the algorithms, exact
Markov absorption oracles, closed-form bounds, and a reproducible Monte
Carlo harness so each of those claims can be checked at desk scale.
"""

from .core import (
    BitString,
    RandomStream,
    bitwise_mutation,
    one_bit_mutation,
    uniform_random_bitstring,
)
from .fitness import (
    OneMaxTimeLinkage,
    OnlineHistory,
    TimeLinkageFunction,
    TimePair,
    is_optimum,
    onemax01,
    online_objective,
)
from .detection import (
    CensusReport,
    classify,
    event_I,
    event_I_prime,
    event_II,
    event_II_prime,
    population_census,
)
from .algorithms import (
    Alg1State,
    MutationKind,
    OnlineRecord,
    OutcomeKind,
    Population,
    TrialOutcome,
    alg1_step,
    alg2_step,
    initial_alg1_state,
    run_alg1,
    run_alg2,
    run_online,
)
from .oracle import (
    AbsorptionResult,
    BoundValue,
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
from .harness import (
    ExperimentConfig,
    ExperimentReport,
    run_experiment,
    runtime_scaling_check,
    wilson_interval,
    write_report,
)

__version__ = "0.1.0"
