"""GSEMO-family optimizers with two-phase variation and parameter control."""

from .algorithms import (
    BUDGET_EXHAUSTED,
    COVERED,
    RunConfig,
    RunRecord,
    run,
    run_gsemo,
    run_opll_ga,
    run_opll_gsemo,
)
from .archive import Individual, ParetoArchive
from .bitstrings import (
    BitString,
    RandomSource,
    biased_crossover,
    flip_exact,
    flip_exact_batch,
    hamming_distance,
    random_bitstring,
    sample_binomial,
)
from .bounds import (
    BoundReport,
    crossover_phase_bound,
    marginal_success_bound,
    mutation_phase_bound,
    step_hitting_time_bound,
    step_probability_bound,
    validate_success_bounds,
)
from .control import (
    ControllerSpec,
    ControllerState,
    IterationParams,
    detect_success,
    fitness_dependent_lambda,
    one_fifth_update,
    realize_params,
    round_half_up,
    state_dependent_lambda,
    static_params,
)
from .experiments import (
    ArmSpec,
    ExperimentSpec,
    RunRow,
    SummaryRow,
    derive_seed,
    parse_sweep_file,
    read_summary_csv,
    run_experiment,
    seven_log_lambda,
    speedup_table,
)
from .objectives import (
    BiObjectiveFunction,
    ObjectivePair,
    SingleObjectiveFunction,
    bi_objective,
    one_max,
    one_min_max,
    pareto_front_size,
    register_bi_objective,
    register_single_objective,
    single_objective,
    strictly_dominates,
    weakly_dominates,
)

__version__ = "0.1.0"
