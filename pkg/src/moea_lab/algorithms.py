"""Algorithm drivers with exact fitness-evaluation accounting.

Three drivers share the archive and variation machinery:

* ``run_gsemo`` — baseline archive optimizer, per-bit mutation at rate 1/n,
  one evaluation per iteration.
* ``run_opll_ga`` — single-objective (1+(lambda,lambda)) GA: high-rate
  mutation conditioned on a shared flip count, intermediate selection, biased
  crossover as repair; 2*lambda evaluations per iteration.
* ``run_opll_gsemo`` — the archive optimizer equipped with that two-phase
  variation, selecting one mutation winner per objective; 3*lambda
  evaluations per iteration.

Every evaluation of a newly created bitstring is charged exactly once; parent
values are cached and never recounted.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .archive import Individual, ParetoArchive
from .bitstrings import BitString, RandomSource, _crossover_rows, _exact_flip_rows, random_bitstring
from .control import (
    ControllerSpec,
    IterationParams,
    detect_success,
    fitness_dependent_lambda,
    one_fifth_update,
    realize_params,
    state_dependent_lambda,
)
from .objectives import (
    BiObjectiveFunction,
    ObjectivePair,
    SingleObjectiveFunction,
    bi_objective,
    pareto_front_size,
    single_objective,
)

__all__ = ["RunConfig", "RunRecord", "run", "run_gsemo", "run_opll_ga", "run_opll_gsemo"]

ALGORITHMS = ("gsemo", "opll-ga", "opll-gsemo")
DEFAULT_BUDGET = 10**9

COVERED = "covered"
BUDGET_EXHAUSTED = "budget_exhausted"


@dataclass(frozen=True, slots=True)
class RunConfig:
    """Everything needed to reproduce a single run."""

    algorithm: str
    benchmark: str
    n: int
    seed: int
    controller: ControllerSpec | None = None
    budget: int = DEFAULT_BUDGET
    milestones: tuple[int, ...] = ()
    track_lambda: bool = False
    target_coverage: int | None = None

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.n < 1:
            raise ValueError(f"problem length must be >= 1, got {self.n}")
        if self.budget < 1:
            raise ValueError(f"budget must be >= 1, got {self.budget}")
        if self.algorithm == "gsemo":
            if self.controller is not None:
                raise ValueError("the baseline gsemo driver takes no controller")
        else:
            if self.controller is None:
                raise ValueError(f"{self.algorithm} requires a controller")
            self.controller.validate_for(self.algorithm, self.n)


@dataclass(slots=True)
class RunRecord:
    """Outcome of one run: totals, status, and optional trajectories."""

    seed: int
    total_evaluations: int
    iterations: int
    status: str
    coverage: int | None = None
    best_fitness: int | None = None
    lambda_trajectory: list[float] | None = None
    milestone_evals: dict[int, int] = field(default_factory=dict)


def run(config: RunConfig) -> RunRecord:
    if config.algorithm == "gsemo":
        return run_gsemo(config)
    if config.algorithm == "opll-ga":
        return run_opll_ga(config)
    return run_opll_gsemo(config)


def _resolve_target(config: RunConfig, fn: BiObjectiveFunction) -> int:
    if config.target_coverage is not None:
        return config.target_coverage
    return pareto_front_size(fn)


def _record_milestones(
    milestones: tuple[int, ...], reached: dict[int, int], metric: int, evals: int
) -> None:
    for level in milestones:
        if level not in reached and metric >= level:
            reached[level] = evals


def _pair_of_row(fn: BiObjectiveFunction, row: np.ndarray) -> ObjectivePair:
    if fn.complementary:
        ones = int(row.sum())
        return ObjectivePair(ones, fn.n - ones)
    return fn.evaluate(BitString._from_trusted(row.copy()))


def run_gsemo(config: RunConfig) -> RunRecord:
    """Baseline archive optimizer with per-bit mutation at rate 1/n."""
    fn = bi_objective(config.benchmark, config.n)
    target = _resolve_target(config, fn)
    rng = RandomSource(config.seed)
    gen = rng.generator
    n = config.n
    rate = 1.0 / n

    x = random_bitstring(n, rng)
    archive = ParetoArchive(n, complementary=fn.complementary)
    archive.insert(Individual.evaluated(fn, x))
    evals = 1
    iterations = 0
    milestone_evals: dict[int, int] = {}
    _record_milestones(config.milestones, milestone_evals, archive.coverage(), evals)

    while True:
        coverage = archive.coverage()
        if coverage >= target:
            status = COVERED
            break
        if evals >= config.budget:
            status = BUDGET_EXHAUSTED
            break
        parent = archive.random_member(rng)
        mask = gen.random(n) < rate
        child = parent.genotype.bits.copy()
        child[mask] ^= 1
        evals += 1
        pair = _pair_of_row(fn, child)
        if archive.accepts(pair):
            archive.insert(Individual(BitString._from_trusted(child), pair))
        iterations += 1
        if fn.complementary and archive.coverage() < coverage:
            raise RuntimeError("coverage decreased; archive invariant violated")
        _record_milestones(config.milestones, milestone_evals, archive.coverage(), evals)

    return RunRecord(
        seed=config.seed,
        total_evaluations=evals,
        iterations=iterations,
        status=status,
        coverage=archive.coverage(),
        milestone_evals=milestone_evals,
    )


def _argmax_random_ties(values: np.ndarray, gen: np.random.Generator) -> int:
    best = values.max()
    candidates = np.flatnonzero(values == best)
    if candidates.size == 1:
        return int(candidates[0])
    return int(candidates[gen.integers(candidates.size)])


def run_opll_ga(config: RunConfig) -> RunRecord:
    """Single-objective (1+(lambda,lambda)) GA; terminates at the optimum."""
    fn = single_objective(config.benchmark, config.n)
    controller = config.controller
    rng = RandomSource(config.seed)
    gen = rng.generator
    n = config.n

    if controller.mode == "static":
        static = controller.static_iteration_params()

    x = random_bitstring(n, rng).bits.copy()
    fx = _single_value(fn, x)
    evals = 1
    iterations = 0
    trajectory: list[float] | None = [] if config.track_lambda else None
    milestone_evals: dict[int, int] = {}
    _record_milestones(config.milestones, milestone_evals, fx, evals)

    while True:
        if fx >= fn.optimum:
            status = COVERED
            break
        if evals >= config.budget:
            status = BUDGET_EXHAUSTED
            break
        if controller.mode == "static":
            params = static
        else:
            params = realize_params(fitness_dependent_lambda(n, fx))
        if trajectory is not None:
            trajectory.append(params.k)
        lam = params.lam

        flips = int(gen.binomial(n, params.k / n))
        mutants = _exact_flip_rows(x, flips, lam, gen)
        mutant_values = _batch_values(fn, mutants)
        evals += lam
        winner = mutants[_argmax_random_ties(mutant_values, gen)]

        offspring = _crossover_rows(x, winner, params.c, lam, gen)
        offspring_values = _batch_values(fn, offspring)
        evals += lam
        pick = _argmax_random_ties(offspring_values, gen)
        if offspring_values[pick] >= fx:
            x = offspring[pick].copy()
            fx = int(offspring_values[pick])
        iterations += 1
        _record_milestones(config.milestones, milestone_evals, fx, evals)

    return RunRecord(
        seed=config.seed,
        total_evaluations=evals,
        iterations=iterations,
        status=status,
        best_fitness=fx,
        lambda_trajectory=trajectory,
        milestone_evals=milestone_evals,
    )


def _single_value(fn: SingleObjectiveFunction, row: np.ndarray) -> int:
    if fn.batch_value is not None:
        return int(fn.batch_value(row[None, :])[0])
    return fn.evaluate(BitString._from_trusted(row.copy()))


def _batch_values(fn: SingleObjectiveFunction, rows: np.ndarray) -> np.ndarray:
    if fn.batch_value is not None:
        return fn.batch_value(rows)
    return np.array(
        [fn.evaluate(BitString._from_trusted(row.copy())) for row in rows], dtype=np.int64
    )


def opll_gsemo_iteration(
    archive: ParetoArchive, fn: BiObjectiveFunction, params: IterationParams, rng: RandomSource
) -> int:
    """One two-phase variation step against the archive; returns evaluations charged.

    A shared flip count is drawn from Bin(n, k/n); lambda mutants are created
    from a uniformly chosen parent; the f1-best and f2-best mutants each seed a
    biased-crossover batch of lambda offspring, all of which are pushed through
    the insertion rule in generation order (f1 batch first). Mutants are
    evaluated but never inserted.
    """
    gen = rng.generator
    n = fn.n
    lam = params.lam
    parent = archive.random_member(rng)
    parent_bits = parent.genotype.bits

    flips = int(gen.binomial(n, params.k / n))
    mutants = _exact_flip_rows(parent_bits, flips, lam, gen)
    if fn.batch_f1 is not None:
        f1s = fn.batch_f1(mutants)
        f2s = None  # complementary: maximal f2 is minimal f1
    else:
        pairs = [fn.evaluate(BitString._from_trusted(row.copy())) for row in mutants]
        f1s = np.array([p[0] for p in pairs], dtype=np.int64)
        f2s = np.array([p[1] for p in pairs], dtype=np.int64)

    winner_f1 = mutants[_argmax_random_ties(f1s, gen)]
    if f2s is None:
        winner_f2 = mutants[_argmax_random_ties(-f1s, gen)]
    else:
        winner_f2 = mutants[_argmax_random_ties(f2s, gen)]

    for winner in (winner_f1, winner_f2):
        offspring = _crossover_rows(parent_bits, winner, params.c, lam, gen)
        if fn.complementary:
            ones = offspring.sum(axis=1, dtype=np.int64)
            for row, f1 in zip(offspring, ones):
                pair = ObjectivePair(int(f1), n - int(f1))
                if archive.accepts(pair):
                    archive.insert(Individual(BitString._from_trusted(row.copy()), pair))
        else:
            for row in offspring:
                pair = fn.evaluate(BitString._from_trusted(row.copy()))
                if archive.accepts(pair):
                    archive.insert(Individual(BitString._from_trusted(row.copy()), pair))
    return 3 * lam


def run_opll_gsemo(config: RunConfig) -> RunRecord:
    """Archive optimizer with two-phase variation and a per-iteration controller."""
    fn = bi_objective(config.benchmark, config.n)
    target = _resolve_target(config, fn)
    controller = config.controller
    rng = RandomSource(config.seed)
    n = config.n

    if controller.mode == "static":
        static = controller.static_iteration_params()
    state = controller.initial_state(n) if controller.mode == "one_fifth" else None

    x = random_bitstring(n, rng)
    archive = ParetoArchive(n, complementary=fn.complementary)
    archive.insert(Individual.evaluated(fn, x))
    evals = 1
    iterations = 0
    trajectory: list[float] | None = [] if config.track_lambda else None
    milestone_evals: dict[int, int] = {}
    _record_milestones(config.milestones, milestone_evals, archive.coverage(), evals)

    while True:
        coverage = archive.coverage()
        if coverage >= target:
            status = COVERED
            break
        if evals >= config.budget:
            status = BUDGET_EXHAUSTED
            break
        if controller.mode == "static":
            params = static
            lambda_real = controller.lambda_real
        elif controller.mode == "state_dependent":
            lambda_real = state_dependent_lambda(n, archive.gap(1), archive.gap(2))
            params = realize_params(lambda_real)
        else:
            lambda_real = state.lambda_real
            params = realize_params(lambda_real)
        if trajectory is not None:
            trajectory.append(lambda_real)

        evals += opll_gsemo_iteration(archive, fn, params, rng)
        iterations += 1
        new_coverage = archive.coverage()
        if fn.complementary and new_coverage < coverage:
            raise RuntimeError("coverage decreased; archive invariant violated")
        if state is not None:
            state = one_fifth_update(state, detect_success(coverage, new_coverage), n)
        _record_milestones(config.milestones, milestone_evals, new_coverage, evals)

    return RunRecord(
        seed=config.seed,
        total_evaluations=evals,
        iterations=iterations,
        status=status,
        coverage=archive.coverage(),
        lambda_trajectory=trajectory,
        milestone_evals=milestone_evals,
    )
