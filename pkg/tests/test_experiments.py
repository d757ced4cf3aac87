"""Harness behavior: seeding, aggregation, CSV round-trips, sweep files."""

import itertools
import math

import pytest

from moea_lab import (
    ArmSpec,
    ExperimentSpec,
    derive_seed,
    parse_sweep_file,
    read_summary_csv,
    run_experiment,
    seven_log_lambda,
    speedup_table,
)
from moea_lab.experiments import RunRow, SummaryRow, runs_path_for, write_summary_csv

GSEMO_ARM = ArmSpec(name="gsemo", algorithm="gsemo")
OPLL_ARM = ArmSpec(name="opll", algorithm="opll-gsemo", controller="static", lam=2.0)


def test_spec_validation():
    with pytest.raises(ValueError):
        ExperimentSpec(sizes=(10, 10), runs=1, arms=(GSEMO_ARM,))
    with pytest.raises(ValueError):
        ExperimentSpec(sizes=(20, 10), runs=1, arms=(GSEMO_ARM,))
    with pytest.raises(ValueError):
        ExperimentSpec(sizes=(10,), runs=0, arms=(GSEMO_ARM,))
    with pytest.raises(ValueError):
        ExperimentSpec(sizes=(10,), runs=1, arms=())
    with pytest.raises(ValueError):
        ExperimentSpec(sizes=(), runs=1, arms=(GSEMO_ARM,))
    with pytest.raises(ValueError):
        ExperimentSpec(sizes=(10,), runs=1, arms=(GSEMO_ARM, GSEMO_ARM))


def test_seed_derivation_distinct_across_protocol():
    sizes = range(10, 150, 10)
    seeds = {
        derive_seed(1, arm, n, r)
        for arm, n, r in itertools.product(("gsemo", "opll"), sizes, range(10))
    }
    assert len(seeds) == 2 * 14 * 10
    assert derive_seed(1, "gsemo", 10, 0) == derive_seed(1, "gsemo", 10, 0)
    assert all(0 <= s < 2**64 for s in seeds)


def test_seven_log_lambda():
    assert seven_log_lambda(100) == pytest.approx(7 * math.log(100))
    assert seven_log_lambda(100, log_base=10.0) == pytest.approx(14.0)
    # the lambda = k <= n cap binds at small n
    assert seven_log_lambda(8, log_base=2.0) == 8.0
    assert seven_log_lambda(10) == 10.0
    with pytest.raises(ValueError):
        seven_log_lambda(1)
    with pytest.raises(ValueError):
        seven_log_lambda(100, log_base=1.0)


def test_single_cell_experiment_counting(tmp_path):
    out = tmp_path / "exp.csv"
    spec = ExperimentSpec(sizes=(10,), runs=1, arms=(GSEMO_ARM,), base_seed=5, out=str(out))
    summary, runs = run_experiment(spec)
    assert len(summary) == 1 and len(runs) == 1
    assert summary[0].runs == 1 and summary[0].covered == 1
    assert summary[0].stddev_evals == 0.0
    assert out.exists() and runs_path_for(out).exists()


def test_experiment_csv_round_trip_and_determinism(tmp_path):
    out_a = tmp_path / "a.csv"
    out_b = tmp_path / "b.csv"
    arms = (GSEMO_ARM, OPLL_ARM)
    spec_a = ExperimentSpec(sizes=(10, 20), runs=3, arms=arms, base_seed=42, out=str(out_a))
    spec_b = ExperimentSpec(sizes=(10, 20), runs=3, arms=arms, base_seed=42, out=str(out_b))
    summary_a, runs_a = run_experiment(spec_a)
    summary_b, runs_b = run_experiment(spec_b)
    assert summary_a == summary_b
    assert runs_a == runs_b
    assert out_a.read_bytes() == out_b.read_bytes()
    assert runs_path_for(out_a).read_bytes() == runs_path_for(out_b).read_bytes()
    assert read_summary_csv(out_a) == summary_a


def test_summary_statistics_are_sample_convention(tmp_path):
    spec = ExperimentSpec(sizes=(12,), runs=4, arms=(GSEMO_ARM,), base_seed=7)
    summary, runs = run_experiment(spec)
    evals = [r.evals for r in runs]
    mean = sum(evals) / len(evals)
    var = sum((e - mean) ** 2 for e in evals) / (len(evals) - 1)
    assert summary[0].mean_evals == pytest.approx(mean)
    assert summary[0].stddev_evals == pytest.approx(math.sqrt(var))
    assert summary[0].min_evals == min(evals)
    assert summary[0].max_evals == max(evals)


def test_budget_exhaustion_flagged_in_covered_count():
    spec = ExperimentSpec(sizes=(30,), runs=3, arms=(GSEMO_ARM,), base_seed=3, budget=50)
    summary, runs = run_experiment(spec)
    assert summary[0].covered == 0
    assert all(r.status == "budget_exhausted" for r in runs)


def test_speedup_table():
    def row(arm, n, mean):
        return SummaryRow(arm, n, 1, 1, mean, 0.0, int(mean), int(mean))

    rows_a = [row("a", 10, 100.0), row("a", 20, 300.0)]
    rows_b = [row("b", 10, 100.0), row("b", 20, 150.0)]
    assert speedup_table(rows_a, rows_a) == [(10, 1.0), (20, 1.0)]
    assert speedup_table(rows_a, rows_b) == [(10, 1.0), (20, 2.0)]
    with pytest.raises(ValueError):
        speedup_table(rows_a, rows_b[:1])


def test_read_summary_rejects_foreign_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("arm,n\nx,1\n")
    with pytest.raises(ValueError):
        read_summary_csv(path)


def test_runs_path_naming(tmp_path):
    assert runs_path_for("out/results.csv").name == "results_runs.csv"
    assert runs_path_for("results").name == "results_runs.csv"


def test_write_summary_parent_dirs(tmp_path):
    nested = tmp_path / "deep" / "dir" / "out.csv"
    write_summary_csv(nested, [])
    assert nested.exists()


def test_parse_sweep_file(tmp_path):
    spec_file = tmp_path / "sweep.ini"
    spec_file.write_text(
        """
[experiment]
sizes = 10 20 30
runs = 2
seed = 9
out = results.csv
log_base = e
budget = 500000

[arm:gsemo]
algorithm = gsemo

[arm:opll]
algorithm = opll-gsemo
controller = static
lambda = 7log

[arm:fifth]
algorithm = opll-gsemo
controller = one_fifth
update_strength = 2.0
"""
    )
    spec = parse_sweep_file(spec_file)
    assert spec.sizes == (10, 20, 30)
    assert spec.runs == 2
    assert spec.base_seed == 9
    assert spec.budget == 500_000
    assert [arm.name for arm in spec.arms] == ["gsemo", "opll", "fifth"]
    assert spec.arms[1].lam == "7log"
    assert spec.arms[1].resolve_lambda(30, spec.log_base) == pytest.approx(7 * math.log(30))
    assert spec.arms[1].resolve_lambda(20, spec.log_base) == 20.0  # capped at n
    assert spec.arms[2].update_strength == 2.0

    summary, runs = run_experiment(spec)
    assert len(summary) == 9 and len(runs) == 18

    with pytest.raises(ValueError):
        parse_sweep_file(tmp_path / "missing.ini")
    bad = tmp_path / "bad.ini"
    bad.write_text("[arm:x]\nalgorithm = gsemo\n")
    with pytest.raises(ValueError):
        parse_sweep_file(bad)
