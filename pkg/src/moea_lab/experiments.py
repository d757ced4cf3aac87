"""Experiment orchestration: seeded multi-run protocols, statistics, CSV emission.

A spec names problem sizes, a run count, and one or more arms (algorithm plus
controller configuration). Each (arm, size, run) triple gets its own seed
derived from the base seed, so results do not depend on execution order.
Summaries go to one CSV, per-run records to a sibling ``*_runs.csv``.
"""

from __future__ import annotations

import configparser
import csv
import hashlib
import math
import statistics
from dataclasses import dataclass
from pathlib import Path

from .algorithms import COVERED, DEFAULT_BUDGET, RunConfig, RunRecord, run
from .control import ControllerSpec

__all__ = [
    "ArmSpec",
    "ExperimentSpec",
    "SummaryRow",
    "RunRow",
    "derive_seed",
    "run_experiment",
    "speedup_table",
    "write_summary_csv",
    "read_summary_csv",
    "write_runs_csv",
    "runs_path_for",
    "parse_sweep_file",
    "seven_log_lambda",
]

SUMMARY_HEADER = ["arm", "n", "runs", "covered", "mean_evals", "stddev_evals", "min_evals", "max_evals"]
RUNS_HEADER = ["arm", "n", "run", "seed", "evals", "iterations", "status"]


def seven_log_lambda(n: int, log_base: float = math.e) -> float:
    """The 7*log(n) schedule; the base is a configuration knob (natural log default).

    Capped at n: lambda doubles as the mutation strength in the standard
    setting, and the flip-count distribution Bin(n, lambda/n) requires
    lambda <= n. The cap only binds for n <= 20 under the natural log.
    """
    if n < 2:
        raise ValueError(f"the 7*log(n) schedule needs n >= 2, got {n}")
    if log_base <= 1.0:
        raise ValueError(f"log base must exceed 1, got {log_base}")
    return min(float(n), max(1.0, 7.0 * math.log(n) / math.log(log_base)))


@dataclass(frozen=True, slots=True)
class ArmSpec:
    """One experiment arm: an algorithm with its controller configuration.

    ``lam`` is either a number or the string ``"7log"``, resolved per problem
    size with the experiment's log base.
    """

    name: str
    algorithm: str
    benchmark: str = "oneminmax"
    controller: str | None = None
    lam: float | str | None = None
    k: float | None = None
    c: float | None = None
    update_strength: float = 1.5

    def resolve_lambda(self, n: int, log_base: float) -> float | None:
        if self.lam is None:
            return None
        if isinstance(self.lam, str):
            if self.lam != "7log":
                raise ValueError(f"unknown lambda rule {self.lam!r}")
            return seven_log_lambda(n, log_base)
        return float(self.lam)

    def controller_spec(self, n: int, log_base: float) -> ControllerSpec | None:
        if self.controller is None:
            return None
        return ControllerSpec(
            mode=self.controller,
            lambda_real=self.resolve_lambda(n, log_base),
            k=self.k,
            c=self.c,
            update_strength=self.update_strength,
        )

    def run_config(self, n: int, seed: int, budget: int, log_base: float) -> RunConfig:
        return RunConfig(
            algorithm=self.algorithm,
            benchmark=self.benchmark,
            n=n,
            seed=seed,
            controller=self.controller_spec(n, log_base),
            budget=budget,
        )


@dataclass(frozen=True, slots=True)
class ExperimentSpec:
    sizes: tuple[int, ...]
    runs: int
    arms: tuple[ArmSpec, ...]
    base_seed: int = 1
    out: str | None = None
    log_base: float = math.e
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError(f"runs must be >= 1, got {self.runs}")
        if not self.arms:
            raise ValueError("an experiment needs at least one arm")
        if not self.sizes:
            raise ValueError("an experiment needs at least one problem size")
        if any(b >= a for a, b in zip(self.sizes[1:], self.sizes)):
            raise ValueError(f"sizes must be strictly increasing, got {self.sizes}")
        names = [arm.name for arm in self.arms]
        if len(set(names)) != len(names):
            raise ValueError(f"arm names must be unique, got {names}")


def derive_seed(base_seed: int, arm: str, n: int, run_index: int) -> int:
    """Stable per-run seed: base_seed XOR sha256(arm|n|run)."""
    digest = hashlib.sha256(f"{arm}|{n}|{run_index}".encode("utf-8")).digest()
    return (int(base_seed) ^ int.from_bytes(digest[:8], "big")) & (2**64 - 1)


@dataclass(frozen=True, slots=True)
class SummaryRow:
    arm: str
    n: int
    runs: int
    covered: int
    mean_evals: float
    stddev_evals: float
    min_evals: int
    max_evals: int


@dataclass(frozen=True, slots=True)
class RunRow:
    arm: str
    n: int
    run: int
    seed: int
    evals: int
    iterations: int
    status: str


def _summarize(arm: str, n: int, records: list[RunRecord]) -> SummaryRow:
    evals = [r.total_evaluations for r in records]
    return SummaryRow(
        arm=arm,
        n=n,
        runs=len(records),
        covered=sum(1 for r in records if r.status == COVERED),
        mean_evals=statistics.fmean(evals),
        stddev_evals=statistics.stdev(evals) if len(evals) > 1 else 0.0,
        min_evals=min(evals),
        max_evals=max(evals),
    )


def run_experiment(spec: ExperimentSpec) -> tuple[list[SummaryRow], list[RunRow]]:
    """Execute every (arm, size, run) cell and aggregate; writes CSVs when `out` is set."""
    seeds = {
        (arm.name, n, r): derive_seed(spec.base_seed, arm.name, n, r)
        for arm in spec.arms
        for n in spec.sizes
        for r in range(spec.runs)
    }
    if len(set(seeds.values())) != len(seeds):
        raise RuntimeError("seed derivation collided across run cells")

    summary_rows: list[SummaryRow] = []
    run_rows: list[RunRow] = []
    for arm in spec.arms:
        for n in spec.sizes:
            records = []
            for r in range(spec.runs):
                seed = seeds[(arm.name, n, r)]
                record = run(arm.run_config(n, seed, spec.budget, spec.log_base))
                records.append(record)
                run_rows.append(
                    RunRow(
                        arm=arm.name,
                        n=n,
                        run=r,
                        seed=seed,
                        evals=record.total_evaluations,
                        iterations=record.iterations,
                        status=record.status,
                    )
                )
            summary_rows.append(_summarize(arm.name, n, records))

    if spec.out is not None:
        write_summary_csv(spec.out, summary_rows)
        write_runs_csv(runs_path_for(spec.out), run_rows)
    return summary_rows, run_rows


def runs_path_for(out: str | Path) -> Path:
    out = Path(out)
    return out.with_name(out.stem + "_runs" + (out.suffix or ".csv"))


def write_summary_csv(path: str | Path, rows: list[SummaryRow]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(SUMMARY_HEADER)
        for row in rows:
            writer.writerow(
                [
                    row.arm,
                    row.n,
                    row.runs,
                    row.covered,
                    repr(row.mean_evals),
                    repr(row.stddev_evals),
                    row.min_evals,
                    row.max_evals,
                ]
            )


def read_summary_csv(path: str | Path) -> list[SummaryRow]:
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        if header != SUMMARY_HEADER:
            raise ValueError(f"unexpected header {header}")
        return [
            SummaryRow(
                arm=arm,
                n=int(n),
                runs=int(runs),
                covered=int(covered),
                mean_evals=float(mean),
                stddev_evals=float(std),
                min_evals=int(lo),
                max_evals=int(hi),
            )
            for arm, n, runs, covered, mean, std, lo, hi in reader
        ]


def write_runs_csv(path: str | Path, rows: list[RunRow]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(RUNS_HEADER)
        for row in rows:
            writer.writerow(
                [row.arm, row.n, row.run, row.seed, row.evals, row.iterations, row.status]
            )


def speedup_table(rows_a: list[SummaryRow], rows_b: list[SummaryRow]) -> list[tuple[int, float]]:
    """Per-size ratio of mean evaluations, first arm over second."""
    by_n_a = {row.n: row for row in rows_a}
    by_n_b = {row.n: row for row in rows_b}
    if set(by_n_a) != set(by_n_b):
        raise ValueError(
            f"size mismatch between arms: {sorted(by_n_a)} vs {sorted(by_n_b)}"
        )
    return [(n, by_n_a[n].mean_evals / by_n_b[n].mean_evals) for n in sorted(by_n_a)]


_LOG_BASES = {"e": math.e, "2": 2.0, "10": 10.0}


def parse_log_base(text: str) -> float:
    return _LOG_BASES.get(text, None) or float(text)


def _parse_lambda(text: str) -> float | str:
    return text if text == "7log" else float(text)


def parse_sweep_file(path: str | Path) -> ExperimentSpec:
    """Read an experiment spec from a plain key-value (INI) file.

    An ``[experiment]`` section carries sizes/runs/seed/out/budget/log_base;
    each ``[arm:NAME]`` section configures one arm.
    """
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ValueError(f"cannot read sweep spec {path!r}")
    if "experiment" not in parser:
        raise ValueError("sweep spec needs an [experiment] section")
    exp = parser["experiment"]

    sizes = tuple(int(tok) for tok in exp["sizes"].replace(",", " ").split())
    arms = []
    for section in parser.sections():
        if not section.startswith("arm:"):
            continue
        raw = parser[section]
        arms.append(
            ArmSpec(
                name=section[len("arm:") :],
                algorithm=raw["algorithm"],
                benchmark=raw.get("benchmark", "oneminmax"),
                controller=raw.get("controller", None) or None,
                lam=_parse_lambda(raw["lambda"]) if "lambda" in raw else None,
                k=float(raw["k"]) if "k" in raw else None,
                c=float(raw["c"]) if "c" in raw else None,
                update_strength=float(raw.get("update_strength", 1.5)),
            )
        )
    return ExperimentSpec(
        sizes=sizes,
        runs=exp.getint("runs", 1),
        arms=tuple(arms),
        base_seed=exp.getint("seed", 1),
        out=exp.get("out", None) or None,
        log_base=parse_log_base(exp.get("log_base", "e")),
        budget=exp.getint("budget", DEFAULT_BUDGET),
    )
