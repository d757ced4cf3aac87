"""Benchmark functions and the dominance relations between objective vectors.

Both objectives are maximized throughout; there are no minimization adapters.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .bitstrings import BitString

__all__ = [
    "ObjectivePair",
    "BiObjectiveFunction",
    "SingleObjectiveFunction",
    "one_min_max",
    "one_max",
    "weakly_dominates",
    "strictly_dominates",
    "pareto_front_size",
    "bi_objective",
    "single_objective",
    "register_bi_objective",
    "register_single_objective",
]


class ObjectivePair(NamedTuple):
    f1: int
    f2: int


def weakly_dominates(a, b) -> bool:
    """a >= b in both components."""
    return a[0] >= b[0] and a[1] >= b[1]


def strictly_dominates(a, b) -> bool:
    """a >= b in both components with at least one strict inequality."""
    return a[0] >= b[0] and a[1] >= b[1] and (a[0] > b[0] or a[1] > b[1])


def one_min_max(x: BitString) -> ObjectivePair:
    """(number of ones, number of zeros)."""
    ones = x.ones()
    return ObjectivePair(ones, x.n - ones)


def one_max(x: BitString) -> int:
    return x.ones()


@dataclass(frozen=True)
class BiObjectiveFunction:
    """A named bi-objective benchmark of fixed length.

    `complementary` marks functions with f1 + f2 == n, which unlocks the
    archive fast path. `batch_f1`, when present, maps a (rows, n) uint8 matrix
    to the f1 value of each row.
    """

    name: str
    n: int
    evaluate: Callable[[BitString], ObjectivePair]
    complementary: bool = False
    batch_f1: Callable[[np.ndarray], np.ndarray] | None = field(default=None, compare=False)


@dataclass(frozen=True)
class SingleObjectiveFunction:
    name: str
    n: int
    evaluate: Callable[[BitString], int]
    optimum: int
    batch_value: Callable[[np.ndarray], np.ndarray] | None = field(default=None, compare=False)


def _batch_ones(rows: np.ndarray) -> np.ndarray:
    return rows.sum(axis=1, dtype=np.int64)


def _make_one_min_max(n: int) -> BiObjectiveFunction:
    return BiObjectiveFunction(
        name="oneminmax", n=n, evaluate=one_min_max, complementary=True, batch_f1=_batch_ones
    )


def _make_one_max(n: int) -> SingleObjectiveFunction:
    return SingleObjectiveFunction(
        name="onemax", n=n, evaluate=one_max, optimum=n, batch_value=_batch_ones
    )


_BI_OBJECTIVE: dict[str, Callable[[int], BiObjectiveFunction]] = {"oneminmax": _make_one_min_max}
_SINGLE_OBJECTIVE: dict[str, Callable[[int], SingleObjectiveFunction]] = {"onemax": _make_one_max}


def register_bi_objective(name: str, factory: Callable[[int], BiObjectiveFunction]) -> None:
    _BI_OBJECTIVE[name] = factory


def register_single_objective(name: str, factory: Callable[[int], SingleObjectiveFunction]) -> None:
    _SINGLE_OBJECTIVE[name] = factory


def bi_objective(name: str, n: int) -> BiObjectiveFunction:
    if n < 1:
        raise ValueError(f"problem length must be >= 1, got {n}")
    try:
        factory = _BI_OBJECTIVE[name]
    except KeyError:
        raise ValueError(f"unknown bi-objective benchmark {name!r}") from None
    return factory(n)


def single_objective(name: str, n: int) -> SingleObjectiveFunction:
    if n < 1:
        raise ValueError(f"problem length must be >= 1, got {n}")
    try:
        factory = _SINGLE_OBJECTIVE[name]
    except KeyError:
        raise ValueError(f"unknown single-objective benchmark {name!r}") from None
    return factory(n)


def pareto_front_size(fn: BiObjectiveFunction) -> int:
    """Size of the full front, known in closed form for oneminmax only."""
    if fn.name == "oneminmax":
        return fn.n + 1
    raise ValueError(f"no closed-form front size for benchmark {fn.name!r}")
