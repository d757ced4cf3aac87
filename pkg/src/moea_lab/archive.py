"""The population archive: mutually non-dominated individuals plus gap queries."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bitstrings import BitString, RandomSource
from .objectives import BiObjectiveFunction, ObjectivePair, weakly_dominates

__all__ = ["Individual", "ParetoArchive"]


@dataclass(frozen=True, slots=True)
class Individual:
    """A genotype with its objective values cached at creation time."""

    genotype: BitString
    objectives: ObjectivePair

    @classmethod
    def evaluated(cls, fn: BiObjectiveFunction, genotype: BitString) -> "Individual":
        return cls(genotype, fn.evaluate(genotype))


class ParetoArchive:
    """Set of individuals no member of which strictly dominates another.

    Insertion keeps the incumbent: an offspring weakly dominated by any member
    (equality included) is rejected; otherwise it enters and every member it
    weakly dominates is dropped.

    With ``complementary=True`` the archive assumes f1 + f2 == n for every
    member (all objective vectors mutually incomparable), which reduces
    insertion to an O(1) check on f1. The general dominance-scan path is the
    default; the two are interchangeable on complementary inputs.
    """

    __slots__ = ("n", "complementary", "_members", "_covered")

    def __init__(self, n: int, complementary: bool = False):
        if n < 1:
            raise ValueError(f"problem length must be >= 1, got {n}")
        self.n = n
        self.complementary = complementary
        self._members: list[Individual] = []
        self._covered = np.zeros(n + 1, dtype=bool) if complementary else None

    def __len__(self) -> int:
        return len(self._members)

    def __iter__(self):
        return iter(self._members)

    @property
    def members(self) -> tuple[Individual, ...]:
        return tuple(self._members)

    def accepts(self, objectives) -> bool:
        """Would an individual with these objectives be inserted right now?"""
        if self.complementary:
            return not self._covered[objectives[0]]
        return not any(weakly_dominates(m.objectives, objectives) for m in self._members)

    def insert(self, individual: Individual) -> bool:
        """Apply the dominance-based insertion rule; True iff the archive changed."""
        pair = individual.objectives
        if individual.genotype.n != self.n:
            raise ValueError(f"length mismatch: archive holds {self.n}, got {individual.genotype.n}")
        if self.complementary:
            f1 = pair[0]
            if not (0 <= f1 <= self.n) or pair[0] + pair[1] != self.n:
                raise RuntimeError(
                    f"objectives {tuple(pair)} violate the complementary-front structure"
                )
            if self._covered[f1]:
                return False
            self._covered[f1] = True
            self._members.append(individual)
            return True
        if not self.accepts(pair):
            return False
        self._members = [
            m for m in self._members if not weakly_dominates(pair, m.objectives)
        ]
        self._members.append(individual)
        return True

    def coverage(self) -> int:
        """Distinct objective vectors held; front points covered on oneminmax."""
        return len(self._members)

    def covers_f1(self, value: int) -> bool:
        if self.complementary:
            return bool(self._covered[value])
        return any(m.objectives[0] == value for m in self._members)

    def objective_values(self, b: int) -> set[int]:
        if b not in (1, 2):
            raise ValueError(f"objective index must be 1 or 2, got {b}")
        return {m.objectives[b - 1] for m in self._members}

    def gap(self, b: int) -> int | None:
        """Smallest f_b value present whose successor value is absent.

        None means that side of the front carries no such gap.
        """
        if not self._members:
            raise ValueError("gap statistic is undefined for an empty archive")
        if b not in (1, 2):
            raise ValueError(f"objective index must be 1 or 2, got {b}")
        if self.complementary:
            present = self._covered if b == 1 else self._covered[::-1]
            open_ends = present[:-1] & ~present[1:]
            hits = np.flatnonzero(open_ends)
            return int(hits[0]) if hits.size else None
        values = self.objective_values(b)
        for j in sorted(values):
            if 0 <= j <= self.n - 1 and j + 1 not in values:
                return j
        return None

    def random_member(self, rng: RandomSource) -> Individual:
        if not self._members:
            raise ValueError("cannot draw from an empty archive")
        if len(self._members) == 1:
            return self._members[0]
        return self._members[int(rng.generator.integers(len(self._members)))]
