"""Per-iteration parameter rules: static, fitness- and state-dependent, one-fifth."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

__all__ = [
    "CONTROLLER_MODES",
    "ControllerState",
    "IterationParams",
    "ControllerSpec",
    "round_half_up",
    "realize_params",
    "static_params",
    "fitness_dependent_lambda",
    "state_dependent_lambda",
    "one_fifth_update",
    "detect_success",
]

CONTROLLER_MODES = ("static", "fitness_dependent", "state_dependent", "one_fifth")


@dataclass(frozen=True, slots=True)
class IterationParams:
    """Realized parameters for one iteration: offspring count, mutation strength, bias."""

    lam: int  # offspring population size (integer)
    k: float  # mutation strength; the flip count is Bin(n, k/n)
    c: float  # crossover bias

    def __post_init__(self):
        if self.lam < 1:
            raise ValueError(f"offspring count must be >= 1, got {self.lam}")
        if self.k < 0:
            raise ValueError(f"mutation strength must be >= 0, got {self.k}")
        if not 0.0 < self.c <= 1.0:
            raise ValueError(f"crossover bias must lie in (0, 1], got {self.c}")


@dataclass(frozen=True, slots=True)
class ControllerState:
    """State of the one-fifth rule: real-valued lambda and the update strength."""

    lambda_real: float
    F: float
    lambda_min: float
    lambda_max: float
    mode: str = "one_fifth"

    def __post_init__(self):
        if self.mode == "one_fifth" and self.F <= 1.0:
            raise ValueError(f"update strength must exceed 1, got {self.F}")
        if not self.lambda_min <= self.lambda_real <= self.lambda_max:
            raise ValueError(
                f"lambda {self.lambda_real} outside [{self.lambda_min}, {self.lambda_max}]"
            )


def round_half_up(value: float) -> int:
    return int(math.floor(value + 0.5))


def realize_params(lambda_real: float) -> IterationParams:
    """Standard setting from an unrounded lambda: k = lambda, c = 1/lambda.

    Only the offspring count is rounded (half-up); k and c keep full precision.
    """
    if lambda_real < 1.0:
        raise ValueError(f"lambda must be >= 1, got {lambda_real}")
    return IterationParams(
        lam=max(1, round_half_up(lambda_real)), k=lambda_real, c=1.0 / lambda_real
    )


def static_params(k: float, lam: int, c: float | None = None) -> IterationParams:
    """Fixed parameters for every iteration; c defaults to 1/k."""
    if k < 1.0:
        raise ValueError(f"mutation strength must be >= 1, got {k}")
    if lam < 1:
        raise ValueError(f"offspring count must be >= 1, got {lam}")
    if c is None:
        c = 1.0 / k
    if not 0.0 < c <= 1.0:
        raise ValueError(f"crossover bias must lie in (0, 1], got {c}")
    return IterationParams(lam=lam, k=k, c=c)


def fitness_dependent_lambda(n: int, fx: int) -> float:
    """sqrt(n / (n - f(x))); capped at n when the optimum is already reached."""
    if not 0 <= fx <= n:
        raise ValueError(f"fitness must lie in [0, {n}], got {fx}")
    if fx == n:
        return float(n)
    return math.sqrt(n / (n - fx))


def state_dependent_lambda(n: int, o1: int | None, o2: int | None) -> float:
    """sqrt(n / (n - m)) with m the smaller of the two gap statistics."""
    gaps = [g for g in (o1, o2) if g is not None]
    if not gaps:
        raise ValueError("both gap statistics are exhausted; the front is covered")
    m = min(gaps)
    if not 0 <= m <= n - 1:
        raise ValueError(f"gap statistic must lie in [0, {n - 1}], got {m}")
    return math.sqrt(n / (n - m))


def one_fifth_update(state: ControllerState, success: bool, n: int) -> ControllerState:
    """Divide lambda by F on success, multiply by F^(1/(5n-1)) otherwise, clamped to [1, n]."""
    if state.mode != "one_fifth":
        raise ValueError(f"one-fifth update applied to a {state.mode!r} controller")
    if success:
        lam = max(state.lambda_min, state.lambda_real / state.F)
    else:
        lam = min(float(n), state.lambda_max, state.lambda_real * state.F ** (1.0 / (5 * n - 1)))
    return replace(state, lambda_real=lam)


def detect_success(coverage_before: int, coverage_after: int) -> bool:
    """True iff the iteration strictly increased front coverage."""
    if coverage_after < coverage_before:
        raise RuntimeError(
            f"coverage decreased from {coverage_before} to {coverage_after}; "
            "archive invariant violated"
        )
    return coverage_after > coverage_before


@dataclass(frozen=True, slots=True)
class ControllerSpec:
    """Configuration-time description of a parameter controller.

    `lambda_real` is required for static mode and ignored by the dependent
    modes, which recompute lambda every iteration. `k` and `c` override the
    standard setting for static mode only.
    """

    mode: str
    lambda_real: float | None = None
    k: float | None = None
    c: float | None = None
    update_strength: float = 1.5

    _DRIVER_MODES = {
        "gsemo": (),
        "opll-ga": ("static", "fitness_dependent"),
        "opll-gsemo": ("static", "state_dependent", "one_fifth"),
    }

    def __post_init__(self):
        if self.mode not in CONTROLLER_MODES:
            raise ValueError(f"unknown controller mode {self.mode!r}")
        if self.mode == "static":
            if self.lambda_real is None:
                raise ValueError("static control requires a lambda value")
            if self.lambda_real < 1.0:
                raise ValueError(f"lambda must be >= 1, got {self.lambda_real}")
        if self.mode == "one_fifth" and self.update_strength <= 1.0:
            raise ValueError(f"update strength must exceed 1, got {self.update_strength}")

    def validate_for(self, algorithm: str, n: int) -> None:
        allowed = self._DRIVER_MODES.get(algorithm)
        if allowed is None:
            raise ValueError(f"unknown algorithm {algorithm!r}")
        if self.mode not in allowed:
            raise ValueError(f"controller {self.mode!r} is not valid for {algorithm!r}")
        if self.mode == "static":
            params = self.static_iteration_params()
            if params.k > n:
                raise ValueError(f"mutation strength {params.k} exceeds problem length {n}")

    def static_iteration_params(self) -> IterationParams:
        k = self.k if self.k is not None else self.lambda_real
        return static_params(k=k, lam=max(1, round_half_up(self.lambda_real)), c=self.c)

    def initial_state(self, n: int) -> ControllerState:
        return ControllerState(
            lambda_real=1.0,
            F=self.update_strength,
            lambda_min=1.0,
            lambda_max=float(n),
            mode="one_fifth",
        )
