"""Feasible sets of illness probabilities and the finite grids used to search them.

A state is a tuple ``(p_0, p_1, ..., p_K)``; coordinate 0 is always the
covariate value of the patient being treated.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .exceptions import InfeasibleSpaceError, ValidationError
from .welfare import PROB_TOL

FEAS_TOL = 1e-12


@dataclass(frozen=True)
class IntervalSpace:
    p_min: float = 0.0
    p_max: float = 1.0

    def __post_init__(self):
        if not (-PROB_TOL <= self.p_min <= self.p_max <= 1 + PROB_TOL):
            raise ValidationError(
                f"interval requires 0 <= p_min <= p_max <= 1, got [{self.p_min}, {self.p_max}]"
            )

    @property
    def arity(self) -> int:
        return 1

    @property
    def p0_range(self) -> tuple[float, float]:
        return self.p_min, self.p_max

    def contains(self, state) -> bool:
        (p,) = np.atleast_1d(state)
        return self.p_min - FEAS_TOL <= p <= self.p_max + FEAS_TOL


@dataclass(frozen=True)
class BoundedVariationSpace:
    """Pairs ``(p_0, p_1)`` with ``p_1 + lambda_minus <= p_0 <= p_1 + lambda_plus``."""

    interval0: IntervalSpace
    interval1: IntervalSpace = IntervalSpace()
    lambda_minus: float = 0.0
    lambda_plus: float = 0.0

    def __post_init__(self):
        if self.lambda_minus > self.lambda_plus:
            raise ValidationError(
                f"lambda_minus must not exceed lambda_plus, got {self.lambda_minus} > {self.lambda_plus}"
            )

    @property
    def arity(self) -> int:
        return 2

    @property
    def p0_range(self) -> tuple[float, float]:
        return self.interval0.p0_range

    def p1_band(self, p0: float) -> tuple[float, float]:
        """Feasible ``p_1`` interval given ``p_0``."""
        lo = max(self.interval1.p_min, p0 - self.lambda_plus)
        hi = min(self.interval1.p_max, p0 - self.lambda_minus)
        return lo, hi

    def contains(self, state) -> bool:
        p0, p1 = state
        return (
            self.interval0.contains(p0)
            and self.interval1.contains(p1)
            and p1 + self.lambda_minus - FEAS_TOL <= p0 <= p1 + self.lambda_plus + FEAS_TOL
        )


@dataclass(frozen=True)
class BoundedVariationFamily:
    """States ``(p_0, ..., p_K)`` with each ``p_k`` banded relative to ``p_0``."""

    intervals: tuple[IntervalSpace, ...]
    lambda_minus: tuple[float, ...]
    lambda_plus: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "intervals", tuple(self.intervals))
        object.__setattr__(self, "lambda_minus", tuple(float(v) for v in self.lambda_minus))
        object.__setattr__(self, "lambda_plus", tuple(float(v) for v in self.lambda_plus))
        k = len(self.intervals) - 1
        if k < 1:
            raise ValidationError("a bounded-variation family needs at least two covariate values")
        if len(self.lambda_minus) != k or len(self.lambda_plus) != k:
            raise ValidationError(f"expected {k} lambda bounds per side")
        for lo, hi in zip(self.lambda_minus, self.lambda_plus):
            if lo > hi:
                raise ValidationError(f"lambda_minus must not exceed lambda_plus, got {lo} > {hi}")

    @property
    def arity(self) -> int:
        return len(self.intervals)

    @property
    def p0_range(self) -> tuple[float, float]:
        return self.intervals[0].p0_range

    def band(self, k: int, p0: float) -> tuple[float, float]:
        iv = self.intervals[k]
        return (
            max(iv.p_min, p0 - self.lambda_plus[k - 1]),
            min(iv.p_max, p0 - self.lambda_minus[k - 1]),
        )

    def contains(self, state) -> bool:
        p0 = state[0]
        if not self.intervals[0].contains(p0):
            return False
        for k in range(1, self.arity):
            pk = state[k]
            if not self.intervals[k].contains(pk):
                return False
            if not (
                pk + self.lambda_minus[k - 1] - FEAS_TOL <= p0 <= pk + self.lambda_plus[k - 1] + FEAS_TOL
            ):
                return False
        return True


@dataclass(frozen=True)
class EcologicalSpace:
    """States ``(p_0, p_1)`` consistent with a known marginal ``p = p_0 r_0 + p_1 r_1``."""

    p_marginal: float
    r0: float
    r1: float
    base0: IntervalSpace = IntervalSpace()

    def __post_init__(self):
        if not (0 <= self.p_marginal <= 1):
            raise ValidationError(f"marginal probability must lie in [0, 1], got {self.p_marginal}")
        if not (self.r0 > 0 and self.r1 > 0) or abs(self.r0 + self.r1 - 1) > PROB_TOL:
            raise ValidationError(
                f"group fractions must be positive with r0 + r1 = 1, got r0={self.r0}, r1={self.r1}"
            )

    @property
    def arity(self) -> int:
        return 2

    @property
    def p0_range(self) -> tuple[float, float]:
        lo, hi = duncan_davis(self.p_marginal, self.r0, self.r1)
        return max(lo, self.base0.p_min), min(hi, self.base0.p_max)

    def p1_given(self, p0):
        p1 = (self.p_marginal - np.asarray(p0) * self.r0) / self.r1
        return np.clip(p1, 0.0, 1.0)

    def contains(self, state) -> bool:
        p0, p1 = state
        return (
            self.base0.contains(p0)
            and -FEAS_TOL <= p1 <= 1 + FEAS_TOL
            and abs(p0 * self.r0 + p1 * self.r1 - self.p_marginal) <= FEAS_TOL
        )


@dataclass(frozen=True, eq=False)
class StateGrid:
    """Immutable finite list of feasible states, one row per state."""

    states: np.ndarray
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        arr = np.array(self.states, dtype=float)
        if arr.ndim == 1:
            arr = arr[:, None]
        if arr.size == 0:
            raise InfeasibleSpaceError("state grid is empty")
        arr.setflags(write=False)
        object.__setattr__(self, "states", arr)

    def __len__(self) -> int:
        return self.states.shape[0]

    @property
    def arity(self) -> int:
        return self.states.shape[1]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([f"p{k}" for k in range(self.arity)])
        for row in self.states:
            writer.writerow([f"{v:.6f}" for v in row])
        return buf.getvalue()


def _uniform(lo: float, hi: float, points: int) -> np.ndarray:
    if hi - lo <= FEAS_TOL:
        return np.array([lo])
    return np.linspace(lo, hi, points)


def _check_points(points: int, name: str = "points") -> None:
    if int(points) != points or points < 2:
        raise ValidationError(f"{name} must be an integer >= 2, got {points}")


def grid_interval(space: IntervalSpace, points: int) -> StateGrid:
    _check_points(points)
    states = _uniform(space.p_min, space.p_max, points)
    return StateGrid(states[:, None], {"space": "interval", "points": points})


def grid_bv2(space: BoundedVariationSpace, points0: int, points1: int) -> StateGrid:
    """Per-``p_0`` band grid: ``points1`` values of ``p_1`` across each feasible band."""
    _check_points(points0, "points0")
    _check_points(points1, "points1")
    rows = []
    for p0 in _uniform(*space.interval0.p0_range, points0):
        lo, hi = space.p1_band(p0)
        if lo > hi + FEAS_TOL:
            continue
        for p1 in _uniform(lo, max(lo, hi), points1):
            rows.append((p0, p1))
    if not rows:
        raise InfeasibleSpaceError("bounded-variation space has no feasible states")
    return StateGrid(np.array(rows), {"space": "bv2", "points0": points0, "points1": points1})


def grid_bv_family(space: BoundedVariationFamily, points: Sequence[int]) -> StateGrid:
    """Grid over ``p_0`` and, for each ``p_0``, the Cartesian product of the per-k bands."""
    if len(points) != space.arity:
        raise ValidationError(f"need {space.arity} grid resolutions, got {len(points)}")
    for i, n in enumerate(points):
        _check_points(n, f"points[{i}]")
    rows = []
    for p0 in _uniform(*space.intervals[0].p0_range, points[0]):
        axes = []
        for k in range(1, space.arity):
            lo, hi = space.band(k, p0)
            if lo > hi + FEAS_TOL:
                break
            axes.append(_uniform(lo, max(lo, hi), points[k]))
        else:
            rows.extend((p0, *rest) for rest in itertools.product(*axes))
    if not rows:
        raise InfeasibleSpaceError("bounded-variation family has no feasible states")
    return StateGrid(np.array(rows), {"space": "bv_family", "points": list(points)})


def duncan_davis(p: float, r0: float, r1: float) -> tuple[float, float]:
    """Sharp bounds on ``p_0`` implied by ``p = p_0 r_0 + p_1 r_1`` with ``p_1`` in [0, 1]."""
    if r0 <= 0:
        raise ValidationError(f"r0 must be positive, got {r0}")
    lo = max(0.0, (p - r1) / r0)
    hi = min(1.0, p / r0)
    return lo, hi


def grid_eco(space: EcologicalSpace, points: int) -> StateGrid:
    _check_points(points)
    lo, hi = space.p0_range
    if lo > hi + FEAS_TOL:
        raise InfeasibleSpaceError(
            f"base interval for p_0 does not meet the Duncan-Davis bound [{lo}, {hi}]"
        )
    p0 = _uniform(lo, max(lo, hi), points)
    states = np.column_stack([p0, space.p1_given(p0)])
    return StateGrid(states, {"space": "ecological", "points": points})


def default_grid(space, grid0: int | None = None, grid1: int | None = None) -> StateGrid:
    """Grid with the package's default resolutions for each kind of space."""
    if isinstance(space, IntervalSpace):
        return grid_interval(space, grid0 or 1001)
    if isinstance(space, BoundedVariationSpace):
        return grid_bv2(space, grid0 or 50, grid1 or 50)
    if isinstance(space, BoundedVariationFamily):
        return grid_bv_family(space, [grid0 or 50] + [grid1 or 50] * (space.arity - 1))
    if isinstance(space, EcologicalSpace):
        return grid_eco(space, grid0 or 100)
    raise TypeError(f"unsupported space {type(space).__name__}")
