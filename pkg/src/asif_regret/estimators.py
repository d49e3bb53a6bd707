"""Estimators of the illness probability ``p_0`` from observed illness counts.

Every estimator evaluates vectorized over a batch of count vectors: ``counts``
has shape ``(M, K + 1)`` and the result has shape ``(M,)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .exceptions import UndefinedEstimatorError, ValidationError
from .spaces import duncan_davis
from .welfare import WelfareSpec, check_probability, chooses_b


@dataclass(frozen=True)
class SamplingDesign:
    """Predetermined sample size for each covariate value."""

    sizes: tuple[int, ...]

    def __post_init__(self):
        sizes = tuple(int(n) for n in np.atleast_1d(self.sizes))
        if any(n < 0 for n in sizes) or any(int(a) != a for a in np.atleast_1d(self.sizes)):
            raise ValidationError(f"sample sizes must be nonnegative integers, got {self.sizes}")
        if not sizes:
            raise ValidationError("a sampling design needs at least one covariate value")
        object.__setattr__(self, "sizes", sizes)

    @property
    def arity(self) -> int:
        return len(self.sizes)

    @property
    def cells(self) -> int:
        """Number of distinct count vectors."""
        return int(np.prod([n + 1 for n in self.sizes], dtype=float))

    def check_counts(self, counts) -> np.ndarray:
        arr = np.atleast_2d(np.asarray(counts))
        if arr.shape[-1] != self.arity:
            raise ValidationError(f"expected {self.arity} counts per vector, got {arr.shape[-1]}")
        if np.any(arr < 0) or np.any(arr > np.asarray(self.sizes)):
            raise ValidationError(f"counts must satisfy 0 <= n_k <= N_k = {self.sizes}")
        return arr


def _ratio(num, den):
    return np.clip(num / den, 0.0, 1.0)


class Estimator:
    """Base class. Subclasses implement :meth:`values`."""

    kind: str = ""
    is_random = False

    def validate(self, design: SamplingDesign) -> None:
        pass

    def values(self, counts: np.ndarray, design: SamplingDesign, noise=None) -> np.ndarray:
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Constant(Estimator):
    """Data-invariant estimate."""

    phi: float
    kind = "constant"

    def __post_init__(self):
        object.__setattr__(self, "phi", check_probability(self.phi, "phi"))

    def values(self, counts, design, noise=None):
        return np.full(np.atleast_2d(counts).shape[0], self.phi)

    def to_dict(self):
        return {"type": self.kind, "phi": self.phi}


@dataclass(frozen=True)
class Randomized(Estimator):
    """Two-point estimate from uninformative data: ``phi_high`` with probability ``q``."""

    phi_low: float
    phi_high: float
    q: float
    kind = "randomized"
    is_random = True

    def __post_init__(self):
        for name in ("phi_low", "phi_high", "q"):
            object.__setattr__(self, name, check_probability(getattr(self, name), name))

    def values(self, counts, design, noise=None):
        if noise is None:
            raise ValidationError("the randomized estimator needs a unit-uniform noise draw")
        noise = np.broadcast_to(np.asarray(noise, dtype=float), (np.atleast_2d(counts).shape[0],))
        return np.where(noise < self.q, self.phi_high, self.phi_low)

    def prob_b(self, w: WelfareSpec) -> float:
        return randomized_q(self, w)

    def to_dict(self):
        return {"type": self.kind, "phi_low": self.phi_low, "phi_high": self.phi_high, "q": self.q}


@dataclass(frozen=True)
class SampleRate(Estimator):
    """Sample illness rate ``n_k / N_k`` of one covariate value."""

    k: int = 0
    kind = "sample_rate"

    def validate(self, design):
        if not 0 <= self.k < design.arity:
            raise ValidationError(f"covariate index {self.k} outside design of arity {design.arity}")
        if design.sizes[self.k] == 0:
            raise UndefinedEstimatorError(f"sample rate undefined: N_{self.k} = 0")

    def values(self, counts, design, noise=None):
        counts = np.atleast_2d(counts)
        return _ratio(counts[:, self.k], design.sizes[self.k])

    def to_dict(self):
        return {"type": self.kind, "k": self.k}


@dataclass(frozen=True)
class Pooled(Estimator):
    """Combined sample rate across all covariate values."""

    kind = "pooled"

    def validate(self, design):
        if sum(design.sizes) == 0:
            raise UndefinedEstimatorError("pooled rate undefined: all sample sizes are zero")

    def values(self, counts, design, noise=None):
        counts = np.atleast_2d(counts)
        return _ratio(counts.sum(axis=1), sum(design.sizes))

    def to_dict(self):
        return {"type": self.kind}


@dataclass(frozen=True)
class WeightedK(Estimator):
    """Weighted average ``sum w_k n_k / sum w_k N_k`` with nonnegative weights summing to 1."""

    weights: tuple[float, ...]
    kind = "weighted"

    def __post_init__(self):
        w = tuple(float(v) for v in self.weights)
        if any(v < 0 for v in w) or abs(sum(w) - 1.0) > 1e-9:
            raise ValidationError(f"weights must be nonnegative and sum to 1, got {w}")
        object.__setattr__(self, "weights", w)

    def validate(self, design):
        if len(self.weights) != design.arity:
            raise ValidationError(
                f"{len(self.weights)} weights given for a design of arity {design.arity}"
            )
        if not any(w * n > 0 for w, n in zip(self.weights, design.sizes)):
            raise ValidationError("weighted estimate needs w_k * N_k > 0 for some k")

    def values(self, counts, design, noise=None):
        counts = np.atleast_2d(counts)
        w = np.asarray(self.weights)
        return _ratio(counts @ w, float(np.dot(w, design.sizes)))

    def to_dict(self):
        return {"type": self.kind, "weights": list(self.weights)}


class Weighted2(WeightedK):
    """Two-sample weighted average with own-group weight ``w0`` in [1/2, 1]."""

    kind = "weighted2"

    def __init__(self, w0: float):
        w0 = float(w0)
        if not 0.5 - 1e-12 <= w0 <= 1.0 + 1e-12:
            raise ValidationError(f"w0 must lie in [1/2, 1], got {w0}")
        w0 = min(max(w0, 0.5), 1.0)
        super().__init__((w0, 1.0 - w0))

    @property
    def w0(self) -> float:
        return self.weights[0]

    def __repr__(self):
        return f"Weighted2(w0={self.w0})"

    def to_dict(self):
        return {"type": self.kind, "w0": self.w0}


class CLSSolution(NamedTuple):
    theta0: np.ndarray | float
    raw: np.ndarray | float
    theta1: np.ndarray | float
    corner: np.ndarray | int  # -1 lower corner, 0 interior, +1 upper corner


def cls_solution(n0, N0, n1, N1, p, r0, r1) -> CLSSolution:
    """Constrained least-squares estimate of ``p_0`` given a known marginal ``p``.

    Minimizes the within-sample squared error subject to ``p = theta0 r0 + theta1 r1``
    and both parameters in [0, 1]; the first-order solution is clipped to the
    Duncan-Davis interval when it falls outside.
    """
    if r1 <= 0:
        raise ValidationError(f"r1 must be positive, got {r1}")
    if N0 + N1 == 0:
        raise UndefinedEstimatorError("constrained least squares undefined: N_0 = N_1 = 0")
    ratio = r0 / r1
    raw = (np.asarray(n0, dtype=float) - ratio * np.asarray(n1, dtype=float) + p * r0 * N1 / r1**2) / (
        N0 + N1 * ratio**2
    )
    lo, hi = duncan_davis(p, r0, r1)
    theta0 = np.clip(raw, lo, hi)
    corner = np.where(raw < lo, -1, np.where(raw > hi, 1, 0))
    theta1 = np.clip((p - theta0 * r0) / r1, 0.0, 1.0)
    if np.ndim(raw) == 0:
        return CLSSolution(float(theta0), float(raw), float(theta1), int(corner))
    return CLSSolution(theta0, raw, theta1, corner)


def cls_theta0(n0, N0, n1, N1, p, r0, r1):
    return cls_solution(n0, N0, n1, N1, p, r0, r1).theta0


def cls_objective(theta0, n0, N0, n1, N1, p, r0, r1):
    """Sum of squared residuals of binary outcomes, with theta1 implied by the marginal."""
    theta0 = np.asarray(theta0, dtype=float)
    theta1 = (p - theta0 * r0) / r1
    # sum_i (y_i - t)^2 over n ones and N - n zeros
    sse0 = n0 * (1 - theta0) ** 2 + (N0 - n0) * theta0**2
    sse1 = n1 * (1 - theta1) ** 2 + (N1 - n1) * theta1**2
    return sse0 + sse1


@dataclass(frozen=True)
class ConstrainedLS(Estimator):
    """Ecological-inference estimate of ``p_0`` using a known marginal illness rate."""

    p: float
    r0: float
    r1: float
    kind = "constrained_ls"

    def __post_init__(self):
        check_probability(self.p, "p")
        if self.r1 <= 0 or self.r0 <= 0 or abs(self.r0 + self.r1 - 1) > 1e-12:
            raise ValidationError(
                f"group fractions must be positive with r0 + r1 = 1, got r0={self.r0}, r1={self.r1}"
            )

    def validate(self, design):
        if design.arity != 2:
            raise ValidationError("constrained least squares needs a two-sample design")
        if sum(design.sizes) == 0:
            raise UndefinedEstimatorError("constrained least squares undefined: N_0 = N_1 = 0")

    def solution(self, counts, design) -> CLSSolution:
        counts = np.atleast_2d(counts)
        N0, N1 = design.sizes
        return cls_solution(counts[:, 0], N0, counts[:, 1], N1, self.p, self.r0, self.r1)

    def values(self, counts, design, noise=None):
        return self.solution(counts, design).theta0

    def to_dict(self):
        return {"type": self.kind, "p": self.p, "r0": self.r0, "r1": self.r1}


def estimate(e: Estimator, counts: Sequence[int], design: SamplingDesign, noise: float | None = None) -> float:
    """Estimate for a single count vector."""
    e.validate(design)
    arr = design.check_counts(counts)
    if arr.shape[0] != 1:
        raise ValidationError("estimate takes a single count vector; use Estimator.values for batches")
    return float(e.values(arr, design, noise)[0])


def randomized_q(e: Randomized, w: WelfareSpec) -> float:
    """Probability that the randomized estimate leads to aggressive treatment."""
    return e.q * bool(chooses_b(e.phi_high, w)) + (1.0 - e.q) * bool(chooses_b(e.phi_low, w))


_KINDS = {
    "constant": lambda d: Constant(d["phi"]),
    "randomized": lambda d: Randomized(d["phi_low"], d["phi_high"], d["q"]),
    "sample_rate": lambda d: SampleRate(int(d.get("k", 0))),
    "pooled": lambda d: Pooled(),
    "weighted2": lambda d: Weighted2(d["w0"]),
    "weighted": lambda d: WeightedK(tuple(d["weights"])),
    "constrained_ls": lambda d: ConstrainedLS(d["p"], d["r0"], d["r1"]),
}


def estimator_from_dict(d: dict) -> Estimator:
    kind = d.get("type")
    if kind not in _KINDS:
        raise ValidationError(f"estimator.type: unknown estimator {kind!r}; choose from {sorted(_KINDS)}")
    try:
        return _KINDS[kind](d)
    except KeyError as exc:
        raise ValidationError(f"estimator.{exc.args[0]}: missing field for {kind!r}") from None
