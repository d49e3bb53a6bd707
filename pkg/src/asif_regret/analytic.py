"""Closed-form minimax-regret values and Hoeffding-type upper bounds.

These serve as oracles for the numerical engine.  ``p_m`` and ``p_M`` are the
smallest and largest feasible illness probabilities for the treated group.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import minimize_scalar

from .exceptions import TrivialProblemError, ValidationError
from .welfare import WelfareSpec

DELTA_MIN = 1e-6
DELTA_TOL = 1e-9


def side_gaps(p_m: float, p_M: float, w: WelfareSpec) -> tuple[float, float]:
    """Worst welfare gaps when wrongly choosing B (low end) and wrongly choosing A (high end)."""
    return (1 - p_m) - w.u_B, w.u_B - (1 - p_M)


def _require_straddle(p_m: float, p_M: float, w: WelfareSpec) -> tuple[float, float]:
    if not p_m < w.threshold < p_M:
        raise TrivialProblemError(
            f"need p_m < 1 - u_B < p_M for a nontrivial problem, got p_m={p_m}, "
            f"threshold={w.threshold}, p_M={p_M}"
        )
    return side_gaps(p_m, p_M, w)


def mmr_no_data(p_m: float, p_M: float, w: WelfareSpec) -> tuple[float, str]:
    """Minimax regret with a data-invariant estimate, and which side attains it.

    Returns ``"chooseB_region"`` when estimates that pick aggressive treatment are
    optimal, ``"chooseA_region"`` otherwise (at equality both are; B is reported).
    """
    gap_b, gap_a = _require_straddle(p_m, p_M, w)
    side = "chooseB_region" if gap_b <= gap_a else "chooseA_region"
    return min(gap_b, gap_a), side


def mmr_randomized(p_m: float, p_M: float, w: WelfareSpec) -> tuple[float, float]:
    """Equalizing probability of choosing B, and the resulting minimax regret."""
    gap_b, gap_a = _require_straddle(p_m, p_M, w)
    q = gap_a / (p_M - p_m)
    return q, gap_b * gap_a / (p_M - p_m)


def maxregret_n1(w: WelfareSpec) -> float:
    """Maximum regret of the one-observation sample rate over the full unit interval."""
    return 0.25 * max((1 - w.u_B) ** 2, w.u_B**2)


def maxregret_n1_bv(w: WelfareSpec, lam: float) -> float:
    """As :func:`maxregret_n1`, estimating ``p_0`` by one draw from a group within ``lam`` of it."""
    if not 0 <= lam <= min(w.u_B, 1 - w.u_B) + 1e-12:
        raise ValidationError(f"need 0 <= lambda <= min(u_B, 1 - u_B), got lambda={lam}, u_B={w.u_B}")
    return 0.25 * max(((1 - w.u_B) + lam) ** 2, (w.u_B + lam) ** 2)


def maxregret_n1_bv_argmax(w: WelfareSpec, lam: float) -> tuple[tuple[float, float], tuple[float, float]]:
    """Worst states ``(p_0, p_1)`` on each side of the threshold for :func:`maxregret_n1_bv`."""
    p0_a = (1 - w.u_B - lam) / 2
    p0_b = 1 - w.u_B / 2 + lam / 2
    return (p0_a, p0_a + lam), (p0_b, p0_b - lam)


@dataclass(frozen=True)
class BoundResult:
    delta_star: float
    bound_value: float
    side_constants: tuple[float, float]
    sample_size: int
    bias: float = 0.0

    def to_dict(self) -> dict:
        return {
            "delta_star": self.delta_star,
            "bound_value": self.bound_value,
            "side_constants": list(self.side_constants),
            "sample_size": self.sample_size,
            "bias": self.bias,
        }


def _bound(delta: float, c: float, m: int, bias: float) -> float:
    return delta + bias + c * math.exp(-2 * m * delta**2)


def _minimize_delta(c: float, m: int, bias: float) -> float:
    """Global minimizer of ``delta + c exp(-2 m delta^2)`` on [DELTA_MIN, 1].

    The objective is concave left of ``1 / (2 sqrt(m))`` and has an increasing
    derivative to its right, so the minimum is either the left endpoint or the
    unique minimizer of the right-hand piece.
    """
    if c <= 0:
        return DELTA_MIN
    knee = 1 / (2 * math.sqrt(m))
    candidates = [DELTA_MIN, 1.0]
    if knee < 1.0:
        res = minimize_scalar(
            lambda d: _bound(d, c, m, bias), bounds=(max(knee, DELTA_MIN), 1.0),
            method="bounded", options={"xatol": DELTA_TOL},
        )
        candidates.append(float(res.x))
    return min(candidates, key=lambda d: _bound(d, c, m, bias))


def _bound_result(c_pair, m, bias, delta) -> BoundResult:
    c = max(c_pair)
    if delta is None:
        delta = _minimize_delta(c, m, bias)
    elif delta <= 0:
        raise ValidationError(f"delta must be positive, got {delta}")
    return BoundResult(delta, _bound(delta, c, m, bias), tuple(c_pair), m, bias)


def hoeffding_bound(p_m: float, p_M: float, w: WelfareSpec, N: int, delta: float | None = None) -> BoundResult:
    """Upper bound on the maximum regret of the sample illness rate with ``N`` observations.

    Evaluated at ``delta`` if given, otherwise minimized over ``delta``.
    """
    if N < 1:
        raise ValidationError(f"sample size must be >= 1, got {N}")
    return _bound_result(side_gaps(p_m, p_M, w), int(N), 0.0, delta)


def pooled_bound(p_m0: float, p_M0: float, w: WelfareSpec, N0: int, N1: int, lam: float,
                 delta: float | None = None) -> BoundResult:
    """Upper bound for the pooled rate when ``|p_0 - p_1| <= lam`` and ``p_1`` is unrestricted."""
    if lam < 0:
        raise ValidationError(f"lambda must be nonnegative, got {lam}")
    total = int(N0) + int(N1)
    if total < 1:
        raise ValidationError("need N0 + N1 >= 1")
    alpha1 = N1 / total
    return _bound_result(side_gaps(p_m0, p_M0, w), total, alpha1 * lam, delta)


def crossover_thresholds() -> tuple[float, float]:
    """Values of ``u_B`` beyond which a constant estimate beats the one-observation sample rate."""
    return 3 - 2 * math.sqrt(2), 2 * (math.sqrt(2) - 1)
