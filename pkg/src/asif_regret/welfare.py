"""Welfare model and the as-if decision rule.

Welfare is normalized so that surveillance (A) yields 1 when the patient is
healthy and 0 when ill, while aggressive treatment (B) yields a constant
``u_B`` in (0, 1).  The induced threshold on the illness probability is
``1 - u_B``: surveillance is chosen at or below it, aggressive treatment above.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .exceptions import ValidationError

# Slack admitted when validating probabilities built from weighted averages.
PROB_TOL = 1e-12
# Estimates within this distance of the threshold count as ties and resolve to A.
TIE_TOL = 1e-12


class Treatment(enum.Enum):
    A = "surveillance"
    B = "aggressive"


def check_probability(p, name="p"):
    """Validate ``p`` against [0, 1] with ``PROB_TOL`` slack and clip it into range."""
    arr = np.asarray(p, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < -PROB_TOL) or np.any(arr > 1 + PROB_TOL):
        raise ValidationError(f"{name} must lie in [0, 1], got {p!r}")
    out = np.clip(arr, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class FullWelfare:
    """Un-normalized welfare of options A and B when healthy (0) or ill (1)."""

    u_A0: float
    u_A1: float
    u_B0: float
    u_B1: float

    def __post_init__(self):
        if not (self.u_B1 > self.u_A1 and self.u_A0 > self.u_B0):
            raise ValidationError(
                "welfare ordering requires u_B1 > u_A1 and u_A0 > u_B0, got "
                f"u_A0={self.u_A0}, u_A1={self.u_A1}, u_B0={self.u_B0}, u_B1={self.u_B1}"
            )

    def expected(self, treatment: Treatment, p):
        """Expected welfare of ``treatment`` at illness probability ``p``."""
        if treatment is Treatment.A:
            return p * self.u_A1 + (1 - p) * self.u_A0
        return p * self.u_B1 + (1 - p) * self.u_B0


@dataclass(frozen=True)
class WelfareSpec:
    """Normalized welfare of aggressive treatment, ``0 < u_B < 1``."""

    u_B: float

    def __post_init__(self):
        if not (0.0 < self.u_B < 1.0) or not np.isfinite(self.u_B):
            raise ValidationError(f"u_B must satisfy 0 < u_B < 1, got {self.u_B}")

    @property
    def threshold(self) -> float:
        return 1.0 - self.u_B


def threshold_general(w: FullWelfare) -> float:
    """Illness probability at which A and B have equal expected welfare."""
    loss_healthy = w.u_A0 - w.u_B0
    gain_ill = w.u_B1 - w.u_A1
    return loss_healthy / (loss_healthy + gain_ill)


def normalize(w: FullWelfare) -> WelfareSpec:
    """Rescale welfare so that U(A, 0) = 1 and U(A, 1) = 0.

    Requires aggressive treatment to neutralize disease, i.e. ``u_B0 == u_B1``.
    """
    if not np.isclose(w.u_B0, w.u_B1, rtol=0.0, atol=PROB_TOL):
        raise ValidationError(
            f"normalization requires u_B0 == u_B1 (neutralizing treatment), got {w.u_B0} and {w.u_B1}"
        )
    scale = w.u_A0 - w.u_A1
    if scale == 0:
        raise ValidationError("degenerate welfare scale: u_A0 == u_A1")
    return WelfareSpec((w.u_B0 - w.u_A1) / scale)


def chooses_b(p_hat, w: WelfareSpec):
    """True where an as-if optimizer with estimate ``p_hat`` picks B.

    Vectorized; ties (within ``TIE_TOL``) go to A.
    """
    return w.u_B - (1.0 - np.asarray(p_hat, dtype=float)) > TIE_TOL


def decide(p_hat: float, w: WelfareSpec) -> Treatment:
    p_hat = check_probability(p_hat, "p_hat")
    return Treatment.B if chooses_b(p_hat, w) else Treatment.A


def decide_full(p_hat: float, w: FullWelfare) -> Treatment:
    """Decision by direct comparison of un-normalized expected welfare."""
    a = w.expected(Treatment.A, p_hat)
    b = w.expected(Treatment.B, p_hat)
    scale = max(abs(w.u_A0), abs(w.u_A1), abs(w.u_B0), abs(w.u_B1), 1.0)
    return Treatment.B if b - a > TIE_TOL * scale else Treatment.A


def error_indicator(p_s, p_hat, w: WelfareSpec):
    """1 where the true state and the estimate lead to different treatments."""
    p_s = check_probability(p_s, "p_s")
    p_hat = check_probability(p_hat, "p_hat")
    out = (chooses_b(p_s, w) != chooses_b(p_hat, w)).astype(int)
    return int(out) if out.ndim == 0 else out


def welfare_gap(p_s, w: WelfareSpec):
    """Absolute welfare difference between the two treatments in state ``p_s``."""
    return np.abs((1.0 - np.asarray(p_s, dtype=float)) - w.u_B)


def regret(p_s, p_hat, w: WelfareSpec):
    out = welfare_gap(p_s, w) * error_indicator(p_s, p_hat, w)
    return float(out) if np.ndim(out) == 0 else out


def optimal_welfare(p, w: WelfareSpec):
    p = check_probability(p, "p")
    out = np.maximum(1.0 - np.asarray(p), w.u_B)
    return float(out) if out.ndim == 0 else out


def realized_welfare(p_s, treatment: Treatment, w: WelfareSpec) -> float:
    """Expected welfare in state ``p_s`` of the given treatment."""
    return 1.0 - p_s if treatment is Treatment.A else w.u_B
