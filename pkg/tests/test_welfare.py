import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from asif_regret import (
    FullWelfare,
    Treatment,
    ValidationError,
    WelfareSpec,
    decide,
    error_indicator,
    normalize,
    optimal_welfare,
    regret,
    threshold_general,
)
from asif_regret.welfare import decide_full, realized_welfare

probs = st.floats(0.0, 1.0)
u_values = st.floats(0.01, 0.99)


@pytest.mark.parametrize(
    "w, expected",
    [
        (FullWelfare(1, 0, 0.6, 0.6), 0.4),
        (FullWelfare(2, 0.5, 1, 1.5), 0.5),
        (FullWelfare(1, 0, 0.5, 0.5), 0.5),
    ],
)
def test_threshold_general(w, expected):
    assert threshold_general(w) == pytest.approx(expected, abs=1e-15)


def test_full_welfare_ordering_rejected():
    with pytest.raises(ValidationError):
        FullWelfare(1, 0, 1.2, 0.5)


def test_normalize_identity_and_rescale():
    assert normalize(FullWelfare(1, 0, 0.6, 0.6)).u_B == pytest.approx(0.6)
    full = FullWelfare(2, 0, 1.2, 1.2)
    w = normalize(full)
    assert w.u_B == pytest.approx(0.6)
    for p in (0.3, 0.5):
        assert decide_full(p, full) == decide(p, w)


def test_normalize_errors():
    with pytest.raises(ValidationError):
        normalize(FullWelfare(1, 0, 1.0, 1.0))
    with pytest.raises(ValidationError):
        normalize(FullWelfare(2, 0.5, 1, 1.5))
    with pytest.raises(ValidationError):
        WelfareSpec(1.2)


def test_normalization_equivariance_on_grid():
    full = FullWelfare(3.0, -1.0, 0.7, 0.7)
    w = normalize(full)
    for p in np.linspace(0, 1, 1001):
        assert decide_full(p, full) == decide(p, w)


@pytest.mark.parametrize("p_hat, expected", [(0.39, Treatment.A), (0.40, Treatment.A), (0.41, Treatment.B)])
def test_decide(p_hat, expected):
    assert decide(p_hat, WelfareSpec(0.6)) is expected


def test_decide_rejects_out_of_range():
    with pytest.raises(ValidationError):
        decide(1.1, WelfareSpec(0.5))
    assert decide(1 + 1e-13, WelfareSpec(0.5)) is Treatment.B


@pytest.mark.parametrize("p_s, p_hat, expected", [(0.2, 0.7, 1), (0.2, 0.2, 0), (0.7, 0.4, 1)])
def test_error_indicator(p_s, p_hat, expected):
    assert error_indicator(p_s, p_hat, WelfareSpec(0.6)) == expected


def test_regret_examples():
    w = WelfareSpec(0.6)
    assert regret(0.2, 0.7, w) == pytest.approx(0.2)
    for p_hat in (0.0, 0.3, 0.9, 1.0):
        assert regret(0.4, p_hat, w) == pytest.approx(0.0, abs=1e-15)
    assert regret(0.2, 0.3, w) == 0


@pytest.mark.parametrize("p, expected", [(0.2, 0.8), (0.4, 0.6), (0.9, 0.6)])
def test_optimal_welfare(p, expected):
    assert optimal_welfare(p, WelfareSpec(0.6)) == pytest.approx(expected)


@given(probs, probs, u_values)
def test_regret_is_welfare_loss(p_s, p_hat, u):
    w = WelfareSpec(u)
    r = regret(p_s, p_hat, w)
    chosen = realized_welfare(p_s, decide(p_hat, w), w)
    assert r >= 0
    assert r <= max(1 - u, u) + 1e-15
    assert r == pytest.approx(optimal_welfare(p_s, w) - chosen, abs=1e-12)
    if decide(p_s, w) == decide(p_hat, w):
        assert r == 0


@given(probs, probs, u_values, st.floats(0.0, 1.0))
def test_error_indicator_depends_only_on_side(p_s, p_hat, u, frac):
    w = WelfareSpec(u)
    # move p_s within its side of the threshold
    if p_s <= w.threshold:
        other = frac * w.threshold
    else:
        other = w.threshold + 1e-9 + frac * (1 - w.threshold - 1e-9)
    assert error_indicator(p_s, p_hat, w) == error_indicator(other, p_hat, w)


def test_vectorized_error_indicator():
    w = WelfareSpec(0.6)
    out = error_indicator(np.array([0.2, 0.2, 0.7]), np.array([0.7, 0.2, 0.4]), w)
    assert out.tolist() == [1, 0, 1]
