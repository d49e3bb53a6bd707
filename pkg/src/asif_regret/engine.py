"""Expected and maximum regret of as-if optimization over a grid of states.

Two engines compute the per-state probability of a treatment error:

* ``exact`` enumerates every count vector of the product-Binomial sampling
  distribution.  The decision for each count vector does not depend on the
  state, so it is computed once and contracted against per-state Binomial
  masses axis by axis.
* ``monte-carlo`` simulates count vectors.  Each state draws from its own
  Philox stream keyed by ``(seed, state_index)``, which makes results
  independent of chunking and worker count.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import NamedTuple

import numpy as np
from scipy import stats

from .estimators import Estimator, Randomized, SamplingDesign, Weighted2, randomized_q
from .exceptions import EnumerationCapError, ValidationError
from .spaces import StateGrid, default_grid
from .welfare import WelfareSpec, check_probability, chooses_b, welfare_gap

MODES = ("exact", "monte-carlo")
DEFAULT_DRAWS = 20_000
ENUM_CAP = 10**7
# States per evaluation chunk; fixed so results never depend on the worker count.
CHUNK = 256


@dataclass(frozen=True)
class EngineConfig:
    mode: str = "exact"
    draws: int = DEFAULT_DRAWS
    seed: int = 0
    parallel: bool = False
    workers: int | None = None
    enum_cap: int = ENUM_CAP

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValidationError(f"engine.mode must be one of {MODES}, got {self.mode!r}")
        if self.mode == "monte-carlo" and int(self.draws) < 1:
            raise ValidationError(f"engine.draws must be >= 1, got {self.draws}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValidationError(f"engine.seed must be an unsigned 64-bit integer, got {self.seed}")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True, eq=False)
class RegretReport:
    """Per-state expected regret and its maximum over the grid."""

    states: np.ndarray
    expected_regret: np.ndarray
    error_probability: np.ndarray
    max_regret: float
    argmax_state: tuple
    engine: EngineConfig
    std_error: np.ndarray | None = None
    estimator: dict = field(default_factory=dict)

    @property
    def argmax_index(self) -> int:
        return int(np.flatnonzero((self.states == np.asarray(self.argmax_state)).all(axis=1))[0])

    @property
    def mc_std_error(self) -> float | None:
        """Standard error of the regret estimate at the maximizing state."""
        if self.std_error is None:
            return None
        return float(self.std_error[self.argmax_index])

    @property
    def per_state(self) -> list[tuple[tuple, float, float]]:
        return [
            (tuple(s), float(r), float(q))
            for s, r, q in zip(self.states, self.expected_regret, self.error_probability)
        ]

    def to_dict(self) -> dict:
        out = {
            "max_regret": self.max_regret,
            "argmax_state": list(self.argmax_state),
            "mc_std_error": self.mc_std_error,
            "engine": self.engine.to_dict(),
            "estimator": self.estimator,
            "per_state": [
                {"state": list(s), "expected_regret": r, "error_probability": q}
                for s, r, q in self.per_state
            ],
        }
        if self.std_error is not None:
            for row, se in zip(out["per_state"], self.std_error):
                row["std_error"] = float(se)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        header = [f"p{k}" for k in range(self.states.shape[1])] + ["expected_regret", "error_probability"]
        if self.std_error is not None:
            header.append("std_error")
        writer.writerow(header)
        for i, s in enumerate(self.states):
            row = [*s, self.expected_regret[i], self.error_probability[i]]
            if self.std_error is not None:
                row.append(self.std_error[i])
            writer.writerow([f"{v:.6f}" for v in row])
        return buf.getvalue()


def binom_pmf(n, p, N):
    """Binomial(N, p) probability of ``n`` successes (log-space evaluation)."""
    n_arr = np.asarray(n)
    if np.any(n_arr < 0) or np.any(n_arr > N):
        raise ValidationError(f"binomial count must satisfy 0 <= n <= N = {N}, got {n}")
    p = check_probability(p)
    out = stats.binom.pmf(n_arr, N, p)
    return float(out) if np.ndim(out) == 0 else out


def _check_states(states: np.ndarray, design: SamplingDesign) -> np.ndarray:
    states = np.atleast_2d(np.asarray(states, dtype=float))
    if states.shape[1] != design.arity:
        raise ValidationError(
            f"state arity {states.shape[1]} does not match design arity {design.arity}"
        )
    return np.clip(check_probability(states, "state"), 0.0, 1.0)


def _decision_mask(e: Estimator, w: WelfareSpec, design: SamplingDesign, cap: int) -> np.ndarray:
    """Indicator of choosing B for every count vector, shaped ``(N_0+1, ..., N_K+1)``."""
    if design.cells > cap:
        raise EnumerationCapError(
            f"exact enumeration needs {design.cells:.0f} count vectors, above the cap of {cap}; "
            "use the monte-carlo engine"
        )
    dims = tuple(n + 1 for n in design.sizes)
    counts = np.indices(dims).reshape(len(dims), -1).T
    est = e.values(counts, design)
    return chooses_b(est, w).astype(float).reshape(dims)


def _prob_b_exact(mask: np.ndarray, states: np.ndarray, design: SamplingDesign) -> np.ndarray:
    """Probability of choosing B in each state, by axis-wise Binomial contraction."""
    pmfs = [
        stats.binom.pmf(np.arange(n + 1)[None, :], n, states[:, k : k + 1])
        for k, n in enumerate(design.sizes)
    ]
    x = np.einsum("...k,sk->s...", mask, pmfs[-1])
    for pmf in reversed(pmfs[:-1]):
        x = np.einsum("s...k,sk->s...", x, pmf)
    return np.clip(x, 0.0, 1.0)


def _error_from_prob_b(prob_b: np.ndarray, p0: np.ndarray, w: WelfareSpec) -> np.ndarray:
    # in S_B the error is choosing A
    return np.where(chooses_b(p0, w), 1.0 - prob_b, prob_b)


def _map_chunks(fn, n_states: int, cfg: EngineConfig) -> np.ndarray:
    bounds = [(i, min(i + CHUNK, n_states)) for i in range(0, n_states, CHUNK)]
    if cfg.parallel and len(bounds) > 1:
        workers = cfg.workers or os.cpu_count() or 1
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda b: fn(*b), bounds))
    else:
        parts = [fn(*b) for b in bounds]
    return np.concatenate(parts, axis=-1)


def _exact_errors(e, w, states, design, cfg) -> np.ndarray:
    if isinstance(e, Randomized):
        # uninformative data: the error probability is fixed by q
        return _error_from_prob_b(np.full(len(states), randomized_q(e, w)), states[:, 0], w)
    e.validate(design)
    mask = _decision_mask(e, w, design, cfg.enum_cap)
    return _map_chunks(
        lambda a, b: _error_from_prob_b(_prob_b_exact(mask, states[a:b], design), states[a:b, 0], w),
        len(states),
        cfg,
    )


def _state_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(index)])))


def _mc_state_error(e, w, state, design, draws, seed, index) -> float:
    rng = _state_rng(seed, index)
    counts = np.column_stack([rng.binomial(n, p, size=draws) for n, p in zip(design.sizes, state)])
    noise = rng.random(draws) if e.is_random else None
    est = e.values(counts, design, noise)
    errors = chooses_b(est, w) != chooses_b(state[0], w)
    return float(np.count_nonzero(errors)) / draws


def _mc_errors(e, w, states, design, cfg) -> np.ndarray:
    e.validate(design)
    draws = int(cfg.draws)

    def chunk(a, b):
        return np.array(
            [_mc_state_error(e, w, states[i], design, draws, cfg.seed, i) for i in range(a, b)]
        )

    return _map_chunks(chunk, len(states), cfg)


def expected_regret_exact(e: Estimator, w: WelfareSpec, state, design: SamplingDesign,
                          cap: int = ENUM_CAP) -> tuple[float, float]:
    """Exact ``(expected_regret, error_probability)`` in one state."""
    states = _check_states(state, design)
    err = _exact_errors(e, w, states, design, EngineConfig(enum_cap=cap))
    return float(welfare_gap(states[0, 0], w) * err[0]), float(err[0])


def expected_regret_mc(e: Estimator, w: WelfareSpec, state, design: SamplingDesign,
                       cfg: EngineConfig, state_index: int = 0) -> tuple[float, float, float]:
    """Monte-Carlo ``(expected_regret, error_probability, std_error)`` in one state."""
    states = _check_states(state, design)
    e.validate(design)
    f = _mc_state_error(e, w, states[0], design, int(cfg.draws), cfg.seed, state_index)
    gap = float(welfare_gap(states[0, 0], w))
    return gap * f, f, gap * math.sqrt(f * (1 - f) / cfg.draws)


def _argmax_lexicographic(values: np.ndarray, states: np.ndarray) -> int:
    ties = np.flatnonzero(values == values.max())
    # lexsort treats its last key as primary
    order = np.lexsort(states[ties].T[::-1])
    return int(ties[order[0]])


def max_regret(e: Estimator, w: WelfareSpec, grid: StateGrid, design: SamplingDesign,
               cfg: EngineConfig = EngineConfig()) -> RegretReport:
    """Expected regret at every grid state and its maximum."""
    states = _check_states(grid.states, design)
    if cfg.mode == "exact":
        err = _exact_errors(e, w, states, design, cfg)
        se = None
    else:
        err = _mc_errors(e, w, states, design, cfg)
        se = welfare_gap(states[:, 0], w) * np.sqrt(err * (1 - err) / cfg.draws)
    regret = welfare_gap(states[:, 0], w) * err
    i = _argmax_lexicographic(regret, states)
    return RegretReport(
        states=states,
        expected_regret=regret,
        error_probability=err,
        max_regret=float(regret[i]),
        argmax_state=tuple(float(v) for v in states[i]),
        engine=cfg,
        std_error=se,
        estimator=e.to_dict(),
    )


class WeightSweep(NamedTuple):
    w0_star: float
    mmr: float
    weights: np.ndarray
    curve: np.ndarray

    def to_csv(self) -> str:
        lines = ["w0,max_regret"]
        lines += [f"{w:.6f},{r:.6f}" for w, r in zip(self.weights, self.curve)]
        return "\n".join(lines) + "\n"


def weight_grid(step: float = 0.01) -> np.ndarray:
    """Own-group weights from 1/2 to 1 inclusive; the last step is clamped at 1."""
    if not 0 < step <= 0.5:
        raise ValidationError(f"weight step must lie in (0, 0.5], got {step}")
    n = int(math.floor(0.5 / step + 1e-9))
    weights = 0.5 + step * np.arange(n + 1)
    if weights[-1] < 1.0 - 1e-12:
        weights = np.append(weights, 1.0)
    return np.round(np.minimum(weights, 1.0), 12)


def optimal_weight(space, w: WelfareSpec, design: SamplingDesign, weight_grid_step: float = 0.01,
                   cfg: EngineConfig = EngineConfig(), grid: StateGrid | None = None) -> WeightSweep:
    """Search two-sample weighted averages for the weight minimizing maximum regret."""
    grid = grid if grid is not None else default_grid(space)
    weights = weight_grid(weight_grid_step)
    curve = np.array([max_regret(Weighted2(w0), w, grid, design, cfg).max_regret for w0 in weights])
    i = int(np.argmin(curve))  # first minimum is the smallest weight
    return WeightSweep(float(weights[i]), float(curve[i]), weights, curve)
