"""Command-line entry point.

    asif-regret compute scenario.json [--format csv|json] [--out PATH]
    asif-regret sweep-weights scenario.json [--weight-step 0.01]
    asif-regret bounds scenario.json [--delta D]
    asif-regret mmr scenario.json
    asif-regret table1
    asif-regret eco

Exit codes: 0 success, 2 validation or usage error, 3 infeasible state space,
4 enumeration cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import datetime as dt
import io
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .analytic import hoeffding_bound, maxregret_n1, mmr_no_data, mmr_randomized, pooled_bound
from .engine import EngineConfig, max_regret, optimal_weight
from .estimators import SamplingDesign, Weighted2
from .exceptions import RegretError, TrivialProblemError, ValidationError
from .scenario import (
    ECO_SIZES,
    TABLE1_SIZES,
    TABLE1_WEIGHTS,
    Scenario,
    parse_scenario,
    preset,
)
from .spaces import BoundedVariationSpace, IntervalSpace

COMMANDS = ("compute", "sweep-weights", "bounds", "mmr", "table1", "eco")


class UsageError(ValidationError):
    """The scenario does not fit the requested command."""


@dataclass
class ReportEnvelope:
    command: str
    scenario: Scenario
    result: dict
    rows: list[list]
    header: list[str]

    def to_json(self, timestamp: str | None = None) -> str:
        doc = {
            "command": self.command,
            "scenario": self.scenario.to_dict(),
            "result": self.result,
            "version": __version__,
            "timestamp": timestamp or dt.datetime.now(dt.timezone.utc).isoformat(),
        }
        return json.dumps(doc, indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.header)
        for row in self.rows:
            writer.writerow([_fmt(v) for v in row])
        return buf.getvalue()


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.6f}"
    return str(v)


def _with_overrides(scenario: Scenario, flags: dict) -> Scenario:
    engine = scenario.engine
    changes = {}
    if flags.get("seed") is not None:
        changes["seed"] = flags["seed"]
    if flags.get("draws") is not None:
        changes["draws"] = flags["draws"]
    if flags.get("mode") is not None:
        mode = flags["mode"]
        if mode == "mc":
            mode = "monte-carlo"
        elif mode == "auto":
            mode = "exact" if scenario.design.cells <= engine.enum_cap else "monte-carlo"
        changes["mode"] = mode
    if flags.get("parallel"):
        changes["parallel"] = True
    if flags.get("workers") is not None:
        changes["workers"] = flags["workers"]
    grids = dict(scenario.grids)
    for key in ("grid0", "grid1"):
        if flags.get(key) is not None:
            grids[key] = flags[key]
    return dataclasses.replace(scenario, engine=dataclasses.replace(engine, **changes), grids=grids)


def _require_nontrivial(scenario: Scenario) -> tuple[float, float]:
    p_m, p_M = scenario.space.p0_range
    if not p_m < scenario.welfare.threshold < p_M:
        raise TrivialProblemError(
            f"feasible p_0 range [{p_m}, {p_M}] does not contain the threshold "
            f"1 - u_B = {scenario.welfare.threshold}; one treatment dominates"
        )
    return p_m, p_M


def _compute(s: Scenario, flags) -> ReportEnvelope:
    if s.estimator is None:
        raise UsageError("compute needs an estimator section")
    _require_nontrivial(s)
    report = max_regret(s.estimator, s.welfare, s.grid(), s.design, s.engine)
    header = [f"p{k}" for k in range(report.states.shape[1])] + ["expected_regret", "error_probability"]
    rows = [[*st, r, q] for st, r, q in zip(report.states, report.expected_regret, report.error_probability)]
    if report.std_error is not None:
        header.append("std_error")
        for row, se in zip(rows, report.std_error):
            row.append(se)
    return ReportEnvelope("compute", s, report.to_dict(), rows, header)


def _sweep(s: Scenario, flags) -> ReportEnvelope:
    if not isinstance(s.space, BoundedVariationSpace):
        raise UsageError("sweep-weights needs a bounded-variation (bv2) space")
    _require_nontrivial(s)
    sweep = optimal_weight(s.space, s.welfare, s.design, flags.get("weight_step") or 0.01, s.engine, s.grid())
    result = {
        "w0_star": sweep.w0_star,
        "mmr": sweep.mmr,
        "curve": [{"w0": float(w), "max_regret": float(r)} for w, r in zip(sweep.weights, sweep.curve)],
    }
    rows = [[float(w), float(r)] for w, r in zip(sweep.weights, sweep.curve)]
    return ReportEnvelope("sweep-weights", s, result, rows, ["w0", "max_regret"])


def _bounds(s: Scenario, flags) -> ReportEnvelope:
    p_m, p_M = _require_nontrivial(s)
    delta = flags.get("delta")
    result, rows = {}, []
    if s.design.sizes[0] >= 1:
        b = hoeffding_bound(p_m, p_M, s.welfare, s.design.sizes[0], delta)
        result["sample_rate"] = b.to_dict()
        rows.append(["sample_rate", b.delta_star, b.bound_value])
    sp = s.space
    if (
        isinstance(sp, BoundedVariationSpace)
        and np.isclose(sp.lambda_minus, -sp.lambda_plus)
        and s.design.arity == 2
    ):
        b = pooled_bound(p_m, p_M, s.welfare, *s.design.sizes, sp.lambda_plus, delta)
        result["pooled"] = b.to_dict()
        rows.append(["pooled", b.delta_star, b.bound_value])
    if not rows:
        raise UsageError("bounds needs N_0 >= 1 or a symmetric bounded-variation space")
    return ReportEnvelope("bounds", s, result, rows, ["estimator", "delta_star", "bound"])


def _mmr(s: Scenario, flags) -> ReportEnvelope:
    p_m, p_M = _require_nontrivial(s)
    value, side = mmr_no_data(p_m, p_M, s.welfare)
    q, rvalue = mmr_randomized(p_m, p_M, s.welfare)
    result = {
        "no_data": {"value": value, "side": side},
        "randomized": {"q_star": q, "value": rvalue},
        "sample_rate_n1_unit_interval": maxregret_n1(s.welfare),
    }
    rows = [["no_data", value, side], ["randomized", rvalue, q]]
    if isinstance(s.space, IntervalSpace) and (p_m, p_M) == (0.0, 1.0):
        rows.append(["sample_rate_n1", result["sample_rate_n1_unit_interval"], ""])
    return ReportEnvelope("mmr", s, result, rows, ["rule", "max_regret", "detail"])


def table1(engine: EngineConfig = EngineConfig(), weight_step: float = 0.01, grids=None) -> ReportEnvelope:
    s = preset("table1")
    s = dataclasses.replace(s, engine=engine, grids={**s.grids, **(grids or {})})
    grid = s.grid()
    rows, result = [], []
    for N0, N1 in TABLE1_SIZES:
        design = SamplingDesign((N0, N1))
        cells = [max_regret(Weighted2(w0), s.welfare, grid, design, engine).max_regret for w0 in TABLE1_WEIGHTS]
        sweep = optimal_weight(s.space, s.welfare, design, weight_step, engine, grid)
        rows.append([N0, N1, *cells, sweep.mmr, sweep.w0_star])
        result.append({"N0": N0, "N1": N1, "max_regret": dict(zip(map(str, TABLE1_WEIGHTS), cells)),
                       "mmr": sweep.mmr, "w0_star": sweep.w0_star})
    header = ["N0", "N1", *[f"w0={w:.1f}" for w in TABLE1_WEIGHTS], "mmr", "optimal_w0"]
    return ReportEnvelope("table1", s, {"rows": result}, rows, header)


def eco(engine: EngineConfig = EngineConfig(), grids=None) -> ReportEnvelope:
    s = preset("eco")
    s = dataclasses.replace(s, engine=engine, grids={**s.grids, **(grids or {})})
    grid = s.grid()
    rows, result = [], []
    for sizes in ECO_SIZES:
        report = max_regret(s.estimator, s.welfare, grid, SamplingDesign(sizes), engine)
        rows.append([*sizes, report.max_regret, *report.argmax_state])
        result.append({"N0": sizes[0], "N1": sizes[1], "max_regret": report.max_regret,
                       "argmax_state": list(report.argmax_state)})
    return ReportEnvelope("eco", s, {"rows": result}, rows, ["N0", "N1", "max_regret", "argmax_p0", "argmax_p1"])


_DISPATCH = {"compute": _compute, "sweep-weights": _sweep, "bounds": _bounds, "mmr": _mmr}


def run_command(cmd: str, scenario: Scenario | None = None, **flags) -> ReportEnvelope:
    if cmd not in COMMANDS:
        raise UsageError(f"unknown command {cmd!r}; choose from {COMMANDS}")
    if cmd in ("table1", "eco"):
        base = preset(cmd)
        base = _with_overrides(base, flags)
        grids = {k: v for k, v in base.grids.items()}
        if cmd == "table1":
            return table1(base.engine, flags.get("weight_step") or 0.01, grids)
        return eco(base.engine, grids)
    if scenario is None:
        raise UsageError(f"{cmd} needs a scenario document")
    return _DISPATCH[cmd](_with_overrides(scenario, flags), flags)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="asif-regret",
        description="Maximum regret of as-if optimization with estimated illness probabilities.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("scenario", nargs="?", help="scenario JSON file, or - for stdin")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--draws", type=int, default=None)
    parser.add_argument("--grid0", type=int, default=None)
    parser.add_argument("--grid1", type=int, default=None)
    parser.add_argument("--weight-step", type=float, default=None)
    parser.add_argument("--mode", choices=("exact", "mc", "auto"), default=None)
    parser.add_argument("--delta", type=float, default=None)
    parser.add_argument("--parallel", action="store_true")
    parser.add_argument("--workers", type=int, default=None)
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--out", default=None, help="output path (default stdout)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        scenario = None
        if args.scenario is not None:
            text = sys.stdin.read() if args.scenario == "-" else open(args.scenario).read()
            scenario = parse_scenario(text)
        env = run_command(
            args.command, scenario,
            seed=args.seed, draws=args.draws, grid0=args.grid0, grid1=args.grid1,
            weight_step=args.weight_step, mode=args.mode, delta=args.delta,
            parallel=args.parallel, workers=args.workers,
        )
    except RegretError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = env.to_csv() if args.format == "csv" else env.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
