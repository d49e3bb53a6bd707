"""JSON scenario documents: parsing, validation and canonical serialization.

A scenario has the sections ``welfare``, ``space``, ``design``, ``estimator``,
``engine`` and optionally ``grids``::

    {
      "welfare": {"u_B": 0.6},
      "space": {"type": "bv2", "interval0": [0.2, 0.6], "interval1": [0, 1],
                "lambda_minus": -0.1, "lambda_plus": 0.1},
      "design": {"sizes": [10, 10]},
      "estimator": {"type": "weighted2", "w0": 0.9},
      "engine": {"mode": "exact", "draws": 20000, "seed": 0, "parallel": false},
      "grids": {"grid0": 50, "grid1": 50}
    }

``welfare`` may instead give the four un-normalized values
``u_A0, u_A1, u_B0, u_B1``; they are normalized on parse.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .engine import EngineConfig
from .estimators import Estimator, SamplingDesign, estimator_from_dict
from .exceptions import ValidationError
from .spaces import (
    BoundedVariationFamily,
    BoundedVariationSpace,
    EcologicalSpace,
    IntervalSpace,
    StateGrid,
    default_grid,
)
from .welfare import FullWelfare, WelfareSpec, normalize

SECTIONS = ("welfare", "space", "design", "estimator", "engine", "grids")


@dataclass(frozen=True)
class Scenario:
    welfare: WelfareSpec
    space: object
    design: SamplingDesign
    estimator: Estimator | None = None
    engine: EngineConfig = EngineConfig()
    grids: dict = field(default_factory=dict)
    full_welfare: FullWelfare | None = None

    def grid(self) -> StateGrid:
        return default_grid(self.space, self.grids.get("grid0"), self.grids.get("grid1"))

    def to_dict(self) -> dict:
        welfare = (
            {k: getattr(self.full_welfare, k) for k in ("u_A0", "u_A1", "u_B0", "u_B1")}
            if self.full_welfare is not None
            else {"u_B": self.welfare.u_B}
        )
        return {
            "welfare": welfare,
            "space": space_to_dict(self.space),
            "design": {"sizes": list(self.design.sizes)},
            "estimator": self.estimator.to_dict() if self.estimator is not None else None,
            "engine": self.engine.to_dict(),
            "grids": dict(sorted(self.grids.items())),
        }

    def to_json(self) -> str:
        return canonical_json(self.to_dict())


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _interval(value, path: str) -> IntervalSpace:
    if isinstance(value, dict):
        value = [value.get("p_min", 0.0), value.get("p_max", 1.0)]
    try:
        lo, hi = (float(v) for v in value)
    except (TypeError, ValueError):
        raise ValidationError(f"{path}: expected [p_min, p_max], got {value!r}") from None
    try:
        return IntervalSpace(lo, hi)
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from None


def space_from_dict(d: dict):
    kind = d.get("type")
    try:
        if kind == "interval":
            return IntervalSpace(float(d.get("p_min", 0.0)), float(d.get("p_max", 1.0)))
        if kind == "bv2":
            return BoundedVariationSpace(
                _interval(d["interval0"], "space.interval0"),
                _interval(d.get("interval1", [0.0, 1.0]), "space.interval1"),
                float(d["lambda_minus"]),
                float(d["lambda_plus"]),
            )
        if kind == "bv_family":
            return BoundedVariationFamily(
                tuple(_interval(v, f"space.intervals[{i}]") for i, v in enumerate(d["intervals"])),
                d["lambda_minus"],
                d["lambda_plus"],
            )
        if kind == "ecological":
            return EcologicalSpace(
                float(d["p"]), float(d["r0"]), float(d["r1"]),
                _interval(d.get("base0", [0.0, 1.0]), "space.base0"),
            )
    except KeyError as exc:
        raise ValidationError(f"space.{exc.args[0]}: missing field for space type {kind!r}") from None
    except ValidationError as exc:
        msg = str(exc)
        if kind == "ecological" and "r0 + r1" in msg:
            msg += " (the marginal identity p = p0*r0 + p1*r1 needs r0 + r1 = 1)"
        raise ValidationError(f"space: {msg}") from None
    raise ValidationError(
        f"space.type: unknown space {kind!r}; choose from interval, bv2, bv_family, ecological"
    )


def space_to_dict(space) -> dict:
    if isinstance(space, IntervalSpace):
        return {"type": "interval", "p_min": space.p_min, "p_max": space.p_max}
    if isinstance(space, BoundedVariationSpace):
        return {
            "type": "bv2",
            "interval0": [space.interval0.p_min, space.interval0.p_max],
            "interval1": [space.interval1.p_min, space.interval1.p_max],
            "lambda_minus": space.lambda_minus,
            "lambda_plus": space.lambda_plus,
        }
    if isinstance(space, BoundedVariationFamily):
        return {
            "type": "bv_family",
            "intervals": [[iv.p_min, iv.p_max] for iv in space.intervals],
            "lambda_minus": list(space.lambda_minus),
            "lambda_plus": list(space.lambda_plus),
        }
    if isinstance(space, EcologicalSpace):
        return {
            "type": "ecological",
            "p": space.p_marginal,
            "r0": space.r0,
            "r1": space.r1,
            "base0": [space.base0.p_min, space.base0.p_max],
        }
    raise TypeError(type(space).__name__)


def _welfare(d: dict) -> tuple[WelfareSpec, FullWelfare | None]:
    if not isinstance(d, dict):
        raise ValidationError("welfare: expected an object")
    if "u_B" in d:
        try:
            return WelfareSpec(float(d["u_B"])), None
        except ValidationError as exc:
            raise ValidationError(f"welfare.u_B: {exc} (normalized welfare needs 1 > u_B > 0)") from None
    try:
        full = FullWelfare(*(float(d[k]) for k in ("u_A0", "u_A1", "u_B0", "u_B1")))
    except KeyError as exc:
        raise ValidationError(f"welfare.{exc.args[0]}: missing; give u_B or all of u_A0, u_A1, u_B0, u_B1") from None
    except ValidationError as exc:
        raise ValidationError(f"welfare: {exc}") from None
    return normalize(full), full


def scenario_from_dict(doc: dict) -> Scenario:
    if not isinstance(doc, dict):
        raise ValidationError("scenario: expected a JSON object")
    unknown = set(doc) - set(SECTIONS)
    if unknown:
        raise ValidationError(f"scenario: unknown section(s) {sorted(unknown)}")
    for key in ("welfare", "space", "design"):
        if key not in doc:
            raise ValidationError(f"{key}: missing required section")
    welfare, full = _welfare(doc["welfare"])
    space = space_from_dict(doc["space"])
    try:
        design = SamplingDesign(tuple(doc["design"]["sizes"]))
    except (KeyError, TypeError):
        raise ValidationError("design.sizes: expected a list of sample sizes") from None
    if space.arity != design.arity and not (isinstance(space, IntervalSpace) and design.arity == 1):
        raise ValidationError(
            f"design.sizes: space has {space.arity} coordinates but design has {design.arity} samples"
        )
    estimator = None
    if doc.get("estimator") is not None:
        estimator = estimator_from_dict(doc["estimator"])
        try:
            estimator.validate(design)
        except ValidationError as exc:
            raise ValidationError(f"estimator: {exc}") from None
    engine_doc = dict(doc.get("engine") or {})
    if engine_doc.get("mode") == "mc":
        engine_doc["mode"] = "monte-carlo"
    if "mode" not in engine_doc:
        cap = engine_doc.get("enum_cap", EngineConfig.enum_cap)
        engine_doc["mode"] = "exact" if design.cells <= cap else "monte-carlo"
    try:
        engine = EngineConfig(**engine_doc)
    except TypeError as exc:
        raise ValidationError(f"engine: {exc}") from None
    grids = {k: int(v) for k, v in (doc.get("grids") or {}).items()}
    bad = set(grids) - {"grid0", "grid1"}
    if bad:
        raise ValidationError(f"grids: unknown key(s) {sorted(bad)}")
    return Scenario(welfare, space, design, estimator, engine, grids, full)


def parse_scenario(text: str) -> Scenario:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"scenario: invalid JSON ({exc})") from None
    return scenario_from_dict(doc)


TABLE1_SIZES = ((10, 10), (5, 15), (15, 5), (20, 20), (10, 30), (30, 10))
TABLE1_WEIGHTS = (0.5, 0.6, 0.7, 0.8, 0.9, 1.0)

TABLE1 = {
    "welfare": {"u_B": 0.6},
    "space": {
        "type": "bv2",
        "interval0": [0.2, 0.6],
        "interval1": [0.0, 1.0],
        "lambda_minus": -0.1,
        "lambda_plus": 0.1,
    },
    "design": {"sizes": [10, 10]},
    "estimator": {"type": "weighted2", "w0": 0.9},
    "engine": {"mode": "exact"},
    "grids": {"grid0": 50, "grid1": 50},
}

ECO = {
    "welfare": {"u_B": 0.5},
    "space": {"type": "ecological", "p": 0.5, "r0": 0.7, "r1": 0.3, "base0": [0.0, 1.0]},
    "design": {"sizes": [10, 10]},
    "estimator": {"type": "constrained_ls", "p": 0.5, "r0": 0.7, "r1": 0.3},
    "engine": {"mode": "exact"},
    "grids": {"grid0": 100},
}

ECO_SIZES = ((10, 10), (20, 20))

PRESETS = {"table1": TABLE1, "eco": ECO}


def preset(name: str) -> Scenario:
    return scenario_from_dict(json.loads(json.dumps(PRESETS[name])))
