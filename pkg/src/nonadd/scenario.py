"""Scenario files: JSON literals for grounds, measures and functions.

Files are validated against the bundled ``scenario-v1.json`` schema before
anything is built; unknown fields are rejected.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path

import jsonschema

from .funcs import FuncSpec
from .measures import (
    CardinalityClass,
    Distortion,
    Measure,
    PiecewiseLinear,
    PointMass,
    Scale,
    SqrtMap,
    Sum,
    Table,
)
from .numeric import as_scalar, as_vector, scalar_json
from .setalg import OMEGA, Ground, bits, mask_of, parse_set

VERSION = "nonadd-scenario/1"


class ScenarioError(ValueError):
    pass


@lru_cache(maxsize=1)
def schema() -> dict:
    return json.loads(resources.files("nonadd").joinpath("scenario-v1.json").read_text())


@lru_cache(maxsize=1)
def output_schema() -> dict:
    """Schema covering every JSON document the command line prints or writes."""
    return json.loads(resources.files("nonadd").joinpath("output-v1.json").read_text())


def validate_output(doc: dict):
    jsonschema.validate(doc, output_schema())


def validate(doc: dict):
    try:
        jsonschema.validate(doc, schema())
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ScenarioError(f"schema violation at {where}: {exc.message}") from None


# grounds ---------------------------------------------------------------------


def parse_ground(lit) -> Ground:
    if lit == "omega":
        return OMEGA
    return Ground.finite(int(lit["finite"]))


def ground_literal(ground: Ground):
    return "omega" if not ground.is_finite else {"finite": ground.n}


# measures --------------------------------------------------------------------


def _parse_g(lit):
    if lit == "sqrt":
        return SqrtMap()
    pw = lit["piecewise"]
    return PiecewiseLinear(tuple(pw["breaks"]), tuple(pw["slopes"]))


def _parse_pointmass(lit: dict, ground: Ground) -> PointMass:
    tail = lit.get("tail") or {"c": 0, "r": 0}
    return PointMass(ground, tuple(lit["weights"]), as_scalar(tail["c"]), as_scalar(tail["r"]))


def parse_measure(lit: dict, ground: Ground) -> Measure:
    family = lit["family"]
    if family == "pointmass":
        return _parse_pointmass(lit, ground)
    if family == "cardclass":
        theta = lit["theta"]
        K = max((int(k) for k in theta if k != "inf"), default=0)
        table = [Fraction(0)] * (K + 1)
        for k, v in theta.items():
            if k != "inf":
                table[int(k)] = as_scalar(v)
        # unspecified sizes inherit the nearest smaller specified size
        specified = {int(k) for k in theta if k != "inf"} | {0}
        for k in range(1, K + 1):
            if k not in specified:
                table[k] = table[k - 1]
        return CardinalityClass(ground, tuple(table), as_scalar(theta.get("inf", 0)))
    if family == "distortion":
        return Distortion(_parse_g(lit["g"]), _parse_pointmass(lit["base"], ground))
    if family == "table":
        if not ground.is_finite:
            raise ScenarioError("table measures need a finite ground")
        values = lit["values"]
        if isinstance(values, list):
            return Table(ground, tuple(values))
        mapping = {}
        for key, v in values.items():
            elems = [int(x) for x in key.split(",")] if key else []
            if any(not 0 <= e < ground.n for e in elems):
                raise ScenarioError(f"table key {key!r} is outside the ground")
            mapping[mask_of(elems)] = v
        return Table.from_sets(ground.n, mapping)
    if family == "sum":
        terms = [parse_measure(t, ground) for t in lit["terms"]]
        out = terms[0]
        for t in terms[1:]:
            out = Sum(out, t)
        return out
    if family == "scale":
        return Scale(as_scalar(lit["alpha"]), parse_measure(lit["measure"], ground))
    raise ScenarioError(f"unknown measure family {family!r}")


def measure_literal(m: Measure) -> dict:
    if isinstance(m, PointMass):
        out = {"family": "pointmass", "weights": [scalar_json(w) for w in m.weights]}
        if m.c != 0:
            out["tail"] = {"c": scalar_json(m.c), "r": scalar_json(m.r)}
        return out
    if isinstance(m, CardinalityClass):
        theta = {str(k): scalar_json(t) for k, t in enumerate(m.theta)}
        if not m.ground.is_finite:
            theta["inf"] = scalar_json(m.theta_inf)
        return {"family": "cardclass", "theta": theta}
    if isinstance(m, Distortion):
        return {"family": "distortion", "g": m.g.literal(), "base": measure_literal(m.base)}
    if isinstance(m, Table):
        return {"family": "table", "values": {",".join(map(str, bits(s))): scalar_json(v)
                                              for s, v in enumerate(m.values)}}
    if isinstance(m, Sum):
        return {"family": "sum", "terms": [measure_literal(m.first), measure_literal(m.second)]}
    if isinstance(m, Scale):
        return {"family": "scale", "alpha": scalar_json(m.alpha), "measure": measure_literal(m.inner)}
    raise ScenarioError(f"no literal for {type(m).__name__}")


# functions -------------------------------------------------------------------


def parse_function(lit: dict, ground: Ground) -> FuncSpec:
    if "table" in lit:
        if not ground.is_finite or len(lit["table"]) != ground.n:
            raise ScenarioError("a function table needs one value per element of a finite ground")
        return FuncSpec.table(lit["table"])
    if "cycle" in lit:
        if ground.is_finite:
            n = ground.n
            seq = [as_vector(v) for v in lit.get("prefix", [])]
            cyc = [as_vector(v) for v in lit["cycle"]]
            vals = [seq[t] if t < len(seq) else cyc[(t - len(seq)) % len(cyc)] for t in range(n)]
            return FuncSpec.table(vals)
        return FuncSpec.periodic(lit.get("prefix", []), lit["cycle"])
    if "constant" in lit:
        return FuncSpec.constant(ground, lit["constant"])
    if "indicator" in lit:
        return FuncSpec.indicator(ground, parse_set(lit["indicator"], ground), lit.get("value", 1))
    raise ScenarioError("unknown function literal")


def function_literal(f: FuncSpec) -> dict:
    return f.literal()


# files -----------------------------------------------------------------------


@dataclass(frozen=True)
class ScenarioFile:
    ground: Ground
    measure: Measure
    function: FuncSpec
    measure2: Measure | None = None
    function2: FuncSpec | None = None
    options: dict = field(default_factory=dict, hash=False, compare=False)
    name: str = ""

    def set_option(self, key: str):
        text = self.options.get(key)
        return None if text is None else parse_set(text, self.ground)


def load_doc(doc: dict, name: str = "") -> ScenarioFile:
    validate(doc)
    try:
        ground = parse_ground(doc["ground"])
        m = parse_measure(doc["measure"], ground)
        f = parse_function(doc["function"], ground)
        m2 = parse_measure(doc["measure2"], ground) if "measure2" in doc else None
        g = parse_function(doc["function2"], ground) if "function2" in doc else None
        options = dict(doc.get("options", {}))
        for text in [options.get("set", "empty")] + options.get("sets", []):
            parse_set(text, ground)
    except ScenarioError:
        raise
    except (ValueError, TypeError, KeyError, ZeroDivisionError) as exc:
        raise ScenarioError(str(exc)) from None
    if f.dim != (g.dim if g else f.dim):
        raise ScenarioError("function and function2 must share a dimension")
    return ScenarioFile(ground, m, f, m2, g, options, doc.get("name", name))


def load_scenario(path) -> ScenarioFile:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: invalid JSON: {exc}") from None
    return load_doc(doc, path.stem)


def dump_doc(sf: ScenarioFile) -> dict:
    doc = {
        "version": VERSION,
        "ground": ground_literal(sf.ground),
        "measure": measure_literal(sf.measure),
        "function": function_literal(sf.function),
    }
    if sf.name:
        doc["name"] = sf.name
    if sf.measure2 is not None:
        doc["measure2"] = measure_literal(sf.measure2)
    if sf.function2 is not None:
        doc["function2"] = function_literal(sf.function2)
    if sf.options:
        doc["options"] = dict(sf.options)
    return doc


def corpus_paths() -> list:
    root = resources.files("nonadd").joinpath("corpus")
    return sorted((p for p in root.iterdir() if p.name.endswith(".json")), key=lambda p: p.name)


def load_corpus() -> list[ScenarioFile]:
    return [load_doc(json.loads(p.read_text()), p.name[:-5]) for p in corpus_paths()]

