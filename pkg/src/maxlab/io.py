"""JSON round-trip for measures, step functions and covering families.

Numbers travel as strings ("3/7", "0.25") so nothing is lost. Plain JSON
integers are accepted on input; JSON floats are read through their decimal
representation.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .coverings import CoveringFamily
from .errors import InputError
from .measure import Measure, StepFunction


def _num(value, field: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (str, int, float)):
        raise InputError(field, f"expected a number string, got {value!r}")
    try:
        return Fraction(value.strip()) if isinstance(value, str) else Fraction(repr(value))
    except (ValueError, ZeroDivisionError):
        raise InputError(field, f"not a rational number: {value!r}") from None


def _list(data: dict, key: str, field: str) -> list:
    value = data.get(key, [])
    if not isinstance(value, list):
        raise InputError(field, "expected a list")
    return value


def measure_to_json(mu: Measure) -> dict:
    return {
        "atoms": [{"x": str(x), "w": str(w)} for x, w in mu.atoms],
        "density": {"breakpoints": [str(b) for b in mu.density_breakpoints],
                    "values": [str(v) for v in mu.density_values]},
    }


def measure_from_json(data) -> Measure:
    if not isinstance(data, dict):
        raise InputError("measure", "expected a JSON object")
    atoms = []
    for i, item in enumerate(_list(data, "atoms", "atoms")):
        if not isinstance(item, dict) or "x" not in item or "w" not in item:
            raise InputError(f"atoms[{i}]", 'expected {"x": ..., "w": ...}')
        atoms.append((_num(item["x"], f"atoms[{i}].x"), _num(item["w"], f"atoms[{i}].w")))
    density = data.get("density", {"breakpoints": [], "values": ["0"]})
    if not isinstance(density, dict):
        raise InputError("density", "expected a JSON object")
    bps = [_num(b, f"density.breakpoints[{i}]") for i, b in enumerate(_list(density, "breakpoints", "density.breakpoints"))]
    vals = [_num(v, f"density.values[{i}]") for i, v in enumerate(_list(density, "values", "density.values"))]
    try:
        return Measure(tuple(sorted(atoms)), tuple(bps), tuple(vals))
    except ValueError as exc:
        field = "atoms" if "atom" in str(exc) else "density"
        raise InputError(field, str(exc)) from None


def function_to_json(f: StepFunction) -> dict:
    return {"breakpoints": [str(b) for b in f.breakpoints], "values": [str(v) for v in f.values],
            "point_values": [str(v) for v in f.point_values]}


def function_from_json(data) -> StepFunction:
    if not isinstance(data, dict):
        raise InputError("function", "expected a JSON object")
    bps = [_num(b, f"breakpoints[{i}]") for i, b in enumerate(_list(data, "breakpoints", "breakpoints"))]
    vals = [_num(v, f"values[{i}]") for i, v in enumerate(_list(data, "values", "values"))]
    pvals = None
    if data.get("point_values") is not None:
        pvals = tuple(_num(v, f"point_values[{i}]") for i, v in enumerate(_list(data, "point_values", "point_values")))
    try:
        return StepFunction(tuple(bps), tuple(vals), pvals)
    except ValueError as exc:
        field = "point_values" if "point_values" in str(exc) else "values" if "value" in str(exc) else "breakpoints"
        raise InputError(field, str(exc)) from None


def family_from_json(data) -> CoveringFamily:
    try:
        return CoveringFamily.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError("family", f"malformed covering family: {exc}") from None


def load_json(path, field: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(field, f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(field, f"invalid JSON in {path}: {exc.msg} at line {exc.lineno}") from None


def load_measure(path) -> Measure:
    if str(path).lower() == "lebesgue":
        return Measure.lebesgue()
    try:
        return measure_from_json(load_json(path, "measure"))
    except InputError as exc:
        if exc.field == "measure":
            raise
        raise InputError(f"measure.{exc.field}", str(exc).split(": ", 1)[1]) from None


def load_function(path) -> StepFunction:
    try:
        return function_from_json(load_json(path, "function"))
    except InputError as exc:
        if exc.field == "function":
            raise
        raise InputError(f"function.{exc.field}", str(exc).split(": ", 1)[1]) from None
