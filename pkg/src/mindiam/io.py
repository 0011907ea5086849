"""Instance files: JSON schema, parsing with precise error codes, canonical output."""

from __future__ import annotations

import json
import math
from typing import Any, Union

import jsonschema

from .errors import InstanceError, PolygonError, PreconditionError
from .geometry import ConvexPolygon
from .instances import HalfSpaceRegion, ImpreciseInstance, IndecisiveInstance

Instance = Union[IndecisiveInstance, ImpreciseInstance]

_vector = {"type": "array", "items": {"type": "number"}, "minItems": 1}

SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "oneOf": [
        {
            "type": "object",
            "properties": {
                "model": {"const": "indecisive"},
                "d": {"type": "integer", "minimum": 1},
                "colors": {"type": "array", "minItems": 1, "items": {"type": "array", "items": _vector}},
            },
            "required": ["model", "d", "colors"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {
                "model": {"const": "imprecise"},
                "d": {"type": "integer", "minimum": 1},
                "regions": {
                    "type": "array",
                    "minItems": 1,
                    "items": {
                        "oneOf": [
                            {"type": "array", "items": _vector},
                            {
                                "type": "object",
                                "properties": {"halfspaces": {"type": "array", "minItems": 1, "items": _vector}},
                                "required": ["halfspaces"],
                                "additionalProperties": False,
                            },
                        ]
                    },
                },
            },
            "required": ["model", "d", "regions"],
            "additionalProperties": False,
        },
    ],
}

_VALIDATOR = jsonschema.Draft202012Validator(SCHEMA)


def _reject_constant(name: str):
    raise InstanceError("NonFinite", f"non-finite number {name} is not allowed")


_BRANCHES = {
    "indecisive": jsonschema.Draft202012Validator(SCHEMA["oneOf"][0]),
    "imprecise": jsonschema.Draft202012Validator(SCHEMA["oneOf"][1]),
}


def _best_error(data: Any) -> jsonschema.ValidationError | None:
    # judge against the branch named by "model" so messages point at the real fault
    model = data.get("model") if isinstance(data, dict) else None
    validator = _BRANCHES.get(model, _VALIDATOR) if isinstance(model, str) else _VALIDATOR
    return jsonschema.exceptions.best_match(validator.iter_errors(data))


def _path(parts) -> str:
    return "$" + "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in parts)


def _check_dim(vec, d: int, where: str) -> None:
    if len(vec) != d:
        raise InstanceError("DimensionMismatch", f"expected {d} coordinates, got {len(vec)}", where)


def parse_instance(data: Union[bytes, str]) -> Instance:
    """Parse and validate an instance document.

    Raises InstanceError whose ``code`` names the failure: InvalidJSON,
    SchemaViolation, NonFinite, DimensionMismatch, EmptyColorClass,
    EmptyRegion, or one of the polygon codes (NotCCW, NotConvex,
    DuplicateVertex, TooManyVertices, NotPlanar).
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise InstanceError("InvalidJSON", f"input is not UTF-8: {exc}") from None
    try:
        doc = json.loads(data, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise InstanceError("InvalidJSON", f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return instance_from_doc(doc)


def instance_from_doc(doc: Any) -> Instance:
    err = _best_error(doc)
    if err is not None:
        raise InstanceError("SchemaViolation", err.message, _path(err.absolute_path))
    d = doc["d"]
    if doc["model"] == "indecisive":
        classes = []
        for i, cls in enumerate(doc["colors"]):
            if not cls:
                raise InstanceError("EmptyColorClass", f"color class {i} is empty", _path(["colors", i]))
            for j, p in enumerate(cls):
                _check_dim(p, d, _path(["colors", i, j]))
            classes.append(tuple(tuple(float(x) for x in p) for p in cls))
        return IndecisiveInstance(tuple(classes))

    regions = []
    for i, reg in enumerate(doc["regions"]):
        where = _path(["regions", i])
        if isinstance(reg, dict):
            rows = []
            for j, row in enumerate(reg["halfspaces"]):
                _check_dim(row, d + 1, _path(["regions", i, "halfspaces", j]))
                rows.append((tuple(float(x) for x in row[:-1]), float(row[-1])))
            try:
                regions.append(HalfSpaceRegion(tuple(rows)))
            except PreconditionError as exc:
                raise InstanceError("SchemaViolation", str(exc), where) from None
            continue
        if not reg:
            raise InstanceError("EmptyRegion", f"region {i} has no vertices", where)
        if d != 2:
            raise InstanceError("NotPlanar", "vertex lists are only accepted for d = 2; use halfspaces", where)
        for j, p in enumerate(reg):
            _check_dim(p, d, _path(["regions", i, j]))
        try:
            regions.append(ConvexPolygon(tuple(tuple(float(x) for x in p) for p in reg)))
        except PolygonError as exc:
            raise InstanceError(exc.code, str(exc), where) from None
    return ImpreciseInstance(tuple(regions))


def canonical_number(x: float) -> Union[int, float]:
    """Round to 12 significant digits; integral values print without a fraction."""
    if not math.isfinite(x):
        raise PreconditionError("cannot serialize a non-finite number")
    v = float(f"{x:.12g}")
    if v == 0.0:
        return 0
    return int(v) if v.is_integer() and abs(v) < 1e15 else v


def canonical(obj: Any) -> Any:
    """Recursively canonicalize floats inside lists, tuples and dicts."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, float)):
        return canonical_number(float(obj)) if isinstance(obj, float) else obj
    if isinstance(obj, dict):
        return {k: canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    if hasattr(obj, "item"):
        return canonical(obj.item())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def instance_doc(instance: Instance) -> dict[str, Any]:
    if isinstance(instance, IndecisiveInstance):
        return {"model": "indecisive", "d": instance.d, "colors": canonical(instance.classes)}
    regions = []
    for r in instance.regions:
        if isinstance(r, ConvexPolygon):
            regions.append(canonical(r.vertices))
        else:
            regions.append({"halfspaces": canonical([list(a) + [b] for a, b in r.rows])})
    return {"model": "imprecise", "d": instance.d, "regions": regions}


def dumps(obj: Any, indent: int | None = None) -> str:
    return json.dumps(canonical(obj), indent=indent, allow_nan=False)


def serialize_instance(instance: Instance) -> str:
    return dumps(instance_doc(instance))
