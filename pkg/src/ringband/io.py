"""JSON matrix files and result documents.

A matrix file describes a k-CM by its stencil or a k-CBM by its n rows,
so it is O(kn) in size::

    {"field": "rational", "type": "kcm", "n": 4, "k": 3, "alignment": 2,
     "stencil": [1, 3, 1]}

Scalars are JSON numbers for ``f64``, ``"p/q"`` strings (or integers) for
``rational`` and integers for ``{"zp": p}``.
"""

from __future__ import annotations

import json

import jsonschema

from .banded import CyclicBandedMatrix
from .circulant import CirculantMatrix
from .errors import SchemaError
from .fields import Float64Field, PrimeField, RationalField, field_from_json

_SCALAR = {"type": ["number", "string"]}

MATRIX_SCHEMA = {
    "type": "object",
    "required": ["field", "type", "n", "k", "alignment"],
    "additionalProperties": False,
    "properties": {
        "field": {
            "oneOf": [
                {"enum": ["f64", "rational"]},
                {
                    "type": "object",
                    "required": ["zp"],
                    "additionalProperties": False,
                    "properties": {"zp": {"type": "integer"}},
                },
            ]
        },
        "type": {"enum": ["kcm", "kcbm"]},
        "n": {"type": "integer", "minimum": 1},
        "k": {"type": "integer", "minimum": 1},
        "alignment": {"type": "integer", "minimum": 1},
        "stencil": {"type": "array", "items": _SCALAR, "minItems": 1},
        "rows": {"type": "array", "items": {"type": "array", "items": _SCALAR}},
    },
    "allOf": [
        {
            "if": {"properties": {"type": {"const": "kcm"}}},
            "then": {"required": ["stencil"], "not": {"required": ["rows"]}},
        },
        {
            "if": {"properties": {"type": {"const": "kcbm"}}},
            "then": {"required": ["rows"], "not": {"required": ["stencil"]}},
        },
    ],
}

_VALIDATOR = jsonschema.Draft202012Validator(MATRIX_SCHEMA)


def _check_scalar_type(field, value, path):
    if isinstance(value, bool):
        raise SchemaError(path, "booleans are not field values")
    if isinstance(field, Float64Field) and not isinstance(value, (int, float)):
        raise SchemaError(path, "f64 values must be JSON numbers")
    if isinstance(field, PrimeField) and not isinstance(value, int):
        raise SchemaError(path, "zp values must be JSON integers")
    if isinstance(field, RationalField) and not isinstance(value, (int, str)):
        raise SchemaError(path, 'rational values must be "p/q" strings or integers')


def validate_document(doc):
    """Raise :class:`SchemaError` naming the first offending path."""
    errors = sorted(_VALIDATOR.iter_errors(doc), key=lambda e: (len(e.path), list(map(str, e.path))))
    if errors:
        err = jsonschema.exceptions.best_match(errors)
        raise SchemaError(err.json_path, err.message)
    k, n = doc["k"], doc["n"]
    if doc["alignment"] > k:
        raise SchemaError("$.alignment", f"alignment {doc['alignment']} exceeds k={k}")
    if k > n:
        raise SchemaError("$.k", f"k={k} exceeds n={n}")
    if doc["type"] == "kcm":
        if len(doc["stencil"]) != k:
            raise SchemaError("$.stencil", f"expected {k} values, got {len(doc['stencil'])}")
    else:
        rows = doc["rows"]
        if len(rows) != n:
            raise SchemaError("$.rows", f"expected {n} rows, got {len(rows)}")
        for r, row in enumerate(rows):
            if len(row) != k:
                raise SchemaError(f"$.rows[{r}]", f"expected {k} values, got {len(row)}")


def matrix_from_document(doc):
    """Build a :class:`CirculantMatrix` or :class:`CyclicBandedMatrix` from a parsed document.

    Raises :class:`SchemaError` for structural problems and
    :class:`~ringband.errors.FieldError` (or ``InvalidMatrix``) for
    well-formed files holding unacceptable values.
    """
    validate_document(doc)
    field = field_from_json(doc["field"])
    if doc["type"] == "kcm":
        for t, v in enumerate(doc["stencil"]):
            _check_scalar_type(field, v, f"$.stencil[{t}]")
        return CirculantMatrix.from_values(field, doc["stencil"], doc["n"], doc["alignment"])
    for r, row in enumerate(doc["rows"]):
        for t, v in enumerate(row):
            _check_scalar_type(field, v, f"$.rows[{r}][{t}]")
    return CyclicBandedMatrix(doc["n"], doc["k"], doc["alignment"], tuple(map(tuple, doc["rows"])), field)


def loads_matrix(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return matrix_from_document(doc)


def load_matrix(path):
    with open(path, encoding="utf-8") as fh:
        return loads_matrix(fh.read())


def dump_matrix(m):
    """Matrix-file document for ``m`` (the inverse of :func:`matrix_from_document`)."""
    f = m.field
    doc = {"field": f.to_json(), "type": None, "n": m.n, "k": m.k, "alignment": m.alignment}
    if isinstance(m, CirculantMatrix):
        doc["type"] = "kcm"
        doc["stencil"] = [f.format(v) for v in m.stencil.values]
    else:
        doc["type"] = "kcbm"
        doc["rows"] = [[f.format(v) for v in row] for row in m.rows]
    return doc


def det_document(field, value, fallback):
    return {"det": field.format(value), "fallback": bool(fallback)}


def inverse_document(field, inverse, fmt="full"):
    """``fmt="vector"`` emits the representing vector (first row) of a circulant inverse."""
    if fmt == "vector":
        body = [field.format(v) for v in inverse.first_row]
    elif fmt == "full":
        body = [[field.format(v) for v in row] for row in inverse.to_dense().data]
    else:
        raise ValueError(f"unknown inverse format {fmt!r}")
    return {"format": fmt, "inverse": body, "fallback": bool(inverse.fallback)}
