"""JSON schemas for the literal formats read by the command line."""

from __future__ import annotations

import jsonschema

from .errors import ContractError

_INT = {"type": "integer"}
_DIGITS = {"type": "array", "items": {"type": "string", "pattern": "^-?[0-9]+$"}, "minItems": 1}
_TERM = {"type": "array", "prefixItems": [_INT, _DIGITS], "minItems": 2, "maxItems": 2}

CONTEXT = {
    "type": "object",
    "required": ["p", "prec", "window"],
    "properties": {"p": _INT, "f": _INT, "e": _INT, "prec": _INT, "window": _INT},
}

SERIES = {
    "type": "object",
    "required": ["p", "prec", "window", "terms"],
    "properties": {**CONTEXT["properties"], "terms": {"type": "array", "items": _TERM}},
}

_ENTRY = {"type": "object", "required": ["terms"],
          "properties": {"terms": {"type": "array", "items": _TERM}}}

MATRIX = {
    "type": "object",
    "required": ["context", "diag_exponents", "entries"],
    "properties": {
        "context": CONTEXT,
        "diag_exponents": {"type": "array", "items": _INT, "minItems": 1},
        "entries": {"type": "array", "minItems": 1,
                    "items": {"type": "array", "minItems": 1, "items": _ENTRY}},
    },
}

_RATIONAL = {"type": ["integer", "string"]}

TOWER = {
    "type": "object",
    "required": ["g0", "p", "points"],
    "properties": {
        "g0": _RATIONAL,
        "p": _INT,
        "points": {"type": "array", "items": {
            "type": "object", "required": ["label", "breaks"],
            "properties": {"label": {"type": "string"},
                           "breaks": {"type": "array", "items": _RATIONAL}}}},
    },
}

BREAKS = {
    "type": "object",
    "required": ["p", "breaks"],
    "properties": {"p": _INT, "breaks": {"type": "array", "items": _RATIONAL}},
}

_SCHEMAS = {"series literal": SERIES, "matrix literal": MATRIX, "tower literal": TOWER,
            "breaks literal": BREAKS}


def validate(obj, kind: str) -> None:
    """Raise :class:`ContractError` naming the literal format on a schema violation."""
    try:
        jsonschema.validate(obj, _SCHEMAS[kind], cls=jsonschema.Draft202012Validator)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(x) for x in exc.absolute_path) or "<root>"
        raise ContractError(kind, "schema violation", f"{where}: {exc.message}") from None
