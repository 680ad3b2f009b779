"""Hidden-variable model exchange format (JSON).

Long form::

    {
      "objects": 2,
      "settings": ["A", "B", "C"],
      "lambdas": [
        {"id": "l0", "weight": 0.5,
         "p1": {"A": [1.0, 0.0], "B": [1.0, 0.0], "C": [0.0, 1.0]},
         "p2": {"A": [1.0, 0.0], "B": [1.0, 0.0], "C": [0.0, 1.0]}},
        ...
      ]
    }

``p1``/``p2`` give [P(outcome 0), P(outcome 1)] per setting for object 1 and
object 2.  Shorthand form for deterministic matched pairs::

    {"triplets": {"001": 0.2, "110": 0.8}}

which expands through ``model_from_triplet_distribution``.  Serialization
always emits the long form; weights and probabilities round-trip bit-exactly
(floats are written with shortest-repr decimal strings, which parse back to
the identical binary value).
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .errors import InvalidDistributionError, ModelFormatError, TrinebellError
from .lhv import (
    SETTINGS,
    LambdaEntry,
    LhvModel,
    ResponseTable,
    model_from_triplet_distribution,
)


def parse_model(text: str) -> LhvModel:
    """Parse a model document; raises ModelFormatError with field context."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelFormatError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from e
    if not isinstance(doc, dict):
        raise ModelFormatError("top level must be an object")
    if "triplets" in doc:
        return _parse_shorthand(doc)
    return _parse_long_form(doc)


def load_model(path) -> LhvModel:
    with open(path, "r", encoding="utf-8") as f:
        return parse_model(f.read())


def _parse_shorthand(doc: dict) -> LhvModel:
    extra = set(doc) - {"triplets"}
    if extra:
        raise ModelFormatError(f"unexpected keys alongside 'triplets': {sorted(extra)}")
    triplets = doc["triplets"]
    if not isinstance(triplets, dict) or not triplets:
        raise ModelFormatError("'triplets' must be a non-empty object", context="triplets")
    weights = {}
    for key, w in triplets.items():
        if not (isinstance(key, str) and len(key) == 3 and set(key) <= {"0", "1"}):
            raise ModelFormatError(
                f"key {key!r} is not a 3-bit string", context="triplets"
            )
        if not isinstance(w, (int, float)) or isinstance(w, bool):
            raise ModelFormatError(f"weight must be a number, got {w!r}", context=f"triplets[{key!r}]")
        weights[tuple(int(ch) for ch in key)] = float(w)
    try:
        return model_from_triplet_distribution(weights)
    except TrinebellError as e:
        raise ModelFormatError(str(e), context="triplets") from e


def _require(doc: dict, key: str, context: str) -> Any:
    if key not in doc:
        raise ModelFormatError(f"missing required field {key!r}", context=context)
    return doc[key]


def _parse_probability(value, context: str) -> float:
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ModelFormatError(f"expected a number, got {value!r}", context=context)
    return float(value)


def _parse_table(entry: dict, context: str) -> ResponseTable:
    probs = np.empty((2, 3, 2))
    for obj, key in enumerate(("p1", "p2")):
        table = _require(entry, key, context)
        if not isinstance(table, dict):
            raise ModelFormatError("expected an object of per-setting rows", context=f"{context}.{key}")
        unknown = set(table) - set(SETTINGS)
        if unknown:
            raise ModelFormatError(f"unknown settings {sorted(unknown)}", context=f"{context}.{key}")
        for s_idx, setting in enumerate(SETTINGS):
            if setting not in table:
                raise ModelFormatError(f"missing setting {setting!r}", context=f"{context}.{key}")
            row = table[setting]
            if not isinstance(row, list) or len(row) != 2:
                raise ModelFormatError(
                    f"setting {setting!r} must be a [P(0), P(1)] pair", context=f"{context}.{key}"
                )
            for o_idx, value in enumerate(row):
                probs[obj, s_idx, o_idx] = _parse_probability(
                    value, f"{context}.{key}.{setting}[{o_idx}]"
                )
    try:
        return ResponseTable(probs)
    except TrinebellError as e:
        raise ModelFormatError(str(e), context=context) from e


def _parse_long_form(doc: dict) -> LhvModel:
    objects = _require(doc, "objects", "document")
    if objects != 2:
        raise ModelFormatError(f"'objects' must be 2, got {objects!r}", context="objects")
    settings = _require(doc, "settings", "document")
    if settings != list(SETTINGS):
        raise ModelFormatError(
            f"'settings' must be {list(SETTINGS)}, got {settings!r}", context="settings"
        )
    lambdas = _require(doc, "lambdas", "document")
    if not isinstance(lambdas, list) or not lambdas:
        raise ModelFormatError("'lambdas' must be a non-empty array", context="lambdas")

    entries = []
    for i, raw in enumerate(lambdas):
        context = f"lambdas[{i}]"
        if not isinstance(raw, dict):
            raise ModelFormatError("lambda entry must be an object", context=context)
        lam_id = _require(raw, "id", context)
        if not isinstance(lam_id, str) or not lam_id:
            raise ModelFormatError(f"'id' must be a non-empty string, got {lam_id!r}", context=context)
        context = f"lambdas[{i}] (id {lam_id!r})"
        weight = _parse_probability(_require(raw, "weight", context), f"{context}.weight")
        table = _parse_table(raw, context)
        try:
            entries.append(LambdaEntry(id=lam_id, weight=weight, table=table))
        except TrinebellError as e:
            raise ModelFormatError(str(e), context=context) from e
    try:
        return LhvModel(tuple(entries))
    except InvalidDistributionError as e:
        raise ModelFormatError(str(e), context="lambdas") from e


def model_to_document(model: LhvModel) -> dict:
    """Long-form plain-data document for a model."""
    return {
        "objects": 2,
        "settings": list(SETTINGS),
        "lambdas": [
            {
                "id": entry.id,
                "weight": entry.weight,
                "p1": {
                    s: [float(entry.table.probs[0, i, 0]), float(entry.table.probs[0, i, 1])]
                    for i, s in enumerate(SETTINGS)
                },
                "p2": {
                    s: [float(entry.table.probs[1, i, 0]), float(entry.table.probs[1, i, 1])]
                    for i, s in enumerate(SETTINGS)
                },
            }
            for entry in model.lambdas
        ],
    }


def serialize_model(model: LhvModel) -> str:
    return json.dumps(model_to_document(model), indent=2) + "\n"


def save_model(model: LhvModel, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(serialize_model(model))
