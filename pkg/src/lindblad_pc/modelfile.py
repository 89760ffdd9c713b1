"""JSON model files.

Schema::

    {
      "dimension": 3,
      "hamiltonian": {"diagonal": [1.0, 0.0, 2.0]}          # or {"matrix": ...}
      "jumps": [
        {"from": 1, "to": 2, "rate": "sin(w*t)^2"},          # E_{to,from}
        {"matrix": [[[0,0],[1,0]],[[0,0],[0,0]]], "rate": "1"}
      ],
      "params": {"w": 1.0},                                  # bound into rates
      "initial_state": {"diagonal": [0.5, 0.5, 0.0]}         # optional
    }

Matrices are lists of rows; each entry is [re, im] (a bare number is
accepted as a real entry). Levels are 1-based.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import ModelFileError
from .expr import format_expr, parse_rate_expr
from .model import Jump, LindbladModel, jump_operator

__all__ = ["load_model", "loads_model", "model_to_dict", "dump_model"]


def _parse_entry(entry, where):
    if isinstance(entry, (int, float)):
        return complex(entry)
    if (isinstance(entry, (list, tuple)) and len(entry) == 2
            and all(isinstance(x, (int, float)) for x in entry)):
        return complex(entry[0], entry[1])
    raise ModelFileError(f"{where}: matrix entries must be numbers or [re, im] pairs")


def _parse_matrix(obj, d, where):
    if not isinstance(obj, list) or len(obj) != d:
        raise ModelFileError(f"{where}: expected {d} rows")
    out = np.zeros((d, d), dtype=complex)
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != d:
            raise ModelFileError(f"{where}: row {i + 1} must have {d} entries")
        for j, entry in enumerate(row):
            out[i, j] = _parse_entry(entry, where)
    return out


def _parse_operator(obj, d, where):
    if not isinstance(obj, dict):
        raise ModelFileError(f"{where}: expected an object")
    if "diagonal" in obj:
        diag = obj["diagonal"]
        if not isinstance(diag, list) or len(diag) != d:
            raise ModelFileError(f"{where}: diagonal must list {d} reals")
        if not all(isinstance(x, (int, float)) for x in diag):
            raise ModelFileError(f"{where}: diagonal entries must be real numbers")
        return np.diag([float(x) for x in diag]).astype(complex)
    if "matrix" in obj:
        return _parse_matrix(obj["matrix"], d, where)
    raise ModelFileError(f"{where}: needs a 'diagonal' or 'matrix' field")


def loads_model(text):
    """Parse model JSON text; returns (model, initial_state or None)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFileError(f"invalid JSON: {exc}") from exc
    return _from_dict(doc)


def load_model(path):
    """Load a model file; returns (model, initial_state or None)."""
    with open(path, encoding="utf-8") as fh:
        return loads_model(fh.read())


def _from_dict(doc):
    if not isinstance(doc, dict):
        raise ModelFileError("top level must be a JSON object")
    try:
        d = int(doc["dimension"])
    except (KeyError, TypeError, ValueError):
        raise ModelFileError("missing or invalid 'dimension'") from None
    if d < 2:
        raise ModelFileError("dimension must be at least 2")

    params = doc.get("params", {})
    if not isinstance(params, dict):
        raise ModelFileError("'params' must be an object")

    hamiltonian = _parse_operator(doc.get("hamiltonian", {"diagonal": [0.0] * d}),
                                  d, "hamiltonian")

    jumps = []
    for k, spec in enumerate(doc.get("jumps", [])):
        where = f"jumps[{k}]"
        if not isinstance(spec, dict) or "rate" not in spec:
            raise ModelFileError(f"{where}: needs a 'rate' expression string")
        rate = parse_rate_expr(str(spec["rate"]), params)
        if "from" in spec or "to" in spec:
            try:
                source, target = int(spec["from"]), int(spec["to"])
            except (KeyError, TypeError, ValueError):
                raise ModelFileError(f"{where}: 'from' and 'to' must be levels") from None
            if not (1 <= source <= d and 1 <= target <= d):
                raise ModelFileError(f"{where}: levels must lie in 1..{d}")
            jumps.append(Jump(jump_operator(d, target, source), rate, source, target))
        elif "matrix" in spec:
            jumps.append(Jump(_parse_matrix(spec["matrix"], d, where), rate))
        else:
            raise ModelFileError(f"{where}: needs 'from'/'to' levels or a 'matrix'")

    model = LindbladModel(d, hamiltonian, jumps)
    try:
        model.validate()
    except ValueError as exc:
        raise ModelFileError(str(exc)) from exc

    initial_state = None
    if "initial_state" in doc:
        initial_state = _parse_operator(doc["initial_state"], d, "initial_state")
    return model, initial_state


def _matrix_json(m):
    return [[[float(m[i, j].real), float(m[i, j].imag)] for j in range(m.shape[1])]
            for i in range(m.shape[0])]


def _operator_json(m):
    if np.max(np.abs(m - np.diag(np.diagonal(m)))) == 0.0 \
            and np.max(np.abs(np.imag(np.diagonal(m)))) == 0.0:
        return {"diagonal": [float(x.real) for x in np.diagonal(m)]}
    return {"matrix": _matrix_json(m)}


def model_to_dict(model, initial_state=None):
    """Serialize a model (parameters already bound into the rates)."""
    doc = {
        "dimension": model.dim,
        "hamiltonian": _operator_json(np.asarray(model.hamiltonian, dtype=complex)),
        "jumps": [],
        "params": {},
    }
    for jump in model.jumps:
        entry = {"rate": format_expr(jump.rate)}
        if jump.source is not None and jump.target is not None:
            entry = {"from": jump.source, "to": jump.target, **entry}
        else:
            entry = {"matrix": _matrix_json(np.asarray(jump.operator, dtype=complex)),
                     **entry}
        doc["jumps"].append(entry)
    if initial_state is not None:
        doc["initial_state"] = _operator_json(np.asarray(initial_state, dtype=complex))
    return doc


def dump_model(model, path, initial_state=None):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(model_to_dict(model, initial_state), fh, indent=2)
        fh.write("\n")
