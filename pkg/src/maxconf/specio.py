"""Reading and writing the JSON ensemble-spec format.

A spec file looks like

    {
      "dimension": 2,
      "states": [
        {"prior": 0.5, "matrix": [[[0.5, 0.0], [0.0, 0.0]],
                                  [[0.0, 0.0], [0.5, 0.0]]]},
        {"prior": 0.5, "ket": [[0.7071067811865476, 0.0],
                               [0.7071067811865476, 0.0]]}
      ],
      "tolerance": 1e-9
    }

Complex numbers are [re, im] pairs, matrices row-major nested lists.
Kets are normalized on load (a warning fires when the correction exceeds
1e-6); priors are checked to sum to 1 within 1e-9 and then renormalized
exactly.  The optional tolerance field overrides the verification default
unless the command line sets one.  NaN and infinities are rejected.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .ensembles import Ensemble
from .linalg import frobenius, hermitize
from .transforms import KrausOperator

_KET_NORM_WARN = 1e-6
_PRIOR_SUM_TOL = 1e-9
_PARSE_PSD_TOL = 1e-10
_PARSE_TRACE_TOL = 1e-10


class SpecError(ValueError):
    """Malformed or inconsistent input file."""


def _reject_constant(token):
    raise SpecError(f"non-finite number {token!r} in input")


def _load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh, parse_constant=_reject_constant)
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path} is not valid JSON: {exc}") from exc


def _real(value, field: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SpecError(f"{field} must be a number, got {value!r}")
    x = float(value)
    if not math.isfinite(x):
        raise SpecError(f"{field} is not finite")
    return x


def _complex(entry, field: str) -> complex:
    if not isinstance(entry, (list, tuple)) or len(entry) != 2:
        raise SpecError(f"{field} must be an [re, im] pair, got {entry!r}")
    return complex(_real(entry[0], f"{field}[0]"), _real(entry[1], f"{field}[1]"))


def _vector(entry, dim: int, field: str) -> np.ndarray:
    if not isinstance(entry, list) or len(entry) != dim:
        raise SpecError(f"{field} must be a list of {dim} complex entries")
    return np.array([_complex(x, f"{field}[{k}]") for k, x in enumerate(entry)])


def _matrix(entry, dim: int, field: str) -> np.ndarray:
    if not isinstance(entry, list) or len(entry) != dim:
        raise SpecError(f"{field} must be a {dim} x {dim} matrix")
    return np.vstack([_vector(row, dim, f"{field}[{k}]") for k, row in enumerate(entry)])


@dataclass(frozen=True)
class ParsedSpec:
    ensemble: Ensemble
    tolerance: float | None


def read_spec(path) -> ParsedSpec:
    doc = _load_json(path)
    if not isinstance(doc, dict):
        raise SpecError("spec root must be an object")
    if "dimension" not in doc:
        raise SpecError("missing dimension")
    dim = doc["dimension"]
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise SpecError(f"dimension must be a positive integer, got {dim!r}")
    raw_states = doc.get("states")
    if not isinstance(raw_states, list) or not raw_states:
        raise SpecError("states must be a non-empty list")

    priors = []
    states = []
    for k, entry in enumerate(raw_states):
        field = f"states[{k}]"
        if not isinstance(entry, dict):
            raise SpecError(f"{field} must be an object")
        if "prior" not in entry:
            raise SpecError(f"{field} is missing its prior")
        p = _real(entry["prior"], f"{field}.prior")
        if p <= 0.0:
            raise SpecError(f"{field}.prior must be strictly positive, got {p!r}")
        priors.append(p)
        has_ket = "ket" in entry
        has_matrix = "matrix" in entry
        if has_ket == has_matrix:
            raise SpecError(f"{field} needs exactly one of ket or matrix")
        if has_ket:
            v = _vector(entry["ket"], dim, f"{field}.ket")
            norm = float(np.linalg.norm(v))
            if norm == 0.0:
                raise SpecError(f"{field}.ket is the zero vector")
            if abs(norm - 1.0) > _KET_NORM_WARN:
                warnings.warn(
                    f"{field}.ket renormalized (norm was {norm!r})",
                    stacklevel=2,
                )
            v = v / norm
            states.append(np.outer(v, v.conj()))
        else:
            m = _matrix(entry["matrix"], dim, f"{field}.matrix")
            scale = max(frobenius(m), 1e-300)
            if frobenius(m - m.conj().T) > 1e-9 * scale:
                raise SpecError(f"{field}.matrix is not Hermitian")
            m = hermitize(m)
            vals = np.linalg.eigvalsh(m)
            if vals[0] < -_PARSE_PSD_TOL:
                raise SpecError(
                    f"{field}.matrix is not positive semidefinite "
                    f"(most negative eigenvalue {float(vals[0])!r})"
                )
            tr = float(np.trace(m).real)
            if abs(tr - 1.0) > _PARSE_TRACE_TOL:
                raise SpecError(f"{field}.matrix has trace {tr!r}, expected 1")
            states.append(m)

    total = sum(priors)
    if abs(total - 1.0) > _PRIOR_SUM_TOL:
        raise SpecError(f"priors sum to {total:.6g}, expected 1")
    priors = np.asarray(priors) / total

    tolerance = None
    if "tolerance" in doc:
        tolerance = _real(doc["tolerance"], "tolerance")
        if tolerance <= 0.0:
            raise SpecError("tolerance must be positive")

    try:
        ens = Ensemble(dim, tuple(states), priors)
    except ValueError as exc:
        raise SpecError(str(exc)) from exc
    return ParsedSpec(ens, tolerance)


def parse_spec(path) -> Ensemble:
    """Load an ensemble spec file, applying normalization and validation."""
    return read_spec(path).ensemble


def load_kraus(path) -> KrausOperator:
    """Operation element from a JSON file holding one nested [re, im] matrix."""
    doc = _load_json(path)
    if isinstance(doc, dict) and "matrix" in doc:
        doc = doc["matrix"]
    if not isinstance(doc, list) or not doc:
        raise SpecError("kraus file must hold a square matrix of [re, im] pairs")
    m = _matrix(doc, len(doc), "matrix")
    try:
        return KrausOperator(m)
    except ValueError as exc:
        raise SpecError(str(exc)) from exc


def complex_to_pair(z: complex) -> list:
    return [float(z.real), float(z.imag)]


def vector_to_json(v) -> list:
    return [complex_to_pair(complex(x)) for x in np.asarray(v).reshape(-1)]


def matrix_to_json(m) -> list:
    arr = np.asarray(m)
    return [[complex_to_pair(complex(x)) for x in row] for row in arr]
