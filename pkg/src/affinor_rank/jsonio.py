"""Parsers for the JSON input formats accepted by the command line.

Every parse failure raises InputFormatError carrying the file path and a
dotted field locator, so error messages point at the exact offending
value.  Serialization lives on the model types themselves (``to_json``
methods); this module only reads.

Formats:

* matrix: ``{"rows": r, "cols": c, "mode": "exact"|"float", "entries":
  [[..], ..]}`` with exact entries written as integers or "p/q" strings;
* affinor basis: ``{"m": m, "n": n, "mode": .., "mats": [matrix, ..]}``;
  a basis with n == m (an operator span acting on its own coefficient
  space) is accepted on load;
* structure constants: ``{"n": n, "C": [[[..]]]}``, exact scalars;
* connection: ``{"m": m, "gamma": {"constant": [[[..]]]}}`` or
  ``{"m": m, "gamma": {"poly": [[[ [[coeff, [powers..]], ..] ]]]}}``;
* curve: ``{"kind": "closed", "m": m, "domain": [t0, t1], "coords":
  [[term, ..], ..]}`` with term ``{"type": "power", "coeff": c, "exp": a}``
  or ``{"type": "cos"|"sin", "coeff": c, "omega": w}``, or
  ``{"kind": "sampled", "m": m, "t": [..], "values": [[..], ..],
  "velocities": optional}``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Union

from .algebra import StructureConstants
from .errors import AffinorRankError, InputFormatError
from .hullrank import AffinorBasis
from .linalg import EXACT, FLOAT, Matrix
from .planarity import ClosedFormCurve, ConnectionSpec, CurveSpec, SampledCurve


def load_json(path: Union[str, Path]) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputFormatError(path, "<file>", "file not found")
    except json.JSONDecodeError as exc:
        raise InputFormatError(path, "<root>", f"invalid JSON: {exc}")


def _need(obj: dict, key: str, path, where: str):
    if not isinstance(obj, dict) or key not in obj:
        raise InputFormatError(path, f"{where}{key}", "missing required field")
    return obj[key]


def _int(value, path, field) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputFormatError(path, field, f"expected an integer, got {value!r}")
    return value


def exact_scalar_from_json(value, path, field) -> Fraction:
    if isinstance(value, bool):
        raise InputFormatError(path, field, "booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise InputFormatError(path, field, f"not a valid rational: {value!r}")
    if isinstance(value, float):
        raise InputFormatError(
            path, field, "floats are not accepted in exact mode; write p/q or an integer"
        )
    raise InputFormatError(path, field, f"not a scalar: {value!r}")


def float_scalar_from_json(value, path, field) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InputFormatError(path, field, f"not a number: {value!r}")
    return float(value)


def matrix_from_json(obj, path, where: str = "") -> Matrix:
    mode = _need(obj, "mode", path, where)
    if mode not in (EXACT, FLOAT):
        raise InputFormatError(path, f"{where}mode", f"unknown mode {mode!r}")
    rows = _int(_need(obj, "rows", path, where), path, f"{where}rows")
    cols = _int(_need(obj, "cols", path, where), path, f"{where}cols")
    entries = _need(obj, "entries", path, where)
    if not isinstance(entries, list) or len(entries) != rows:
        raise InputFormatError(path, f"{where}entries", f"expected {rows} rows")
    parsed = []
    for i, row in enumerate(entries):
        if not isinstance(row, list) or len(row) != cols:
            raise InputFormatError(path, f"{where}entries[{i}]", f"expected {cols} entries")
        if mode == EXACT:
            parsed.append(
                tuple(
                    exact_scalar_from_json(v, path, f"{where}entries[{i}][{j}]")
                    for j, v in enumerate(row)
                )
            )
        else:
            parsed.append(
                tuple(
                    float_scalar_from_json(v, path, f"{where}entries[{i}][{j}]")
                    for j, v in enumerate(row)
                )
            )
    try:
        return Matrix(rows, cols, mode, tuple(parsed))
    except AffinorRankError as exc:
        raise InputFormatError(path, f"{where}entries", str(exc))


def basis_from_json(obj, path) -> AffinorBasis:
    m = _int(_need(obj, "m", path, ""), path, "m")
    n = _int(_need(obj, "n", path, ""), path, "n")
    mats_json = _need(obj, "mats", path, "")
    if not isinstance(mats_json, list) or len(mats_json) != n:
        raise InputFormatError(path, "mats", f"expected {n} matrices")
    mats = [matrix_from_json(mj, path, f"mats[{i}].") for i, mj in enumerate(mats_json)]
    for i, mat in enumerate(mats):
        if mat.rows != m or mat.cols != m:
            raise InputFormatError(path, f"mats[{i}]", f"expected an {m}x{m} matrix")
    return AffinorBasis(tuple(mats), allow_equal_dim=(n == m))


def constants_from_json(obj, path) -> StructureConstants:
    n = _int(_need(obj, "n", path, ""), path, "n")
    mode = obj.get("mode", EXACT)
    if mode != EXACT:
        raise InputFormatError(path, "mode", "structure constants must be exact")
    c = _need(obj, "C", path, "")
    if not isinstance(c, list) or len(c) != n:
        raise InputFormatError(path, "C", f"expected {n} planes")
    planes = []
    for i, plane in enumerate(c):
        if not isinstance(plane, list) or len(plane) != n:
            raise InputFormatError(path, f"C[{i}]", f"expected {n} rows")
        rows = []
        for j, row in enumerate(plane):
            if not isinstance(row, list) or len(row) != n:
                raise InputFormatError(path, f"C[{i}][{j}]", f"expected {n} entries")
            rows.append(
                tuple(
                    exact_scalar_from_json(v, path, f"C[{i}][{j}][{k}]")
                    for k, v in enumerate(row)
                )
            )
        planes.append(tuple(rows))
    return StructureConstants(n, EXACT, tuple(planes))


def connection_from_json(obj, path) -> ConnectionSpec:
    m = _int(_need(obj, "m", path, ""), path, "m")
    gamma = _need(obj, "gamma", path, "")
    if not isinstance(gamma, dict) or len(gamma) != 1:
        raise InputFormatError(
            path, "gamma", 'expected exactly one of {"constant": ..} or {"poly": ..}'
        )
    if "constant" in gamma:
        table = gamma["constant"]
        try:
            spec = ConnectionSpec.constant(table)
        except (AffinorRankError, TypeError, ValueError) as exc:
            raise InputFormatError(path, "gamma.constant", str(exc))
        if spec.m != m:
            raise InputFormatError(path, "gamma.constant", f"table is not {m}x{m}x{m}")
        return spec
    if "poly" in gamma:
        try:
            return ConnectionSpec.polynomial(m, gamma["poly"])
        except (AffinorRankError, TypeError, ValueError) as exc:
            raise InputFormatError(path, "gamma.poly", str(exc))
    raise InputFormatError(path, "gamma", 'expected "constant" or "poly"')


def _term_from_json(obj, path, field):
    if not isinstance(obj, dict):
        raise InputFormatError(path, field, "curve terms must be objects")
    kind = _need(obj, "type", path, f"{field}.")
    coeff = float_scalar_from_json(_need(obj, "coeff", path, f"{field}."), path, f"{field}.coeff")
    if kind == "power":
        exp = _int(_need(obj, "exp", path, f"{field}."), path, f"{field}.exp")
        if exp < 0:
            raise InputFormatError(path, f"{field}.exp", "exponent must be nonnegative")
        return ("power", coeff, float(exp))
    if kind in ("cos", "sin"):
        omega = float_scalar_from_json(
            _need(obj, "omega", path, f"{field}."), path, f"{field}.omega"
        )
        return (kind, coeff, omega)
    raise InputFormatError(path, f"{field}.type", f"unknown term type {kind!r}")


def curve_from_json(obj, path) -> CurveSpec:
    kind = _need(obj, "kind", path, "")
    m = _int(_need(obj, "m", path, ""), path, "m")
    if kind == "closed":
        domain = _need(obj, "domain", path, "")
        if (
            not isinstance(domain, list)
            or len(domain) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in domain)
        ):
            raise InputFormatError(path, "domain", "expected [t0, t1]")
        coords_json = _need(obj, "coords", path, "")
        if not isinstance(coords_json, list) or len(coords_json) != m:
            raise InputFormatError(path, "coords", f"expected {m} coordinate term lists")
        coords = []
        for i, comp in enumerate(coords_json):
            if not isinstance(comp, list):
                raise InputFormatError(path, f"coords[{i}]", "expected a list of terms")
            coords.append(
                tuple(
                    _term_from_json(t, path, f"coords[{i}][{j}]")
                    for j, t in enumerate(comp)
                )
            )
        try:
            return ClosedFormCurve(m, (float(domain[0]), float(domain[1])), tuple(coords))
        except (AffinorRankError, ValueError) as exc:
            raise InputFormatError(path, "coords", str(exc))
    if kind == "sampled":
        ts = _need(obj, "t", path, "")
        values = _need(obj, "values", path, "")
        velocities = obj.get("velocities")
        try:
            curve = SampledCurve.of(ts, values, velocities)
        except (AffinorRankError, ValueError, TypeError) as exc:
            raise InputFormatError(path, "values", str(exc))
        if curve.m != m:
            raise InputFormatError(path, "values", f"points have length {curve.m}, expected {m}")
        return curve
    raise InputFormatError(path, "kind", f'unknown curve kind {kind!r}; use "closed" or "sampled"')
