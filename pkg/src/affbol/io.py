"""JSON family files and reports.

Family file layout (``format_version`` 1)::

    {"format_version": 1, "geometry": "affine", "mode": "skew", "n": 2, "q": 3,
     "pairs": [{"A": {"base": [0, 0], "basis": [[1, 0]]}, "B": {...}}, ...]}

Linear and projective members carry only ``basis``; for projective files
``n`` is the projective dimension and vectors have n + 1 coordinates.  Set
families use ``"geometry": "sets"``, a ``ground`` size instead of n/q, and
members are sorted integer lists.  Field elements use the algebra module's
integer encoding.  Output is UTF-8 with sorted keys, so equal inputs give
equal bytes.
"""

from __future__ import annotations

import json
from typing import Any

from . import geometry as geo
from .errors import DimensionMismatch, ParseError, VersionMismatch
from .families import GEOMETRIES, MODES, SetPairFamily, _check_member

FORMAT_VERSION = 1


def dumps(obj: Any) -> str:
    """Deterministic JSON: sorted keys, two-space indent, scalar lists kept on one line."""
    return _emit(obj, 0) + "\n"


def _emit(obj: Any, level: int) -> str:
    pad = "  " * (level + 1)
    end = "  " * level
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_emit(obj[k], level + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(x, (dict, list, tuple)) for x in obj):
            return "[" + ", ".join(_scalar(x) for x in obj) + "]"
        if all(isinstance(x, (list, tuple)) and
               all(not isinstance(y, (dict, list, tuple)) for y in x) for x in obj):
            return "[" + ", ".join(_emit(x, level + 1) for x in obj) + "]"
        return "[\n" + ",\n".join(pad + _emit(x, level + 1) for x in obj) + "\n" + end + "]"
    return _scalar(obj)


def _scalar(x: Any) -> str:
    if hasattr(x, "item"):  # numpy scalars
        x = x.item()
    if isinstance(x, float):
        return repr(x)
    return json.dumps(x)


# ---------------------------------------------------------------------------
# families


def _member_json(geometry: str, X) -> Any:
    if geometry == "sets":
        return sorted(X)
    if geometry == "affine":
        return {"base": list(X.base), "basis": [list(r) for r in X.direction.basis]}
    if geometry == "linear":
        return {"basis": [list(r) for r in X.basis]}
    return {"basis": [list(r) for r in X.carrier.basis]}


def family_to_json(fam: SetPairFamily) -> dict:
    out = {"format_version": FORMAT_VERSION, "geometry": fam.geometry, "mode": fam.mode,
           "pairs": [{"A": _member_json(fam.geometry, a), "B": _member_json(fam.geometry, b)}
                     for a, b in fam.pairs]}
    if fam.geometry == "sets":
        out["ground"] = fam.context
    else:
        space = fam.context
        out["q"] = space.q
        out["n"] = space.n - 1 if fam.geometry == "projective" else space.n
    return out


def serialize_family(fam: SetPairFamily) -> bytes:
    return dumps(family_to_json(fam)).encode("utf-8")


def _expect_keys(obj: Any, required: set, where: str) -> None:
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object")
    missing = required - obj.keys()
    extra = obj.keys() - required
    if missing:
        raise ParseError(f"{where}: missing fields {sorted(missing)}")
    if extra:
        raise ParseError(f"{where}: unknown fields {sorted(extra)}")


def _int_list(x: Any, where: str) -> list[int]:
    if not isinstance(x, list) or any(not isinstance(v, int) or isinstance(v, bool) for v in x):
        raise ParseError(f"{where}: expected a list of integers")
    return x


def _matrix(x: Any, where: str) -> list[list[int]]:
    if not isinstance(x, list):
        raise ParseError(f"{where}: expected a list of vectors")
    return [_int_list(r, f"{where}[{i}]") for i, r in enumerate(x)]


def _parse_member(geometry: str, ctx, obj: Any, where: str):
    try:
        if geometry == "sets":
            elems = _int_list(obj, where)
            return frozenset(elems)
        if geometry == "affine":
            _expect_keys(obj, {"base", "basis"}, where)
            return geo.affine_canon(ctx, _matrix(obj["basis"], f"{where}.basis"),
                                    _int_list(obj["base"], f"{where}.base"))
        _expect_keys(obj, {"basis"}, where)
        U = geo.linear_span(ctx, _matrix(obj["basis"], f"{where}.basis"))
        return U if geometry == "linear" else geo.ProjectiveSubspace(ctx, U)
    except DimensionMismatch as exc:
        raise ParseError(f"{where}: {exc}") from None


def family_from_json(data: Any) -> SetPairFamily:
    if not isinstance(data, dict):
        raise ParseError("family file must hold a JSON object")
    if data.get("format_version") != FORMAT_VERSION:
        raise VersionMismatch(f"format_version {data.get('format_version')!r} is not supported "
                              f"(expected {FORMAT_VERSION})")
    geometry = data.get("geometry")
    if geometry not in GEOMETRIES:
        raise ParseError(f"geometry must be one of {GEOMETRIES}, got {geometry!r}")
    if geometry == "sets":
        _expect_keys(data, {"format_version", "geometry", "mode", "ground", "pairs"}, "family")
        ctx = data["ground"]
        if not isinstance(ctx, int) or ctx < 0:
            raise ParseError("ground must be a nonnegative integer")
    else:
        _expect_keys(data, {"format_version", "geometry", "mode", "n", "q", "pairs"}, "family")
        n, q = data["n"], data["q"]
        if not isinstance(n, int) or not isinstance(q, int):
            raise ParseError("n and q must be integers")
        ctx = geo.projective_space(n, q) if geometry == "projective" else geo.make_space(n, q)
    if data["mode"] not in MODES:
        raise ParseError(f"mode must be one of {MODES}, got {data['mode']!r}")
    if not isinstance(data["pairs"], list):
        raise ParseError("pairs must be a list")
    pairs = []
    for i, pair in enumerate(data["pairs"], start=1):
        _expect_keys(pair, {"A", "B"}, f"pairs[{i}]")
        pairs.append((_parse_member(geometry, ctx, pair["A"], f"pairs[{i}].A"),
                      _parse_member(geometry, ctx, pair["B"], f"pairs[{i}].B")))
    fam = SetPairFamily(geometry, ctx, tuple(pairs), data["mode"])
    if geometry == "sets":
        for a, b in fam.pairs:
            try:
                _check_member(fam, a)
                _check_member(fam, b)
            except ValueError as exc:
                raise ParseError(str(exc)) from None
    return fam


def parse_family(text: str | bytes) -> SetPairFamily:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    return family_from_json(data)


def read_family(path: str) -> SetPairFamily:
    with open(path, "rb") as fh:
        return parse_family(fh.read())


def write_bytes(path: str, data: bytes) -> None:
    with open(path, "wb") as fh:
        fh.write(data)
