import pytest

from affbol import geometry as geo
from affbol import io
from affbol.construction import build_construction
from affbol.errors import NotPrimePower, ParseError, VersionMismatch
from affbol.families import SetPairFamily, tight_set_family
from affbol.search import search_projective


def test_affine_roundtrip_is_byte_identical():
    fam = build_construction(geo.make_space(2, 4)).family
    data = io.serialize_family(fam)
    back = io.parse_family(data)
    assert back == fam
    assert io.serialize_family(back) == data


def test_other_geometries_roundtrip():
    for fam in (tight_set_family(2, 2), search_projective(2, 2).witness):
        data = io.serialize_family(fam)
        assert io.parse_family(data) == fam
        assert io.serialize_family(io.parse_family(data)) == data


def test_empty_family():
    fam = SetPairFamily("affine", geo.make_space(2, 3), ())
    assert io.parse_family(io.serialize_family(fam)) == fam


def test_dumps_layout():
    text = io.dumps({"b": [1, 2], "a": {"x": [[0, 1], [1, 0]]}})
    assert text == '{\n  "a": {\n    "x": [[0, 1], [1, 0]]\n  },\n  "b": [1, 2]\n}\n'


def _affine_doc(**over):
    doc = ('{"format_version": 1, "geometry": "affine", "mode": "skew", "n": 1, "q": %(q)s, '
           '"pairs": [{"A": {"base": [0], "basis": []}, "B": {"base": [1], "basis": []}%(extra)s}]}')
    vals = {"q": 3, "extra": ""}
    vals.update(over)
    return doc % vals


def test_valid_minimal_file():
    fam = io.parse_family(_affine_doc())
    assert fam.m == 1


def test_q6_rejected():
    with pytest.raises(NotPrimePower):
        io.parse_family(_affine_doc(q=6))


def test_unknown_field_rejected():
    with pytest.raises(ParseError, match="unknown fields"):
        io.parse_family(_affine_doc(extra=', "C": {}'))


def test_version_mismatch():
    with pytest.raises(VersionMismatch):
        io.parse_family(_affine_doc().replace('"format_version": 1', '"format_version": 2'))


def test_syntax_error_position():
    with pytest.raises(ParseError) as info:
        io.parse_family('{\n  "format_version": 1,\n  oops\n}')
    assert (info.value.line, info.value.column) == (3, 3)
    assert "line 3, column 3" in str(info.value)


def test_bad_coordinates():
    with pytest.raises(ParseError):
        io.parse_family(_affine_doc().replace('"base": [1]', '"base": [1, 2]'))
    with pytest.raises(ParseError):
        io.parse_family(_affine_doc().replace('"base": [1]', '"base": ["a"]'))


def test_sets_outside_ground():
    doc = ('{"format_version": 1, "geometry": "sets", "mode": "symmetric", "ground": 2, '
           '"pairs": [{"A": [1], "B": [3]}]}')
    with pytest.raises(ParseError):
        io.parse_family(doc)
