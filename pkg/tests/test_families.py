from fractions import Fraction

import pytest

from affbol import geometry as geo
from affbol.errors import ContextMismatch, InternalInconsistency, NotVerified
from affbol.families import (LinearPairFamily, SetPairFamily, bollobas_sum,
                             coordinate_linear_family, tight_set_family, uniform_bound,
                             verify_cross_intersecting, verify_linear_pairs)

import oracles


def sets(*xs):
    return frozenset(xs)


def test_skew_vs_symmetric_modes():
    # A2 misses B1: fine for skew order, a violation in symmetric mode
    fam = SetPairFamily("sets", 3, ((sets(1), sets(2)), (sets(3), sets(1))), "skew")
    assert verify_cross_intersecting(fam) == []
    bad = verify_cross_intersecting(fam.with_mode("symmetric"))
    assert [(v.kind, v.i, v.j) for v in bad] == [("OffDiagonalEmpty", 2, 1)]
    both = SetPairFamily("sets", 3, ((sets(1), sets(2, 3)), (sets(2), sets(1, 3))), "symmetric")
    assert verify_cross_intersecting(both) == []
    assert verify_cross_intersecting(both.with_mode("skew")) == []


def test_violation_details():
    fam = SetPairFamily("sets", 4, ((sets(1, 2), sets(2)), (sets(3), sets(4))))
    bad = verify_cross_intersecting(fam)
    assert [(v.kind, v.i, v.j, v.witness) for v in bad] == [
        ("DiagonalNonempty", 1, 1, 2), ("OffDiagonalEmpty", 1, 2, None)]


def test_member_outside_context():
    with pytest.raises(ContextMismatch):
        verify_cross_intersecting(SetPairFamily("sets", 2, ((sets(5), sets(1)),)))
    s1, s2 = geo.make_space(2, 3), geo.make_space(2, 5)
    A = geo.affine_canon(s2, [], (0, 0))
    with pytest.raises(ContextMismatch):
        verify_cross_intersecting(SetPairFamily("affine", s1, ((A, A),)))


def test_empty_family():
    fam = SetPairFamily("sets", 0, ())
    assert verify_cross_intersecting(fam) == []
    assert bollobas_sum(fam) == 0


def test_tight_family_sums_to_one():
    for r, s in [(1, 1), (2, 2), (1, 3), (3, 2)]:
        fam = tight_set_family(r, s)
        assert fam.m == uniform_bound(r, s)
        assert bollobas_sum(fam) == Fraction(1)


def test_random_symmetric_families(rng):
    for _ in range(50):
        fam = SetPairFamily("sets", 8, tuple(oracles.random_symmetric_set_family(rng)),
                            "symmetric")
        assert verify_cross_intersecting(fam) == []
        total = bollobas_sum(fam)
        assert isinstance(total, Fraction) and total <= 1


def test_sum_requires_symmetric_condition():
    fam = SetPairFamily("sets", 3, ((sets(1), sets(2)), (sets(2), sets(3))))
    with pytest.raises(NotVerified):
        bollobas_sum(fam)


def test_affine_and_projective_meet():
    space = geo.make_space(2, 3)
    L = geo.affine_canon(space, [(1, 0)], (0, 0))
    M = geo.affine_canon(space, [(1, 0)], (0, 1))
    N = geo.affine_canon(space, [(0, 1)], (0, 0))
    N1 = geo.affine_canon(space, [(0, 1)], (1, 0))
    fam = SetPairFamily("affine", space, ((L, M), (N, N1)))
    assert verify_cross_intersecting(fam) == []
    fam = SetPairFamily("affine", space, ((L, M), (M, N)))
    assert [(v.kind, v.i, v.j, v.witness) for v in verify_cross_intersecting(fam)] == [
        ("DiagonalNonempty", 2, 2, (0, 1))]
    P = geo.projective_space(2, 2)
    l1 = geo.projective_span(P, [(1, 0, 0), (0, 1, 0)])
    p1 = geo.projective_span(P, [(0, 0, 1)])
    fam = SetPairFamily("projective", P, ((l1, p1),))
    assert verify_cross_intersecting(fam) == []


def test_coordinate_linear_family_is_tight():
    space = geo.make_space(4, 2)
    for r in range(5):
        fam = coordinate_linear_family(space, r)
        assert verify_linear_pairs(fam) == []
        if fam.m and fam.uniform:
            assert fam.m == uniform_bound(*fam.uniform)


def test_linear_bound_guard():
    space = geo.make_space(2, 2)
    U = geo.linear_span(space, [(1, 0)])
    V = geo.linear_span(space, [(0, 1)])
    assert verify_linear_pairs(LinearPairFamily(space, ((U, V), (V, U)))) == []
    bad = verify_linear_pairs(LinearPairFamily(space, ((U, V), (U, V))))
    assert [(v.kind, v.i, v.j) for v in bad] == [("OffDiagonalEmpty", 1, 2)]


def test_linear_bound_guard_fires(monkeypatch):
    from affbol import families

    space = geo.make_space(2, 2)
    fam = coordinate_linear_family(space, 1)
    monkeypatch.setattr(families, "uniform_bound", lambda r, s: 1)
    with pytest.raises(InternalInconsistency):
        verify_linear_pairs(fam)
