import pytest

from affbol import geometry as geo
from affbol.construction import build_construction, choose_beta
from affbol.families import verify_cross_intersecting

import oracles


@pytest.mark.parametrize("n,q", [(1, 2), (2, 2), (3, 2), (1, 3), (2, 3), (2, 4), (2, 5), (3, 3)])
def test_size_and_verification(n, q):
    out = build_construction(geo.make_space(n, q))
    assert out.family.m == (q**n - 1) // (q - 1)
    assert verify_cross_intersecting(out.family) == []


def test_structure():
    space = geo.make_space(2, 3)
    out = build_construction(space)
    for (A, B), H, beta in zip(out.family.pairs, out.hyperplanes, out.shifts):
        assert A.direction == B.direction == H
        assert A.base == space.zero()
        assert beta not in H and beta in B


def test_choose_beta_is_first_point_outside():
    space = geo.make_space(2, 3)
    H = geo.linear_span(space, [(1, 0)])
    assert choose_beta(H) == (0, 1)
    with pytest.raises(ValueError):
        choose_beta(geo.linear_span(space, [(1, 0), (0, 1)]))


def test_pairwise_against_point_sets():
    space = geo.make_space(2, 4)
    F = space.field
    fam = build_construction(space, check=False).family
    pts = [(oracles.coset_index_set(F, 2, A.base, A.direction.basis),
            oracles.coset_index_set(F, 2, B.base, B.direction.basis)) for A, B in fam.pairs]
    for i, (A, _) in enumerate(pts):
        for j, (_, B) in enumerate(pts):
            if i == j:
                assert not A & B
            elif i < j:
                assert A & B
