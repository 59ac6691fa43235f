"""Hyperplane-shift construction of a cross-intersecting affine family.

For every linear hyperplane H of F_q^n take A = H and B = H + beta where
beta is the first point (in point_index order) outside H.  This gives
(q^n - 1)/(q - 1) pairs for any prime power q, including q = 2.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import geometry as geo
from .errors import InternalInconsistency
from .families import SetPairFamily, verify_cross_intersecting


@dataclass(frozen=True)
class ConstructionOutput:
    family: SetPairFamily
    hyperplanes: tuple[geo.LinearSubspace, ...]
    shifts: tuple[tuple[int, ...], ...]


def choose_beta(H: geo.LinearSubspace) -> tuple[int, ...]:
    space = H.space
    for idx in range(space.size):
        v = geo.point_unindex(space, idx)
        if v not in H:
            return v
    raise ValueError("subspace covers the whole space; it is not a hyperplane")


def build_construction(space: geo.SpaceDesc, check: bool = True) -> ConstructionOutput:
    hyperplanes = tuple(geo.enumerate_linear_hyperplanes(space))
    shifts = tuple(choose_beta(H) for H in hyperplanes)
    pairs = tuple((geo.coset_of(H), geo.coset_of(H, beta)) for H, beta in zip(hyperplanes, shifts))
    fam = SetPairFamily("affine", space, pairs, "skew")
    expected = (space.q ** space.n - 1) // (space.q - 1)
    if fam.m != expected:
        raise InternalInconsistency(f"built {fam.m} pairs, expected {expected}")
    if check:
        bad = verify_cross_intersecting(fam)
        if bad:
            raise InternalInconsistency(f"construction failed verification: {bad[:3]}")
    return ConstructionOutput(fam, hyperplanes, shifts)
