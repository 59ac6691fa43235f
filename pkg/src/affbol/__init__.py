"""Cross-intersecting families of affine and projective subspaces over F_q."""

__version__ = "0.1.0"

from .algebra import FieldDesc, fq_make
from .certificate import build_certificate, smallest_odd_p
from .construction import build_construction
from .families import SetPairFamily, bollobas_sum, verify_cross_intersecting
from .geometry import affine_canon, affine_intersect, make_space, projective_space
from .search import search_affine, search_projective

__all__ = [
    "FieldDesc", "fq_make", "build_certificate", "smallest_odd_p", "build_construction",
    "SetPairFamily", "bollobas_sum", "verify_cross_intersecting", "affine_canon",
    "affine_intersect", "make_space", "projective_space", "search_affine", "search_projective",
]
