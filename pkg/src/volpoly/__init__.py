"""Exact computations with multi-fans, multi-polytopes and their volume
polynomials."""
from .errors import InternalAssertionError, PreconditionError, ValidationError, VolpolyError
from .exactmath import HomogeneousForm, DiffOp
from .multifan import MultiFan, connected_sum, elementary, flip
from .polytope import MultiPolytope
from .volume import volume_poly, volume_poly_index, volume_poly_lawrence
from .algebra import build, verify_structure
from .recognize import is_volume_polynomial, reconstruct, from_poincare_algebra

__all__ = [
    "VolpolyError", "ValidationError", "PreconditionError", "InternalAssertionError",
    "HomogeneousForm", "DiffOp", "MultiFan", "MultiPolytope", "connected_sum", "elementary",
    "flip", "volume_poly", "volume_poly_index", "volume_poly_lawrence", "build",
    "verify_structure", "is_volume_polynomial", "reconstruct", "from_poincare_algebra",
]
