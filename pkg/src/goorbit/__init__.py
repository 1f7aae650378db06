"""Exact structure theory and checks for geodesic orbit Riemannian spaces."""

from .lie import LieAlgebra, levi, radical, nilradical
from .space import HomogeneousSpaceSpec, validate
from .go import check_go, geodesic_vector, NotGO, ProbablyGO, ProvedGO
from .nilmanifold import NilmanifoldSpec, skew_derivations
from .structure import decompose, rn_decompose, submersion_decompose
from . import catalog

__all__ = [
    "LieAlgebra", "levi", "radical", "nilradical",
    "HomogeneousSpaceSpec", "validate",
    "check_go", "geodesic_vector", "NotGO", "ProbablyGO", "ProvedGO",
    "NilmanifoldSpec", "skew_derivations",
    "decompose", "rn_decompose", "submersion_decompose",
    "catalog",
]
