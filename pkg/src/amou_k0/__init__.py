"""Absolute matrix order unit spaces over finite-dimensional C*-algebras and their K_0."""
from .amou import AElement, Algebra
from .errors import AmouError
from .k0 import K0Class, K0Element, K0Group, k0_of
from .linalg import DEFAULT_TOL, Tolerance
from .morphisms import MorphismSpec
from .projlattice import OrderProjection

__all__ = [
    "AElement",
    "Algebra",
    "AmouError",
    "DEFAULT_TOL",
    "K0Class",
    "K0Element",
    "K0Group",
    "MorphismSpec",
    "OrderProjection",
    "Tolerance",
    "k0_of",
]
