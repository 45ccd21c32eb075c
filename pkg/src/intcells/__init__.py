"""Exact integer-cell counting, coordinate convexity and coordinate volume ratios."""

from .errors import InputError, PreconditionError
from .lattice import IndexSet, IntegerPointSet
from .polytope import CoordSubspace, RationalPolytope

__version__ = "0.1.0"

__all__ = [
    "CoordSubspace",
    "IndexSet",
    "InputError",
    "IntegerPointSet",
    "PreconditionError",
    "RationalPolytope",
    "__version__",
]
