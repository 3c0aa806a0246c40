"""Exact computational toolkit for planar semialgebraic sets.

Modules
-------
arith
    Rational and polynomial arithmetic, real root isolation, resultants,
    sign evaluation at real algebraic points.
cad2d
    Sign-invariant cylindrical decomposition of the plane for a boolean
    combination of polynomial constraints, with certified cell adjacency.
topology
    Finite cell complexes with a membership flag: local dimension, brick
    decomposition, locally closed strata, spectral fingerprints and their
    comparison.
paths
    Truncated fractional power series, formal path germs, evaluation of
    semialgebraic function trees along paths, and the associated
    ideal-membership and positivity certificates.
cli
    Command line front end (``specta``).
"""

from ._expr import parse_formula
from .arith import (
    AlgebraicNumber,
    Polynomial,
    discriminant,
    isolate_real_roots,
    real_compare,
    resultant,
    sign_at,
)

__all__ = [
    "AlgebraicNumber",
    "Polynomial",
    "discriminant",
    "isolate_real_roots",
    "parse_formula",
    "real_compare",
    "resultant",
    "sign_at",
]

__version__ = "0.1.0"
