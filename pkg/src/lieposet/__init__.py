"""Exact-arithmetic toolkit for type-A Lie poset algebras.

Submodules: poset (order combinatorics), algebra (structure constants, the
skew form, index), spectral (principal elements and spectra), topology
(order-complex homology), toral (catalog pairs, gluing rules, sequences),
scan (exhaustive small-poset searches), cli (command-line front end).
"""

from .poset import Poset
from .algebra import Functional, LiePosetAlgebra, build_algebra

__all__ = ["Poset", "Functional", "LiePosetAlgebra", "build_algebra"]
__version__ = "0.1.0"
