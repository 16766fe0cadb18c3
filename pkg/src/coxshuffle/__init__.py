"""Riffle-shuffle measures on finite Coxeter groups.

Three constructions of a family of signed measures on a finite Coxeter
group W, with exact arithmetic throughout:

* ``descent.measure_M``: from idempotents of the descent algebra;
* ``arrangement.measure_H``: from face weights of the reflection arrangement;
* ``cellini.measure_xk``: from cyclic descents and the coroot lattice.

``shuffles`` simulates the matching physical card shuffles.
"""
from .coxeter import CoxeterGroup, UnsupportedGroupError, build_group, parse_type
from .group_algebra import GroupAlgebraElement, SignedMeasure, SymbolicMeasure, convolve, total_variation

__version__ = "0.1.0"

__all__ = [
    "CoxeterGroup",
    "UnsupportedGroupError",
    "build_group",
    "parse_type",
    "GroupAlgebraElement",
    "SignedMeasure",
    "SymbolicMeasure",
    "convolve",
    "total_variation",
]
