"""Kazhdan-Lusztig-Stanley polynomials, two ways.

This package computes KLS-polynomials of ranked posets (Kazhdan-Lusztig
polynomials of Coxeter groups, g-polynomials of polytopes, Kazhdan-Lusztig
and Z-polynomials of matroids) by two independent routes:

* the kernel recursion on the poset, and
* sheaves of graded modules on the poset, built stalk-by-stalk through
  minimal free covers of boundary modules,

and cross-validates the two.  All arithmetic is exact (rationals or prime
fields); there is no floating point anywhere.

Grading convention used throughout: a class in cohomological degree 2i is
stored in half-degree i, so Poincare polynomials of graded modules line up
with KLS-polynomials in the variable t with no rescaling.
"""

from klsc.field import QQ, GF
from klsc.poly import UniPoly
from klsc.poset import RankedPoset, UpperSet
from klsc.kls import (
    Kernel,
    KLSTable,
    eulerian_kernel,
    matroid_kernel,
    solve_kls,
    verify_kernel,
    z_polynomial,
)

__all__ = [
    "QQ",
    "GF",
    "UniPoly",
    "RankedPoset",
    "UpperSet",
    "Kernel",
    "KLSTable",
    "eulerian_kernel",
    "matroid_kernel",
    "solve_kls",
    "verify_kernel",
    "z_polynomial",
]

__version__ = "0.1.0"
