"""Exact homological algebra: sparse integer matrices, Smith forms and bigraded homology."""

from khcube.homalg.rings import Ring, INTEGERS, RATIONALS
from khcube.homalg.matrices import SparseIntMatrix
from khcube.homalg.snf import smith_normal_form, matrix_rank
from khcube.homalg.homology import BigradedHomology, HomologyGroup, homology, poincare_polynomial

__all__ = [
    "Ring",
    "INTEGERS",
    "RATIONALS",
    "SparseIntMatrix",
    "smith_normal_form",
    "matrix_rank",
    "BigradedHomology",
    "HomologyGroup",
    "homology",
    "poincare_polynomial",
]
