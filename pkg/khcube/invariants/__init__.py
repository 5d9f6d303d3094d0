"""Classical invariants and the rank bounds checked against them."""

from khcube.invariants.polynomials import jones_oracle, alexander_polynomial, jones_determinant
from khcube.invariants.determinant import determinant, goeritz_matrix
from khcube.invariants.reports import InvariantReport, unknot_certificate, check_bounds

__all__ = [
    "jones_oracle",
    "alexander_polynomial",
    "jones_determinant",
    "determinant",
    "goeritz_matrix",
    "InvariantReport",
    "unknot_certificate",
    "check_bounds",
]
