"""
Unknot certificate and rank bounds from reduced Khovanov homology.

A knot is the unknot exactly when its reduced rank over Q is 1. The reduced
rank is at least the sum of the absolute Alexander coefficients, and for
alternating knots it equals the determinant.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass
from typing import Dict, List, Optional, Tuple

from khcube.core.cube import DEFAULT_MAX_CROSSINGS
from khcube.core.diagram import PlanarDiagram, parse_pd
from khcube.core.errors import CapExceededError, ContractError
from khcube.core.khcomplex import build_complex, z4_collapse
from khcube.homalg.homology import homology
from khcube.homalg.rings import F2, RATIONALS, Ring
from khcube.invariants.determinant import determinant
from khcube.invariants.polynomials import DEFAULT_ORACLE_CAP, alexander_polynomial, jones_oracle

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class UnknotCertificate:
    is_unknot: bool
    rank: int

    def to_json(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class InvariantReport:
    """Numeric invariants of one diagram and the flags derived from them."""

    khr_rank_q: int
    determinant: int
    alexander: Optional[List[int]] = None   # knots only
    jones: Optional[str] = None             # None past the oracle cap
    alternating_hint: Optional[bool] = None

    @property
    def is_knot(self) -> bool:
        return self.alexander is not None

    @property
    def unknot_certified(self) -> Optional[bool]:
        return self.khr_rank_q == 1 if self.is_knot else None

    @property
    def alexander_bound_ok(self) -> Optional[bool]:
        """rank >= Σ|a_i|; None for links."""
        if self.alexander is None:
            return None
        return self.khr_rank_q >= sum(abs(a) for a in self.alexander)

    @property
    def det_equality_ok(self) -> Optional[bool]:
        """rank == det, checked only for diagrams asserted alternating."""
        if not self.alternating_hint:
            return None
        return self.khr_rank_q == self.determinant

    def to_json(self) -> dict:
        return {
            "khr_rank_Q": self.khr_rank_q,
            "determinant": self.determinant,
            "alexander": self.alexander,
            "jones": self.jones,
            "flags": {
                "unknot_certified": self.unknot_certified,
                "alexander_bound_ok": self.alexander_bound_ok,
                "det_equality_ok": self.det_equality_ok,
            },
        }


def reduced_rank(d: PlanarDiagram, max_crossings: int = DEFAULT_MAX_CROSSINGS) -> int:
    """Total rank of reduced Khovanov homology over Q."""
    c = build_complex(d, "reduced", ring=RATIONALS, max_crossings=max_crossings)
    return homology(c).total_rank


def f2_ranks(d: PlanarDiagram, max_crossings: int = DEFAULT_MAX_CROSSINGS) -> Tuple[int, int]:
    """Total F2 ranks ``(unreduced, reduced)``; the first is always twice the second."""
    unreduced = homology(build_complex(d, "unreduced", ring=F2, max_crossings=max_crossings)).total_rank
    reduced = homology(build_complex(d, "reduced", ring=F2, max_crossings=max_crossings)).total_rank
    logger.debug(f"F2 ranks: unreduced {unreduced}, reduced {reduced}")
    return unreduced, reduced


def unknot_z4_ranks(ring: Ring = RATIONALS) -> Dict[int, int]:
    """Z/4 ranks of the crossingless unknot, expected ``{0: 1, 2: 1}``."""
    d = parse_pd("U1")
    table = z4_collapse(homology(build_complex(d, ring=ring)), d)
    if not table.agree:
        logger.warning(f"Z/4 binnings of the unknot disagree: {table.to_json()}")
        return {}
    return table.ranks


def unknot_certificate(d: PlanarDiagram, max_crossings: int = DEFAULT_MAX_CROSSINGS) -> UnknotCertificate:
    """
    Decide whether a knot diagram represents the unknot.

    Raises:
        ContractError: for links

    Example:
        unknot_certificate(parse_pd("PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]"))
        # UnknotCertificate(is_unknot=False, rank=3)
    """
    if d.n_components != 1:
        raise ContractError(f"Unknot detection needs a knot, got {d.n_components} components")
    rank = reduced_rank(d, max_crossings)
    return UnknotCertificate(rank == 1, rank)


def check_bounds(
    d: PlanarDiagram,
    alternating_hint: Optional[bool] = None,
    max_crossings: int = DEFAULT_MAX_CROSSINGS,
    oracle_cap: int = DEFAULT_ORACLE_CAP,
) -> InvariantReport:
    """
    Compute the reduced rank, determinant, Alexander and Jones polynomials of ``d``.

    Args:
        d: Valid diagram; the Alexander bound is only evaluated for knots
        alternating_hint: Caller's assertion that the diagram is alternating
        max_crossings: Cube size cap
        oracle_cap: Crossing cap for the Jones state sum

    Returns:
        InvariantReport whose flags follow from its numbers
    """
    rank = reduced_rank(d, max_crossings)
    alexander = alexander_polynomial(d) if d.n_components == 1 else None
    try:
        jones: Optional[str] = str(jones_oracle(d, oracle_cap))
    except CapExceededError as e:
        logger.warning(f"Skipping Jones polynomial: {e}")
        jones = None
    report = InvariantReport(
        khr_rank_q=rank,
        determinant=determinant(d),
        alexander=alexander,
        jones=jones,
        alternating_hint=alternating_hint,
    )
    logger.info(
        f"Invariants: rank {rank}, det {report.determinant}, alexander {alexander}, "
        f"bound ok {report.alexander_bound_ok}"
    )
    return report
