"""
Bigraded homology of a blockwise complex.

Each differential block d_{h,q} is reduced independently; with ``workers > 1``
the blocks are spread over a process pool.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Dict, List, Tuple

import pandas as pd

from khcube.core.errors import ContractError
from khcube.homalg.matrices import SparseIntMatrix
from khcube.homalg.rings import Ring
from khcube.homalg.snf import SnfResult, smith_normal_form

if TYPE_CHECKING:
    from khcube.core.khcomplex import BigradedComplex

logger = logging.getLogger(__name__)

Bidegree = Tuple[int, int]


@dataclass(frozen=True)
class HomologyGroup:
    """Z^free ⊕ (⊕ Z/t for t in torsion)."""

    free: int = 0
    torsion: Tuple[int, ...] = ()

    @property
    def is_zero(self) -> bool:
        return self.free == 0 and not self.torsion


@dataclass(frozen=True)
class BigradedHomology:
    """Homology groups keyed by (h, q); zero groups are omitted."""

    groups: Dict[Bidegree, HomologyGroup]
    ring: Ring
    variant: str = "unreduced"
    direction: str = "increasing"

    @property
    def total_rank(self) -> int:
        return sum(g.free for g in self.groups.values())

    def rank_at(self, h: int, q: int) -> int:
        group = self.groups.get((h, q))
        return group.free if group else 0

    def torsion_orders(self) -> List[int]:
        return sorted(t for g in self.groups.values() for t in g.torsion)

    def euler_characteristic(self) -> Dict[int, int]:
        """q -> Σ_h (-1)^h rank."""
        chi: Dict[int, int] = {}
        for (h, q), g in self.groups.items():
            chi[q] = chi.get(q, 0) + (-1) ** (h % 2) * g.free
        return {q: v for q, v in sorted(chi.items()) if v}

    def groups_as_records(self) -> List[dict]:
        return [
            {"h": h, "q": q, "free": g.free, "torsion": [str(t) for t in g.torsion]}
            for (h, q), g in sorted(self.groups.items())
        ]

    def to_frame(self) -> pd.DataFrame:
        records = [
            {"h": h, "q": q, "free": g.free, "torsion": " ".join(f"Z/{t}" for t in g.torsion)}
            for (h, q), g in sorted(self.groups.items())
        ]
        return pd.DataFrame(records, columns=["h", "q", "free", "torsion"])


def _reduce_block(task: Tuple[Bidegree, SparseIntMatrix, Ring]) -> Tuple[Bidegree, SnfResult]:
    """Worker: Smith form of one differential block."""
    key, matrix, ring = task
    return key, smith_normal_form(matrix, ring)


def reduce_blocks(
    differentials: Dict[Bidegree, SparseIntMatrix], ring: Ring, workers: int = 1
) -> Dict[Bidegree, SnfResult]:
    """Smith normal form of every nonzero block, optionally in parallel."""
    tasks = [(key, m, ring) for key, m in sorted(differentials.items()) if not m.is_zero]
    # largest blocks first so the pool stays busy
    tasks.sort(key=lambda t: -t[1].nnz)
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            results = dict(executor.map(_reduce_block, tasks))
    else:
        results = dict(_reduce_block(t) for t in tasks)
    logger.info(f"Reduced {len(tasks)} differential blocks over {ring} with {workers} worker(s)")
    return results


def homology(c: "BigradedComplex", workers: int = 1, check: bool = True) -> BigradedHomology:
    """
    Bigraded homology of a complex.

    free rank = dim block - rank d_out - rank d_in; torsion is read off the
    Smith form of the incoming differential and sits at its target block.

    Args:
        c: Complex with d_{h,q}: block (h,q) -> block (h+1,q)
        workers: Process-pool size for the block reductions
        check: Refuse to compute unless d∘d = 0

    Raises:
        ContractError: if d∘d != 0
    """
    from khcube.core.khcomplex import verify_d_squared

    if check and not verify_d_squared(c, workers=workers):
        raise ContractError("d∘d != 0; refusing to compute homology")

    reduced = reduce_blocks(c.differentials, c.ring, workers)
    groups: Dict[Bidegree, HomologyGroup] = {}
    for (h, q), basis in sorted(c.blocks.items()):
        outgoing = reduced.get((h, q))
        incoming = reduced.get((h - 1, q))
        free = len(basis) - (outgoing.rank if outgoing else 0) - (incoming.rank if incoming else 0)
        torsion = incoming.torsion if incoming and not c.ring.is_field else ()
        group = HomologyGroup(free, torsion)
        if not group.is_zero:
            groups[(h, q)] = group
    return BigradedHomology(groups, c.ring, c.variant, c.direction)


def _format_power(var: str, exponent: int) -> str:
    if exponent == 0:
        return ""
    if exponent == 1:
        return var
    return f"{var}^{exponent}"


def poincare_polynomial(h: BigradedHomology) -> str:
    """
    Σ rank · t^h q^q as text, ordered by t then q.

    Example:
        poincare_polynomial(homology(build_complex(parse_pd("U1"), ring=RATIONALS)))
        # 'q^-1 + q'

    Raises:
        ContractError: for integer coefficients
    """
    if not h.ring.is_field:
        raise ContractError("Poincaré polynomial needs field coefficients")
    terms = []
    for (hh, q), g in sorted(h.groups.items()):
        if not g.free:
            continue
        monomial = _format_power("t", hh) + _format_power("q", q)
        if not monomial:
            terms.append(str(g.free))
        elif g.free == 1:
            terms.append(monomial)
        else:
            terms.append(f"{g.free}{monomial}")
    return " + ".join(terms) if terms else "0"
