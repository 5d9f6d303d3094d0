"""
Checker for the triangle-detection lemma on small 3-periodic data.

Given complexes C_0, C_1, C_2 with anti-chain maps f_i: C_i -> C_{i-1} and
homotopies j_i: C_i -> C_{i-2} (indices mod 3), the hypotheses are

    (a) d f_i + f_i d = 0
    (b) d j_i + j_i d + f_{i-1} f_i = 0
    (c) j_{i-1} f_i + f_{i-2} j_i is a quasi-isomorphism C_i -> C_i

and when they all hold, the induced sequence on homology is exact and
s -> (f_i s, j_i s) is a quasi-isomorphism C_i -> Cone(f_{i-1}).
Everything is computed on the ungraded complexes.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from sympy.polys.matrices import DomainMatrix

from khcube.core.errors import CapExceededError, ContractError
from khcube.homalg import fields
from khcube.homalg.fields import Vector
from khcube.spectral.complexes import ChainComplex, ChainMap, mapping_cone

logger = logging.getLogger(__name__)

DEFAULT_MAX_DIM = 512

MaybeMatrix = Optional[DomainMatrix]


@dataclass(frozen=True)
class TriangleData:
    """
    Three complexes with maps f[i]: C_i -> C_{i-1} and j[i]: C_i -> C_{i-2}.

    Missing maps (None) are zero.
    """

    complexes: Tuple[ChainComplex, ChainComplex, ChainComplex]
    f: Tuple[MaybeMatrix, MaybeMatrix, MaybeMatrix] = (None, None, None)
    j: Tuple[MaybeMatrix, MaybeMatrix, MaybeMatrix] = (None, None, None)

    def __post_init__(self):
        if len(self.complexes) != 3 or len(self.f) != 3 or len(self.j) != 3:
            raise ContractError("TriangleData needs three complexes, three f and three j slots")
        domains = {c.domain for c in self.complexes}
        if len(domains) != 1:
            raise ContractError(f"Complexes over different fields: {sorted(map(str, domains))}")
        for i in range(3):
            for name, maps, step in (("f", self.f, 1), ("j", self.j, 2)):
                m = maps[i]
                expected = (self.complexes[(i - step) % 3].dim, self.complexes[i].dim)
                if m is not None and m.shape != expected:
                    raise ContractError(f"{name}[{i}] has shape {m.shape}, expected {expected}")

    @classmethod
    def from_pair(
        cls,
        c2: ChainComplex,
        c1: ChainComplex,
        c0: ChainComplex,
        f2: MaybeMatrix,
        f1: MaybeMatrix,
        j2: MaybeMatrix = None,
    ) -> "TriangleData":
        """Non-periodic form: C_2 -f2-> C_1 -f1-> C_0 with homotopy j2: C_2 -> C_0."""
        return cls((c0, c1, c2), f=(None, f1, f2), j=(None, None, j2))

    @property
    def domain(self):
        return self.complexes[0].domain

    @property
    def total_dim(self) -> int:
        return sum(c.dim for c in self.complexes)

    def complex(self, i: int) -> ChainComplex:
        return self.complexes[i % 3].ungraded()

    def f_map(self, i: int) -> DomainMatrix:
        m = self.f[i % 3]
        if m is None:
            return fields.zeros(self.complexes[(i - 1) % 3].dim, self.complexes[i % 3].dim, self.domain)
        return m

    def j_map(self, i: int) -> DomainMatrix:
        m = self.j[i % 3]
        if m is None:
            return fields.zeros(self.complexes[(i - 2) % 3].dim, self.complexes[i % 3].dim, self.domain)
        return m


@dataclass(frozen=True)
class LemmaVerdict:
    """Per-index outcome of every hypothesis and (when reached) every conclusion."""

    anti_chain: Dict[int, bool]
    homotopy: Dict[int, bool]
    quasi_iso: Dict[int, bool]
    exact: Dict[int, bool] = field(default_factory=dict)
    cone_quasi_iso: Dict[int, bool] = field(default_factory=dict)

    @property
    def hypotheses_hold(self) -> bool:
        return all(self.anti_chain.values()) and all(self.homotopy.values()) and all(self.quasi_iso.values())

    @property
    def conclusions_hold(self) -> Optional[bool]:
        """None when the hypotheses failed and the conclusions were not checked."""
        if not self.hypotheses_hold:
            return None
        return all(self.exact.values()) and all(self.cone_quasi_iso.values())

    @property
    def failed(self) -> Tuple[str, ...]:
        names = []
        for label, results in (
            ("a", self.anti_chain),
            ("b", self.homotopy),
            ("c", self.quasi_iso),
            ("exact", self.exact),
            ("cone", self.cone_quasi_iso),
        ):
            names.extend(f"{label}[{i}]" for i, ok in sorted(results.items()) if not ok)
        return tuple(names)

    def to_json(self) -> dict:
        def _keyed(results: Dict[int, bool]) -> dict:
            return {str(i): ok for i, ok in sorted(results.items())}

        return {
            "anti_chain": _keyed(self.anti_chain),
            "homotopy": _keyed(self.homotopy),
            "quasi_iso": _keyed(self.quasi_iso),
            "exact": _keyed(self.exact),
            "cone_quasi_iso": _keyed(self.cone_quasi_iso),
            "hypotheses_hold": self.hypotheses_hold,
            "conclusions_hold": self.conclusions_hold,
        }


def _product(a: DomainMatrix, b: DomainMatrix) -> DomainMatrix:
    if 0 in a.shape or 0 in b.shape:
        return fields.zeros(a.shape[0], b.shape[1], a.domain)
    return a * b


def _vanishes(*terms: DomainMatrix) -> bool:
    if 0 in terms[0].shape:
        return True
    total = terms[0]
    for term in terms[1:]:
        total = total + term
    return fields.is_zero(total)


def _stack(top: DomainMatrix, bottom: DomainMatrix) -> DomainMatrix:
    """[[top], [bottom]] for matrices with the same column count."""
    rows: Dict[int, Vector] = {}
    for i, row in enumerate(fields.to_rows(top)):
        if row:
            rows[i] = row
    offset = top.shape[0]
    for i, row in enumerate(fields.to_rows(bottom)):
        if row:
            rows[offset + i] = row
    return DomainMatrix(rows, (top.shape[0] + bottom.shape[0], top.shape[1]), top.domain)


def os_lemma_check(
    t: TriangleData, index_bound: int = 3, max_dim: int = DEFAULT_MAX_DIM
) -> LemmaVerdict:
    """
    Check the lemma's hypotheses and, if they hold, its conclusions.

    Args:
        t: Triangle data over a field
        index_bound: Check indices 0 .. index_bound-1 (read mod 3)
        max_dim: Cap on the total dimension of the three complexes

    Returns:
        LemmaVerdict with per-index results

    Raises:
        CapExceededError: if the complexes are larger than ``max_dim`` in total

    Example:
        verdict = os_lemma_check(read_triangle_json(bundled_path("triangle_unit.json")))
        verdict.hypotheses_hold  # True
    """
    if t.total_dim > max_dim:
        raise CapExceededError("triangle dimension", t.total_dim, "max_dim", max_dim)
    indices = range(index_bound)

    anti_chain: Dict[int, bool] = {}
    homotopy: Dict[int, bool] = {}
    quasi_iso: Dict[int, bool] = {}
    for i in indices:
        source, previous, before = t.complex(i), t.complex(i - 1), t.complex(i - 2)
        f_i, f_prev, f_before = t.f_map(i), t.f_map(i - 1), t.f_map(i - 2)
        j_i, j_prev = t.j_map(i), t.j_map(i - 1)

        anti_chain[i] = ChainMap(source, previous, f_i, shift=1, anti=True).is_valid()
        homotopy[i] = _vanishes(
            _product(before.differential, j_i),
            _product(j_i, source.differential),
            _product(f_prev, f_i),
        )
        g = _product(j_prev, f_i)
        if source.dim:
            g = g + _product(f_before, j_i)
        quasi_iso[i] = ChainMap(source, source, g).is_quasi_isomorphism()

    verdict = LemmaVerdict(anti_chain, homotopy, quasi_iso)
    if not verdict.hypotheses_hold:
        logger.info(f"Lemma hypotheses failed: {', '.join(verdict.failed)}")
        return verdict

    exact: Dict[int, bool] = {}
    cone_quasi_iso: Dict[int, bool] = {}
    for i in indices:
        source, previous, before = t.complex(i), t.complex(i - 1), t.complex(i - 2)
        rank_in = ChainMap(source, previous, t.f_map(i), anti=True).induced_rank()
        rank_out = ChainMap(previous, before, t.f_map(i - 1), anti=True).induced_rank()
        exact[i] = previous.total_homology_rank() == rank_in + rank_out

        f_prev = ChainMap(previous, before, t.f_map(i - 1), anti=True)
        cone = mapping_cone(f_prev)
        phi = _stack(t.f_map(i), t.j_map(i))
        cone_quasi_iso[i] = ChainMap(source, cone, phi, anti=True).is_quasi_isomorphism()

    verdict = LemmaVerdict(anti_chain, homotopy, quasi_iso, exact, cone_quasi_iso)
    logger.info(
        f"Lemma check over {index_bound} indices: hypotheses hold, "
        f"conclusions {'hold' if verdict.conclusions_hold else 'fail: ' + ', '.join(verdict.failed)}"
    )
    return verdict
