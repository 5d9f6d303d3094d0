"""
Chain complexes and chain maps over a field, and their mapping cones.

A complex is a list of generators with degrees (and optional internal
gradings such as q) plus one square differential matrix acting on column
vectors. When every nonzero entry raises the degree by one and keeps the
grading, homology is computed spot by spot; otherwise the complex is treated
as ungraded and handled as a single spot.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from sympy.polys.matrices import DomainMatrix

from khcube.core.errors import ContractError
from khcube.homalg import fields
from khcube.homalg.fields import Vector
from khcube.homalg.rings import RATIONALS, Ring

logger = logging.getLogger(__name__)

Spot = Optional[Tuple[int, Hashable]]


@dataclass(frozen=True)
class ChainComplex:
    """Generators with degrees and gradings; ``differential[target, source]``."""

    degrees: Tuple[int, ...]
    differential: DomainMatrix
    gradings: Tuple[Hashable, ...] = ()
    single_spot: bool = False  # treat every generator as one spot

    def __post_init__(self):
        n = len(self.degrees)
        if self.differential.shape != (n, n):
            raise ContractError(f"Differential shape {self.differential.shape} != ({n}, {n})")
        if self.gradings and len(self.gradings) != n:
            raise ContractError(f"{len(self.gradings)} gradings for {n} generators")

    @classmethod
    def from_entries(
        cls,
        degrees: Sequence[int],
        entries: Iterable[Tuple[int, int, int]],
        ring: Ring = RATIONALS,
        gradings: Sequence[Hashable] = (),
    ) -> "ChainComplex":
        """Build from ``(row, col, value)`` triplets of integers (or rationals)."""
        domain = fields.field_domain(ring)
        rows: Dict[int, Vector] = {}
        for r, c, v in entries:
            value = domain.convert(v)
            if value:
                rows.setdefault(r, {})[c] = rows.get(r, {}).get(c, domain.zero) + value
        n = len(degrees)
        return cls(tuple(degrees), DomainMatrix(rows, (n, n), domain), tuple(gradings))

    @classmethod
    def zero(cls, degrees: Sequence[int], ring: Ring = RATIONALS) -> "ChainComplex":
        n = len(degrees)
        return cls(tuple(degrees), fields.zeros(n, n, fields.field_domain(ring)))

    @property
    def dim(self) -> int:
        return len(self.degrees)

    @property
    def domain(self):
        return self.differential.domain

    def grading_of(self, i: int) -> Hashable:
        return self.gradings[i] if self.gradings else 0

    def spot_of(self, i: int) -> Spot:
        return (self.degrees[i], self.grading_of(i)) if self.graded else None

    @cached_property
    def graded(self) -> bool:
        """Every nonzero entry raises the degree by one and keeps the grading."""
        if self.single_spot:
            return False
        for r, row in enumerate(fields.to_rows(self.differential)):
            for c in row:
                if self.degrees[r] != self.degrees[c] + 1 or self.grading_of(r) != self.grading_of(c):
                    return False
        return True

    @cached_property
    def spots(self) -> Dict[Spot, List[int]]:
        result: Dict[Spot, List[int]] = {}
        for i in range(self.dim):
            result.setdefault(self.spot_of(i), []).append(i)
        return result

    def indices(self, spot: Spot) -> List[int]:
        return self.spots.get(spot, [])

    def shifted_spot(self, spot: Spot, step: int) -> Spot:
        if spot is None:
            return None
        return (spot[0] + step, spot[1])

    def out_block(self, spot: Spot) -> DomainMatrix:
        return fields.submatrix(
            self.differential, self.indices(self.shifted_spot(spot, 1)), self.indices(spot)
        )

    def in_block(self, spot: Spot) -> DomainMatrix:
        return fields.submatrix(
            self.differential, self.indices(spot), self.indices(self.shifted_spot(spot, -1))
        )

    def cycles(self, spot: Spot) -> List[Vector]:
        """Kernel of d at ``spot`` in local coordinates."""
        return fields.kernel(self.out_block(spot))

    def boundaries(self, spot: Spot) -> List[Vector]:
        """Image of d into ``spot`` in local coordinates."""
        return fields.image(self.in_block(spot))

    def squares_to_zero(self) -> bool:
        if self.dim == 0:
            return True
        return fields.is_zero(self.differential * self.differential)

    def homology_ranks(self) -> Dict[Spot, int]:
        ranks = {}
        for spot, members in sorted(self.spots.items(), key=lambda kv: repr(kv[0])):
            value = len(members) - fields.rank(self.out_block(spot)) - fields.rank(self.in_block(spot))
            if value:
                ranks[spot] = value
        return ranks

    def total_homology_rank(self) -> int:
        return sum(self.homology_ranks().values())

    def ungraded(self) -> "ChainComplex":
        """Same complex with all degrees and gradings forgotten."""
        return ChainComplex((0,) * self.dim, self.differential)

    def single_spot_view(self) -> "ChainComplex":
        return replace(self, single_spot=True)

    def negated(self) -> "ChainComplex":
        return replace(self, differential=-self.differential)


@dataclass(frozen=True)
class ChainMap:
    """A map ``target <- source`` raising degrees by ``shift``.

    ``anti`` selects the anti-chain condition d'f + f d = 0 instead of
    d'f = f d.
    """

    source: ChainComplex
    target: ChainComplex
    matrix: DomainMatrix
    shift: int = 0
    anti: bool = False

    def __post_init__(self):
        if self.matrix.shape != (self.target.dim, self.source.dim):
            raise ContractError(
                f"Map shape {self.matrix.shape} != ({self.target.dim}, {self.source.dim})"
            )

    def defect(self, anti: Optional[bool] = None) -> DomainMatrix:
        anti = self.anti if anti is None else anti
        left = self.target.differential * self.matrix
        right = self.matrix * self.source.differential
        return left + right if anti else left - right

    def is_valid(self, anti: Optional[bool] = None) -> bool:
        if 0 in self.matrix.shape:
            return True
        return fields.is_zero(self.defect(anti))

    def first_offending_generator(self) -> Optional[int]:
        """Source index of the first column where the (anti-)chain condition fails."""
        if self.is_valid():
            return None
        columns = fields.to_rows(self.defect().transpose())
        return next(i for i, col in enumerate(columns) if col)

    @cached_property
    def homogeneous(self) -> bool:
        if not (self.source.graded and self.target.graded):
            return False
        for r, row in enumerate(fields.to_rows(self.matrix)):
            for c in row:
                if self.target.degrees[r] != self.source.degrees[c] + self.shift:
                    return False
                if self.target.grading_of(r) != self.source.grading_of(c):
                    return False
        return True

    def negated(self) -> "ChainMap":
        return ChainMap(self.source, self.target, -self.matrix, self.shift, self.anti)

    def induced_rank(self) -> int:
        """
        Rank of the induced map on homology: dim(f(Z) + B') - dim B'.

        Raises:
            ContractError: if the map is neither a chain nor an anti-chain map
        """
        if not (self.is_valid(False) or self.is_valid(True)):
            raise ContractError("Map does not commute or anticommute with the differentials")
        if self.homogeneous:
            source, target = self.source, self.target
            pairs = [(s, (s[0] + self.shift, s[1])) for s in source.spots]
        else:
            source, target = self.source.single_spot_view(), self.target.single_spot_view()
            pairs = [(None, None)]
        domain = self.matrix.domain
        total = 0
        for s, t in pairs:
            src_idx, tgt_idx = source.indices(s), target.indices(t)
            if not src_idx or not tgt_idx:
                continue
            block = fields.submatrix(self.matrix, tgt_idx, src_idx)
            cycles = source.cycles(s)
            boundaries = target.boundaries(t)
            images = [v for v in fields.apply(block, cycles) if v]
            n = len(tgt_idx)
            total += fields.span_dim(images + boundaries, n, domain) - fields.span_dim(boundaries, n, domain)
        return total

    def is_quasi_isomorphism(self) -> bool:
        if not (self.is_valid(False) or self.is_valid(True)):
            return False
        h_source = self.source.total_homology_rank()
        h_target = self.target.total_homology_rank()
        return h_source == h_target == self.induced_rank()


def mapping_cone(f: ChainMap) -> ChainComplex:
    """
    Cone(f) = source ⊕ target with differential [[±d, 0], [f, d']].

    Source generators of degree n sit in degree n + shift - 1. A chain map
    uses -d on the source summand, an anti-chain map uses +d; either way the
    cone squares to zero.

    Raises:
        ContractError: naming the first source generator where the condition fails
    """
    offender = f.first_offending_generator()
    if offender is not None:
        kind = "anti-chain" if f.anti else "chain"
        raise ContractError(f"Not a {kind} map: fails at source generator {offender}")

    n_source, n_target = f.source.dim, f.target.dim
    sign = f.source.domain.one if f.anti else -f.source.domain.one
    rows: Dict[int, Vector] = {}
    for r, row in enumerate(fields.to_rows(f.source.differential)):
        for c, v in row.items():
            rows.setdefault(r, {})[c] = sign * v
    for r, row in enumerate(fields.to_rows(f.matrix)):
        for c, v in row.items():
            rows.setdefault(n_source + r, {})[c] = v
    for r, row in enumerate(fields.to_rows(f.target.differential)):
        for c, v in row.items():
            rows.setdefault(n_source + r, {})[n_source + c] = v

    degrees = tuple(deg + f.shift - 1 for deg in f.source.degrees) + f.target.degrees
    gradings: Tuple[Hashable, ...] = ()
    if f.source.gradings or f.target.gradings:
        gradings = tuple(f.source.grading_of(i) for i in range(n_source)) + tuple(
            f.target.grading_of(i) for i in range(n_target)
        )
    n = n_source + n_target
    cone = ChainComplex(degrees, DomainMatrix(rows, (n, n), f.source.domain), gradings)
    if not cone.squares_to_zero():
        raise ContractError("Mapping cone does not square to zero")
    return cone
