"""
Spectral sequence pages of a filtered complex over a field.

The filtration is decreasing, F^p = span of generators of weight >= p, and the
differential never lowers weight. Page r at (p, n, g) is the subquotient

    E_r^p = Z_r^p / (Z_{r-1}^{p+1} + d Z_{r-1}^{p-r+1}),   Z_r^p = F^p ∩ d^{-1} F^{p+r}

computed inside each (degree, grading) block. The differential d_r is written
in a complement basis of the denominator chosen from Z_r^p itself.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple

from sympy.polys.matrices import DomainMatrix

from khcube.core.errors import ContractError
from khcube.homalg import fields
from khcube.homalg.fields import Vector
from khcube.spectral.complexes import ChainComplex

logger = logging.getLogger(__name__)

PageSpot = Tuple[int, int, object]  # (weight p, degree n, grading g)


@dataclass(frozen=True)
class FilteredComplex:
    """A complex whose differential raises degree by one and never lowers weight."""

    complex: ChainComplex
    weights: Tuple[int, ...]

    def __post_init__(self):
        c = self.complex
        if len(self.weights) != c.dim:
            raise ContractError(f"{len(self.weights)} weights for {c.dim} generators")
        if not c.squares_to_zero():
            raise ContractError("Filtered complex must satisfy d∘d = 0")
        for r, row in enumerate(fields.to_rows(c.differential)):
            for col in row:
                if c.degrees[r] != c.degrees[col] + 1:
                    raise ContractError(f"Entry ({r}, {col}) does not raise degree by one")
                if self.weights[r] < self.weights[col]:
                    raise ContractError(f"Entry ({r}, {col}) lowers filtration weight")
        if not c.graded:
            # d respects degrees but not the internal grading: forget it
            object.__setattr__(self, "complex", replace(c, gradings=()))

    @property
    def span(self) -> int:
        if not self.weights:
            return 0
        return max(self.weights) - min(self.weights)

    def group(self, n: int, g) -> List[int]:
        return self.complex.indices((n, g))


@dataclass(frozen=True)
class SpectralPage:
    """Ranks of E_r per (p, n, g) and the matrices of d_r: E_r^{p,n,g} -> E_r^{p+r,n+1,g}."""

    r: int
    ranks: Dict[PageSpot, int]
    differentials: Dict[PageSpot, DomainMatrix] = field(default_factory=dict)
    converged: bool = False

    @property
    def total_rank(self) -> int:
        return sum(self.ranks.values())

    def ranks_by_weight(self) -> Dict[int, int]:
        result: Dict[int, int] = {}
        for (p, _, _), value in self.ranks.items():
            result[p] = result.get(p, 0) + value
        return dict(sorted(result.items()))

    def differential_is_zero(self) -> bool:
        return all(fields.is_zero(m) for m in self.differentials.values())


class _PageBuilder:
    """Cached Z_r^p subspaces of one filtered complex."""

    def __init__(self, fc: FilteredComplex):
        self.fc = fc
        self.c = fc.complex
        self.domain = self.c.domain
        self._cycles: Dict[Tuple[int, int, object, int], List[Vector]] = {}

    def _weights(self, members: List[int]) -> List[int]:
        return [self.fc.weights[i] for i in members]

    def push(self, n: int, g, vectors: List[Vector]) -> List[Vector]:
        """d applied to local vectors of block (n, g), in local coordinates of (n+1, g)."""
        if not vectors:
            return []
        block = fields.submatrix(self.c.differential, self.fc.group(n + 1, g), self.fc.group(n, g))
        return [v for v in fields.apply(block, vectors) if v]

    def cycles(self, p: int, n: int, g, r: int) -> List[Vector]:
        """Basis of Z_r^p in block (n, g), local coordinates."""
        key = (p, n, g, r)
        if key in self._cycles:
            return self._cycles[key]
        members = self.fc.group(n, g)
        cols = [k for k, w in enumerate(self._weights(members)) if w >= p]
        targets = self.fc.group(n + 1, g)
        rows = [targets[k] for k, w in enumerate(self._weights(targets)) if w < p + r]
        one = self.domain.one
        if not cols:
            basis: List[Vector] = []
        elif not rows:
            basis = [{k: one} for k in cols]
        else:
            restricted = fields.submatrix(self.c.differential, rows, [members[k] for k in cols])
            basis = [{cols[j]: v for j, v in vec.items()} for vec in fields.kernel(restricted)]
        self._cycles[key] = basis
        return basis

    def subquotient(self, p: int, n: int, g, r: int) -> Tuple[List[Vector], List[Vector]]:
        """(denominator basis, representatives) for E_r^p in block (n, g)."""
        size = len(self.fc.group(n, g))
        numerator = self.cycles(p, n, g, r)
        denominator = list(self.cycles(p + 1, n, g, r - 1))
        denominator += self.push(n - 1, g, self.cycles(p - r + 1, n - 1, g, r - 1))
        denominator = fields.span_basis(denominator, size, self.domain)
        chosen = fields.extend_basis(denominator, numerator, size, self.domain)
        return denominator, [numerator[i] for i in chosen]


def _page(builder: _PageBuilder, r: int, span: int) -> SpectralPage:
    c = builder.c
    spots: Dict[PageSpot, Tuple[List[Vector], List[Vector]]] = {}
    for (n, g), members in sorted(c.spots.items(), key=lambda kv: repr(kv[0])):
        for p in sorted(set(builder.fc.weights[i] for i in members)):
            denominator, reps = builder.subquotient(p, n, g, r)
            if reps:
                spots[(p, n, g)] = (denominator, reps)

    differentials: Dict[PageSpot, DomainMatrix] = {}
    for (p, n, g), (_, reps) in spots.items():
        target = spots.get((p + r, n + 1, g))
        if target is None:
            continue
        t_denominator, t_reps = target
        size = len(builder.fc.group(n + 1, g))
        images = fields.apply(
            fields.submatrix(c.differential, builder.fc.group(n + 1, g), builder.fc.group(n, g)),
            reps,
        )
        coords = fields.coordinates(t_denominator + t_reps, images, size, builder.domain)
        offset = len(t_denominator)
        rows: Dict[int, Vector] = {}
        for j, vec in enumerate(coords):
            for i, value in vec.items():
                if i >= offset:
                    rows.setdefault(i - offset, {})[j] = value
        differentials[(p, n, g)] = DomainMatrix(rows, (len(t_reps), len(reps)), builder.domain)

    page = SpectralPage(
        r=r,
        ranks={spot: len(reps) for spot, (_, reps) in spots.items()},
        differentials=differentials,
    )
    converged = page.differential_is_zero() and r + 1 > span
    return replace(page, converged=converged)


def spectral_pages(fc: FilteredComplex, r_max: int = 2) -> List[SpectralPage]:
    """
    Pages E_1 .. E_{r_max} of the filtration spectral sequence.

    Args:
        fc: Filtered complex over Q or F_p
        r_max: Last page to compute

    Returns:
        One SpectralPage per r; the last one is flagged converged when its
        differential vanishes and no longer differential fits in the weight span

    Example:
        pages = spectral_pages(khovanov_filtered_complex(c), r_max=2)
        pages[-1].total_rank  # equals the homology rank for Khovanov complexes
    """
    if r_max < 1:
        raise ValueError(f"r_max must be >= 1, got {r_max}")
    builder = _PageBuilder(fc)
    pages = []
    for r in range(1, r_max + 1):
        page = _page(builder, r, fc.span)
        logger.debug(f"E_{r}: total rank {page.total_rank}")
        pages.append(page)
    logger.info(
        f"Computed {r_max} page(s) of a {fc.complex.dim}-generator filtered complex; "
        f"E_{r_max} rank {pages[-1].total_rank}"
    )
    return pages


def limit_rank(fc: FilteredComplex) -> Optional[int]:
    """Total rank of E_∞, read off the first page past the weight span."""
    pages = spectral_pages(fc, r_max=fc.span + 1)
    return pages[-1].total_rank if pages[-1].converged else None
