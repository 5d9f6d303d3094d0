"""
Linear algebra over Q and F_p with sparse sympy DomainMatrix objects.

Subspaces are lists of row vectors, each a ``{column: value}`` dict in the
field's domain. All elimination goes through ``DomainMatrix.rref``.
"""

from __future__ import annotations

from typing import Any, Dict, List, Sequence, Tuple

from sympy.polys.matrices import DomainMatrix

from khcube.core.errors import ContractError
from khcube.homalg.rings import Ring

Vector = Dict[int, Any]


def field_domain(ring: Ring):
    if not ring.is_field:
        raise ContractError(f"Field coefficients required, got {ring}")
    return ring.domain()


def from_rows(rows: Sequence[Vector], n_cols: int, domain) -> DomainMatrix:
    """Matrix whose rows are the given sparse vectors."""
    data = {i: dict(row) for i, row in enumerate(rows) if row}
    return DomainMatrix(data, (len(rows), n_cols), domain)


def to_rows(m: DomainMatrix) -> List[Vector]:
    rep = m.to_sparse().rep
    return [dict(rep.get(i, {})) for i in range(m.shape[0])]


def zeros(n_rows: int, n_cols: int, domain) -> DomainMatrix:
    return DomainMatrix({}, (n_rows, n_cols), domain)


def submatrix(m: DomainMatrix, rows: Sequence[int], cols: Sequence[int]) -> DomainMatrix:
    if not rows or not cols:
        return zeros(len(rows), len(cols), m.domain)
    return m.extract(list(rows), list(cols))


def rref(m: DomainMatrix) -> Tuple[List[Vector], Tuple[int, ...]]:
    """Reduced row echelon rows (leading ones) and pivot columns."""
    if 0 in m.shape:
        return [], ()
    reduced, pivots = m.rref()
    return to_rows(reduced)[: len(pivots)], tuple(pivots)


def rank(m: DomainMatrix) -> int:
    return len(rref(m)[1])


def is_zero(m: DomainMatrix) -> bool:
    return 0 in m.shape or m.is_zero_matrix


def kernel(m: DomainMatrix) -> List[Vector]:
    """Basis of {x : m x = 0} as row vectors."""
    n_cols = m.shape[1]
    one = m.domain.one
    if m.shape[0] == 0:
        return [{j: one} for j in range(n_cols)]
    rows, pivots = rref(m)
    pivot_set = set(pivots)
    basis = []
    for free in range(n_cols):
        if free in pivot_set:
            continue
        vector: Vector = {free: one}
        for row, pivot in zip(rows, pivots):
            value = row.get(free)
            if value:
                vector[pivot] = -value
        basis.append(vector)
    return basis


def image(m: DomainMatrix) -> List[Vector]:
    """Columns of ``m`` as row vectors (spanning the image)."""
    return [row for row in to_rows(m.transpose()) if row]


def apply(m: DomainMatrix, vectors: Sequence[Vector]) -> List[Vector]:
    """Images ``m v`` of row vectors ``v``."""
    if not vectors:
        return []
    stacked = from_rows(vectors, m.shape[1], m.domain)
    return to_rows((m * stacked.transpose()).transpose())


def span_basis(vectors: Sequence[Vector], n_cols: int, domain) -> List[Vector]:
    """Independent rows spanning the same space."""
    if not vectors:
        return []
    return rref(from_rows(vectors, n_cols, domain))[0]


def span_dim(vectors: Sequence[Vector], n_cols: int, domain) -> int:
    if not vectors:
        return 0
    return rank(from_rows(vectors, n_cols, domain))


def extend_basis(
    base: Sequence[Vector], candidates: Sequence[Vector], n_cols: int, domain
) -> List[int]:
    """Indices of candidates that extend span(base) to span(base + candidates)."""
    if not candidates:
        return []
    columns = from_rows(list(base) + list(candidates), n_cols, domain).transpose()
    _, pivots = rref(columns)
    return [p - len(base) for p in pivots if p >= len(base)]


def coordinates(
    basis: Sequence[Vector], targets: Sequence[Vector], n_cols: int, domain
) -> List[Vector]:
    """Coefficients expressing each target in an independent basis.

    Raises:
        ContractError: if a target lies outside the span
    """
    k = len(basis)
    if not targets:
        return []
    columns = from_rows(list(basis) + list(targets), n_cols, domain).transpose()
    rows, pivots = rref(columns)
    if tuple(pivots) != tuple(range(k)):
        raise ContractError("Vector not in the span of the given basis")
    result = []
    for t in range(len(targets)):
        result.append({i: rows[i][k + t] for i in range(k) if rows[i].get(k + t)})
    return result
