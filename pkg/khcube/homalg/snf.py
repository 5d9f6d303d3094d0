"""
Smith normal form of sparse integer matrices.

Elimination runs in two phases. Unit pivots (±1 over Z, any nonzero entry
mod p) are taken first, from the sparsest column and then the shortest row, so
fill-in stays low. Whatever remains is reduced by repeated division with the
smallest entry as pivot until each pivot is isolated. The diagonal is then put
in divisibility-chain form through its primary decomposition.
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Set, Tuple

from sympy import ZZ, factorint
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors

from khcube.core.errors import ContractError
from khcube.homalg.matrices import SparseIntMatrix
from khcube.homalg.rings import INTEGERS, Ring

logger = logging.getLogger(__name__)

VERIFY_LIMIT = 50


@dataclass(frozen=True)
class SnfResult:
    """Nonzero invariant factors d1 | d2 | ... of a matrix."""

    diagonal: Tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    @property
    def torsion(self) -> Tuple[int, ...]:
        """Prime-power orders of the cokernel's torsion."""
        return primary_decomposition(self.diagonal)


def primary_decomposition(values: Iterable[int]) -> Tuple[int, ...]:
    """Sorted prime powers whose cyclic groups sum to ⊕ Z/|v|."""
    powers = []
    for value in values:
        value = abs(int(value))
        if value > 1:
            powers.extend(p ** e for p, e in factorint(value).items())
    return tuple(sorted(powers))


def invariant_chain(values: Iterable[int]) -> Tuple[int, ...]:
    """Divisibility chain for the nonzero entries of a diagonal matrix."""
    nonzero = [abs(int(v)) for v in values if v]
    exponents: Dict[int, List[int]] = {}
    for value in nonzero:
        for p, e in factorint(value).items():
            exponents.setdefault(p, []).append(e)
    width = max((len(es) for es in exponents.values()), default=0)
    factors = [1] * width
    for p, es in exponents.items():
        for offset, e in enumerate(sorted(es, reverse=True)):
            factors[width - 1 - offset] *= p ** e
    return tuple([1] * (len(nonzero) - width) + factors)


class _Elimination:
    """Sparse row-reduction state: rows as dicts, columns as row-index sets."""

    def __init__(self, matrix: SparseIntMatrix, modulus: int = 0):
        self.modulus = modulus
        self.rows: Dict[int, Dict[int, int]] = {}
        self.cols: Dict[int, Set[int]] = {}
        for r, c, v in matrix.entries:
            if modulus:
                v %= modulus
                if not v:
                    continue
            self.rows.setdefault(r, {})[c] = v
            self.cols.setdefault(c, set()).add(r)
        self.heap: List[Tuple[int, int]] = [(len(rs), c) for c, rs in self.cols.items()]
        heapq.heapify(self.heap)
        self.diagonal: List[int] = []

    def _is_unit(self, value: int) -> bool:
        return True if self.modulus else abs(value) == 1

    def _set(self, r: int, c: int, value: int) -> None:
        if self.modulus:
            value %= self.modulus
        if value:
            self.rows[r][c] = value
            self.cols.setdefault(c, set()).add(r)
        else:
            self.rows[r].pop(c, None)
            self.cols.get(c, set()).discard(r)
        heapq.heappush(self.heap, (len(self.cols.get(c, ())), c))

    def _add_row(self, target: int, source: int, factor: int) -> None:
        """row[target] -= factor * row[source]"""
        row = self.rows[target]
        for c, v in list(self.rows[source].items()):
            self._set(target, c, row.get(c, 0) - factor * v)

    def _remove(self, r: int, c: int) -> None:
        for col in self.rows.pop(r):
            self.cols[col].discard(r)
            heapq.heappush(self.heap, (len(self.cols[col]), col))
        for row in self.cols.pop(c, set()):
            self.rows[row].pop(c, None)

    def _eliminate_unit(self, r: int, c: int) -> None:
        pivot = self.rows[r][c]
        inverse = pow(pivot, -1, self.modulus) if self.modulus else pivot
        for i in sorted(self.cols[c] - {r}):
            self._add_row(i, r, self.rows[i][c] * inverse)
        self.diagonal.append(1)
        self._remove(r, c)

    def unit_phase(self) -> None:
        while self.heap:
            count, c = heapq.heappop(self.heap)
            rows = self.cols.get(c)
            if rows is None or count != len(rows):
                continue
            if not rows:
                del self.cols[c]
                continue
            units = [r for r in rows if self._is_unit(self.rows[r][c])]
            if not units:
                continue
            r = min(units, key=lambda i: (len(self.rows[i]), i))
            self._eliminate_unit(r, c)

    def _smallest(self, cells: Iterable[Tuple[int, int]]) -> Tuple[int, int]:
        return min(cells, key=lambda rc: (abs(self.rows[rc[0]][rc[1]]), len(self.rows[rc[0]]), rc))

    def division_phase(self) -> None:
        for r in [r for r, row in self.rows.items() if not row]:
            del self.rows[r]
        while self.rows:
            r, c = self._smallest((i, j) for i, row in self.rows.items() for j in row)
            while True:
                pivot = self.rows[r][c]
                for i in sorted(self.cols[c] - {r}):
                    self._add_row(i, r, self.rows[i][c] // pivot)
                if len(self.cols[c]) > 1:
                    r, c = self._smallest((i, c) for i in self.cols[c])
                    continue
                row = self.rows[r]
                for j in sorted(set(row) - {c}):
                    self._set(r, j, row[j] - (row[j] // pivot) * pivot)
                if len(row) > 1:
                    r, c = self._smallest((r, j) for j in row)
                    continue
                break
            self.diagonal.append(abs(pivot))
            self._remove(r, c)
            for i in [i for i, row in self.rows.items() if not row]:
                del self.rows[i]


def _eliminate(matrix: SparseIntMatrix, modulus: int = 0) -> List[int]:
    state = _Elimination(matrix, modulus)
    state.unit_phase()
    leftover = sum(len(row) for row in state.rows.values())
    if leftover:
        if modulus:
            raise ContractError("Mod-p elimination left entries behind")
        logger.debug(f"Division phase on {leftover} remaining entries")
        state.division_phase()
    return state.diagonal


def smith_normal_form(
    m: SparseIntMatrix, ring: Ring = INTEGERS, verify: bool = False
) -> SnfResult:
    """
    Smith normal form diagonal of ``m``.

    Over a field the diagonal is all ones and only its length (the rank)
    carries information.

    Args:
        m: Matrix to diagonalize
        ring: Z, Q or F_p
        verify: Recompute with sympy's invariant_factors (matrices up to 50x50)

    Returns:
        SnfResult with the divisibility chain of nonzero entries

    Example:
        smith_normal_form(SparseIntMatrix.from_dense([[2, 4], [6, 8]])).diagonal  # (2, 4)
    """
    modulus = ring.characteristic
    diagonal = _eliminate(m, modulus)
    if ring.is_field:
        return SnfResult(tuple(1 for _ in diagonal))
    result = SnfResult(invariant_chain(diagonal))

    if verify and m.rows and m.cols:
        if max(m.rows, m.cols) > VERIFY_LIMIT:
            logger.warning(f"Skipping SNF verification of a {m.rows}x{m.cols} matrix")
        else:
            dense = DomainMatrix([[ZZ(v) for v in row] for row in m.to_dense()], m.shape, ZZ)
            expected = invariant_chain(int(x) for x in invariant_factors(dense))
            if expected != result.diagonal:
                raise ContractError(
                    f"SNF mismatch: elimination gave {result.diagonal}, sympy gave {expected}"
                )
    return result


def matrix_rank(m: SparseIntMatrix, ring: Ring = INTEGERS) -> int:
    """Rank over the ring's fraction field (or over F_p)."""
    return len(_eliminate(m, ring.characteristic))
