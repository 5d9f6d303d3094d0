"""Sparse integer matrices in coordinate form."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from sympy.polys.matrices import DomainMatrix

Entry = Tuple[int, int, int]


@dataclass(frozen=True)
class SparseIntMatrix:
    """
    An integer matrix stored as sorted ``(row, col, value)`` triplets.

    Matrices act on column vectors: entry ``(r, c)`` is the coefficient of
    target basis element ``r`` in the image of source element ``c``.
    """

    rows: int
    cols: int
    entries: Tuple[Entry, ...] = ()

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError(f"Negative matrix shape ({self.rows}, {self.cols})")
        for r, c, value in self.entries:
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise ValueError(f"Entry ({r}, {c}) outside a {self.rows}x{self.cols} matrix")
            if value == 0:
                raise ValueError(f"Stored zero at ({r}, {c})")

    @classmethod
    def from_dict(
        cls, rows: int, cols: int, values: Mapping[Tuple[int, int], int], modulus: int = 0
    ) -> "SparseIntMatrix":
        """Build from ``{(row, col): value}``, dropping zeros (optionally mod p)."""
        entries = []
        for (r, c), value in values.items():
            value = int(value)
            if modulus:
                value %= modulus
            if value:
                entries.append((r, c, value))
        entries.sort()
        return cls(rows, cols, tuple(entries))

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Iterable[Entry]) -> "SparseIntMatrix":
        """Build from triplets; repeated positions are summed."""
        values: Dict[Tuple[int, int], int] = {}
        for r, c, value in entries:
            values[(r, c)] = values.get((r, c), 0) + int(value)
        return cls.from_dict(rows, cols, values)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]]) -> "SparseIntMatrix":
        n_cols = len(rows[0]) if rows else 0
        values = {(r, c): v for r, row in enumerate(rows) for c, v in enumerate(row) if v}
        return cls.from_dict(len(rows), n_cols, values)

    @classmethod
    def identity(cls, n: int) -> "SparseIntMatrix":
        return cls(n, n, tuple((i, i, 1) for i in range(n)))

    @classmethod
    def zero(cls, rows: int, cols: int) -> "SparseIntMatrix":
        return cls(rows, cols, ())

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def nnz(self) -> int:
        return len(self.entries)

    @property
    def is_zero(self) -> bool:
        return not self.entries

    def to_dict(self) -> Dict[Tuple[int, int], int]:
        return {(r, c): v for r, c, v in self.entries}

    def row_dicts(self) -> Dict[int, Dict[int, int]]:
        rows: Dict[int, Dict[int, int]] = {}
        for r, c, v in self.entries:
            rows.setdefault(r, {})[c] = v
        return rows

    def to_dense(self) -> List[List[int]]:
        dense = [[0] * self.cols for _ in range(self.rows)]
        for r, c, v in self.entries:
            dense[r][c] = v
        return dense

    def transpose(self) -> "SparseIntMatrix":
        return SparseIntMatrix(self.cols, self.rows, tuple(sorted((c, r, v) for r, c, v in self.entries)))

    def negated(self) -> "SparseIntMatrix":
        return SparseIntMatrix(self.rows, self.cols, tuple((r, c, -v) for r, c, v in self.entries))

    def reduced_mod(self, p: int) -> "SparseIntMatrix":
        return SparseIntMatrix.from_dict(self.rows, self.cols, self.to_dict(), modulus=p)

    def __matmul__(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"Shape mismatch: {self.shape} @ {other.shape}")
        right = other.row_dicts()
        values: Dict[Tuple[int, int], int] = {}
        for r, k, v in self.entries:
            for c, w in right.get(k, {}).items():
                values[(r, c)] = values.get((r, c), 0) + v * w
        return SparseIntMatrix.from_dict(self.rows, other.cols, values)

    def to_domain_matrix(self, domain) -> DomainMatrix:
        """Sparse sympy DomainMatrix over ``domain`` (ZZ, QQ or GF(p))."""
        rows: Dict[int, Dict[int, object]] = {}
        for r, c, v in self.entries:
            element = domain.convert(v)
            if element:
                rows.setdefault(r, {})[c] = element
        return DomainMatrix(rows, (self.rows, self.cols), domain)

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "entries": [list(e) for e in self.entries]}
