"""Readers for knot tables and synthetic triangle data.

Knot tables are CSV files with a ``name`` column and a ``pd`` or ``notation``
column; rows with an empty ``pd`` are built from their ``notation`` (see
:func:`khcube.core.tangles.diagram_from_notation`). An optional
``alternating`` column (true/false) marks alternating diagrams, an optional
``unknot`` column records whether the row is known to be the unknot, and the
optional ``det`` and ``khr_rank`` columns hold reference values.
Reidemeister tables carry ``name``, ``pd_a`` and ``pd_b``.

Triangle JSON schema::

    {
      "field": "Q",                          # Q, F2 or Fp=<p>
      "complexes": [                         # C_0, C_1, C_2
        {"degrees": [0, 1], "differential": [[row, col, value], ...]},
        ...
      ],
      "f": [null | {"shape": [rows, cols], "entries": [[row, col, value], ...]}, x3],
      "j": [null | {...}, x3]
    }

``f[i]`` maps C_i to C_{i-1} and ``j[i]`` maps C_i to C_{i-2} (indices mod 3);
matrices act on column vectors, so ``row`` indexes the target. Values are
integers, or "a/b" strings over Q.
"""

from __future__ import annotations

import json
import warnings
from pathlib import Path
from typing import List, Optional, Union

import pandas as pd
import sympy as sp
from sympy.polys.matrices import DomainMatrix

from khcube.core.diagram import render_pd
from khcube.core.tangles import diagram_from_notation
from khcube.homalg import fields
from khcube.homalg.rings import Ring
from khcube.spectral.complexes import ChainComplex
from khcube.spectral.lemma import TriangleData

DATA_DIR = Path(__file__).resolve().parent.parent / "data"

KNOT_COLUMNS = ["name", "pd", "notation", "alternating", "unknot", "det", "khr_rank"]
REFERENCE_COLUMNS = ["det", "khr_rank"]


def bundled_path(name: str) -> Path:
    """Path of a bundled data file, e.g. ``knots9.csv`` or ``synthetic/triangle_unit.json``."""
    path = DATA_DIR / name
    if not path.exists():
        raise FileNotFoundError(f"No bundled data file {name} in {DATA_DIR}")
    return path


def _as_bool(value) -> Optional[bool]:
    if pd.isna(value):
        return None
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("true", "1", "yes", "y"):
        return True
    if text in ("false", "0", "no", "n"):
        return False
    return None


def _resolve_pd(name: str, pd_code, notation) -> str:
    if not pd.isna(pd_code) and str(pd_code).strip():
        return str(pd_code).strip()
    if pd.isna(notation) or not str(notation).strip():
        raise ValueError(f"Row {name} has neither a PD code nor a notation")
    try:
        return render_pd(diagram_from_notation(str(notation)))
    except ValueError as e:
        raise ValueError(f"Row {name}: {e}") from e


def read_knot_table(filepath: Union[str, Path]) -> pd.DataFrame:
    """Read a knot table CSV.

    Args:
        filepath: CSV with a ``name`` column and a ``pd`` or ``notation`` column

    Returns:
        DataFrame with columns name, pd, notation, alternating, unknot, det,
        khr_rank (None or <NA> where unknown); ``pd`` is always filled
    """
    filepath = Path(filepath)
    df = pd.read_csv(filepath, dtype=str, keep_default_na=False, na_values=[""])
    if "name" not in df.columns:
        raise ValueError(f"Knot table {filepath} lacks columns ['name']")
    if "pd" not in df.columns and "notation" not in df.columns:
        raise ValueError(f"Knot table {filepath} needs a 'pd' or 'notation' column")
    for column in ("pd", "notation", "unknot"):
        if column not in df.columns:
            df[column] = None
    if "alternating" not in df.columns:
        warnings.warn(f"Knot table {filepath.name} has no 'alternating' column")
        df["alternating"] = None
    df["alternating"] = df["alternating"].map(_as_bool).astype(object)
    df["unknot"] = df["unknot"].map(_as_bool).astype(object)
    df["name"] = df["name"].str.strip()
    df["pd"] = [_resolve_pd(*row) for row in zip(df["name"], df["pd"], df["notation"])]
    for column in REFERENCE_COLUMNS:
        if column in df.columns:
            df[column] = pd.to_numeric(df[column]).astype("Int64")
        else:
            df[column] = pd.Series([pd.NA] * len(df), dtype="Int64")
    return df[KNOT_COLUMNS].reset_index(drop=True)


def read_reidemeister_pairs(filepath: Union[str, Path]) -> pd.DataFrame:
    """Read pairs of PD codes that differ by Reidemeister moves."""
    df = pd.read_csv(filepath, dtype=str)
    missing = {"name", "pd_a", "pd_b"} - set(df.columns)
    if missing:
        raise ValueError(f"Reidemeister table {filepath} lacks columns {sorted(missing)}")
    return df[["name", "pd_a", "pd_b"]].reset_index(drop=True)


def _value(domain, raw):
    if isinstance(raw, str):
        return domain.from_sympy(sp.Rational(raw))
    return domain.convert(int(raw))


def _matrix(domain, shape: List[int], entries) -> DomainMatrix:
    rows: dict = {}
    for r, c, raw in entries:
        value = _value(domain, raw)
        if value:
            rows.setdefault(int(r), {})[int(c)] = value
    return DomainMatrix(rows, (int(shape[0]), int(shape[1])), domain)


def parse_triangle(data: dict) -> TriangleData:
    """Build TriangleData from the decoded JSON schema above."""
    ring = Ring.parse(data.get("field", "Q"))
    domain = fields.field_domain(ring)
    complexes = []
    for block in data["complexes"]:
        degrees = [int(x) for x in block.get("degrees", [])]
        n = len(degrees)
        complexes.append(ChainComplex(tuple(degrees), _matrix(domain, [n, n], block.get("differential", []))))

    def _maps(key: str, step: int):
        raw = data.get(key) or [None, None, None]
        result = []
        for i, block in enumerate(raw):
            if block is None:
                result.append(None)
                continue
            shape = block.get("shape", [complexes[(i - step) % 3].dim, complexes[i].dim])
            result.append(_matrix(domain, shape, block.get("entries", [])))
        return tuple(result)

    return TriangleData(tuple(complexes), f=_maps("f", 1), j=_maps("j", 2))  # type: ignore[arg-type]


def read_triangle_json(filepath: Union[str, Path]) -> TriangleData:
    """Load triangle data from JSON."""
    with open(filepath, "r") as f:
        return parse_triangle(json.load(f))
