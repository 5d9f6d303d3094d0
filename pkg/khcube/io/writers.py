"""Canonical JSON payloads.

Every payload is written with sorted keys and two-space indentation and
carries no timestamps, so equal inputs give byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional, Union

from sympy.polys.matrices import DomainMatrix

from khcube.core.cube import CubeDescriptor
from khcube.core.diagram import PlanarDiagram, render_pd
from khcube.core.khcomplex import BigradedComplex
from khcube.homalg import fields
from khcube.homalg.homology import BigradedHomology
from khcube.spectral.lemma import TriangleData


def canonical_json(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def write_json(payload, filepath: Optional[Union[str, Path]] = None) -> str:
    """Serialize ``payload``; also write it to ``filepath`` when given."""
    text = canonical_json(payload)
    if filepath is not None:
        filepath = Path(filepath)
        filepath.parent.mkdir(parents=True, exist_ok=True)
        with open(filepath, "w", encoding="utf-8") as f:
            f.write(text)
    return text


def diagram_to_json(d: PlanarDiagram) -> dict:
    return {
        "pd": render_pd(d),
        "crossings": d.n_crossings,
        "components": d.n_components,
        "base_component": d.base_component,
    }


def homology_to_json(h: BigradedHomology) -> list:
    return h.groups_as_records()


def complex_to_json(c: BigradedComplex) -> dict:
    """Bases and differential blocks of a complex."""
    blocks = [
        {
            "h": h,
            "q": q,
            "basis": [{"vertex": str(v), "generator": str(g)} for v, g in basis],
        }
        for (h, q), basis in sorted(c.blocks.items())
    ]
    differentials = [
        {"h": h, "q": q, **m.to_json()}
        for (h, q), m in sorted(c.differentials.items())
        if not m.is_zero
    ]
    return {"meta": c.meta, "blocks": blocks, "differentials": differentials}


def cube_to_json(cube: CubeDescriptor) -> dict:
    """Resolutions and edge cobordisms of a cube."""
    vertices = [
        {
            "vertex": str(v),
            "circles": [sorted(circle) for circle in cube.resolutions[v].circles],
            "marked_circle": cube.resolutions[v].marked_circle,
        }
        for v in cube.vertices
    ]
    edges = [
        {
            "source": str(e.source),
            "target": str(e.target),
            "crossing": e.crossing,
            "kind": e.kind,
            "inputs": list(e.inputs),
            "outputs": list(e.outputs),
            "bystanders": [list(pair) for pair in e.bystanders],
        }
        for e in cube.edges
    ]
    return {"diagram": render_pd(cube.diagram), "vertices": vertices, "edges": edges}


def _scalar(value):
    """Integer, or an "a/b" string for non-integral rationals."""
    denominator = getattr(value, "denominator", 1)
    if denominator != 1:
        return f"{value.numerator}/{denominator}"
    return int(value)


def _entries(m: DomainMatrix) -> list:
    entries = []
    for r, row in enumerate(fields.to_rows(m)):
        for c, value in sorted(row.items()):
            entries.append([r, c, _scalar(value)])
    return entries


def triangle_to_json(t: TriangleData, field_name: str = "Q") -> dict:
    """Inverse of ``khcube.io.readers.parse_triangle``."""

    def _map(m: Optional[DomainMatrix]):
        if m is None:
            return None
        return {"shape": list(m.shape), "entries": _entries(m)}

    return {
        "field": field_name,
        "complexes": [
            {"degrees": list(c.degrees), "differential": _entries(c.differential)}
            for c in t.complexes
        ],
        "f": [_map(m) for m in t.f],
        "j": [_map(m) for m in t.j],
    }


def write_triangle_json(
    t: TriangleData, filepath: Union[str, Path], field_name: str = "Q"
) -> Path:
    filepath = Path(filepath)
    write_json(triangle_to_json(t, field_name), filepath)
    return filepath
