"""
The cube of resolutions.

Every vertex ``v`` of {0,1}^N picks a smoothing at each crossing; the result is
an unlink whose circles partition the edge labels. Every cube edge changes one
crossing and is either a merge or a split of circles.
"""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from khcube.core.diagram import PlanarDiagram
from khcube.core.errors import CapExceededError, ContractError

logger = logging.getLogger(__name__)

DEFAULT_MAX_CROSSINGS = 20

MERGE = "merge"
SPLIT = "split"


@dataclass(frozen=True)
class CubeVertex:
    """A vertex of {0,1}^N."""

    bits: Tuple[int, ...]

    @property
    def weight(self) -> int:
        return sum(self.bits)

    @property
    def order_key(self) -> Tuple[int, Tuple[int, ...]]:
        """Sort key: increasing weight, then lexicographic."""
        return (self.weight, self.bits)

    def lowered(self, i0: int) -> "CubeVertex":
        """The vertex with bit ``i0`` (1-based) cleared."""
        bits = list(self.bits)
        bits[i0 - 1] = 0
        return CubeVertex(tuple(bits))

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits) or "()"


@dataclass(frozen=True)
class Resolution:
    """The unlink at a cube vertex.

    Circles are ordered by their smallest label; free loops carry negative
    pseudo-labels and therefore come first.
    """

    vertex: CubeVertex
    circles: Tuple[FrozenSet[int], ...]
    marked_circle: int = -1   # -1 when the diagram has no components

    @property
    def n_circles(self) -> int:
        return len(self.circles)

    def circle_of(self, label: int) -> int:
        for index, circle in enumerate(self.circles):
            if label in circle:
                return index
        raise ContractError(f"Label {label} is on no circle of vertex {self.vertex}")


@dataclass(frozen=True)
class EdgeCobordism:
    """A merge or split between adjacent resolutions.

    ``source`` has weight w and ``target`` weight w-1. ``inputs`` are the source
    circles touched at the changed crossing, ``outputs`` the target circles, and
    ``bystanders`` pairs every untouched source circle with its target copy.
    """

    source: CubeVertex
    target: CubeVertex
    crossing: int
    kind: str
    inputs: Tuple[int, ...]
    outputs: Tuple[int, ...]
    bystanders: Tuple[Tuple[int, int], ...]

    @property
    def n_source_circles(self) -> int:
        return len(self.inputs) + len(self.bystanders)

    @property
    def n_target_circles(self) -> int:
        return len(self.outputs) + len(self.bystanders)

    def reversed(self) -> "EdgeCobordism":
        """The same surface read from the lower vertex to the upper one."""
        return EdgeCobordism(
            source=self.target,
            target=self.source,
            crossing=self.crossing,
            kind=SPLIT if self.kind == MERGE else MERGE,
            inputs=self.outputs,
            outputs=self.inputs,
            bystanders=tuple(sorted((t, s) for s, t in self.bystanders)),
        )


@dataclass(frozen=True)
class CubeDescriptor:
    """All resolutions and all edges of a diagram's cube."""

    diagram: PlanarDiagram
    vertices: Tuple[CubeVertex, ...]
    resolutions: Dict[CubeVertex, Resolution]
    edges: Tuple[EdgeCobordism, ...]

    @property
    def n_crossings(self) -> int:
        return self.diagram.n_crossings


def _check_cap(d: PlanarDiagram, max_crossings: int) -> None:
    if d.n_crossings > max_crossings:
        raise CapExceededError("crossing count", d.n_crossings, "max_crossings", max_crossings)


def resolve(d: PlanarDiagram, v: CubeVertex) -> Resolution:
    """
    Smooth every crossing of ``d`` according to ``v``.

    At ``X[a,b,c,d]`` the 0-smoothing joins a~b and c~d, the 1-smoothing joins
    a~d and b~c.
    """
    if len(v.bits) != d.n_crossings:
        raise ContractError(f"Vertex {v} has {len(v.bits)} bits, diagram has {d.n_crossings} crossings")

    parent = {x: x for x in d.labels}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for bit, (a, b, c, e) in zip(v.bits, d.crossings):
        pairs = ((a, b), (c, e)) if bit == 0 else ((a, e), (b, c))
        for x, y in pairs:
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)

    groups: Dict[int, set] = {}
    for x in parent:
        groups.setdefault(find(x), set()).add(x)
    circles = [frozenset(g) for g in groups.values()]
    circles.extend(frozenset({-(k + 1)}) for k in range(d.free_loops))
    circles.sort(key=min)

    marked = -1
    if d.n_components:
        edge = d.marked_edge()
        marked = next(i for i, circle in enumerate(circles) if edge in circle)
    return Resolution(v, tuple(circles), marked)


def edge(
    d: PlanarDiagram,
    v: CubeVertex,
    i0: int,
    resolutions: Optional[Dict[CubeVertex, Resolution]] = None,
) -> EdgeCobordism:
    """
    Classify the cube edge from ``v`` to ``v - e_{i0}``.

    Args:
        d: Valid diagram
        v: Upper vertex, with bit ``i0`` set
        i0: Changed crossing, 1-based
        resolutions: Optional cache of already computed resolutions

    Returns:
        EdgeCobordism with circle correspondences matched by label sets
    """
    if not 1 <= i0 <= d.n_crossings or v.bits[i0 - 1] != 1:
        raise ContractError(f"Vertex {v} has no bit {i0} to lower")
    u = v.lowered(i0)
    cache = resolutions if resolutions is not None else {}
    upper = cache.get(v) or resolve(d, v)
    lower = cache.get(u) or resolve(d, u)

    labels = d.crossings[i0 - 1]
    touched_upper = sorted({upper.circle_of(x) for x in labels})
    touched_lower = sorted({lower.circle_of(x) for x in labels})
    if (len(touched_upper), len(touched_lower)) == (2, 1):
        kind = MERGE
    elif (len(touched_upper), len(touched_lower)) == (1, 2):
        kind = SPLIT
    else:
        raise ContractError(
            f"Edge {v}->{u} touches {len(touched_upper)} and {len(touched_lower)} circles"
        )

    lower_index = {circle: i for i, circle in enumerate(lower.circles)}
    bystanders = tuple(
        (i, lower_index[circle])
        for i, circle in enumerate(upper.circles)
        if i not in touched_upper
    )
    return EdgeCobordism(v, u, i0, kind, tuple(touched_upper), tuple(touched_lower), bystanders)


def cube_vertices(n: int) -> List[CubeVertex]:
    """All vertices of {0,1}^n in canonical order."""
    vertices = [CubeVertex(bits) for bits in itertools.product((0, 1), repeat=n)]
    vertices.sort(key=lambda v: v.order_key)
    return vertices


def _resolve_task(task: Tuple[PlanarDiagram, CubeVertex]) -> Resolution:
    d, v = task
    return resolve(d, v)


def enumerate_cube(
    d: PlanarDiagram,
    max_crossings: int = DEFAULT_MAX_CROSSINGS,
    workers: int = 1,
) -> CubeDescriptor:
    """
    Compute every resolution and every edge of the cube.

    Args:
        d: Valid diagram
        max_crossings: Cube size cap
        workers: Processes resolving vertices; edges are classified from the
            resolved vertices afterwards

    Raises:
        CapExceededError: if the diagram has more than ``max_crossings`` crossings
    """
    _check_cap(d, max_crossings)
    vertices = cube_vertices(d.n_crossings)
    if workers > 1 and len(vertices) > 1:
        chunksize = max(1, len(vertices) // (4 * workers))
        with ProcessPoolExecutor(max_workers=workers) as executor:
            resolved = list(executor.map(_resolve_task, [(d, v) for v in vertices], chunksize=chunksize))
    else:
        resolved = [resolve(d, v) for v in vertices]
    resolutions = dict(zip(vertices, resolved))
    edges = []
    for v in vertices:
        for i0, bit in enumerate(v.bits, start=1):
            if bit:
                edges.append(edge(d, v, i0, resolutions))
    logger.info(f"Cube of {d.n_crossings}-crossing diagram: {len(vertices)} vertices, {len(edges)} edges")
    return CubeDescriptor(d, tuple(vertices), resolutions, tuple(edges))


def square_faces(cube: CubeDescriptor) -> Iterator[Tuple[CubeVertex, CubeVertex, CubeVertex, CubeVertex]]:
    """Yield every 2-face as (top, middle, other middle, bottom)."""
    for w in cube.vertices:
        ones = [i for i, bit in enumerate(w.bits, start=1) if bit]
        for i, j in itertools.combinations(ones, 2):
            v = w.lowered(i)
            v_prime = w.lowered(j)
            yield w, v, v_prime, v.lowered(j)


def euler_fingerprint(cube: CubeDescriptor) -> int:
    """Sum over vertices of (-1)^|v| n(v)."""
    weights = np.array([v.weight for v in cube.vertices], dtype=np.int64)
    circles = np.array([cube.resolutions[v].n_circles for v in cube.vertices], dtype=np.int64)
    return int(np.sum(np.where(weights % 2 == 0, 1, -1) * circles))


def bits_of(x: Sequence[int] | CubeVertex) -> Tuple[int, ...]:
    """Accept a CubeVertex or a plain 0/1 sequence."""
    return x.bits if isinstance(x, CubeVertex) else tuple(int(b) for b in x)
