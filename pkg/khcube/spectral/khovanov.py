"""
Cube complexes seen through the spectral module.

Converts a BigradedComplex over a field into a ChainComplex, filters it by
cube weight, splits it at a crossing into the two child subcomplexes, and
assembles complexes from user-supplied higher cube maps with the ς signs.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Mapping, Sequence, Tuple

from sympy.polys.matrices import DomainMatrix

from khcube.core.cube import DEFAULT_MAX_CROSSINGS, CubeVertex, bits_of, enumerate_cube
from khcube.core.diagram import PlanarDiagram, render_pd, smooth_crossing
from khcube.core.errors import ContractError
from khcube.core.khcomplex import (
    DECREASING,
    INCREASING,
    BasisElement,
    BigradedComplex,
    build_complex,
    msign,
    sign_delta,
)
from khcube.core.tqft import edge_map, tensor_basis
from khcube.homalg import fields
from khcube.homalg.fields import Vector
from khcube.homalg.homology import homology
from khcube.homalg.rings import RATIONALS, Ring
from khcube.spectral.complexes import ChainComplex, ChainMap, mapping_cone
from khcube.spectral.lemma import TriangleData
from khcube.spectral.pages import FilteredComplex, spectral_pages

logger = logging.getLogger(__name__)

CubeMaps = Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], DomainMatrix]


def to_chain_complex(c: BigradedComplex) -> Tuple[ChainComplex, List[BasisElement]]:
    """Flatten the blocks of ``c`` (in (h, q) order) into one complex with degree h, grading q."""
    domain = fields.field_domain(c.ring)
    offsets: Dict[Tuple[int, int], int] = {}
    generators: List[BasisElement] = []
    degrees: List[int] = []
    gradings: List[int] = []
    for (h, q), basis in sorted(c.blocks.items()):
        offsets[(h, q)] = len(generators)
        generators.extend(basis)
        degrees.extend([h] * len(basis))
        gradings.extend([q] * len(basis))

    rows: Dict[int, Vector] = {}
    for (h, q), matrix in c.differentials.items():
        src, tgt = offsets[(h, q)], offsets[(h + 1, q)]
        for r, col, value in matrix.entries:
            converted = domain.convert(value)
            if converted:
                rows.setdefault(tgt + r, {})[src + col] = converted
    n = len(generators)
    complex_ = ChainComplex(tuple(degrees), DomainMatrix(rows, (n, n), domain), tuple(gradings))
    return complex_, generators


def _cube_weight(vertex: CubeVertex, direction: str) -> int:
    return vertex.weight if direction == INCREASING else len(vertex.bits) - vertex.weight


def khovanov_filtered_complex(c: BigradedComplex) -> FilteredComplex:
    """
    Filter a cube complex over a field by cube weight.

    The weight is |v| in increasing mode and N - |v| in decreasing mode, so the
    differential raises it by exactly one and the spectral sequence degenerates
    at E_2.
    """
    complex_, generators = to_chain_complex(c)
    weights = tuple(_cube_weight(v, c.direction) for v, _ in generators)
    return FilteredComplex(complex_, weights)


def e1_matches_cube(c: BigradedComplex) -> bool:
    """E_1 of the cube filtration is the direct sum of the vertex groups (d_0 = 0)."""
    fc = khovanov_filtered_complex(c)
    first = spectral_pages(fc, r_max=1)[0]
    return first.total_rank == c.total_dim


# ---------------------------------------------------------------------------
# Splitting at a crossing
# ---------------------------------------------------------------------------

def _restrict(c: ChainComplex, members: Sequence[int]) -> ChainComplex:
    gradings = tuple(c.grading_of(i) for i in members) if c.gradings else ()
    return ChainComplex(
        tuple(c.degrees[i] for i in members),
        fields.submatrix(c.differential, members, members),
        gradings,
    )


def split_at_crossing(c: BigradedComplex, crossing: int) -> Tuple[ChainComplex, ChainComplex, ChainMap]:
    """
    Split a cube complex at ``crossing`` (1-based) into source and target parts.

    The differential only ever flips the crossing's bit one way (0 -> 1 in
    increasing mode, 1 -> 0 in decreasing mode), so the complex is the cone of
    the inter-child anti-chain map f: source part -> target part.

    Returns:
        (source part, target part, f) with f of degree shift 1
    """
    complex_, generators = to_chain_complex(c)
    if not generators:
        raise ContractError("Cannot split an empty complex")
    n = len(generators[0][0].bits)
    if not 1 <= crossing <= n:
        raise ContractError(f"Crossing index {crossing} out of range 1..{n}")
    source_bit = 0 if c.direction == INCREASING else 1
    source = [i for i, (v, _) in enumerate(generators) if v.bits[crossing - 1] == source_bit]
    target = [i for i, (v, _) in enumerate(generators) if v.bits[crossing - 1] != source_bit]
    a, b = _restrict(complex_, source), _restrict(complex_, target)
    f = ChainMap(a, b, fields.submatrix(complex_.differential, target, source), shift=1, anti=True)
    return a, b, f


@dataclass(frozen=True)
class ConeReport:
    """Rank bookkeeping for the skein exact triangle at one crossing."""

    crossing: int
    children: Tuple[str, str]
    child_ranks: Tuple[int, int]
    subcomplex_ranks: Tuple[int, int]
    rank_f: int
    total_rank: int
    cone_rank: int

    @property
    def defect(self) -> int:
        """rank H(D) - (rank H(A) + rank H(B) - 2 rank f*); zero when the sequence is exact."""
        a, b = self.subcomplex_ranks
        return self.total_rank - (a + b - 2 * self.rank_f)

    @property
    def bound_ok(self) -> bool:
        return self.total_rank <= sum(self.child_ranks)

    @property
    def children_match(self) -> bool:
        return self.child_ranks == self.subcomplex_ranks

    def to_json(self) -> dict:
        return {
            "crossing": self.crossing,
            "children": list(self.children),
            "child_ranks": list(self.child_ranks),
            "subcomplex_ranks": list(self.subcomplex_ranks),
            "rank_f": self.rank_f,
            "total_rank": self.total_rank,
            "cone_rank": self.cone_rank,
            "defect": self.defect,
            "bound_ok": self.bound_ok,
            "children_match": self.children_match,
        }


def cone_decomposition(
    d: PlanarDiagram,
    crossing: int,
    ring: Ring = RATIONALS,
    direction: str = INCREASING,
    max_crossings: int = DEFAULT_MAX_CROSSINGS,
) -> ConeReport:
    """
    Exhibit the complex of ``d`` as the cone of the map between its two children.

    Args:
        d: Valid diagram with at least one crossing
        crossing: 1-based crossing index
        ring: Field coefficients
        direction: Complex direction
        max_crossings: Cube size cap

    Returns:
        ConeReport; ``child_ranks`` are the homology ranks of the 0- and
        1-smoothed diagrams computed from scratch, ``subcomplex_ranks`` those
        of the matching subcomplexes

    Example:
        report = cone_decomposition(parse_pd("PD[X[1,2,2,1]]"), 1)
        report.child_ranks  # (2, 4)
    """
    if not 1 <= crossing <= d.n_crossings:
        raise ContractError(f"Crossing index {crossing} out of range 1..{d.n_crossings}")
    fields.field_domain(ring)
    c = build_complex(d, ring=ring, direction=direction, max_crossings=max_crossings)
    source, target, f = split_at_crossing(c, crossing)
    # source part holds bit 0 in increasing mode, bit 1 in decreasing mode
    bit0, bit1 = (source, target) if c.direction == INCREASING else (target, source)

    children = tuple(smooth_crossing(d, crossing, bit) for bit in (0, 1))
    child_ranks = tuple(
        homology(build_complex(child, ring=ring, direction=direction, max_crossings=max_crossings)).total_rank
        for child in children
    )
    full, _ = to_chain_complex(c)
    report = ConeReport(
        crossing=crossing,
        children=(render_pd(children[0]), render_pd(children[1])),
        child_ranks=child_ranks,  # type: ignore[arg-type]
        subcomplex_ranks=(bit0.total_homology_rank(), bit1.total_homology_rank()),
        rank_f=f.induced_rank(),
        total_rank=full.total_homology_rank(),
        cone_rank=mapping_cone(f).total_homology_rank(),
    )
    logger.info(
        f"Crossing {crossing}: ranks {report.total_rank}; {report.subcomplex_ranks}, "
        f"rank f* = {report.rank_f}, defect {report.defect}"
    )
    return report


# ---------------------------------------------------------------------------
# Complexes from user-supplied cube maps
# ---------------------------------------------------------------------------

def total_cube_complex(
    vertex_dims: Mapping[Tuple[int, ...], int],
    maps: Mapping[Tuple[Tuple[int, ...], Tuple[int, ...]], DomainMatrix],
    ring: Ring = RATIONALS,
) -> ChainComplex:
    """
    Assemble D = Σ_{v >= u} (-1)^{ς(v,u)} m_vu from maps between vertex groups.

    ``maps[(v, u)]`` goes from the group at v to the group at u and may span
    any number of cube directions; ``(v, v)`` entries are vertex
    differentials. A generator at v sits in degree N - |v|.

    Raises:
        ContractError: on a map between incomparable vertices or of the wrong shape
    """
    domain = fields.field_domain(ring)
    order = sorted(vertex_dims, key=lambda v: (-sum(v), v))
    offsets: Dict[Tuple[int, ...], int] = {}
    degrees: List[int] = []
    for v in order:
        offsets[v] = len(degrees)
        degrees.extend([len(v) - sum(v)] * vertex_dims[v])

    rows: Dict[int, Vector] = {}
    for (v, u), matrix in sorted(maps.items()):
        v, u = bits_of(v), bits_of(u)
        if matrix.shape != (vertex_dims.get(u, -1), vertex_dims.get(v, -1)):
            raise ContractError(f"Map {v}->{u} has shape {matrix.shape}")
        sign = -1 if msign(v, u) else 1
        for r, row in enumerate(fields.to_rows(matrix.convert_to(domain))):
            for col, value in row.items():
                target, source = offsets[u] + r, offsets[v] + col
                entry = rows.setdefault(target, {})
                total = entry.get(source, domain.zero) + domain.convert(sign) * value
                if total:
                    entry[source] = total
                else:
                    entry.pop(source, None)
    n = len(degrees)
    return ChainComplex(tuple(degrees), DomainMatrix(rows, (n, n), domain))


def khovanov_cube_maps(
    d: PlanarDiagram, ring: Ring = RATIONALS, max_crossings: int = DEFAULT_MAX_CROSSINGS
) -> Tuple[Dict[Tuple[int, ...], int], CubeMaps]:
    """
    Edge maps of the decreasing-mode cube as (-1)^δ(v,u) times the TQFT maps.

    Fed to ``total_cube_complex`` they reproduce the δ̃-signed complex, since
    ς(v,u) + δ(v,u) = δ̃(v,u) on edges.
    """
    domain = fields.field_domain(ring)
    cube = enumerate_cube(d, max_crossings)
    dims = {v.bits: 2 ** cube.resolutions[v].n_circles for v in cube.vertices}
    maps: CubeMaps = {}
    for e in cube.edges:
        basis = tensor_basis(cube.resolutions[e.source].n_circles)
        matrix = edge_map(e, basis)
        sign = -1 if sign_delta(e.source, e.target) else 1
        rows: Dict[int, Vector] = {}
        for r, col, value in matrix.entries:
            rows.setdefault(r, {})[col] = domain.convert(sign * value)
        maps[(e.source.bits, e.target.bits)] = DomainMatrix(rows, matrix.shape, domain)
    return dims, maps


# ---------------------------------------------------------------------------
# Skein triangle
# ---------------------------------------------------------------------------

def _signed_embedding(
    rows: Sequence[int], cols: Sequence[int], members: Sequence[int], degrees: Sequence[int], domain
) -> DomainMatrix:
    """Matrix sending generator k to (-1)^deg(k) times itself, between index lists."""
    row_pos = {k: i for i, k in enumerate(rows)}
    col_pos = {k: i for i, k in enumerate(cols)}
    data: Dict[int, Vector] = {}
    for k in members:
        data.setdefault(row_pos[k], {})[col_pos[k]] = domain.convert(-1 if degrees[k] % 2 else 1)
    return DomainMatrix(data, (len(rows), len(cols)), domain)


def skein_triangle(
    d: PlanarDiagram,
    crossing: int,
    ring: Ring = RATIONALS,
    max_crossings: int = DEFAULT_MAX_CROSSINGS,
) -> TriangleData:
    """
    The 3-periodic skein triangle of the decreasing-mode complex at ``crossing``.

    C_2 is the whole complex, C_1 its bit-1 part and C_0 its bit-0 part. With
    ε = (-1)^h the maps are f_2(x, y) = εx, f_1 the inter-child block,
    f_0(y) = (0, εy), j_2(x, y) = εy, j_1(x) = (εx, 0) and j_0 = 0, so that
    every j f + f j is the identity.
    """
    if not 1 <= crossing <= d.n_crossings:
        raise ContractError(f"Crossing index {crossing} out of range 1..{d.n_crossings}")
    c = build_complex(d, ring=ring, direction=DECREASING, max_crossings=max_crossings)
    full, generators = to_chain_complex(c)
    highs = [i for i, (v, _) in enumerate(generators) if v.bits[crossing - 1] == 1]
    lows = [i for i, (v, _) in enumerate(generators) if v.bits[crossing - 1] == 0]
    everything = list(range(full.dim))
    domain, degrees = full.domain, full.degrees

    c1, c0 = _restrict(full, highs), _restrict(full, lows)
    f = (
        _signed_embedding(everything, lows, lows, degrees, domain),
        fields.submatrix(full.differential, lows, highs),
        _signed_embedding(highs, everything, highs, degrees, domain),
    )
    j = (
        None,
        _signed_embedding(everything, highs, highs, degrees, domain),
        _signed_embedding(lows, everything, lows, degrees, domain),
    )
    logger.info(f"Skein triangle at crossing {crossing}: dims {c0.dim}, {c1.dim}, {full.dim}")
    return TriangleData((c0, c1, full), f=f, j=j)
