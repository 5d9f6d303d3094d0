"""
The signed cube complex.

Generators are pairs (vertex, tensor generator). In increasing mode the
differential raises |v| (standard Khovanov cohomology of the diagram); in
decreasing mode it lowers |v|, and the gradings are those of the mirror.
Matrices are stored per (h, q) block since d preserves q.
"""

from __future__ import annotations

import hashlib
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Dict, FrozenSet, List, Optional, Sequence, Tuple

from khcube.core.cube import (
    DEFAULT_MAX_CROSSINGS,
    CubeDescriptor,
    CubeVertex,
    bits_of,
    enumerate_cube,
    square_faces,
)
from khcube.core.diagram import PlanarDiagram, count_components, mirror, render_pd, writhe_counts
from khcube.core.errors import ContractError
from khcube.core.tqft import (
    MINUS,
    ONE,
    PLUS,
    TensorGenerator,
    basis_index,
    edge_map,
    tensor_basis,
)
from khcube.homalg.matrices import SparseIntMatrix
from khcube.homalg.rings import INTEGERS, Ring

if TYPE_CHECKING:
    from khcube.homalg.homology import BigradedHomology

logger = logging.getLogger(__name__)

Bidegree = Tuple[int, int]
BasisElement = Tuple[CubeVertex, TensorGenerator]

INCREASING = "increasing"
DECREASING = "decreasing"
_DIRECTIONS = {"inc": INCREASING, "increasing": INCREASING, "dec": DECREASING, "decreasing": DECREASING}


# ---------------------------------------------------------------------------
# Sign calculus
# ---------------------------------------------------------------------------

def _changed_index(v: Sequence[int], u: Sequence[int]) -> int:
    """1-based index of the single bit where v = 1 and u = 0."""
    if len(v) != len(u):
        raise ContractError(f"Vertices {tuple(v)} and {tuple(u)} have different lengths")
    diff = [i for i, (a, b) in enumerate(zip(v, u), start=1) if a != b]
    if len(diff) != 1 or v[diff[0] - 1] != 1:
        raise ContractError(f"{tuple(v)} -> {tuple(u)} is not a cube edge with v > u")
    return diff[0]


def sign_delta(v, u) -> int:
    """δ(v,u) = Σ_{i < i0} v_i mod 2."""
    v, u = bits_of(v), bits_of(u)
    i0 = _changed_index(v, u)
    return sum(v[: i0 - 1]) % 2


def sign_tilde_delta(v, u) -> int:
    """δ̃(v,u) = Σ_{i >= i0} v_i mod 2."""
    v, u = bits_of(v), bits_of(u)
    i0 = _changed_index(v, u)
    return sum(v[i0 - 1:]) % 2


def msign(v, u) -> int:
    """ς(v,u) = ½|v-u|(|v-u|-1) + Σ v_i mod 2, for any v >= u."""
    v, u = bits_of(v), bits_of(u)
    if len(v) != len(u) or any(a < b for a, b in zip(v, u)):
        raise ContractError(f"msign needs v >= u componentwise, got {v} and {u}")
    k = sum(v) - sum(u)
    return (k * (k - 1) // 2 + sum(v)) % 2


@dataclass(frozen=True)
class SignRule:
    """Edge sign rule; ``flips`` toggles chosen edges (negative controls)."""

    variant: str = "tilde_delta"   # "tilde_delta" or "delta"
    flips: FrozenSet[Tuple[Tuple[int, ...], Tuple[int, ...]]] = frozenset()

    def __post_init__(self):
        if self.variant not in ("delta", "tilde_delta"):
            raise ValueError(f"Unknown sign rule '{self.variant}' (use delta or tilde_delta)")

    @classmethod
    def from_flag(cls, flag: str) -> "SignRule":
        return cls("tilde_delta" if flag in ("tilde", "tilde_delta") else flag)

    def __call__(self, v, u) -> int:
        v, u = bits_of(v), bits_of(u)
        base = sign_delta(v, u) if self.variant == "delta" else sign_tilde_delta(v, u)
        return (base + ((v, u) in self.flips)) % 2

    def with_flip(self, v, u) -> "SignRule":
        return SignRule(self.variant, self.flips | {(bits_of(v), bits_of(u))})

    def __str__(self) -> str:
        return self.variant if not self.flips else f"{self.variant}+{len(self.flips)}flips"


def two_face_violations(cube: CubeDescriptor, rule: SignRule) -> List[Tuple[CubeVertex, ...]]:
    """2-faces (w, v, v', u) where the two signed paths do not anticommute."""
    bad = []
    for w, v, v_prime, u in square_faces(cube):
        total = rule(w, v) + rule(v, u) + rule(w, v_prime) + rule(v_prime, u)
        if total % 2 != 1:
            bad.append((w, v, v_prime, u))
    return bad


def sign_identity_holds(cube: CubeDescriptor) -> bool:
    """δ̃ - δ ≡ Σ v_i (mod 2) on every edge of the cube."""
    for e in cube.edges:
        v, u = e.source.bits, e.target.bits
        if (sign_tilde_delta(v, u) - sign_delta(v, u) - sum(v)) % 2:
            return False
    return True


# ---------------------------------------------------------------------------
# Complex
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BigradedComplex:
    """Blockwise complex: ``differentials[(h, q)]`` maps block (h,q) to block (h+1,q)."""

    blocks: Dict[Bidegree, Tuple[BasisElement, ...]]
    differentials: Dict[Bidegree, SparseIntMatrix]
    ring: Ring = INTEGERS
    variant: str = "unreduced"
    rule: SignRule = field(default_factory=SignRule)
    direction: str = INCREASING
    diagram_hash: str = ""

    @property
    def meta(self) -> dict:
        return {
            "diagram_hash": self.diagram_hash,
            "variant": self.variant,
            "signs": str(self.rule),
            "ring": str(self.ring),
            "direction": self.direction,
        }

    @property
    def total_dim(self) -> int:
        return sum(len(b) for b in self.blocks.values())

    def dims(self) -> Dict[Bidegree, int]:
        return {key: len(basis) for key, basis in sorted(self.blocks.items())}

    def euler_characteristic(self) -> Dict[int, int]:
        """Chain-level q -> Σ_h (-1)^h dim."""
        chi: Dict[int, int] = {}
        for (h, q), basis in self.blocks.items():
            chi[q] = chi.get(q, 0) + (-1) ** (h % 2) * len(basis)
        return {q: v for q, v in sorted(chi.items()) if v}


def normalize_direction(direction: str) -> str:
    try:
        return _DIRECTIONS[direction]
    except KeyError:
        raise ValueError(f"Unknown direction '{direction}' (use increasing or decreasing)") from None


def diagram_hash(d: PlanarDiagram) -> str:
    text = f"{render_pd(d)}|base={d.base_component}"
    return hashlib.sha1(text.encode("utf-8")).hexdigest()


def _gradings(
    weight: int, q_weight: int, n: int, n_plus: int, n_minus: int, direction: str
) -> Bidegree:
    if direction == INCREASING:
        return weight - n_minus, q_weight + weight + n_plus - 2 * n_minus
    return n - weight - n_plus, q_weight + n - weight + n_minus - 2 * n_plus


def build_complex(
    d: PlanarDiagram,
    variant: str = "unreduced",
    rule: Optional[SignRule] = None,
    ring: Ring = INTEGERS,
    direction: str = INCREASING,
    max_crossings: int = DEFAULT_MAX_CROSSINGS,
    cube: Optional[CubeDescriptor] = None,
) -> BigradedComplex:
    """
    Assemble the signed cube complex of a diagram.

    Args:
        d: Valid diagram
        variant: "unreduced" or "reduced" (quotient by v- on the marked circle)
        rule: Edge sign rule, default δ̃
        ring: Coefficient ring tag; entries are reduced mod p for F_p
        direction: "increasing" (d raises |v|) or "decreasing"
        max_crossings: Cube size cap
        cube: Precomputed cube of ``d``

    Returns:
        BigradedComplex with per-(h,q) bases and differential blocks

    Example:
        c = build_complex(parse_pd("PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]"), ring=RATIONALS)
    """
    rule = rule or SignRule()
    direction = normalize_direction(direction)
    if variant not in ("unreduced", "reduced"):
        raise ValueError(f"Unknown variant '{variant}' (use unreduced or reduced)")
    reduced = variant == "reduced"
    if reduced and d.n_components == 0:
        raise ContractError("The reduced theory needs a marked component")
    if reduced:
        d.marked_edge()  # validates base_component

    cube = cube or enumerate_cube(d, max_crossings)
    n = d.n_crossings
    n_plus, n_minus = writhe_counts(d)

    blocks: Dict[Bidegree, List[BasisElement]] = {}
    # vertex -> {full tensor index: (bidegree, position)}
    slots: Dict[CubeVertex, Dict[int, Tuple[Bidegree, int]]] = {}
    sources: Dict[CubeVertex, List[TensorGenerator]] = {}

    for v in cube.vertices:
        resolution = cube.resolutions[v]
        generators = tensor_basis(resolution.n_circles)
        if reduced:
            generators = [g for g in generators if g.labels[resolution.marked_circle] == PLUS]
        sources[v] = generators
        slots[v] = {}
        for g in generators:
            shown = g.replaced(resolution.marked_circle, ONE) if reduced else g
            key = _gradings(v.weight, shown.q_weight, n, n_plus, n_minus, direction)
            basis = blocks.setdefault(key, [])
            slots[v][basis_index(g)] = (key, len(basis))
            basis.append((v, shown))

    values: Dict[Bidegree, Dict[Tuple[int, int], int]] = {}
    for e in cube.edges:
        sign = -1 if rule(e.source, e.target) else 1
        cobordism = e.reversed() if direction == INCREASING else e
        src, tgt = cobordism.source, cobordism.target
        matrix = edge_map(cobordism, sources[src])
        marked = cube.resolutions[tgt].marked_circle
        target_basis = tensor_basis(cube.resolutions[tgt].n_circles)
        for row, col, value in matrix.entries:
            image = target_basis[row]
            if reduced and image.labels[marked] == MINUS:
                continue
            key_s, pos_s = slots[src][basis_index(sources[src][col])]
            key_t, pos_t = slots[tgt][row]
            if key_t != (key_s[0] + 1, key_s[1]):
                raise ContractError(f"Edge {e.source}->{e.target} breaks the bigrading")
            block = values.setdefault(key_s, {})
            block[(pos_t, pos_s)] = block.get((pos_t, pos_s), 0) + sign * value

    differentials: Dict[Bidegree, SparseIntMatrix] = {}
    for (h, q), basis in blocks.items():
        target = blocks.get((h + 1, q))
        if target is None:
            continue
        differentials[(h, q)] = SparseIntMatrix.from_dict(
            len(target), len(basis), values.get((h, q), {}), modulus=ring.characteristic
        )

    logger.info(
        f"Built {variant} {direction} complex: {sum(len(b) for b in blocks.values())} generators "
        f"in {len(blocks)} blocks over {ring}"
    )
    return BigradedComplex(
        blocks={key: tuple(basis) for key, basis in sorted(blocks.items())},
        differentials=dict(sorted(differentials.items())),
        ring=ring,
        variant=variant,
        rule=rule,
        direction=direction,
        diagram_hash=diagram_hash(d),
    )


# ---------------------------------------------------------------------------
# d∘d and the Z/4 collapse
# ---------------------------------------------------------------------------

def _composite_vanishes(task: Tuple[SparseIntMatrix, SparseIntMatrix, Ring]) -> bool:
    first, second, ring = task
    domain = ring.domain() if ring.kind == "Fp" else INTEGERS.domain()
    product = second.to_domain_matrix(domain) * first.to_domain_matrix(domain)
    return product.is_zero_matrix


def verify_d_squared(c: BigradedComplex, workers: int = 1) -> bool:
    """True iff every composite d_{h+1,q} ∘ d_{h,q} vanishes."""
    tasks = [
        (first, c.differentials[(h + 1, q)], c.ring)
        for (h, q), first in c.differentials.items()
        if (h + 1, q) in c.differentials and not first.is_zero
    ]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            return all(executor.map(_composite_vanishes, tasks))
    return all(_composite_vanishes(t) for t in tasks)


@dataclass(frozen=True)
class Z4Table:
    """Homology ranks binned mod 4, by bigrading and by per-vertex shifts."""

    from_bigrading: Dict[int, int]
    from_vertices: Dict[int, int]
    blocks_consistent: bool = True

    @property
    def ranks(self) -> Dict[int, int]:
        return self.from_bigrading

    @property
    def agree(self) -> bool:
        return self.blocks_consistent and self.from_bigrading == self.from_vertices

    @property
    def total_rank(self) -> int:
        return sum(self.from_bigrading.values())

    def to_json(self) -> dict:
        return {
            "from_bigrading": {str(k): v for k, v in sorted(self.from_bigrading.items())},
            "from_vertices": {str(k): v for k, v in sorted(self.from_vertices.items())},
            "agree": self.agree,
        }


def z4_collapse(h: "BigradedHomology", d: PlanarDiagram) -> Z4Table:
    """
    Re-bin homology ranks by (q - h - b0) mod 4 and cross-check per vertex.

    The second binning builds the decreasing-mode complex (of ``d``, or of its
    mirror when ``h`` was computed in increasing mode) and gives each generator
    at vertex v the class (tqft_degree - k_v) mod 4 with
    k_v = -b0(K_v) + b0(K) - N- + N+. Every homology block inherits the class
    shared by its generators.

    Raises:
        ContractError: for integer or reduced homology
    """
    if not h.ring.is_field:
        raise ContractError("z4_collapse needs homology over a field")
    if h.variant != "unreduced":
        raise ContractError("z4_collapse is defined for unreduced homology")

    b0 = count_components(d)
    from_bigrading: Dict[int, int] = {}
    for (hh, q), group in h.groups.items():
        cls = (q - hh - b0) % 4
        from_bigrading[cls] = from_bigrading.get(cls, 0) + group.free

    source = d if h.direction == DECREASING else mirror(d)
    n_plus, n_minus = writhe_counts(source)
    chain = build_complex(source, "unreduced", SignRule(), h.ring, DECREASING)
    block_class: Dict[Bidegree, int] = {}
    consistent = True
    for key, basis in chain.blocks.items():
        classes = {(g.tqft_degree - (-g.n_factors + b0 - n_minus + n_plus)) % 4 for _, g in basis}
        if len(classes) != 1:
            consistent = False
            logger.warning(f"Block {key} mixes Z/4 classes {sorted(classes)}")
        block_class[key] = min(classes)

    from_vertices: Dict[int, int] = {}
    for key, group in h.groups.items():
        if key not in block_class:
            consistent = False
            continue
        cls = block_class[key]
        from_vertices[cls] = from_vertices.get(cls, 0) + group.free

    return Z4Table(
        from_bigrading=dict(sorted(from_bigrading.items())),
        from_vertices=dict(sorted(from_vertices.items())),
        blocks_consistent=consistent,
    )
