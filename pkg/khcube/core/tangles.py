"""
Diagrams built from Conway notation, signed Tait graphs and braid words.

Algebraic knots come from Conway's notation: ``2112`` is a rational knot and
``3,21,2+`` a Montesinos sum. Polyhedral knots come from a plane graph whose
edges carry signs: the medial construction puts one crossing on every edge.
Both routes and :func:`braid_closure` end in validated, oriented PD codes.

Notation strings carry a prefix:

    conway:3,21,2+          Montesinos sum of 3, 21 and 2 plus a +1 twist
    tait:1 2 3|-1 4 5|...   vertices separated by '|', each listing its edge
                            ids counterclockwise; a negative id is a negative
                            edge and carries the same sign at both ends
    braid:1,1,-2,1,-2       braid word, strands default to the largest letter + 1

Usage:
    from khcube.core.tangles import conway_knot, diagram_from_notation

    figure_eight = conway_knot("22")
    torus = diagram_from_notation("conway:3,3,-2")   # the (3,4) torus knot
"""

from __future__ import annotations

import itertools
import logging
import re
from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple

from khcube.core.diagram import (
    PDTuple,
    PlanarDiagram,
    braid_closure,
    orient_crossings,
    validate,
)
from khcube.core.errors import ContractError, DiagramError

logger = logging.getLogger(__name__)

NOTATION_PREFIXES = ("conway", "tait", "braid")

# Arc ids are global so that tangles built separately never share one
_arc_ids = itertools.count(1)


@dataclass(frozen=True)
class Tangle:
    """A two-string tangle in a disk with ends NW, NE, SW, SE.

    Crossing tuples list arc ids counterclockwise with the under strand through
    slots 0 and 2, direction not fixed. ``joins`` records arc ids that name the
    same arc after gluing.
    """

    crossings: Tuple[PDTuple, ...]
    ends: Tuple[int, int, int, int]  # NW, NE, SW, SE
    joins: Tuple[Tuple[int, int], ...] = ()

    @property
    def nw(self) -> int:
        return self.ends[0]

    @property
    def ne(self) -> int:
        return self.ends[1]

    @property
    def sw(self) -> int:
        return self.ends[2]

    @property
    def se(self) -> int:
        return self.ends[3]


def _fresh(n: int) -> List[int]:
    return [next(_arc_ids) for _ in range(n)]


def zero_tangle() -> Tangle:
    """Two horizontal arcs, NW to NE and SW to SE."""
    top, bottom = _fresh(2)
    return Tangle((), (top, top, bottom, bottom))


def unit_tangle(sign: int = 1) -> Tangle:
    """One crossing; for ``sign=1`` the over strand runs SW to NE."""
    nw, ne, sw, se = _fresh(4)
    crossing = (nw, sw, se, ne) if sign > 0 else (sw, se, ne, nw)
    return Tangle((crossing,), (nw, ne, sw, se))


def add(left: Tangle, right: Tangle) -> Tangle:
    """Place ``right`` east of ``left``, gluing NE to NW and SE to SW."""
    joins = left.joins + right.joins + ((left.ne, right.nw), (left.se, right.sw))
    return Tangle(left.crossings + right.crossings, (left.nw, right.ne, left.sw, right.se), joins)


def reflect(t: Tangle) -> Tangle:
    """Mirror in the NW-SE diagonal; NE and SW trade places and crossings keep their over strands."""
    crossings = tuple((a, d, c, b) for a, b, c, d in t.crossings)
    return Tangle(crossings, (t.nw, t.sw, t.ne, t.se), t.joins)


def negate(t: Tangle) -> Tangle:
    """Change every crossing."""
    crossings = tuple((b, c, d, a) for a, b, c, d in t.crossings)
    return Tangle(crossings, t.ends, t.joins)


def integer_tangle(n: int) -> Tangle:
    """``|n|`` horizontal twists of sign ``n``."""
    if n == 0:
        return zero_tangle()
    result = unit_tangle(1 if n > 0 else -1)
    for _ in range(abs(n) - 1):
        result = add(result, unit_tangle(1 if n > 0 else -1))
    return result


def rational_tangle(terms: Sequence[int]) -> Tangle:
    """Conway product ``a1 a2 ... an``: reflect what is built so far, then add ``ai`` twists."""
    if not terms:
        raise ContractError("A rational tangle needs at least one term")
    result = integer_tangle(terms[0])
    for n in terms[1:]:
        result = add(reflect(result), integer_tangle(n))
    return result


def tangle_fraction(terms: Sequence[int]) -> Tuple[int, int]:
    """Fraction ``(p, q)`` of the rational tangle, as a continued fraction of ``terms``."""
    p, q = terms[0], 1
    for n in terms[1:]:
        p, q = n * p + q, p
    return p, q


def numerator_closure(t: Tangle) -> PlanarDiagram:
    """Join NW to NE and SW to SE and orient the result."""
    return _close(t.crossings, t.joins + ((t.nw, t.ne), (t.sw, t.se)), extra_arcs=t.ends)


def _close(
    raw: Sequence[Sequence[int]],
    joins: Iterable[Tuple[int, int]],
    extra_arcs: Iterable[int] = (),
) -> PlanarDiagram:
    parent: Dict[int, int] = {}

    def find(x: int) -> int:
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x, y in joins:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    merged = [tuple(find(x) for x in crossing) for crossing in raw]
    used = {x for crossing in merged for x in crossing}
    candidates = list(parent) + list(extra_arcs)
    arcs = {find(x) for x in candidates}
    free_loops = len(arcs - used)

    crossings, _ = orient_crossings(merged)
    diagram = PlanarDiagram.from_crossings(crossings, free_loops=free_loops)
    report = validate(diagram)
    if not report.ok:
        raise ContractError(f"Construction produced an invalid diagram: {report}")
    return diagram


# ---------------------------------------------------------------------------
# Conway notation
# ---------------------------------------------------------------------------

_ENTRY = re.compile(r"-?\d+")


def _terms(entry: str) -> List[int]:
    sign = -1 if entry.startswith("-") else 1
    return [sign * int(ch) for ch in entry.lstrip("-")]


def _entry_tangle(entry: str) -> Tangle:
    tangle = rational_tangle([int(ch) for ch in entry.lstrip("-")])
    return negate(tangle) if entry.startswith("-") else tangle


def _split(notation: str) -> Tuple[List[str], str]:
    text = notation.replace(" ", "")
    body = text.rstrip("+-")
    entries = body.split(",")
    if not body or not all(_ENTRY.fullmatch(entry) for entry in entries):
        raise DiagramError(f"Malformed Conway notation '{notation}'")
    return entries, text[len(body):]


def conway_knot(notation: str) -> PlanarDiagram:
    """
    Diagram of an algebraic knot in Conway notation.

    ``a1a2...an`` (one digit per term) is the numerator closure of a rational
    tangle. Comma-separated entries form a Montesinos sum: every entry is a
    rational tangle turned by the ``0`` product, and each trailing ``+`` or
    ``-`` adds one more twist of that sign. A leading ``-`` negates an entry.

    Args:
        notation: Conway notation, e.g. ``"2112"``, ``"3,21,2+"`` or ``"3,3,-2"``

    Returns:
        Validated PlanarDiagram

    Raises:
        DiagramError: on malformed notation
    """
    entries, tail = _split(notation)
    if len(entries) == 1 and not tail:
        tangle = _entry_tangle(entries[0])
    else:
        tangle = reflect(_entry_tangle(entries[0]))
        for entry in entries[1:]:
            tangle = add(tangle, reflect(_entry_tangle(entry)))
        for sign in tail:
            tangle = add(tangle, unit_tangle(1 if sign == "+" else -1))

    diagram = numerator_closure(tangle)
    logger.debug(f"Conway notation {notation}: {diagram.n_crossings} crossings")
    return diagram


def montesinos_determinant(notation: str) -> int:
    """Determinant of a Conway-notation knot, from the tangle fractions alone.

    The numerator closure of a sum of tangles with fractions ``p_i/q_i`` has
    determinant ``|sum_i p_i prod_{j != i} q_j|``.
    """
    entries, tail = _split(notation)
    if len(entries) == 1 and not tail:
        return abs(tangle_fraction(_terms(entries[0]))[0])
    fractions = []
    for entry in entries:
        p, q = tangle_fraction(_terms(entry))
        fractions.append((q, p))  # the 0 product inverts the fraction
    fractions.extend((1 if sign == "+" else -1, 1) for sign in tail)
    total = 0
    for i, (p, _) in enumerate(fractions):
        product = p
        for j, (_, q) in enumerate(fractions):
            if j != i:
                product *= q
        total += product
    return abs(total)


# ---------------------------------------------------------------------------
# Tait graphs
# ---------------------------------------------------------------------------

def parse_tait(text: str) -> List[List[int]]:
    """Rotation system from ``"1 2 3|-1 4 5|..."``."""
    vertices = []
    for block in text.split("|"):
        try:
            ids = [int(x) for x in block.replace(",", " ").split()]
        except ValueError:
            raise DiagramError(f"Malformed Tait graph '{text}'") from None
        if not ids:
            raise DiagramError(f"Empty vertex in Tait graph '{text}'")
        vertices.append(ids)
    return vertices


def tait_diagram(vertices: Sequence[Sequence[int]]) -> PlanarDiagram:
    """
    Medial diagram of a plane graph with signed edges.

    Every vertex lists its edge ids counterclockwise, and every edge id occurs
    exactly twice with one sign. Each edge becomes a crossing whose four arcs
    are the corners beside it at both ends. Positive edges put the over strand
    through the two corners that come just before the edge in the rotations
    at its ends. When every edge is positive the diagram is
    alternating and its determinant counts the spanning trees of the graph.

    Args:
        vertices: Rotation system, e.g. ``[[1, 2, 3], [1, 3, 2]]`` for a theta graph

    Returns:
        Validated PlanarDiagram with one crossing per edge

    Raises:
        DiagramError: when an edge id occurs other than twice or with mixed signs
    """
    corner: Dict[Tuple[int, int], int] = {}
    ends: Dict[int, List[Tuple[int, int]]] = {}
    signs: Dict[int, int] = {}
    for v, rotation in enumerate(vertices):
        for k, signed in enumerate(rotation):
            corner[(v, k)] = len(corner) + 1
            edge = abs(signed)
            if edge == 0:
                raise DiagramError("Tait edge ids must be nonzero")
            sign = 1 if signed > 0 else -1
            if signs.setdefault(edge, sign) != sign:
                raise DiagramError(f"Tait edge {edge} carries both signs")
            ends.setdefault(edge, []).append((v, k))

    raw: List[PDTuple] = []
    for edge in sorted(ends):
        if len(ends[edge]) != 2:
            raise DiagramError(f"Tait edge {edge} occurs {len(ends[edge])} time(s), expected 2")
        (u, i), (w, j) = ends[edge]
        nw = corner[(u, i)]
        sw = corner[(u, (i - 1) % len(vertices[u]))]
        ne = corner[(w, (j - 1) % len(vertices[w]))]
        se = corner[(w, j)]
        raw.append((nw, sw, se, ne) if signs[edge] > 0 else (sw, se, ne, nw))
    return _close(raw, ())


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------

def diagram_from_notation(text: str) -> PlanarDiagram:
    """Build a diagram from a ``conway:``, ``tait:`` or ``braid:`` string."""
    prefix, sep, body = text.strip().partition(":")
    if not sep or prefix not in NOTATION_PREFIXES:
        raise DiagramError(f"Unknown notation '{text}' (use one of {', '.join(NOTATION_PREFIXES)})")
    if prefix == "conway":
        return conway_knot(body)
    if prefix == "tait":
        return tait_diagram(parse_tait(body))
    try:
        word = [int(x) for x in body.replace(",", " ").split()]
    except ValueError:
        raise DiagramError(f"Malformed braid word '{body}'") from None
    return braid_closure(word)
