"""
Planar diagrams given as PD codes.

A crossing ``X[a,b,c,d]`` lists its four edge labels counterclockwise, starting
from the incoming under-strand ``a``. Edges carry labels 1..2N; every label
occurs exactly twice. Components are recovered by walking through crossings:
a strand arriving at slot ``s`` leaves from slot ``s+2``.

Usage:
    from khcube.core.diagram import parse_pd, writhe_counts

    trefoil = parse_pd("PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]")
    writhe_counts(trefoil)   # (0, 3)
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from khcube.core.errors import ContractError, DiagramError

logger = logging.getLogger(__name__)

PDTuple = Tuple[int, int, int, int]
Dart = Tuple[int, int]  # (crossing index, slot)


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of :func:`validate`; defects are data, not failures."""

    defects: Tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.defects

    def __str__(self) -> str:
        return "ok" if self.ok else "; ".join(self.defects)


@dataclass(frozen=True)
class _Orientation:
    components: Tuple[Tuple[int, ...], ...]
    over_in: Dict[int, int]           # crossing -> slot (1 or 3) where the over strand arrives
    defects: Tuple[str, ...] = ()


@dataclass(frozen=True)
class PlanarDiagram:
    """A link diagram with N crossings over 2N oriented edge labels.

    ``components`` holds the cyclic edge order of every component that meets a
    crossing, each rotated to start at its smallest label. ``free_loops`` counts
    split crossingless unknots (the ``U<n>`` shorthand). The marked component for
    the reduced theory is ``base_component``; indices past the edge-carrying
    components refer to free loops.
    """

    crossings: Tuple[PDTuple, ...]
    components: Tuple[Tuple[int, ...], ...] = ()
    free_loops: int = 0
    base_component: int = 0

    @classmethod
    def from_crossings(
        cls,
        crossings: Iterable[Sequence[int]],
        free_loops: int = 0,
        base_component: Optional[int] = None,
    ) -> "PlanarDiagram":
        """Build a diagram, inferring components by strand traversal.

        No validation happens here; malformed input yields a diagram whose
        defects :func:`validate` reports.
        """
        tuples = tuple(tuple(int(x) for x in c) for c in crossings)
        components: Tuple[Tuple[int, ...], ...] = ()
        if _label_counts_ok(tuples):
            components = _orient(tuples).components
        if base_component is None:
            base_component = 0
        return cls(tuples, components, free_loops, base_component)  # type: ignore[arg-type]

    @property
    def n_crossings(self) -> int:
        return len(self.crossings)

    @property
    def n_components(self) -> int:
        return len(self.components) + self.free_loops

    @property
    def labels(self) -> List[int]:
        return sorted({x for c in self.crossings for x in c})

    def marked_edge(self) -> int:
        """Distinguished edge of the marked component.

        Free loop ``k`` has the pseudo-label ``-(k+1)``.
        """
        if not 0 <= self.base_component < self.n_components:
            raise ContractError(
                f"base_component={self.base_component} out of range for "
                f"{self.n_components} components"
            )
        if self.base_component < len(self.components):
            return min(self.components[self.base_component])
        return -(self.base_component - len(self.components) + 1)

    def with_base_component(self, index: int) -> "PlanarDiagram":
        """Copy of the diagram with a different marked component."""
        if not 0 <= index < self.n_components:
            raise ContractError(f"No component {index} in a {self.n_components}-component diagram")
        return PlanarDiagram(self.crossings, self.components, self.free_loops, index)

    @cached_property
    def orientation(self) -> _Orientation:
        if not _label_counts_ok(self.crossings):
            raise ContractError(f"Diagram is not valid: {validate(self)}")
        return _orient(self.crossings)

    def __str__(self) -> str:
        return render_pd(self)


# ---------------------------------------------------------------------------
# Parsing and rendering
# ---------------------------------------------------------------------------

class _Scanner:
    """Whitespace-insensitive cursor over a PD string."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def at_end(self) -> bool:
        self._skip()
        return self.pos >= len(self.text)

    def peek(self, literal: str) -> bool:
        self._skip()
        return self.text.startswith(literal, self.pos)

    def expect(self, literal: str) -> None:
        if not self.peek(literal):
            self.fail(f"expected '{literal}'")
        self.pos += len(literal)

    def integer(self) -> int:
        self._skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.fail("expected a decimal integer")
        return int(self.text[start:self.pos])

    def fail(self, what: str) -> None:
        raise DiagramError(f"syntax error at position {self.pos}: {what}", position=self.pos)


def parse_pd(text: str) -> PlanarDiagram:
    """
    Parse a PD code or the unlink shorthand ``U<n>``.

    Grammar: ``PD[X[i,j,k,l](,X[i,j,k,l])*]`` optionally followed by ``U<n>``
    for extra split unknots, or ``U<n>`` alone.

    Args:
        text: PD-notation string

    Returns:
        Validated PlanarDiagram with crossings in order of appearance

    Raises:
        DiagramError: on a syntax error (with position) or a failed validation
    """
    scanner = _Scanner(text)
    crossings: List[PDTuple] = []
    free_loops = 0

    if scanner.peek("PD"):
        scanner.expect("PD")
        scanner.expect("[")
        while True:
            scanner.expect("X")
            scanner.expect("[")
            labels = [scanner.integer()]
            for _ in range(3):
                scanner.expect(",")
                labels.append(scanner.integer())
            scanner.expect("]")
            crossings.append(tuple(labels))  # type: ignore[arg-type]
            if scanner.peek(","):
                scanner.expect(",")
                continue
            break
        scanner.expect("]")
        if scanner.peek("U"):
            scanner.expect("U")
            free_loops = scanner.integer()
    elif scanner.peek("U"):
        scanner.expect("U")
        free_loops = scanner.integer()
    else:
        scanner.fail("expected 'PD[' or 'U<n>'")

    if not scanner.at_end():
        scanner.fail("unexpected trailing input")

    diagram = PlanarDiagram.from_crossings(crossings, free_loops=free_loops)
    report = validate(diagram)
    if not report.ok:
        raise DiagramError(f"invalid diagram: {report}", report=report)
    logger.debug(f"Parsed {diagram.n_crossings}-crossing diagram, {diagram.n_components} components")
    return diagram


def render_pd(d: PlanarDiagram) -> str:
    """Canonical text form; ``parse_pd(render_pd(d)) == d`` for normalized diagrams."""
    if not d.crossings:
        return f"U{d.free_loops}"
    body = ",".join("X[" + ",".join(str(x) for x in c) + "]" for c in d.crossings)
    text = f"PD[{body}]"
    if d.free_loops:
        text += f" U{d.free_loops}"
    return text


# ---------------------------------------------------------------------------
# Traversal
# ---------------------------------------------------------------------------

def _label_counts_ok(crossings: Sequence[Sequence[int]]) -> bool:
    if any(len(c) != 4 for c in crossings):
        return False
    return all(n == 2 for n in Counter(x for c in crossings for x in c).values())


def _occurrences(crossings: Sequence[Sequence[int]]) -> Dict[int, List[Dart]]:
    occ: Dict[int, List[Dart]] = {}
    for ci, crossing in enumerate(crossings):
        for slot, label in enumerate(crossing):
            occ.setdefault(label, []).append((ci, slot))
    return occ


def _other_end(occ: Dict[int, List[Dart]], label: int, dart: Dart) -> Dart:
    first, second = occ[label]
    return second if first == dart else first


def _walk(crossings: Sequence[Sequence[int]], occ: Dict[int, List[Dart]], arrival: Dart):
    """Follow a strand from an arrival dart until it closes up.

    Returns the labels met in order and the arrival darts, one per label.
    """
    labels: List[int] = []
    arrivals: List[Dart] = []
    current = arrival
    while True:
        ci, slot = current
        labels.append(crossings[ci][slot])
        arrivals.append(current)
        exit_slot = (slot + 2) % 4
        current = _other_end(occ, crossings[ci][exit_slot], (ci, exit_slot))
        if current == arrival:
            return labels, arrivals


def _orient(crossings: Sequence[Sequence[int]]) -> _Orientation:
    occ = _occurrences(crossings)
    seen: set = set()
    components: List[Tuple[int, ...]] = []
    over_in: Dict[int, int] = {}
    defects: List[str] = []

    for start in sorted(occ):
        if start in seen:
            continue
        labels, arrivals = _walk(crossings, occ, occ[start][0])
        under_slots = {slot for _, slot in arrivals if slot in (0, 2)}
        if under_slots == {0, 2}:
            defects.append(f"inconsistent traversal: component through edge {start}")
        reverse = False
        if under_slots == {2}:
            reverse = True
        elif not under_slots and len(labels) > 1 and labels[1] > labels[-1]:
            # all-over component: orient along increasing labels
            reverse = True
        if reverse:
            labels = [labels[0]] + labels[:0:-1]
            # arrivals of the reversed walk are the exits of the forward one
            arrivals = [(ci, (slot + 2) % 4) for ci, slot in arrivals]
        seen.update(labels)
        for ci, slot in arrivals:
            if slot in (1, 3):
                over_in[ci] = slot
        pivot = labels.index(min(labels))
        components.append(tuple(labels[pivot:] + labels[:pivot]))

    components.sort(key=min)
    return _Orientation(tuple(components), over_in, tuple(defects))


def faces(d: PlanarDiagram) -> List[Tuple[Dart, ...]]:
    """Faces of the projection as cycles of darts.

    A dart ``(c, s)`` leaves crossing ``c`` along slot ``s``; the face continues
    at the far end of that edge, turning to the next slot counterclockwise.
    The face of dart ``(c, s)`` occupies the corner between slots ``s-1`` and ``s``.
    """
    occ = _occurrences(d.crossings)
    remaining = {(ci, s) for ci in range(d.n_crossings) for s in range(4)}
    result: List[Tuple[Dart, ...]] = []
    for dart in sorted(remaining):
        if dart not in remaining:
            continue
        cycle = []
        current = dart
        while current in remaining:
            remaining.discard(current)
            cycle.append(current)
            ci, slot = current
            cj, t = _other_end(occ, d.crossings[ci][slot], current)
            current = (cj, (t + 1) % 4)
        result.append(tuple(cycle))
    return result


def projection_pieces(d: PlanarDiagram) -> int:
    """Number of connected pieces of the projection graph (crossings only)."""
    parent = list(range(d.n_crossings))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for darts in _occurrences(d.crossings).values():
        ends = {ci for ci, _ in darts}
        first = ends.pop()
        for other in ends:
            parent[find(other)] = find(first)
    return len({find(i) for i in range(d.n_crossings)})


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------

def validate(d: PlanarDiagram) -> ValidationReport:
    """Check every PlanarDiagram invariant and list what fails."""
    defects: List[str] = []

    for index, crossing in enumerate(d.crossings, start=1):
        if len(crossing) != 4:
            defects.append(f"bad tuple: crossing {index} has {len(crossing)} labels")
        elif any(x < 1 for x in crossing):
            defects.append(f"bad tuple: crossing {index} has a non-positive label")
    if d.free_loops < 0:
        defects.append(f"bad tuple: negative unlink count {d.free_loops}")
    if defects:
        return ValidationReport(tuple(defects))

    counts = Counter(x for c in d.crossings for x in c)
    for label in sorted(counts):
        if counts[label] > 2:
            defects.append(f"duplicate label: {label} occurs {counts[label]} times")
        if counts[label] % 2:
            defects.append(f"odd occurrence: label {label} occurs {counts[label]} time(s)")
    expected = set(range(1, 2 * d.n_crossings + 1))
    if not defects and set(counts) != expected:
        missing = sorted(expected - set(counts))
        defects.append(f"non-contiguous labels: missing {missing}")
    if defects:
        return ValidationReport(tuple(defects))

    orientation = _orient(d.crossings)
    defects.extend(orientation.defects)
    if d.components and d.components != orientation.components:
        defects.append("inconsistent traversal: stored components differ from strand traversal")

    if d.n_crossings:
        n_faces = len(faces(d))
        expected_faces = d.n_crossings + 2 * projection_pieces(d)
        if n_faces != expected_faces:
            defects.append(f"non-planar: {n_faces} faces, expected {expected_faces}")

    if not 0 <= d.base_component < max(d.n_components, 1):
        defects.append(f"bad tuple: base component {d.base_component} out of range")

    return ValidationReport(tuple(defects))


def crossing_signs(d: PlanarDiagram) -> Tuple[int, ...]:
    """Per-crossing signs: +1 when the over strand enters at slot d."""
    over_in = d.orientation.over_in
    return tuple(1 if over_in[ci] == 3 else -1 for ci in range(d.n_crossings))


def writhe_counts(d: PlanarDiagram) -> Tuple[int, int]:
    """Return ``(n_plus, n_minus)``."""
    signs = crossing_signs(d)
    n_plus = sum(1 for s in signs if s > 0)
    return n_plus, len(signs) - n_plus


def count_components(d: PlanarDiagram) -> int:
    return d.n_components


def is_alternating(d: PlanarDiagram) -> bool:
    """True when every component passes alternately under and over."""
    occ = _occurrences(d.crossings)
    for component in d.components:
        _, arrivals = _walk(d.crossings, occ, occ[component[0]][0])
        kinds = [slot % 2 for _, slot in arrivals]
        if len(kinds) > 1 and any(kinds[k] == kinds[k - 1] for k in range(len(kinds))):
            return False
    return True


def mirror(d: PlanarDiagram) -> PlanarDiagram:
    """Diagram of the mirror link.

    Each tuple is rotated so that the old incoming over-strand becomes the new
    incoming under-strand; this swaps the two smoothings of every crossing.
    """
    over_in = d.orientation.over_in if d.crossings else {}
    rotated = []
    for ci, (a, b, c, e) in enumerate(d.crossings):
        rotated.append((b, c, e, a) if over_in[ci] == 1 else (e, a, b, c))
    return PlanarDiagram(tuple(rotated), d.components, d.free_loops, d.base_component)


def orient_crossings(raw: Sequence[Sequence[int]]) -> Tuple[List[PDTuple], Dict[int, int]]:
    """
    Orient crossings whose tuples only fix the under strand.

    Each tuple must list its labels counterclockwise with the under strand
    through slots a and c, in either direction. Every component is oriented by
    its first under passage, tuples whose under strand is then traversed from
    slot c are rotated by two, and labels are renumbered 1..2N along the
    components.

    Returns:
        The oriented tuples and the map from old to new labels
    """
    occ = _occurrences(raw)
    flipped = [list(cr) for cr in raw]
    order: List[List[int]] = []
    seen: set = set()
    for start in sorted(occ):
        if start in seen:
            continue
        labels, arrivals = _walk(raw, occ, occ[start][0])
        under = [slot for _, slot in arrivals if slot in (0, 2)]
        if under and under[0] == 2:
            labels = [labels[0]] + labels[:0:-1]
            arrivals = [(ci, (s + 2) % 4) for ci, s in arrivals]
        for ci, slot in arrivals:
            if slot == 2:
                flipped[ci] = [raw[ci][2], raw[ci][3], raw[ci][0], raw[ci][1]]
        seen.update(labels)
        order.append(labels)

    relabel: Dict[int, int] = {}
    for labels in order:
        for x in labels:
            relabel[x] = len(relabel) + 1
    crossings = [tuple(relabel[x] for x in cr) for cr in flipped]
    return crossings, relabel  # type: ignore[return-value]


def smooth_crossing(d: PlanarDiagram, index: int, bit: int) -> PlanarDiagram:
    """
    Replace crossing ``index`` (1-based) by its 0- or 1-smoothing.

    The result is re-oriented where the joined strands disagree and relabelled
    1..2(N-1) along its components; loops that lose their last crossing become
    free loops.

    Args:
        d: Valid diagram
        index: Crossing to smooth, 1..N
        bit: 0 joins a~b and c~d, 1 joins a~d and b~c

    Returns:
        Diagram with N-1 crossings
    """
    if not 1 <= index <= d.n_crossings:
        raise ContractError(f"Crossing index {index} out of range 1..{d.n_crossings}")
    if bit not in (0, 1):
        raise ContractError(f"Smoothing bit must be 0 or 1, got {bit}")

    a, b, c, e = d.crossings[index - 1]
    joins = [(a, b), (c, e)] if bit == 0 else [(a, e), (b, c)]
    parent = {x: x for x in d.labels}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x, y in joins:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    rest = [tuple(find(x) for x in cr) for k, cr in enumerate(d.crossings) if k != index - 1]
    used = Counter(x for cr in rest for x in cr)
    classes = sorted({find(x) for x in d.labels})
    closed = [r for r in classes if used[r] == 0]

    crossings, relabel = orient_crossings(rest)

    free_loops = d.free_loops + len(closed)
    marked = d.marked_edge()
    child = PlanarDiagram.from_crossings(crossings, free_loops=free_loops)
    if marked < 0:
        base = len(child.components) + (-marked - 1)
    elif find(marked) in closed:
        base = len(child.components) + d.free_loops + closed.index(find(marked))
    else:
        new_label = relabel[find(marked)]
        base = next(i for i, comp in enumerate(child.components) if new_label in comp)
    logger.debug(f"Smoothed crossing {index} with bit {bit}: {render_pd(child)}")
    return child.with_base_component(base) if child.n_components else child


def braid_closure(word: Sequence[int], strands: Optional[int] = None) -> PlanarDiagram:
    """
    Closure of a braid word.

    Letter ``i`` crosses strands i and i+1 positively, ``-i`` negatively.
    Strands run upward and close up on the right; a strand no letter touches
    becomes a free loop.

    Args:
        word: Nonzero letters with |letter| < strands
        strands: Strand count (defaults to one more than the largest generator)

    Returns:
        Validated PlanarDiagram with one crossing per letter

    Example:
        braid_closure([-1]) == parse_pd("PD[X[1,2,2,1]]")
        writhe_counts(braid_closure([1, 1, 1]))  # (3, 0)
    """
    word = [int(x) for x in word]
    if any(x == 0 for x in word):
        raise ContractError("Braid letters must be nonzero")
    if strands is None:
        strands = max((abs(x) for x in word), default=0) + 1
    if any(abs(x) >= strands for x in word):
        raise ContractError(f"Braid letter out of range for {strands} strands")

    current = list(range(1, strands + 1))
    next_label = strands + 1
    raw: List[PDTuple] = []
    for letter in word:
        i = abs(letter) - 1
        # bottom-left a, bottom-right b, top-right e, top-left c; a -> e and b -> c
        a, b = current[i], current[i + 1]
        c, e = next_label, next_label + 1
        next_label += 2
        raw.append((b, e, c, a) if letter > 0 else (a, b, e, c))
        current[i], current[i + 1] = c, e

    closing = {final: start for start, final in enumerate(current, start=1) if final != start}
    free_loops = sum(1 for start, final in enumerate(current, start=1) if final == start)
    renamed = [tuple(closing.get(x, x) for x in crossing) for crossing in raw]
    relabel: Dict[int, int] = {}
    for crossing in renamed:
        for x in crossing:
            relabel.setdefault(x, len(relabel) + 1)
    crossings = [tuple(relabel[x] for x in crossing) for crossing in renamed]

    diagram = PlanarDiagram.from_crossings(crossings, free_loops=free_loops)
    report = validate(diagram)
    if not report.ok:
        raise ContractError(f"Braid closure produced an invalid diagram: {report}")
    return diagram
