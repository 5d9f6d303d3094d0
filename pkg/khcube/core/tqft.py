"""
The rank-2 Frobenius algebra V = <v+, v->.

``m`` merges two circles, ``delta`` splits one, ``sigma = m o delta`` is the
nilpotent degree-2 operator, and ``reduce`` takes the quotient by v- in a
marked factor. Generators are label tuples: +1 for v+, -1 for v-, and 0 for
the generator of Z that replaces a collapsed marked factor.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Sequence, Tuple, Union

from khcube.core.cube import MERGE, EdgeCobordism
from khcube.core.errors import ContractError
from khcube.homalg.matrices import SparseIntMatrix

PLUS = 1
MINUS = -1
ONE = 0

_SYMBOLS = {PLUS: "v+", MINUS: "v-", ONE: "1"}

# m and delta on labels
_MERGE_TABLE: Dict[Tuple[int, int], Tuple[Tuple[int, int], ...]] = {
    (PLUS, PLUS): ((PLUS, 1),),
    (PLUS, MINUS): ((MINUS, 1),),
    (MINUS, PLUS): ((MINUS, 1),),
    (MINUS, MINUS): (),
}
_SPLIT_TABLE: Dict[int, Tuple[Tuple[Tuple[int, int], int], ...]] = {
    PLUS: (((MINUS, PLUS), 1), ((PLUS, MINUS), 1)),
    MINUS: (((MINUS, MINUS), 1),),
}
_SIGMA_TABLE: Dict[int, Tuple[Tuple[int, int], ...]] = {
    PLUS: ((MINUS, 2),),
    MINUS: (),
}


@dataclass(frozen=True, order=True)
class TensorGenerator:
    """A pure tensor of preferred generators, one label per circle."""

    labels: Tuple[int, ...]

    @property
    def q_weight(self) -> int:
        return sum(self.labels)

    @property
    def tqft_degree(self) -> int:
        """Z/4 degree: v+ in degree 0, v- in degree -2."""
        return (-2 * self.labels.count(MINUS)) % 4

    @property
    def n_factors(self) -> int:
        return len(self.labels)

    def replaced(self, position: int, label: int) -> "TensorGenerator":
        labels = list(self.labels)
        labels[position] = label
        return TensorGenerator(tuple(labels))

    def __str__(self) -> str:
        return "⊗".join(_SYMBOLS[x] for x in self.labels) or "1"


V_PLUS = TensorGenerator((PLUS,))
V_MINUS = TensorGenerator((MINUS,))


@dataclass(frozen=True)
class ModuleElement:
    """A finite integer combination of TensorGenerators with no zero terms."""

    terms: Dict[TensorGenerator, int] = field(default_factory=dict)

    @classmethod
    def of(cls, pairs: Iterable[Tuple[TensorGenerator, int]]) -> "ModuleElement":
        terms: Dict[TensorGenerator, int] = {}
        for generator, coefficient in pairs:
            terms[generator] = terms.get(generator, 0) + coefficient
        return cls({g: c for g, c in sorted(terms.items()) if c})

    @classmethod
    def from_generator(cls, g: TensorGenerator, coefficient: int = 1) -> "ModuleElement":
        return cls.of([(g, coefficient)])

    def coefficient(self, g: TensorGenerator) -> int:
        return self.terms.get(g, 0)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "ModuleElement") -> "ModuleElement":
        return ModuleElement.of(itertools.chain(self.terms.items(), other.terms.items()))

    def __rmul__(self, scalar: int) -> "ModuleElement":
        return ModuleElement.of((g, scalar * c) for g, c in self.terms.items())

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}·{g}" if c != 1 else str(g) for g, c in self.terms.items())


Elementish = Union[TensorGenerator, ModuleElement]


def _as_element(x: Elementish) -> ModuleElement:
    return ModuleElement.from_generator(x) if isinstance(x, TensorGenerator) else x


def _check_factors(element: ModuleElement, n: int, name: str) -> None:
    for g in element.terms:
        if g.n_factors != n:
            raise ContractError(f"{name} expects {n} tensor factor(s), got {g}")


def m(x: Elementish) -> ModuleElement:
    """Multiplication V ⊗ V -> V, extended linearly."""
    element = _as_element(x)
    _check_factors(element, 2, "m")
    return ModuleElement.of(
        (TensorGenerator((label,)), c * k)
        for g, c in element.terms.items()
        for label, k in _MERGE_TABLE[g.labels]
    )


def delta(x: Elementish) -> ModuleElement:
    """Comultiplication V -> V ⊗ V, extended linearly."""
    element = _as_element(x)
    _check_factors(element, 1, "delta")
    return ModuleElement.of(
        (TensorGenerator(pair), c * k)
        for g, c in element.terms.items()
        for pair, k in _SPLIT_TABLE[g.labels[0]]
    )


def sigma(x: Elementish) -> ModuleElement:
    """The degree-2 operator: sigma(v+) = 2 v-, sigma(v-) = 0."""
    element = _as_element(x)
    _check_factors(element, 1, "sigma")
    return sigma_on_factor(element, 0)


def sigma_on_factor(x: Elementish, position: int) -> ModuleElement:
    """Apply sigma to tensor factor ``position`` of V^{⊗n}."""
    element = _as_element(x)
    return ModuleElement.of(
        (g.replaced(position, label), c * k)
        for g, c in element.terms.items()
        for label, k in _SIGMA_TABLE[g.labels[position]]
    )


def evaluate_closed_surface(genera: Sequence[int]) -> int:
    """A closed surface evaluates to 2 per torus and 0 if any component is not a torus."""
    value = 1
    for genus in genera:
        value *= 2 if genus == 1 else 0
    return value


def reduce(x: Elementish, marked_factor: int) -> ModuleElement:
    """Quotient by v- in the marked factor (0-based); survivors carry label 0 there."""
    element = _as_element(x)
    return ModuleElement.of(
        (g.replaced(marked_factor, ONE), c)
        for g, c in element.terms.items()
        if g.labels[marked_factor] == PLUS
    )


def tensor_basis(n: int) -> List[TensorGenerator]:
    """Canonical basis of V^{⊗n}: product order with v+ before v-."""
    return [TensorGenerator(labels) for labels in itertools.product((PLUS, MINUS), repeat=n)]


def basis_index(g: TensorGenerator) -> int:
    """Position of a ±-labelled generator in :func:`tensor_basis`."""
    index = 0
    for label in g.labels:
        index = 2 * index + (1 if label == MINUS else 0)
    return index


def permutation_matrix(perm: Sequence[int], n: int) -> SparseIntMatrix:
    """Matrix moving tensor factor ``i`` to position ``perm[i]`` on V^{⊗n}."""
    if sorted(perm) != list(range(n)):
        raise ContractError(f"{list(perm)} is not a permutation of {n} factors")
    entries = []
    for g in tensor_basis(n):
        image = [PLUS] * n
        for i, label in enumerate(g.labels):
            image[perm[i]] = label
        entries.append((basis_index(TensorGenerator(tuple(image))), basis_index(g), 1))
    return SparseIntMatrix.from_entries(2 ** n, 2 ** n, entries)


def edge_map(e: EdgeCobordism, from_basis: Sequence[TensorGenerator]) -> SparseIntMatrix:
    """
    Unsigned matrix of the pair-of-pants map of a cube edge.

    Columns follow ``from_basis``; rows index the canonical basis of the target
    resolution. Bystander circles are carried along by the edge's circle
    correspondence, which composes m or delta with the needed factor permutations.

    Raises:
        ContractError: if a basis element has the wrong number of factors
    """
    n_source = e.n_source_circles
    n_target = e.n_target_circles
    entries = []
    for col, g in enumerate(from_basis):
        if g.n_factors != n_source or ONE in g.labels:
            raise ContractError(
                f"Basis element {g} does not fit a {n_source}-circle resolution"
            )
        image = [PLUS] * n_target
        for source, target in e.bystanders:
            image[target] = g.labels[source]
        if e.kind == MERGE:
            i, j = e.inputs
            for label, k in _MERGE_TABLE[(g.labels[i], g.labels[j])]:
                image[e.outputs[0]] = label
                entries.append((basis_index(TensorGenerator(tuple(image))), col, k))
        else:
            first, second = e.outputs
            for (a, b), k in _SPLIT_TABLE[g.labels[e.inputs[0]]]:
                image[first] = a
                image[second] = b
                entries.append((basis_index(TensorGenerator(tuple(image))), col, k))
    return SparseIntMatrix.from_entries(2 ** n_target, len(from_basis), entries)


def on_factors(x: Elementish, position: int, width: int, fn) -> ModuleElement:
    """Apply ``fn`` to the ``width`` factors starting at ``position``, the identity elsewhere."""
    element = _as_element(x)
    pairs = []
    for g, c in element.terms.items():
        if position < 0 or position + width > g.n_factors:
            raise ContractError(f"Factors {position}..{position + width - 1} do not fit {g}")
        head, tail = g.labels[:position], g.labels[position + width:]
        local = TensorGenerator(g.labels[position:position + width])
        for image, k in fn(local).terms.items():
            pairs.append((TensorGenerator(head + image.labels + tail), c * k))
    return ModuleElement.of(pairs)


def swap(x: Elementish) -> ModuleElement:
    """Exchange the two factors of V ⊗ V."""
    element = _as_element(x)
    _check_factors(element, 2, "swap")
    return ModuleElement.of((TensorGenerator(g.labels[::-1]), c) for g, c in element.terms.items())


def frobenius_identities() -> Dict[str, bool]:
    """
    Check the Frobenius algebra axioms of V on every basis element.

    Associativity runs over V^{⊗3}, the Frobenius relation over V^{⊗2} in both
    of its forms, and coassociativity over V.

    Returns:
        Identity name -> holds
    """
    checks = {
        "associativity": all(
            m(on_factors(g, 0, 2, m)) == m(on_factors(g, 1, 2, m)) for g in tensor_basis(3)
        ),
        "coassociativity": all(
            on_factors(delta(g), 0, 1, delta) == on_factors(delta(g), 1, 1, delta) for g in tensor_basis(1)
        ),
        "commutativity": all(m(swap(g)) == m(g) for g in tensor_basis(2)),
        "cocommutativity": all(swap(delta(g)) == delta(g) for g in tensor_basis(1)),
        "frobenius": all(
            delta(m(g)) == on_factors(on_factors(g, 1, 1, delta), 0, 2, m)
            == on_factors(on_factors(g, 0, 1, delta), 1, 2, m)
            for g in tensor_basis(2)
        ),
        "handle": all(m(delta(g)) == sigma(g) for g in tensor_basis(1)),
    }
    return checks
