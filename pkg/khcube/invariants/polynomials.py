"""
Jones and Alexander polynomials, computed without the cube machinery.

The Jones polynomial comes from a Kauffman-bracket state sum in the
unnormalized convention (the unknot is q + q^-1), so it should equal the
graded Euler characteristic of the unreduced complex. The Alexander
polynomial comes from Fox calculus on the Wirtinger presentation.
"""

from __future__ import annotations

import itertools
import logging
from typing import Dict, List, Sequence, Tuple

import sympy as sp
from sympy import ZZ
from sympy.polys.matrices import DomainMatrix

from khcube.core.diagram import PlanarDiagram, crossing_signs, writhe_counts
from khcube.core.errors import CapExceededError, ContractError

logger = logging.getLogger(__name__)

DEFAULT_ORACLE_CAP = 14

q, t = sp.symbols("q t")

Letter = Tuple[int, int]  # (generator, exponent ±1)


# ---------------------------------------------------------------------------
# Jones
# ---------------------------------------------------------------------------

def _state_loops(d: PlanarDiagram, state: Sequence[int]) -> int:
    """Loops of one Kauffman state, counted by joining labels directly."""
    parent: Dict[int, int] = {x: x for x in d.labels}

    def root(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (a, b, c, e), bit in zip(d.crossings, state):
        pairs = ((a, b), (c, e)) if bit == 0 else ((a, e), (b, c))
        for x, y in pairs:
            parent[root(x)] = root(y)
    return len({root(x) for x in parent})


def jones_oracle(d: PlanarDiagram, cap: int = DEFAULT_ORACLE_CAP) -> sp.Expr:
    """
    Unnormalized Jones polynomial by a direct state sum.

    Ĵ = (-1)^{N-} q^{N+ - 2N-} Σ_states (-q)^{|s|} (q + q^-1)^{loops(s)},
    times (q + q^-1) for every free loop.

    Args:
        d: Valid diagram
        cap: Largest crossing count accepted (the sum has 2^N terms)

    Returns:
        Expanded Laurent polynomial in ``q``

    Raises:
        CapExceededError: if the diagram has more than ``cap`` crossings

    Example:
        jones_oracle(parse_pd("U1"))  # q + 1/q
    """
    if d.n_crossings > cap:
        raise CapExceededError("crossing count", d.n_crossings, "oracle_cap", cap)
    n_plus, n_minus = writhe_counts(d)
    loop = q + 1 / q
    total = sp.Integer(0)
    for state in itertools.product((0, 1), repeat=d.n_crossings):
        total += (-q) ** sum(state) * loop ** _state_loops(d, state)
    result = (-1) ** n_minus * q ** (n_plus - 2 * n_minus) * total * loop ** d.free_loops
    return sp.expand(result)


def laurent_coefficients(expr: sp.Expr, var: sp.Symbol = q) -> Dict[int, int]:
    """Exponent -> integer coefficient of an expanded Laurent polynomial."""
    coefficients: Dict[int, int] = {}
    for term in sp.Add.make_args(sp.expand(expr)):
        if term == 0:
            continue
        coefficient, rest = term.as_coeff_Mul()
        if rest == 1:
            exponent = 0
        else:
            base, exponent = rest.as_base_exp()
            if base != var:
                raise ContractError(f"Unexpected term {term} in a polynomial in {var}")
        coefficients[int(exponent)] = coefficients.get(int(exponent), 0) + int(coefficient)
    return {e: c for e, c in sorted(coefficients.items()) if c}


def jones_coefficients(d: PlanarDiagram, cap: int = DEFAULT_ORACLE_CAP) -> Dict[int, int]:
    return laurent_coefficients(jones_oracle(d, cap))


def jones_determinant(d: PlanarDiagram, cap: int = DEFAULT_ORACLE_CAP) -> int:
    """|(Ĵ / (q + q^-1)) at q = i|, the determinant read off the Jones polynomial."""
    normalized = sp.cancel(jones_oracle(d, cap) / (q + 1 / q))
    value = sp.expand(normalized.subs(q, sp.I))
    return int(sp.Abs(value))


# ---------------------------------------------------------------------------
# Alexander
# ---------------------------------------------------------------------------

def fox_derivative(word: Sequence[Letter], generator: int, var: sp.Symbol = t) -> sp.Expr:
    """
    Fox derivative ∂word/∂x_generator, abelianized by sending every x to ``var``.

    Example:
        fox_derivative([(0, 1), (1, 1), (0, -1), (2, -1)], 0)  # 1 - t
    """
    result = sp.Integer(0)
    prefix = 0
    for g, exponent in word:
        if exponent not in (1, -1):
            raise ContractError(f"Letters must have exponent ±1, got {exponent}")
        if g == generator:
            if exponent == 1:
                result += var ** prefix
            else:
                result -= var ** (prefix - 1)
        prefix += exponent
    return sp.expand(result)


def wirtinger_arcs(d: PlanarDiagram) -> Dict[int, int]:
    """Edge label -> arc index, arcs being maximal over-passing strands."""
    parent: Dict[int, int] = {x: x for x in d.labels}

    def root(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for _, b, _, e in d.crossings:
        rb, re_ = root(b), root(e)
        if rb != re_:
            parent[max(rb, re_)] = min(rb, re_)
    roots = sorted({root(x) for x in parent})
    index = {r: i for i, r in enumerate(roots)}
    return {x: index[root(x)] for x in parent}


def wirtinger_relators(d: PlanarDiagram) -> List[List[Letter]]:
    """One relator per crossing: x_k x_i x_k^-1 x_j^-1 (positive) or x_k^-1 x_i x_k x_j^-1."""
    arcs = wirtinger_arcs(d)
    relators = []
    for (a, b, c, _), sign in zip(d.crossings, crossing_signs(d)):
        k, i, j = arcs[b], arcs[a], arcs[c]
        if sign > 0:
            relators.append([(k, 1), (i, 1), (k, -1), (j, -1)])
        else:
            relators.append([(k, -1), (i, 1), (k, 1), (j, -1)])
    return relators


def _normalize(coefficients: List[int]) -> List[int]:
    while coefficients and coefficients[0] == 0:
        coefficients.pop(0)
    while coefficients and coefficients[-1] == 0:
        coefficients.pop()
    if coefficients and coefficients[0] < 0:
        coefficients = [-c for c in coefficients]
    return coefficients or [0]


def alexander_polynomial(d: PlanarDiagram) -> List[int]:
    """
    Alexander polynomial coefficients of a knot, palindromic with positive leading term.

    Raises:
        ContractError: for links

    Example:
        alexander_polynomial(parse_pd("PD[X[4,2,5,1],X[8,6,1,5],X[6,3,7,4],X[2,7,3,8]]"))
        # [1, -3, 1]
    """
    if d.n_components != 1:
        raise ContractError(f"Alexander polynomial needs a knot, got {d.n_components} components")
    if d.n_crossings <= 1:
        return [1]

    ring = ZZ[t]
    relators = wirtinger_relators(d)
    n_arcs = len(set(wirtinger_arcs(d).values()))
    rows = []
    for word, sign in zip(relators, crossing_signs(d)):
        scale = t if sign < 0 else sp.Integer(1)
        rows.append([ring.from_sympy(sp.expand(scale * fox_derivative(word, g))) for g in range(n_arcs)])
    size = n_arcs - 1
    minor = DomainMatrix([row[:size] for row in rows[:size]], (size, size), ring)
    determinant = ring.to_sympy(minor.det())
    coefficients = [int(c) for c in reversed(sp.Poly(determinant, t).all_coeffs())]
    result = _normalize(coefficients)
    if result != result[::-1]:
        logger.warning(f"Alexander polynomial {result} is not palindromic")
    return result
