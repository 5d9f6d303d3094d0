"""Tests for diagrams built from Conway notation, Tait graphs and braid words."""

import pytest

from khcube.core.diagram import (
    braid_closure,
    is_alternating,
    mirror,
    parse_pd,
    validate,
    writhe_counts,
)
from khcube.core.errors import ContractError, DiagramError
from khcube.core.tangles import (
    conway_knot,
    diagram_from_notation,
    integer_tangle,
    montesinos_determinant,
    numerator_closure,
    parse_tait,
    rational_tangle,
    tait_diagram,
    tangle_fraction,
)
from khcube.invariants.determinant import determinant
from khcube.invariants.polynomials import jones_coefficients

from conftest import FIGURE_EIGHT, TREFOIL

WHEEL_4 = "1 2 3 4|5 1 8|6 2 5|3 6 7|8 4 7"


class TestConway:
    def test_twists_close_to_torus_links(self):
        trefoil = numerator_closure(integer_tangle(3))
        assert trefoil.n_crossings == 3
        assert trefoil.n_components == 1
        assert jones_coefficients(trefoil) in (
            jones_coefficients(parse_pd(TREFOIL)),
            jones_coefficients(mirror(parse_pd(TREFOIL))),
        )
        assert numerator_closure(integer_tangle(2)).n_components == 2

    def test_figure_eight(self):
        d = conway_knot("22")
        assert validate(d).ok
        assert writhe_counts(d) == (2, 2)
        assert is_alternating(d)
        assert jones_coefficients(d) == jones_coefficients(parse_pd(FIGURE_EIGHT))

    def test_leading_minus_mirrors(self):
        assert writhe_counts(conway_knot("-3")) == tuple(reversed(writhe_counts(conway_knot("3"))))

    @pytest.mark.parametrize("terms, fraction", [([3], (3, 1)), ([2, 2], (5, 2)), ([2, 1, 1, 2], (13, 5))])
    def test_fraction(self, terms, fraction):
        assert tangle_fraction(terms) == fraction

    @pytest.mark.parametrize(
        "notation", ["3", "22", "2112", "3,3,2", "3,21,2", "3,3,-2", "22,3,-2", "3,3,2+", "21,21,-3"]
    )
    def test_determinant_matches_fractions(self, notation):
        d = conway_knot(notation)
        assert d.n_components == 1
        assert determinant(d) == montesinos_determinant(notation)

    def test_crossing_counts(self):
        assert conway_knot("2112").n_crossings == 6
        assert conway_knot("3,3,-2").n_crossings == 8
        assert conway_knot("3,3,2+").n_crossings == 9

    def test_signs_decide_alternation(self):
        assert is_alternating(conway_knot("3,21,2"))
        assert is_alternating(conway_knot("3,3,2+"))
        assert not is_alternating(conway_knot("3,3,-2"))

    @pytest.mark.parametrize("notation", ["", "3,,2", "3a", "+"])
    def test_malformed(self, notation):
        with pytest.raises(DiagramError):
            conway_knot(notation)

    def test_rational_tangle_needs_terms(self):
        with pytest.raises(ContractError):
            rational_tangle([])


class TestTait:
    def test_single_edge_is_a_kink(self):
        d = tait_diagram([[1], [1]])
        assert d.n_crossings == 1
        assert d.n_components == 1

    def test_bigon_is_hopf(self):
        assert tait_diagram([[1, 2], [2, 1]]).n_components == 2

    def test_theta_graph_is_trefoil(self):
        d = tait_diagram([[1, 2, 3], [1, 3, 2]])
        assert d.n_crossings == 3
        assert is_alternating(d)
        assert determinant(d) == 3

    def test_spanning_trees_give_determinant(self):
        # the wheel with four spokes has 45 spanning trees
        d = tait_diagram(parse_tait(WHEEL_4))
        assert d.n_crossings == 8
        assert d.n_components == 1
        assert is_alternating(d)
        assert determinant(d) == 45

    def test_negative_edges(self):
        d = tait_diagram(parse_tait("-1 2 3 4|5 -9 8|6 2 5|3 6 7|8 4 7|-1 -9"))
        assert not is_alternating(d)
        assert determinant(d) == 27

    @pytest.mark.parametrize("text", ["1 2|1", "1 -2|2 1", "1 x|1", "1 2||2 1", "0|0"])
    def test_malformed(self, text):
        with pytest.raises(DiagramError):
            tait_diagram(parse_tait(text))


class TestNotation:
    def test_prefixes(self):
        assert diagram_from_notation("conway:22") == conway_knot("22")
        assert diagram_from_notation("braid:1,-2,1,-2") == braid_closure([1, -2, 1, -2])
        assert diagram_from_notation(f"tait:{WHEEL_4}") == tait_diagram(parse_tait(WHEEL_4))

    @pytest.mark.parametrize("text", ["22", "dowker:4 6 2", "braid:1,x"])
    def test_rejects_unknown(self, text):
        with pytest.raises(DiagramError):
            diagram_from_notation(text)
