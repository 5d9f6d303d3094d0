"""Tests for the sign calculus and the signed cube complex."""

import numpy as np
import pytest

from khcube.core.cube import CubeVertex, enumerate_cube
from khcube.core.diagram import braid_closure, parse_pd
from khcube.core.errors import ContractError
from khcube.core.khcomplex import (
    DECREASING,
    INCREASING,
    SignRule,
    build_complex,
    msign,
    normalize_direction,
    sign_delta,
    sign_identity_holds,
    sign_tilde_delta,
    two_face_violations,
    verify_d_squared,
    z4_collapse,
)
from khcube.homalg.homology import homology
from khcube.homalg.rings import INTEGERS, RATIONALS, Ring
from khcube.invariants.polynomials import jones_coefficients

from conftest import table_rows

SMALL_CORPUS = table_rows("knots9.csv", max_crossings=6) + table_rows("unknots.csv")


class TestSigns:
    def test_delta_counts_ones_before_the_change(self):
        assert sign_delta((1, 1, 0), (1, 0, 0)) == 1
        assert sign_delta((0, 1, 1), (0, 1, 0)) == 1
        assert sign_delta((1, 0, 1), (0, 0, 1)) == 0

    def test_tilde_delta_counts_ones_from_the_change(self):
        assert sign_tilde_delta((1, 1, 0), (1, 0, 0)) == 1
        assert sign_tilde_delta((1, 0, 1), (0, 0, 1)) == 0
        assert sign_tilde_delta((1, 1, 1), (1, 1, 0)) == 1

    def test_msign(self):
        assert msign((1, 0), (0, 0)) == 1
        assert msign((1, 1), (0, 0)) == 1
        assert msign((1, 1, 1), (0, 0, 0)) == 0
        assert msign((0, 0), (0, 0)) == 0

    def test_msign_plus_delta_is_tilde_delta_on_edges(self):
        for v, u in [((1, 1, 0), (1, 0, 0)), ((0, 1, 1), (0, 0, 1)), ((1, 1, 1), (0, 1, 1))]:
            assert (msign(v, u) + sign_delta(v, u)) % 2 == sign_tilde_delta(v, u)

    def test_non_edges_are_rejected(self):
        with pytest.raises(ContractError):
            sign_delta((1, 1, 0), (0, 0, 0))
        with pytest.raises(ContractError):
            sign_tilde_delta((0, 1), (1, 0))
        with pytest.raises(ContractError):
            msign((0, 1), (1, 0))

    def test_unknown_rule(self):
        with pytest.raises(ValueError):
            SignRule("epsilon")
        assert SignRule.from_flag("tilde").variant == "tilde_delta"

    @pytest.mark.parametrize("name, pd_code", SMALL_CORPUS)
    @pytest.mark.parametrize("variant", ["delta", "tilde_delta"])
    def test_two_faces_anticommute(self, name, pd_code, variant):
        cube = enumerate_cube(parse_pd(pd_code))
        assert two_face_violations(cube, SignRule(variant)) == []
        assert sign_identity_holds(cube)

    def test_flipped_edge_breaks_faces(self, trefoil):
        cube = enumerate_cube(trefoil)
        rule = SignRule().with_flip((1, 1, 0), (1, 0, 0))
        violations = two_face_violations(cube, rule)
        assert len(violations) == 2
        assert str(rule) == "tilde_delta+1flips"


class TestComplex:
    def test_trefoil_dimensions(self, trefoil):
        c = build_complex(trefoil)
        assert c.total_dim == 30
        assert build_complex(trefoil, "reduced").total_dim == 15
        assert all(key[0] <= 0 for key in c.blocks)

    @pytest.mark.parametrize("name, pd_code", SMALL_CORPUS)
    @pytest.mark.parametrize("rule", [SignRule("delta"), SignRule("tilde_delta")])
    def test_d_squared(self, name, pd_code, rule):
        d = parse_pd(pd_code)
        for direction in (INCREASING, DECREASING):
            assert verify_d_squared(build_complex(d, rule=rule, direction=direction))

    def test_d_squared_over_f2_and_reduced(self, figure_eight):
        assert verify_d_squared(build_complex(figure_eight, ring=Ring.parse("F2")))
        assert verify_d_squared(build_complex(figure_eight, "reduced"))

    @pytest.mark.parametrize("seed", range(20))
    def test_d_squared_on_random_braid_closures(self, seed):
        rng = np.random.default_rng(seed)
        for _ in range(10):
            strands = int(rng.integers(2, 5))
            length = int(rng.integers(1, 11))
            letters = rng.integers(1, strands, size=length) * rng.choice([-1, 1], size=length)
            d = braid_closure(letters.tolist(), strands)
            cube = enumerate_cube(d)
            assert sign_identity_holds(cube)
            for rule in (SignRule("delta"), SignRule("tilde_delta")):
                assert not two_face_violations(cube, rule)
                assert verify_d_squared(build_complex(d, rule=rule, cube=cube))

    def test_flipped_edge_breaks_d_squared(self, trefoil):
        rule = SignRule().with_flip((1, 1, 0), (1, 0, 0))
        c = build_complex(trefoil, rule=rule)
        assert not verify_d_squared(c)
        with pytest.raises(ContractError):
            homology(c)

    @pytest.mark.parametrize("name, pd_code", SMALL_CORPUS)
    def test_euler_characteristic_is_jones(self, name, pd_code):
        d = parse_pd(pd_code)
        assert build_complex(d, ring=RATIONALS).euler_characteristic() == jones_coefficients(d)

    def test_meta(self, trefoil):
        meta = build_complex(trefoil, ring=RATIONALS, direction="dec").meta
        assert meta["ring"] == "Q"
        assert meta["direction"] == DECREASING
        assert meta["signs"] == "tilde_delta"
        assert len(meta["diagram_hash"]) == 40

    def test_bad_arguments(self, trefoil):
        with pytest.raises(ValueError):
            build_complex(trefoil, variant="odd")
        with pytest.raises(ValueError):
            normalize_direction("sideways")

    def test_parallel_check_agrees(self, figure_eight):
        c = build_complex(figure_eight, ring=INTEGERS)
        assert verify_d_squared(c, workers=2)


class TestZ4:
    def test_unknot_table(self, unknot):
        table = z4_collapse(homology(build_complex(unknot, ring=RATIONALS)), unknot)
        assert table.from_bigrading == {0: 1, 2: 1}
        assert table.agree

    @pytest.mark.parametrize("name, pd_code", SMALL_CORPUS)
    def test_binnings_agree(self, name, pd_code):
        d = parse_pd(pd_code)
        for direction in (INCREASING, DECREASING):
            h = homology(build_complex(d, ring=RATIONALS, direction=direction))
            table = z4_collapse(h, d)
            assert table.agree, table.to_json()
            assert table.total_rank == h.total_rank

    @pytest.mark.parametrize("name, pd_code", table_rows("unknots.csv"))
    def test_unknot_corpus_tables(self, name, pd_code):
        d = parse_pd(pd_code)
        table = z4_collapse(homology(build_complex(d, ring=RATIONALS)), d)
        assert table.agree
        assert table.from_bigrading == {0: 1, 2: 1}

    def test_needs_field(self, trefoil):
        with pytest.raises(ContractError):
            z4_collapse(homology(build_complex(trefoil)), trefoil)
        with pytest.raises(ContractError):
            z4_collapse(homology(build_complex(trefoil, "reduced", ring=RATIONALS)), trefoil)
