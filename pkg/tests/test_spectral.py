"""Tests for chain complexes, spectral pages, cones and the triangle lemma checker."""

import pytest

from khcube.core.diagram import parse_pd
from khcube.core.errors import CapExceededError, ContractError
from khcube.core.khcomplex import DECREASING, INCREASING, build_complex
from khcube.homalg import fields
from khcube.homalg.homology import homology
from khcube.homalg.rings import RATIONALS, Ring
from khcube.io.readers import bundled_path, read_triangle_json
from khcube.spectral.complexes import ChainComplex, ChainMap, mapping_cone
from khcube.spectral.khovanov import (
    cone_decomposition,
    e1_matches_cube,
    khovanov_cube_maps,
    khovanov_filtered_complex,
    skein_triangle,
    split_at_crossing,
    total_cube_complex,
)
from khcube.spectral.lemma import os_lemma_check
from khcube.spectral.pages import FilteredComplex, limit_rank, spectral_pages

from conftest import KINK_NEGATIVE, TREFOIL, table_rows


def _point(degree=0):
    return ChainComplex.zero([degree])


def _interval():
    """a -> b with degrees 0, 1: acyclic."""
    return ChainComplex.from_entries([0, 1], [(1, 0, 1)])


class TestChainComplex:
    def test_homology_ranks(self):
        assert _point().total_homology_rank() == 1
        assert _interval().total_homology_rank() == 0
        assert _interval().graded

    def test_shape_mismatch(self):
        with pytest.raises(ContractError):
            ChainComplex((0, 1), fields.zeros(1, 1, fields.field_domain(RATIONALS)))

    def test_cone_of_identity_is_acyclic(self):
        c = _point()
        identity = ChainMap(c, c, fields.from_rows([{0: c.domain.one}], 1, c.domain))
        cone = mapping_cone(identity)
        assert cone.dim == 2
        assert cone.degrees == (-1, 0)
        assert cone.total_homology_rank() == 0
        assert identity.is_quasi_isomorphism()

    def test_cone_rejects_non_chain_map(self):
        source, target = _interval(), _point()
        # b -> 1 but d(a) = b, so f d != d' f at a
        f = ChainMap(source, target, fields.from_rows([{1: source.domain.one}], 2, source.domain))
        assert f.first_offending_generator() == 0
        with pytest.raises(ContractError, match="generator 0"):
            mapping_cone(f)

    def test_zero_map_induced_rank(self):
        c = _point()
        zero = ChainMap(c, c, fields.zeros(1, 1, c.domain))
        assert zero.induced_rank() == 0
        assert not zero.is_quasi_isomorphism()


class TestPages:
    def test_filtration_must_not_lower_weight(self):
        with pytest.raises(ContractError):
            FilteredComplex(_interval(), (1, 0))

    def test_weight_one_jump_dies_at_e2(self):
        fc = FilteredComplex(_interval(), (0, 1))
        e1, e2 = spectral_pages(fc, r_max=2)
        assert e1.total_rank == 2
        assert e2.total_rank == 0
        assert limit_rank(fc) == 0

    def test_r_max_must_be_positive(self):
        with pytest.raises(ValueError):
            spectral_pages(FilteredComplex(_interval(), (0, 0)), r_max=0)

    @pytest.mark.parametrize("direction", [INCREASING, DECREASING])
    def test_trefoil_pages(self, trefoil, direction):
        c = build_complex(trefoil, ring=RATIONALS, direction=direction)
        assert e1_matches_cube(c)
        pages = spectral_pages(khovanov_filtered_complex(c), r_max=2)
        assert pages[0].total_rank == c.total_dim
        assert pages[1].total_rank == homology(c).total_rank == 4
        assert pages[1].differential_is_zero()


    @pytest.mark.parametrize("name, pd_code", table_rows("knots9.csv", max_crossings=5))
    def test_limit_rank_is_homology_rank(self, name, pd_code):
        c = build_complex(parse_pd(pd_code), ring=RATIONALS)
        assert limit_rank(khovanov_filtered_complex(c)) == homology(c).total_rank, name


class TestCones:
    def test_kink_cone(self, kink):
        report = cone_decomposition(kink, 1)
        assert report.child_ranks == (2, 4)
        assert report.total_rank == 2
        assert report.defect == 0
        assert report.bound_ok
        assert report.children_match
        assert report.to_json()["defect"] == 0

    @pytest.mark.parametrize("crossing", [1, 2, 3])
    @pytest.mark.parametrize("direction", [INCREASING, DECREASING])
    def test_trefoil_cones_are_exact(self, trefoil, crossing, direction):
        report = cone_decomposition(trefoil, crossing, direction=direction)
        assert report.defect == 0
        assert report.total_rank == 4
        assert report.cone_rank == report.total_rank

    def test_split_parts_cover_the_complex(self, trefoil):
        c = build_complex(trefoil, ring=RATIONALS)
        source, target, f = split_at_crossing(c, 2)
        assert source.dim + target.dim == c.total_dim
        assert f.is_valid()

    @pytest.mark.parametrize("crossing", [1, 2, 3])
    def test_negated_map_gives_the_same_cone_homology(self, trefoil, crossing):
        _, _, f = split_at_crossing(build_complex(trefoil, ring=RATIONALS), crossing)
        cone, flipped = mapping_cone(f), mapping_cone(f.negated())
        assert cone.squares_to_zero()
        assert flipped.squares_to_zero()
        assert flipped.homology_ranks() == cone.homology_ranks()
        assert f.negated().induced_rank() == f.induced_rank()

    def test_negated_chain_map_cone(self):
        c = _point()
        identity = ChainMap(c, c, fields.from_rows([{0: c.domain.one}], 1, c.domain))
        assert mapping_cone(identity.negated()).total_homology_rank() == 0

    def test_bad_crossing(self, trefoil):
        with pytest.raises(ContractError):
            cone_decomposition(trefoil, 4)

    def test_total_cube_complex_reproduces_homology(self, trefoil):
        complex_ = total_cube_complex(*khovanov_cube_maps(trefoil))
        assert complex_.squares_to_zero()
        assert complex_.total_homology_rank() == 4


class TestLemma:
    @pytest.mark.parametrize("pd_code,crossing", [(KINK_NEGATIVE, 1), (TREFOIL, 1), (TREFOIL, 3)])
    def test_skein_triangle_satisfies_lemma(self, pd_code, crossing):
        verdict = os_lemma_check(skein_triangle(parse_pd(pd_code), crossing))
        assert verdict.hypotheses_hold
        assert verdict.conclusions_hold
        assert verdict.failed == ()

    def test_skein_triangle_over_f2(self, trefoil):
        verdict = os_lemma_check(skein_triangle(trefoil, 2, ring=Ring.parse("F2")))
        assert verdict.conclusions_hold

    @pytest.mark.parametrize("name", ["triangle_zero.json", "triangle_unit.json"])
    def test_synthetic_triangles_hold(self, name):
        verdict = os_lemma_check(read_triangle_json(bundled_path(f"synthetic/{name}")))
        assert verdict.hypotheses_hold
        assert verdict.conclusions_hold

    def test_broken_homotopy_is_reported(self):
        verdict = os_lemma_check(read_triangle_json(bundled_path("synthetic/triangle_broken_j.json")))
        assert not verdict.hypotheses_hold
        assert verdict.conclusions_hold is None
        assert "b[2]" in verdict.failed
        assert verdict.to_json()["conclusions_hold"] is None

    def test_dimension_cap(self, trefoil):
        with pytest.raises(CapExceededError):
            os_lemma_check(skein_triangle(trefoil, 1), max_dim=10)
