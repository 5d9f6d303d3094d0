"""Tests for PD parsing, validation and diagram operations."""

import pytest

from khcube.core.diagram import (
    braid_closure,
    crossing_signs,
    faces,
    is_alternating,
    mirror,
    parse_pd,
    projection_pieces,
    render_pd,
    smooth_crossing,
    validate,
    writhe_counts,
)
from khcube.core.errors import ContractError, DiagramError
from khcube.io.readers import bundled_path, read_knot_table

from conftest import FIGURE_EIGHT, HOPF, TREFOIL, table_rows


def test_parse_trefoil(trefoil):
    assert trefoil.n_crossings == 3
    assert trefoil.n_components == 1
    assert trefoil.free_loops == 0
    assert writhe_counts(trefoil) == (0, 3)


def test_render_is_canonical():
    assert render_pd(parse_pd(TREFOIL)) == TREFOIL
    assert render_pd(parse_pd(" PD[ X[1, 4,2,5], X[3,6,4,1],X[5,2,6,3] ] ")) == TREFOIL


def test_unlink_shorthand():
    d = parse_pd("U2")
    assert d.n_crossings == 0
    assert d.n_components == 2
    assert render_pd(d) == "U2"


def test_pd_with_extra_unknots():
    d = parse_pd("PD[X[1,2,2,1]] U1")
    assert d.n_components == 2
    assert render_pd(d) == "PD[X[1,2,2,1]] U1"


def test_syntax_error_reports_position():
    with pytest.raises(DiagramError) as info:
        parse_pd("PD[X[1,2,3]]")
    assert info.value.position == 10
    assert "syntax error" in str(info.value)


@pytest.mark.parametrize(
    "text, defect",
    [
        ("PD[X[1,2,3,4]]", "odd occurrence"),
        ("PD[X[1,1,1,1]]", "duplicate label"),
        ("PD[X[1,2,2,1],X[5,6,6,5]]", "non-contiguous"),
        ("PD[X[0,1,1,0]]", "non-positive"),
    ],
)
def test_invalid_diagrams(text, defect):
    with pytest.raises(DiagramError) as info:
        parse_pd(text)
    assert info.value.report is not None
    assert not info.value.report.ok
    assert any(defect in message for message in info.value.report.defects)


@pytest.mark.parametrize("name, pd_code", table_rows("knots9.csv") + table_rows("unknots.csv"))
def test_corpus_is_valid(name, pd_code):
    d = parse_pd(pd_code)
    assert validate(d).ok, name
    if d.n_crossings:
        # connected projections have N + 2 faces
        assert len(faces(d)) == d.n_crossings + 2


def test_hopf_link(hopf):
    assert hopf.n_components == 2
    assert len(set(crossing_signs(hopf))) == 1


def test_mirror_swaps_signs(trefoil, figure_eight):
    assert writhe_counts(mirror(trefoil)) == (3, 0)
    assert validate(mirror(trefoil)).ok
    n_plus, n_minus = writhe_counts(figure_eight)
    assert writhe_counts(mirror(figure_eight)) == (n_minus, n_plus)


def test_smoothing_trefoil_gives_hopf_and_unknot(trefoil):
    children = [smooth_crossing(trefoil, 1, bit) for bit in (0, 1)]
    for child in children:
        assert child.n_crossings == 2
        assert validate(child).ok
    assert sorted(child.n_components for child in children) == [1, 2]


def test_smoothing_a_kink_leaves_free_loops(kink):
    children = [smooth_crossing(kink, 1, bit) for bit in (0, 1)]
    assert sorted(child.free_loops for child in children) == [1, 2]


def test_smoothing_rejects_bad_index(trefoil):
    with pytest.raises(ContractError):
        smooth_crossing(trefoil, 4, 0)
    with pytest.raises(ContractError):
        smooth_crossing(trefoil, 1, 2)


def test_base_component(hopf):
    assert hopf.with_base_component(1).base_component == 1
    with pytest.raises(ContractError):
        hopf.with_base_component(2)


def test_figure_eight_is_amphichiral_by_writhe():
    assert writhe_counts(parse_pd(FIGURE_EIGHT)) == (2, 2)


def test_hopf_renders_back():
    assert render_pd(parse_pd(HOPF)) == HOPF


def test_braid_closures():
    assert braid_closure([-1]) == parse_pd("PD[X[1,2,2,1]]")
    assert braid_closure([1]) == parse_pd("PD[X[1,1,2,2]]")
    right_trefoil = braid_closure([1, 1, 1])
    assert right_trefoil.n_components == 1
    assert writhe_counts(right_trefoil) == (3, 0)
    assert writhe_counts(braid_closure([-1, -1, -1])) == (0, 3)
    assert braid_closure([1, -2, 1, -2]).n_crossings == 4


def test_braid_closure_free_strands():
    d = braid_closure([1, 1], strands=3)
    assert d.n_components == 3
    assert d.free_loops == 1
    assert braid_closure([], strands=2).free_loops == 2


def test_braid_closure_rejects_bad_letters():
    with pytest.raises(ContractError):
        braid_closure([0])
    with pytest.raises(ContractError):
        braid_closure([3], strands=3)


@pytest.mark.parametrize(
    "text, n_components, n_faces",
    [
        ("PD[X[1,2,2,1],X[3,4,4,3]]", 2, 6),
        ("PD[X[1,3,2,4],X[3,1,4,2],X[5,6,6,5]]", 3, 7),
    ],
)
def test_split_diagrams_are_planar(text, n_components, n_faces):
    d = parse_pd(text)
    assert validate(d).ok
    assert d.n_components == n_components
    assert projection_pieces(d) == 2
    # every separate piece adds two faces
    assert len(faces(d)) == n_faces == d.n_crossings + 2 * projection_pieces(d)


def test_split_braid_closure():
    d = braid_closure([1, 3])
    assert validate(d).ok
    assert d.n_components == 2
    assert projection_pieces(d) == 2


def _alternating_flags():
    df = read_knot_table(bundled_path("knots9.csv"))
    return list(zip(df["name"], df["pd"], df["alternating"]))


@pytest.mark.parametrize("name, pd_code, flag", _alternating_flags())
def test_alternating_flags_match_diagrams(name, pd_code, flag):
    assert is_alternating(parse_pd(pd_code)) == flag, name


def test_alternation_of_small_diagrams(trefoil, kink):
    assert is_alternating(trefoil)
    assert is_alternating(kink)
    assert is_alternating(parse_pd("PD[X[1,2,2,1],X[3,4,4,3]]"))
    assert is_alternating(braid_closure([1, 1, -2, 1, 1, -2, 1, -2]))
