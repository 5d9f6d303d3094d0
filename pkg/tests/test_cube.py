"""Tests for resolutions and edge cobordisms."""

import pytest

from khcube.core.cube import (
    MERGE,
    SPLIT,
    CubeVertex,
    cube_vertices,
    edge,
    enumerate_cube,
    euler_fingerprint,
    resolve,
    square_faces,
)
from khcube.core.diagram import PlanarDiagram, mirror, orient_crossings, parse_pd
from khcube.core.errors import CapExceededError, ContractError
from khcube.core.tqft import edge_map, tensor_basis
from khcube.homalg.rings import INTEGERS


def test_trefoil_resolutions(trefoil):
    assert resolve(trefoil, CubeVertex((0, 0, 0))).n_circles == 3
    assert resolve(trefoil, CubeVertex((1, 0, 0))).n_circles == 2
    assert resolve(trefoil, CubeVertex((1, 1, 0))).n_circles == 1
    assert resolve(trefoil, CubeVertex((1, 1, 1))).n_circles == 2


def test_circles_partition_labels(trefoil):
    for v in cube_vertices(3):
        circles = resolve(trefoil, v).circles
        labels = sorted(x for circle in circles for x in circle)
        assert labels == list(range(1, 7))


def test_cube_size(trefoil):
    cube = enumerate_cube(trefoil)
    assert len(cube.vertices) == 8
    assert len(cube.edges) == 12
    assert len(list(square_faces(cube))) == 6
    assert euler_fingerprint(cube) == -2


def test_vertex_order():
    weights = [v.weight for v in cube_vertices(3)]
    assert weights == sorted(weights)
    assert cube_vertices(2)[1:3] == [CubeVertex((0, 1)), CubeVertex((1, 0))]


def test_edge_kind(trefoil):
    e = edge(trefoil, CubeVertex((1, 0, 0)), 1)
    assert e.target == CubeVertex((0, 0, 0))
    assert e.kind == SPLIT
    assert len(e.inputs) == 1 and len(e.outputs) == 2
    assert len(e.bystanders) == 1
    assert e.reversed().kind == MERGE
    assert e.reversed().reversed() == e


def test_edge_needs_set_bit(trefoil):
    with pytest.raises(ContractError):
        edge(trefoil, CubeVertex((0, 1, 0)), 1)


def test_every_edge_merges_or_splits(figure_eight):
    cube = enumerate_cube(figure_eight)
    for e in cube.edges:
        difference = e.n_target_circles - e.n_source_circles
        assert difference == (1 if e.kind == SPLIT else -1)


def test_cap(trefoil):
    with pytest.raises(CapExceededError) as info:
        enumerate_cube(trefoil, max_crossings=2)
    assert info.value.cap_name == "max_crossings"


def test_unlink_cube():
    cube = enumerate_cube(parse_pd("U2"))
    assert len(cube.vertices) == 1
    resolution = cube.resolutions[cube.vertices[0]]
    assert resolution.n_circles == 2
    assert parse_pd("U2").marked_edge() in resolution.circles[resolution.marked_circle]


def test_marked_circle_follows_base_component(hopf):
    for index in (0, 1):
        d = hopf.with_base_component(index)
        r = resolve(d, CubeVertex((0, 0)))
        assert d.marked_edge() in r.circles[r.marked_circle]


def test_parallel_cube_matches_serial(figure_eight):
    assert enumerate_cube(figure_eight, workers=2) == enumerate_cube(figure_eight)


def _changed(w, v):
    return next(i for i, (a, b) in enumerate(zip(w.bits, v.bits), start=1) if a != b)


def test_square_faces_keep_bystander_circles(figure_eight):
    cube = enumerate_cube(figure_eight)
    for w, v, v_prime, u in square_faces(cube):
        touched = set(figure_eight.crossings[_changed(w, v) - 1]) | set(
            figure_eight.crossings[_changed(w, v_prime) - 1]
        )
        untouched = {c for c in cube.resolutions[w].circles if not c & touched}
        for x in (v, v_prime, u):
            assert untouched <= set(cube.resolutions[x].circles)


def _path_matrix(d, w, first, second):
    upper = edge(d, w, first)
    lower = edge(d, upper.target, second)
    domain = INTEGERS.domain()
    m1 = edge_map(upper, tensor_basis(upper.n_source_circles)).to_domain_matrix(domain)
    m2 = edge_map(lower, tensor_basis(lower.n_source_circles)).to_domain_matrix(domain)
    return m2 * m1


def test_square_faces_commute_before_signs(figure_eight):
    cube = enumerate_cube(figure_eight)
    for w, v, v_prime, _ in square_faces(cube):
        i, j = _changed(w, v), _changed(w, v_prime)
        assert _path_matrix(figure_eight, w, i, j) == _path_matrix(figure_eight, w, j, i)


def _fingerprint(d):
    return euler_fingerprint(enumerate_cube(d))


def test_fingerprint_survives_normalization(figure_eight):
    base = _fingerprint(figure_eight)
    n = 2 * figure_eight.n_crossings
    shifted = [tuple(x % n + 1 for x in c) for c in figure_eight.crossings]
    assert _fingerprint(PlanarDiagram.from_crossings(shifted)) == base
    assert _fingerprint(PlanarDiagram.from_crossings(figure_eight.crossings[::-1])) == base
    # turning a tuple by two reverses the under strand and keeps both smoothings
    turned = [(c, e, a, b) for a, b, c, e in figure_eight.crossings]
    crossings, _ = orient_crossings(turned)
    assert _fingerprint(PlanarDiagram.from_crossings(crossings)) == base


def test_fingerprint_under_mirror(trefoil, figure_eight):
    # mirroring swaps the smoothings, so every vertex weight flips
    for d in (trefoil, figure_eight):
        assert _fingerprint(mirror(d)) == (-1) ** d.n_crossings * _fingerprint(d)
