"""Tests for the table readers and the JSON writers."""

import json

import pytest

from khcube.core.cube import enumerate_cube
from khcube.core.khcomplex import build_complex
from khcube.homalg.homology import homology
from khcube.io.readers import (
    bundled_path,
    read_knot_table,
    read_reidemeister_pairs,
    read_triangle_json,
)
from khcube.io.writers import (
    canonical_json,
    complex_to_json,
    cube_to_json,
    diagram_to_json,
    homology_to_json,
    triangle_to_json,
    write_json,
    write_triangle_json,
)
from khcube.spectral.lemma import os_lemma_check


def test_knot_table(knot_table):
    assert list(knot_table.columns) == [
        "name", "pd", "notation", "alternating", "unknot", "det", "khr_rank"
    ]
    assert len(knot_table) == 84
    assert knot_table["pd"].str.startswith("PD[").all()
    assert knot_table["alternating"].tolist().count(True) == 73
    assert knot_table["alternating"].tolist().count(False) == 11
    assert knot_table["unknot"].tolist() == [False] * 84
    assert knot_table["det"].notna().all()
    blank = knot_table.loc[knot_table["khr_rank"].isna(), "name"].tolist()
    assert blank == ["8_19", "9_42"]


def test_notation_rows_are_built(tmp_path):
    path = tmp_path / "notation.csv"
    path.write_text("name,notation,alternating,det\nfigure_eight,conway:22,true,5\nhopf,braid:1 1,,\n")
    df = read_knot_table(path)
    assert df["pd"].str.startswith("PD[").all()
    assert df["det"].tolist()[0] == 5
    assert df["khr_rank"].isna().all()


def test_bad_notation_names_the_row(tmp_path):
    path = tmp_path / "bad_notation.csv"
    path.write_text("name,notation\nbroken,conway:3a\n")
    with pytest.raises(ValueError, match="broken"):
        read_knot_table(path)


def test_unknot_table_leaves_alternating_unknown():
    df = read_knot_table(bundled_path("unknots.csv"))
    assert df["alternating"].isna().all()
    assert df["unknot"].tolist() == [True] * len(df)


def test_missing_alternating_column_warns(tmp_path):
    path = tmp_path / "plain.csv"
    path.write_text('name,pd\nround,U1\nkink,"PD[X[1,2,2,1]]"\n')
    with pytest.warns(UserWarning, match="alternating"):
        df = read_knot_table(path)
    assert df["alternating"].tolist() == [None, None]
    assert df["unknot"].tolist() == [None, None]


def test_missing_pd_column(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("name\nround\n")
    with pytest.raises(ValueError, match="pd"):
        read_knot_table(path)


def test_reidemeister_pairs():
    df = read_reidemeister_pairs(bundled_path("reidemeister_pairs.csv"))
    assert list(df.columns) == ["name", "pd_a", "pd_b"]
    assert "r2" in df["name"].tolist()


def test_bundled_path_missing():
    with pytest.raises(FileNotFoundError):
        bundled_path("no_such_table.csv")


def test_triangle_json_round_trip(tmp_path):
    original = read_triangle_json(bundled_path("synthetic/triangle_unit.json"))
    path = write_triangle_json(original, tmp_path / "unit.json")
    reloaded = read_triangle_json(path)
    assert triangle_to_json(reloaded) == triangle_to_json(original)
    assert os_lemma_check(reloaded).hypotheses_hold


def test_write_json_is_deterministic(tmp_path, trefoil):
    payload = {
        "diagram": diagram_to_json(trefoil),
        "homology": homology_to_json(homology(build_complex(trefoil))),
    }
    first = write_json(payload, tmp_path / "a.json")
    second = write_json(dict(reversed(list(payload.items()))), tmp_path / "b.json")
    assert first == second
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    assert first == canonical_json(json.loads(first))


def test_complex_and_cube_dumps(trefoil):
    c = build_complex(trefoil)
    dump = complex_to_json(c)
    assert dump["meta"]["ring"] == "Z"
    assert sum(len(block["basis"]) for block in dump["blocks"]) == 30
    cube = cube_to_json(enumerate_cube(trefoil))
    assert len(cube["vertices"]) == 8
    assert len(cube["edges"]) == 12
    assert {e["kind"] for e in cube["edges"]} == {"merge", "split"}
