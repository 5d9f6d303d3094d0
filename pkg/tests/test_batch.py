"""Tests for the table and benchmark runners."""

import pytest

from khcube.invariants.reports import InvariantReport
from khcube.io.readers import bundled_path
from khcube.workflows.batch import (
    TABLE_CHECKS,
    TableConfig,
    main,
    row_violations,
    run_bench,
    run_table,
    summarize_table,
)

from conftest import TREFOIL


@pytest.fixture
def small_table(tmp_path):
    path = tmp_path / "small.csv"
    path.write_text(
        "name,pd,alternating,unknot\n"
        "round,U1,,true\n"
        f'trefoil,"{TREFOIL}",true,false\n'
        'broken,"PD[X[1,2,3]]",,\n'
    )
    return path


class TestTableConfig:
    def test_defaults(self):
        config = TableConfig(csv_path="table.csv")
        assert config.checks == list(TABLE_CHECKS)
        assert config.threads == 1

    @pytest.mark.parametrize("kwargs", [{"checks": ["bogus"]}, {"threads": 0}])
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            TableConfig(csv_path="table.csv", **kwargs)

    def test_json_round_trip(self, tmp_path):
        config = TableConfig(csv_path="table.csv", checks=["determinant"], threads=3)
        path = config.to_json(tmp_path / "table_config.json")
        assert TableConfig.from_json(path) == config

    def test_iter_rows(self, small_table):
        rows = list(TableConfig(csv_path=str(small_table)).iter_rows())
        assert [r["name"] for r in rows] == ["round", "trefoil", "broken"]
        assert rows[1]["alternating"] is True
        assert rows[0]["alternating"] is None


def test_row_violations():
    report = InvariantReport(khr_rank_q=1, determinant=3, alexander=[1, -1, 1], alternating_hint=True)
    assert row_violations(report, list(TABLE_CHECKS), expected_unknot=False) == [
        "alexander",
        "determinant",
        "unknot",
    ]
    assert row_violations(report, ["determinant"], expected_unknot=False) == ["determinant"]
    assert row_violations(report, ["unknot"], expected_unknot=None) == []


def test_reference_violations():
    report = InvariantReport(khr_rank_q=3, determinant=3, alexander=[1, -1, 1])
    assert row_violations(report, ["reference"], None, {"det": 3, "khr_rank": 3}) == []
    assert row_violations(report, ["reference"], None, {"det": 3, "khr_rank": None}) == []
    assert row_violations(report, ["reference"], None, {"det": 5, "khr_rank": 3}) == ["reference"]
    assert row_violations(report, ["alexander"], None, {"det": 5, "khr_rank": 3}) == []


def test_run_table_records_failures(small_table):
    df = run_table(TableConfig(csv_path=str(small_table)))
    assert df["name"].tolist() == ["round", "trefoil", "broken"]
    assert df["success"].tolist() == [True, True, False]
    assert df.loc[1, "khr_rank_Q"] == 3
    assert df.loc[1, "alexander"] == "1 -1 1"
    assert df.loc[2, "error"]

    summary = summarize_table(df)
    assert summary["rows"] == 3
    assert summary["failed"] == 1
    assert summary["violations"] == 0
    assert summary["violations_by_check"] == {check: 0 for check in TABLE_CHECKS}


def test_run_table_in_pool_matches_inline():
    config = TableConfig(csv_path=str(bundled_path("unknots.csv")), threads=2)
    calls = []
    df = run_table(config, progress_callback=lambda done, total: calls.append((done, total)))
    assert df["success"].all()
    assert (df["violations"] == "").all()
    assert (df["khr_rank_Q"] == 1).all()
    assert calls[-1] == (len(df), len(df))


def test_run_bench(small_table):
    bench = run_bench(small_table, threads=1, ring="Q")
    assert {"name", "threads", "parse_s", "cube_s", "complex_s", "homology_s", "total_s"} <= set(bench.columns)
    assert bench["success"].tolist() == [True, True, False]
    assert bench.loc[1, "total_rank"] == 4
    assert (bench.loc[:1, "total_s"] >= 0).all()


def test_row_entry_point(small_table, tmp_path, capsys):
    config_path = TableConfig(csv_path=str(small_table)).to_json(tmp_path / "table_config.json")
    assert main(["--config", str(config_path), "--row-index", "1"]) == 0
    assert "Row 1 (trefoil): SUCCESS" in capsys.readouterr().out

    assert main(["--config", str(config_path), "--row-index", "2"]) == 1
    out = capsys.readouterr().out
    assert "FAILED" in out and "Error:" in out


def test_reference_columns_reach_the_workers(tmp_path):
    path = tmp_path / "reference.csv"
    path.write_text(
        "name,pd,notation,alternating,unknot,det,khr_rank\n"
        f'trefoil,"{TREFOIL}",,true,false,3,3\n'
        "figure_eight,,conway:22,true,false,7,\n"
    )
    rows = list(TableConfig(csv_path=str(path)).iter_rows())
    assert rows[0]["reference"] == {"det": 3, "khr_rank": 3}
    assert rows[1]["reference"] == {"det": 7, "khr_rank": None}

    df = run_table(TableConfig(csv_path=str(path), checks=["reference"]))
    assert df["violations"].tolist() == ["", "reference"]
    assert df.loc[1, "determinant"] == 5
