"""Shared diagrams and corpus tables."""

import pandas as pd
import pytest

from khcube.core.diagram import parse_pd
from khcube.io.readers import bundled_path, read_knot_table

TREFOIL = "PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]"
FIGURE_EIGHT = "PD[X[4,2,5,1],X[8,6,1,5],X[6,3,7,4],X[2,7,3,8]]"
HOPF = "PD[X[1,3,2,4],X[3,1,4,2]]"
KINK_NEGATIVE = "PD[X[1,2,2,1]]"
KINK_POSITIVE = "PD[X[1,1,2,2]]"
TREFOIL_KINK = "PD[X[1,4,2,5],X[3,8,4,1],X[5,2,6,3],X[6,8,7,7]]"


def table_rows(name, max_crossings=None):
    """(name, pd) pairs of a bundled table, optionally capped by crossing count."""
    df = read_knot_table(bundled_path(name))
    rows = []
    for _, row in df.iterrows():
        if max_crossings is not None and parse_pd(row["pd"]).n_crossings > max_crossings:
            continue
        rows.append((row["name"], row["pd"]))
    return rows


@pytest.fixture
def unknot():
    return parse_pd("U1")


@pytest.fixture
def trefoil():
    return parse_pd(TREFOIL)


@pytest.fixture
def figure_eight():
    return parse_pd(FIGURE_EIGHT)


@pytest.fixture
def hopf():
    return parse_pd(HOPF)


@pytest.fixture
def kink():
    return parse_pd(KINK_NEGATIVE)


@pytest.fixture
def knot_table() -> pd.DataFrame:
    return read_knot_table(bundled_path("knots9.csv"))
