"""Input/Output utilities for knot tables, triangle data and JSON reports."""

from khcube.io.readers import read_knot_table, read_reidemeister_pairs, read_triangle_json
from khcube.io.writers import write_json, write_triangle_json

__all__ = [
    "read_knot_table",
    "read_reidemeister_pairs",
    "read_triangle_json",
    "write_json",
    "write_triangle_json",
]
