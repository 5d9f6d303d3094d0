"""
Workflow utilities: the command line and batch runs over knot tables.
"""

from khcube.workflows.batch import TableConfig, run_table, summarize_table, run_bench
from khcube.workflows.cli import run, main

__all__ = [
    # Batch processing
    "TableConfig",
    "run_table",
    "summarize_table",
    "run_bench",
    # Command line
    "run",
    "main",
]
