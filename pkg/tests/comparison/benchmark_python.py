#!/usr/bin/env python3
"""
Python Performance Benchmark for khcube
This script times each pipeline stage on torus knots and the bundled table,
serially and with a process pool for the block reductions
"""

import csv
import tracemalloc
from pathlib import Path
from typing import Any, Dict, List

import numpy as np

from khcube.io.readers import bundled_path, read_knot_table
from khcube.workflows.batch import time_pipeline

# Configuration
base_dir = Path(__file__).resolve().parent
results_file = base_dir / "benchmark_python_results.csv"

# Benchmark parameters
TORUS = [3, 5, 7, 9, 11]
THREADS = [1, 8]
RINGS = ["Z", "Q", "F2"]
REPEATS = 3

timing_results: List[Dict[str, Any]] = []


def torus_pd(n: int) -> str:
    """PD code of the (2, n) torus knot (n odd)."""
    labels = 2 * n

    def wrap(x: int) -> int:
        return (x - 1) % labels + 1

    crossings = [
        f"X[{wrap(2 * k + 1)},{wrap(2 * k + n + 1)},{wrap(2 * k + 2)},{wrap(2 * k + n + 2)}]"
        for k in range(n)
    ]
    return "PD[" + ",".join(crossings) + "]"


def add_timing(component: str, operation: str, time_sec: float, threads: int = 1, ring: str = "Z"):
    timing_results.append({
        "component": component,
        "operation": operation,
        "time_seconds": time_sec,
        "threads": threads,
        "ring": ring,
    })


def mean_of(runs: List[Dict[str, Any]], key: str) -> float:
    return float(np.mean([r[key] for r in runs]))


def main():
    print("=" * 70)
    print("PYTHON (khcube) PERFORMANCE BENCHMARK")
    print("=" * 70)
    print()

    print("Benchmark Configuration:")
    print(f"  Torus knots: {', '.join(f'T(2,{n})' for n in TORUS)}")
    print(f"  Rings: {', '.join(RINGS)}")
    print(f"  Threads: {THREADS}")
    print(f"  Repeats: {REPEATS}")
    print()

    # ============================================================
    # BENCHMARK 1: Torus knots, stage by stage
    # ============================================================
    print("BENCHMARK 1: Torus Knot Pipeline (Z coefficients)")
    print("-" * 50)

    for n in TORUS:
        runs = [time_pipeline(torus_pd(n), ring="Z") for _ in range(REPEATS)]
        for stage in ("parse_s", "cube_s", "complex_s", "homology_s", "total_s"):
            add_timing(f"T(2,{n})", stage, mean_of(runs, stage))
        print(f"  T(2,{n}): {runs[0]['generators']} generators, rank {runs[0]['total_rank']}, "
              f"mean total {mean_of(runs, 'total_s'):.3f} s")

    # ============================================================
    # BENCHMARK 2: Coefficient rings
    # ============================================================
    print("\nBENCHMARK 2: Coefficient Rings on T(2,9)")
    print("-" * 50)

    for ring in RINGS:
        runs = [time_pipeline(torus_pd(9), ring=ring) for _ in range(REPEATS)]
        add_timing("T(2,9)", "homology_s", mean_of(runs, "homology_s"), ring=ring)
        print(f"  {ring}: rank {runs[0]['total_rank']}, "
              f"mean homology time {mean_of(runs, 'homology_s'):.3f} s")

    # ============================================================
    # BENCHMARK 3: Process pool for the block reductions
    # ============================================================
    print("\nBENCHMARK 3: Blockwise Homology, Serial vs Pool on T(2,11)")
    print("-" * 50)

    pool_times = {}
    for threads in THREADS:
        runs = [time_pipeline(torus_pd(11), ring="Z", threads=threads) for _ in range(REPEATS)]
        pool_times[threads] = mean_of(runs, "homology_s")
        add_timing("T(2,11)", "homology_s", pool_times[threads], threads=threads)
        print(f"  threads={threads}: mean homology time {pool_times[threads]:.3f} s")

    if pool_times[THREADS[-1]]:
        print(f"  Speedup: {pool_times[THREADS[0]] / pool_times[THREADS[-1]]:.2f}x")

    # ============================================================
    # BENCHMARK 4: Bundled knot table
    # ============================================================
    print("\nBENCHMARK 4: Bundled Knot Table")
    print("-" * 50)

    table = read_knot_table(bundled_path("knots9.csv"))
    table_totals = []
    for _, row in table.iterrows():
        timings = time_pipeline(row["pd"], ring="Z")
        table_totals.append(timings["total_s"])
        add_timing(row["name"], "total_s", timings["total_s"])
    print(f"  {len(table)} knots in {sum(table_totals):.2f} seconds")

    # ============================================================
    # SUMMARY
    # ============================================================
    print("\n" + "=" * 70)
    print("BENCHMARK SUMMARY")
    print("=" * 70)
    print()

    print("Time Breakdown:")
    for result in timing_results:
        print(f"  {result['component']} - {result['operation']} ({result['ring']}, "
              f"{result['threads']} threads): {result['time_seconds']:.4f} seconds")

    for result in timing_results:
        result["language"] = "Python"

    with open(results_file, "w", newline="") as f:
        writer = csv.DictWriter(
            f, fieldnames=["component", "operation", "time_seconds", "threads", "ring", "language"]
        )
        writer.writeheader()
        writer.writerows(timing_results)

    print(f"\nResults saved to: {results_file}")

    # Memory usage of one mid-sized run
    print("\nMemory Usage:")
    tracemalloc.start()
    time_pipeline(torus_pd(7), ring="Z")
    current, peak = tracemalloc.get_traced_memory()
    tracemalloc.stop()
    print(f"  Current memory: {current / 1024 / 1024:.2f} MB")
    print(f"  Peak memory: {peak / 1024 / 1024:.2f} MB")


if __name__ == "__main__":
    main()
