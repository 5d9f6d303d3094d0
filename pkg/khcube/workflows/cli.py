"""
Command line front end.

Every subcommand prints one canonical JSON document (or writes it with
``-o``) with the top-level keys diagram, config, homology, z4 and
invariants, plus a subcommand-specific section where one applies.

Usage:
    khcube kh "PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]" --ring Z
    khcube khr U1
    khcube z4 4_1 --ring Q
    khcube triangle 3_1 --crossing 2
    khcube verify 5_2 --alternating
    khcube kh conway:3,21,2 --ring Q
    khcube table khcube/data/knots9.csv --check alexander,determinant --threads 4
    khcube bench khcube/data/knots9.csv --threads 8
    khcube oslemma khcube/data/synthetic/triangle_unit.json

Exit status: 0 success, 1 invalid input or contract violation, 2 resource cap
exceeded, 3 a property check failed.
"""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from dataclasses import replace
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from khcube.core.config import SUBCOMMANDS, RunConfig, set_config
from khcube.core.cube import CubeDescriptor, enumerate_cube
from khcube.core.diagram import PlanarDiagram, mirror, parse_pd
from khcube.core.errors import CapExceededError, KhcubeError
from khcube.core.khcomplex import (
    DECREASING,
    INCREASING,
    BigradedComplex,
    SignRule,
    build_complex,
    sign_identity_holds,
    two_face_violations,
    verify_d_squared,
    z4_collapse,
)
from khcube.core.tangles import NOTATION_PREFIXES, diagram_from_notation
from khcube.core.tqft import frobenius_identities
from khcube.homalg.homology import BigradedHomology, homology, poincare_polynomial
from khcube.homalg.rings import INTEGERS, RATIONALS, Ring
from khcube.invariants.polynomials import jones_coefficients
from khcube.invariants.reports import check_bounds, f2_ranks, unknot_z4_ranks
from khcube.io.readers import bundled_path, read_knot_table, read_triangle_json
from khcube.io.writers import (
    complex_to_json,
    cube_to_json,
    diagram_to_json,
    homology_to_json,
    write_json,
)
from khcube.spectral.khovanov import (
    cone_decomposition,
    e1_matches_cube,
    khovanov_filtered_complex,
    skein_triangle,
)
from khcube.spectral.lemma import os_lemma_check
from khcube.spectral.pages import spectral_pages
from khcube.workflows.batch import TABLE_CHECKS, TableConfig, run_bench, run_table, summarize_table

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_CAP = 2
EXIT_CHECK_FAILED = 3

# verify runs the spectral, duality and cone checks only up to this size
SPECTRAL_MAX_CROSSINGS = 8

# v+ in degree 0 and v- in degree -2
UNKNOT_Z4 = {0: 1, 2: 1}

BUNDLED_TABLES = ("knots9.csv", "unknots.csv")

Outcome = Tuple[dict, int]


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

def resolve_diagram(text: str) -> PlanarDiagram:
    """Parse a PD code, ``U<n>``, a ``conway:``/``tait:``/``braid:`` notation, or a bundled row name (e.g. ``4_1``)."""
    stripped = text.strip()
    if stripped.startswith("PD") or re.fullmatch(r"U\d+", stripped):
        return parse_pd(stripped)
    if stripped.partition(":")[0] in NOTATION_PREFIXES:
        return diagram_from_notation(stripped)
    for table in BUNDLED_TABLES:
        df = read_knot_table(bundled_path(table))
        match = df[df["name"] == stripped]
        if len(match):
            logger.info(f"Resolved {stripped} from bundled {table}")
            return parse_pd(match["pd"].iloc[0])
    return parse_pd(stripped)


def _field(config: RunConfig) -> Ring:
    """The configured ring when it is a field, otherwise Q."""
    ring = config.ring_tag()
    if ring.is_field:
        return ring
    logger.info(f"Using Q instead of {ring} for a field-only computation")
    return RATIONALS


def _dump(config: RunConfig, cube: CubeDescriptor, c: BigradedComplex) -> None:
    if config.dump_cube:
        write_json(cube_to_json(cube), config.dump_cube)
        logger.info(f"Wrote cube to {config.dump_cube}")
    if config.dump_complex:
        write_json(complex_to_json(c), config.dump_complex)
        logger.info(f"Wrote complex to {config.dump_complex}")


def _compute(
    d: PlanarDiagram, config: RunConfig, ring: Optional[Ring] = None
) -> Tuple[BigradedComplex, BigradedHomology]:
    """Complex and homology selected by ``config``, honouring the dump paths."""
    cube = enumerate_cube(d, config.max_crossings, workers=config.threads)
    c = build_complex(
        d,
        config.variant,
        config.sign_rule(),
        ring or config.ring_tag(),
        config.full_direction,
        config.max_crossings,
        cube=cube,
    )
    _dump(config, cube, c)
    return c, homology(c, workers=config.threads)


def _payload(
    d: Optional[PlanarDiagram],
    config: RunConfig,
    h: Optional[BigradedHomology] = None,
    z4: Optional[dict] = None,
    invariants: Optional[dict] = None,
) -> dict:
    return {
        "diagram": diagram_to_json(d) if d is not None else None,
        "config": config.to_dict(),
        "homology": homology_to_json(h) if h is not None else [],
        "z4": z4,
        "invariants": invariants or {},
    }


def _records(df) -> List[dict]:
    return json.loads(df.to_json(orient="records"))


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_kh(args: argparse.Namespace, config: RunConfig) -> Outcome:
    d = resolve_diagram(args.input)
    _, h = _compute(d, config)
    invariants = {
        "total_rank": h.total_rank,
        "torsion": [str(t) for t in h.torsion_orders()],
    }
    if h.ring.is_field:
        invariants["poincare"] = poincare_polynomial(h)
    return _payload(d, config, h, invariants=invariants), EXIT_OK


def cmd_khr(args: argparse.Namespace, config: RunConfig) -> Outcome:
    config = replace(config, variant="reduced")
    d = resolve_diagram(args.input)
    _, h = _compute(d, config)
    # free ranks over Z agree with ranks over Q
    invariants = {
        "khr_rank": h.total_rank,
        "unknot_certified": h.total_rank == 1 if d.n_components == 1 else None,
    }
    return _payload(d, config, h, invariants=invariants), EXIT_OK


def cmd_z4(args: argparse.Namespace, config: RunConfig) -> Outcome:
    config = replace(config, variant="unreduced")
    d = resolve_diagram(args.input)
    _, h = _compute(d, config, ring=_field(config))
    table = z4_collapse(h, d)
    status = EXIT_OK if table.agree else EXIT_CHECK_FAILED
    return _payload(d, config, h, z4=table.to_json()), status


def cmd_triangle(args: argparse.Namespace, config: RunConfig) -> Outcome:
    d = resolve_diagram(args.input)
    ring = _field(config)
    cone = cone_decomposition(d, args.crossing, ring, config.full_direction, config.max_crossings)
    lemma = None
    try:
        triangle = skein_triangle(d, args.crossing, ring, config.max_crossings)
        lemma = os_lemma_check(triangle, max_dim=config.lemma_max_dim)
    except CapExceededError as e:
        logger.warning(f"Skipping the triangle lemma check: {e}")

    ok = cone.defect == 0 and cone.children_match
    if lemma is not None:
        ok = ok and lemma.hypotheses_hold and bool(lemma.conclusions_hold)
    payload = _payload(d, config)
    payload["triangle"] = {
        "cone": cone.to_json(),
        "lemma": lemma.to_json() if lemma is not None else None,
    }
    return payload, EXIT_OK if ok else EXIT_CHECK_FAILED


def verify_checks(d: PlanarDiagram, config: RunConfig) -> Tuple[Dict[str, bool], BigradedHomology, dict]:
    """
    Every property check that applies to one diagram.

    Returns:
        (check name -> passed, unreduced homology over a field, Z/4 table JSON)
    """
    checks: Dict[str, bool] = {}
    cube = enumerate_cube(d, config.max_crossings, workers=config.threads)
    for name, rule in (("delta", SignRule("delta")), ("tilde", SignRule("tilde_delta"))):
        checks[f"two_faces_{name}"] = not two_face_violations(cube, rule)
        c = build_complex(d, "unreduced", rule, INTEGERS, config.full_direction, config.max_crossings, cube=cube)
        checks[f"d_squared_{name}"] = verify_d_squared(c, workers=config.threads)
    checks["sign_identity"] = sign_identity_holds(cube)

    ring = _field(config)
    c_field = build_complex(d, "unreduced", config.sign_rule(), ring, INCREASING, config.max_crossings, cube=cube)
    h_field = homology(c_field, workers=config.threads)
    if d.n_crossings <= config.oracle_max_crossings:
        checks["euler_matches_jones"] = c_field.euler_characteristic() == jones_coefficients(
            d, config.oracle_max_crossings
        )
    z4 = z4_collapse(h_field, d)
    checks["z4_agree"] = z4.agree
    checks["z4_unknot"] = unknot_z4_ranks(ring) == UNKNOT_Z4
    unreduced_f2, reduced_f2 = f2_ranks(d, config.max_crossings)
    checks["f2_parity"] = unreduced_f2 == 2 * reduced_f2
    checks.update({f"tqft_{name}": ok for name, ok in frobenius_identities().items()})

    if d.n_crossings <= SPECTRAL_MAX_CROSSINGS:
        h_dec = homology(build_complex(d, ring=ring, direction=DECREASING, max_crossings=config.max_crossings))
        h_mirror = homology(build_complex(mirror(d), ring=ring, max_crossings=config.max_crossings))
        checks["mirror_duality"] = h_dec.groups == h_mirror.groups
        checks["mirror_symmetry"] = {(-i, -j): g for (i, j), g in h_field.groups.items()} == h_mirror.groups
        checks["e1_matches_cube"] = e1_matches_cube(c_field)
        pages = spectral_pages(khovanov_filtered_complex(c_field), r_max=2)
        checks["e2_matches_homology"] = pages[-1].total_rank == h_field.total_rank
        if d.n_crossings:
            cone = cone_decomposition(d, 1, ring, max_crossings=config.max_crossings)
            checks["cone_exact"] = cone.defect == 0 and cone.children_match
    return checks, h_field, z4.to_json()


def cmd_verify(args: argparse.Namespace, config: RunConfig) -> Outcome:
    d = resolve_diagram(args.input)
    checks, _, z4 = verify_checks(d, config)
    _, h = _compute(d, config)
    report = check_bounds(d, args.alternating, config.max_crossings, config.oracle_max_crossings)
    checks["alexander_bound"] = report.alexander_bound_ok is not False
    checks["det_equality"] = report.det_equality_ok is not False

    failed = sorted(name for name, ok in checks.items() if not ok)
    if failed:
        logger.warning(f"Failed checks: {', '.join(failed)}")
    payload = _payload(d, config, h, z4=z4, invariants=report.to_json())
    payload["checks"] = dict(sorted(checks.items()))
    return payload, EXIT_CHECK_FAILED if failed else EXIT_OK


def cmd_table(args: argparse.Namespace, config: RunConfig) -> Outcome:
    table_config = TableConfig(
        csv_path=args.input,
        checks=[c.strip() for c in args.check.split(",") if c.strip()],
        max_crossings=config.max_crossings,
        oracle_max_crossings=config.oracle_max_crossings,
        threads=config.threads,
        table_name=Path(args.input).stem,
    )
    df = run_table(table_config)
    summary = summarize_table(df)
    payload = _payload(None, config)
    payload["table"] = {"name": table_config.table_name, "rows": _records(df), "summary": summary}
    if summary["violations"]:
        return payload, EXIT_CHECK_FAILED
    return payload, EXIT_INVALID if summary["failed"] else EXIT_OK


def cmd_bench(args: argparse.Namespace, config: RunConfig) -> Outcome:
    df = run_bench(args.input, threads=config.threads, ring=str(config.ring_tag()),
                   max_crossings=config.max_crossings)
    payload = _payload(None, config)
    payload["bench"] = _records(df)
    return payload, EXIT_OK if df["success"].all() else EXIT_INVALID


def cmd_oslemma(args: argparse.Namespace, config: RunConfig) -> Outcome:
    triangle = read_triangle_json(args.input)
    verdict = os_lemma_check(triangle, max_dim=config.lemma_max_dim)
    payload = _payload(None, config)
    payload["oslemma"] = {
        "dims": [triangle.complex(i).dim for i in range(3)],
        "verdict": verdict.to_json(),
    }
    ok = verdict.hypotheses_hold and bool(verdict.conclusions_hold)
    return payload, EXIT_OK if ok else EXIT_CHECK_FAILED


COMMANDS: Dict[str, Callable[[argparse.Namespace, RunConfig], Outcome]] = {
    "kh": cmd_kh,
    "khr": cmd_khr,
    "z4": cmd_z4,
    "triangle": cmd_triangle,
    "verify": cmd_verify,
    "table": cmd_table,
    "bench": cmd_bench,
    "oslemma": cmd_oslemma,
}


# ---------------------------------------------------------------------------
# Entry points
# ---------------------------------------------------------------------------

def _add_global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    """Flags accepted before or after the subcommand.

    The copies on subparsers default to SUPPRESS so they only override a
    value when given.
    """
    defaults = RunConfig()

    def default(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--ring", default=default(defaults.ring), help="Z, Q, F2 or Fp=<p>")
    parser.add_argument("--reduced", action="store_true", default=default(False),
                        help="Reduced theory (quotient by v- on the marked circle)")
    parser.add_argument("--signs", choices=["delta", "tilde"], default=default(defaults.signs))
    parser.add_argument("--direction", choices=["inc", "dec"], default=default(defaults.direction))
    parser.add_argument("--max-crossings", type=int, default=default(defaults.max_crossings))
    parser.add_argument("--oracle-max-crossings", type=int, default=default(defaults.oracle_max_crossings))
    parser.add_argument("--lemma-max-dim", type=int, default=default(defaults.lemma_max_dim))
    parser.add_argument("--threads", type=int, default=default(defaults.threads))
    parser.add_argument("--dump-complex", default=default(None), help="Write the chain complex JSON here")
    parser.add_argument("--dump-cube", default=default(None), help="Write the cube descriptor JSON here")
    parser.add_argument("-o", "--output", default=default(None), help="Write the report here instead of stdout")
    parser.add_argument("-v", "--verbose", action="count", default=default(0))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="khcube", description="Khovanov cohomology from PD codes")
    _add_global_flags(parser, suppress=False)
    shared = argparse.ArgumentParser(add_help=False)
    _add_global_flags(shared, suppress=True)

    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "kh": "Bigraded homology",
        "khr": "Reduced homology and unknot certificate",
        "z4": "Z/4 collapse with the per-vertex cross-check",
        "triangle": "Skein exact triangle at one crossing",
        "verify": "All property checks for one diagram",
        "table": "Invariant checks over a knot table CSV",
        "bench": "Stage timings over a knot table CSV",
        "oslemma": "Triangle lemma check on JSON triangle data",
    }
    for name in SUBCOMMANDS:
        p = sub.add_parser(name, parents=[shared], help=helps[name])
        target = "CSV path" if name in ("table", "bench") else "JSON path" if name == "oslemma" else "PD code, U<n> or bundled knot name"
        p.add_argument("input", help=target)
        if name == "triangle":
            p.add_argument("--crossing", type=int, default=1, help="1-based crossing index")
        if name == "table":
            p.add_argument("--check", default=",".join(TABLE_CHECKS),
                           help=f"Comma-separated subset of {', '.join(TABLE_CHECKS)}")
        if name == "verify":
            p.add_argument("--alternating", action="store_true", default=None,
                           help="Assert the diagram is alternating (enables the determinant check)")
    return parser


def _configure_logging(verbose: int) -> None:
    level = logging.WARNING if not verbose else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def run(argv: Optional[List[str]] = None) -> int:
    """
    Run one subcommand and return its exit status.

    Args:
        argv: Argument list without the program name (defaults to sys.argv[1:])

    Returns:
        0, 1, 2 or 3 as described in the module docstring
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_INVALID
    _configure_logging(args.verbose)

    try:
        config = set_config(
            subcommand=args.command,
            ring=args.ring,
            reduced=args.reduced,
            signs=args.signs,
            direction=args.direction,
            max_crossings=args.max_crossings,
            oracle_max_crossings=args.oracle_max_crossings,
            lemma_max_dim=args.lemma_max_dim,
            threads=args.threads,
            output=args.output,
            dump_complex=args.dump_complex,
            dump_cube=args.dump_cube,
        )
        payload, status = COMMANDS[args.command](args, config)
    except CapExceededError as e:
        print(f"Resource cap exceeded: {e}", file=sys.stderr)
        return EXIT_CAP
    except (KhcubeError, ValueError, FileNotFoundError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_INVALID

    text = write_json(payload, config.output)
    if config.output is None:
        sys.stdout.write(text)
    return status


def main():
    """Console entry point."""
    sys.exit(run())


if __name__ == "__main__":
    main()
