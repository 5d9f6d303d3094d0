"""
khcube - Khovanov cohomology of knots and links from planar diagrams.

Exact integer and finite-field computations over the cube of resolutions,
with mapping cones, filtered spectral pages and the classical invariants
used to cross-check them.
"""

__version__ = "0.1.0"

from khcube.core.diagram import PlanarDiagram, parse_pd, render_pd, validate, mirror
from khcube.core.cube import enumerate_cube
from khcube.core.khcomplex import SignRule, build_complex, verify_d_squared, z4_collapse
from khcube.core.config import RunConfig, set_config
from khcube.core.errors import KhcubeError, DiagramError, ContractError, CapExceededError
from khcube.homalg import Ring, homology, smith_normal_form, poincare_polynomial
from khcube.spectral import (
    ChainComplex,
    ChainMap,
    mapping_cone,
    spectral_pages,
    cone_decomposition,
    skein_triangle,
    os_lemma_check,
)
from khcube.invariants import (
    jones_oracle,
    alexander_polynomial,
    determinant,
    unknot_certificate,
    check_bounds,
)
from khcube.io import read_knot_table, read_triangle_json, write_json

# Workflow utilities (tables and benchmarks)
from khcube.workflows import TableConfig, run_table, run_bench

__all__ = [
    # Diagrams and complexes
    "PlanarDiagram",
    "parse_pd",
    "render_pd",
    "validate",
    "mirror",
    "enumerate_cube",
    "SignRule",
    "build_complex",
    "verify_d_squared",
    "z4_collapse",
    # Configuration
    "RunConfig",
    "set_config",
    # Errors
    "KhcubeError",
    "DiagramError",
    "ContractError",
    "CapExceededError",
    # Homological algebra
    "Ring",
    "homology",
    "smith_normal_form",
    "poincare_polynomial",
    # Cones, pages and triangles
    "ChainComplex",
    "ChainMap",
    "mapping_cone",
    "spectral_pages",
    "cone_decomposition",
    "skein_triangle",
    "os_lemma_check",
    # Invariants
    "jones_oracle",
    "alexander_polynomial",
    "determinant",
    "unknot_certificate",
    "check_bounds",
    # I/O
    "read_knot_table",
    "read_triangle_json",
    "write_json",
    # Workflow utilities
    "TableConfig",
    "run_table",
    "run_bench",
]
