"""Diagrams, the cube of resolutions, the Frobenius algebra and signed complexes."""

from khcube.core.diagram import PlanarDiagram, braid_closure, parse_pd, render_pd, validate
from khcube.core.cube import CubeDescriptor, CubeVertex, enumerate_cube
from khcube.core.khcomplex import BigradedComplex, SignRule, build_complex
from khcube.core.config import RunConfig, set_config

__all__ = [
    "PlanarDiagram",
    "parse_pd",
    "braid_closure",
    "render_pd",
    "validate",
    "CubeDescriptor",
    "CubeVertex",
    "enumerate_cube",
    "BigradedComplex",
    "SignRule",
    "build_complex",
    "RunConfig",
    "set_config",
]
