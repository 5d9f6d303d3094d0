"""
Chain complexes over fields, mapping cones, spectral pages and exact triangles.
"""

from khcube.spectral.complexes import ChainComplex, ChainMap, mapping_cone
from khcube.spectral.pages import FilteredComplex, SpectralPage, spectral_pages, limit_rank
from khcube.spectral.lemma import TriangleData, LemmaVerdict, os_lemma_check
from khcube.spectral.khovanov import (
    ConeReport,
    cone_decomposition,
    khovanov_filtered_complex,
    skein_triangle,
    total_cube_complex,
)

__all__ = [
    # Complexes and maps
    "ChainComplex",
    "ChainMap",
    "mapping_cone",
    # Filtrations
    "FilteredComplex",
    "SpectralPage",
    "spectral_pages",
    "limit_rank",
    # Triangles
    "TriangleData",
    "LemmaVerdict",
    "os_lemma_check",
    # Khovanov complexes
    "ConeReport",
    "cone_decomposition",
    "khovanov_filtered_complex",
    "skein_triangle",
    "total_cube_complex",
]
