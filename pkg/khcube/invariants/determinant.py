"""
Link determinant from a Goeritz matrix.

Faces of the projection are checkerboard-coloured; the white faces index the
Goeritz matrix. At a crossing whose white corners are distinct faces i and j,
the entry G_ij gains -η, where η = +1 when the white corners sit between
slots (a,b) and (c,d) and -1 otherwise. Diagonal entries make rows sum to zero,
and the determinant is |det| of any principal minor of size one less.
"""

from __future__ import annotations

import logging
from collections import deque
from typing import Dict, List, Tuple

import numpy as np
from sympy import ZZ
from sympy.polys.matrices import DomainMatrix

from khcube.core.diagram import PlanarDiagram, faces, projection_pieces
from khcube.core.errors import ContractError

logger = logging.getLogger(__name__)

Dart = Tuple[int, int]


def checkerboard(d: PlanarDiagram) -> Tuple[Dict[Dart, int], List[int]]:
    """
    Face index of every dart and a 0/1 colour per face.

    Faces on the two sides of an edge get different colours; the face at
    corner (a,b) of the first crossing is coloured 0.

    Raises:
        ContractError: if the faces cannot be two-coloured (non-planar input)
    """
    face_list = faces(d)
    face_of: Dict[Dart, int] = {dart: k for k, cycle in enumerate(face_list) for dart in cycle}
    neighbours: Dict[int, set] = {k: set() for k in range(len(face_list))}
    for ci in range(d.n_crossings):
        for slot in range(4):
            left, right = face_of[(ci, slot)], face_of[(ci, (slot + 1) % 4)]
            neighbours[left].add(right)
            neighbours[right].add(left)

    colour = [-1] * len(face_list)
    for start in range(len(face_list)):
        if colour[start] >= 0:
            continue
        colour[start] = 0
        queue = deque([start])
        while queue:
            k = queue.popleft()
            for other in neighbours[k]:
                if colour[other] < 0:
                    colour[other] = 1 - colour[k]
                    queue.append(other)
                elif colour[other] == colour[k]:
                    raise ContractError("Projection faces are not two-colourable")
    if colour[face_of[(0, 1)]] != 0:
        colour = [1 - c for c in colour]
    return face_of, colour


def goeritz_matrix(d: PlanarDiagram) -> np.ndarray:
    """Full (unreduced) Goeritz matrix over the white faces."""
    face_of, colour = checkerboard(d)
    white = sorted(k for k, c in enumerate(colour) if c == 0)
    position = {k: i for i, k in enumerate(white)}
    g = np.zeros((len(white), len(white)), dtype=np.int64)
    for ci in range(d.n_crossings):
        if colour[face_of[(ci, 1)]] == 0:
            corners, eta = (face_of[(ci, 1)], face_of[(ci, 3)]), 1
        else:
            corners, eta = (face_of[(ci, 0)], face_of[(ci, 2)]), -1
        i, j = position[corners[0]], position[corners[1]]
        if i == j:
            continue
        g[i, j] -= eta
        g[j, i] -= eta
    np.fill_diagonal(g, 0)
    np.fill_diagonal(g, -g.sum(axis=1))
    return g


def determinant(d: PlanarDiagram) -> int:
    """
    |det| of a Goeritz minor.

    Split diagrams (free loops beside other components, or several projection
    pieces) give 0; the crossingless unknot and the empty diagram give 1.

    Example:
        determinant(parse_pd("PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]"))  # 3
    """
    if d.n_crossings == 0:
        return 1 if d.free_loops <= 1 else 0
    if d.free_loops or projection_pieces(d) > 1:
        return 0
    g = goeritz_matrix(d)
    size = g.shape[0] - 1
    if size <= 0:
        return 1
    minor = DomainMatrix([[ZZ(int(x)) for x in row[:size]] for row in g[:size]], (size, size), ZZ)
    value = abs(int(minor.det()))
    logger.debug(f"Goeritz minor of size {size}: |det| = {value}")
    return value
