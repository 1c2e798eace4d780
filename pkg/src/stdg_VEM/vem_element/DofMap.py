# Copyright (c) 2026, stdg-VEM developers
# SPDX-License-Identifier: Apache-2.0

from typing import Optional, Sequence, Tuple

import numpy as np

from stdg_VEM.VEM_common.VEM_types import ScalarField
from stdg_VEM.mesh.PolyMesh import PolyMesh
from stdg_VEM.poly_basis.MonomialBasis import n_monomials
from stdg_VEM.vem_element.VemElement import VemElement, edge_node_parameters


class GlobalDofMap:
    """Global numbering: vertices, then edge nodes per global edge, then cell moments.

    Global edge nodes run from the lower to the higher vertex index; a cell
    walking an edge the other way sees them reversed.
    """

    def __init__(self, mesh: PolyMesh, k: int) -> None:
        assert k >= 1, "VEM degree must be at least 1"
        self.mesh = mesh
        self.k = k
        per_edge = k - 1
        per_cell = n_monomials(k - 2)
        self.edge_offset: int = mesh.n_vertices
        self.moment_offset: int = mesh.n_vertices + mesh.n_edges * per_edge
        self.n_dofs: int = self.moment_offset + mesh.n_cells * per_cell

        cell_dofs = []
        for c, cell in enumerate(mesh.cells):
            dofs = [cell]
            for edge, sign in zip(mesh.cell_edges[c], mesh.cell_edge_sign[c]):
                nodes = self.edge_offset + edge * per_edge + np.arange(per_edge)
                dofs.append(nodes if sign > 0 else nodes[::-1])
            dofs.append(self.moment_offset + c * per_cell + np.arange(per_cell))
            cell_dofs.append(np.concatenate(dofs).astype(np.int64))
        self.cell_dofs: Tuple[np.ndarray, ...] = tuple(cell_dofs)

        boundary = np.zeros(self.n_dofs, dtype=bool)
        boundary[:mesh.n_vertices] = mesh.boundary_vertices
        for e in np.flatnonzero(mesh.boundary_edges):
            boundary[self.edge_offset + e * per_edge:self.edge_offset + (e + 1) * per_edge] = True
        self.boundary: np.ndarray = boundary
        self.free: np.ndarray = np.flatnonzero(~boundary)
        self.fixed: np.ndarray = np.flatnonzero(boundary)
        self.free_index: np.ndarray = -np.ones(self.n_dofs, dtype=np.int64)
        self.free_index[self.free] = np.arange(len(self.free))
        self.points: np.ndarray = self._nodal_points()

    @property
    def n_free(self) -> int:
        return len(self.free)

    def _nodal_points(self) -> np.ndarray:
        """Coordinates of vertex and edge-node DoFs; NaN rows for moments."""
        points = np.full((self.n_dofs, 2), np.nan)
        points[:self.mesh.n_vertices] = self.mesh.vertices
        s = edge_node_parameters(self.k)
        for e, (a, b) in enumerate(self.mesh.edges):
            pa, pb = self.mesh.vertices[a], self.mesh.vertices[b]
            start = self.edge_offset + e * (self.k - 1)
            points[start:start + len(s)] = pa + s[:, None] * (pb - pa)
        return points

    def interpolate(self, func: ScalarField, elements: Sequence[VemElement],
                    out: Optional[np.ndarray] = None) -> np.ndarray:
        """Global DoF vector of a pointwise function ``func(x, y)``."""
        out = np.empty(self.n_dofs) if out is None else out
        nodal = self.moment_offset
        out[:nodal] = np.broadcast_to(func(self.points[:nodal, 0], self.points[:nodal, 1]),
                                      (nodal,))
        for element, dofs in zip(elements, self.cell_dofs):
            if element.layout.n_moments:
                local = element.dof_values(func)
                out[dofs[element.layout.moment_dofs]] = local[element.layout.moment_dofs]
        return out

    def boundary_values(self, func: ScalarField) -> np.ndarray:
        pts = self.points[self.fixed]
        return np.broadcast_to(func(pts[:, 0], pts[:, 1]), (len(pts),)).astype(float)
