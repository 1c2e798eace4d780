# Copyright (c) 2026, stdg-VEM developers
# SPDX-License-Identifier: Apache-2.0

import numpy as np
from scipy.optimize import linprog # type: ignore

from stdg_VEM.VEM_common.VEM_types import MeshQualityReport
from stdg_VEM.mesh.PolyMesh import PolyMesh

DEFAULT_RHO = 0.01


def inscribed_ball(points: np.ndarray):
    """Largest ball inside the kernel of a CCW polygon.

    The kernel is the intersection of the inner half-planes of all edges, so
    the polygon is star-shaped with respect to every ball returned here.
    Returns (center, radius); radius is 0 when the kernel is empty.
    """
    d = np.roll(points, -1, axis=0) - points
    lengths = np.hypot(d[:, 0], d[:, 1])
    normals = np.column_stack([d[:, 1], -d[:, 0]]) / lengths[:, None]
    A_ub = np.column_stack([normals, np.ones(len(points))])
    b_ub = np.einsum("ij,ij->i", normals, points)
    res = linprog(c=[0.0, 0.0, -1.0], A_ub=A_ub, b_ub=b_ub,
                  bounds=[(None, None), (None, None), (0.0, None)], method="highs")
    if not res.success:
        return points.mean(axis=0), 0.0
    return res.x[:2], float(max(res.x[2], 0.0))


def check_regularity(mesh: PolyMesh, rho: float = DEFAULT_RHO) -> MeshQualityReport:
    assert 0.0 < rho < 1.0, "rho must lie in (0, 1)"
    rho_star = np.empty(mesh.n_cells)
    edge_ratio = np.empty(mesh.n_cells)
    for c in range(mesh.n_cells):
        points = mesh.cell_points(c)
        h_K = mesh.diameters[c]
        _, radius = inscribed_ball(points)
        rho_star[c] = radius / h_K
        edges = np.roll(points, -1, axis=0) - points
        edge_ratio[c] = np.hypot(edges[:, 0], edges[:, 1]).min() / h_K
    worst = np.minimum(rho_star, edge_ratio)
    violations = [int(c) for c in np.flatnonzero(worst < rho)]
    return MeshQualityReport(rho_star, edge_ratio, int(np.argmin(worst)), rho, violations)
