# Copyright (c) 2026, stdg-VEM developers
# SPDX-License-Identifier: Apache-2.0

from typing import Dict, List, Sequence, Tuple

import numpy as np

from stdg_VEM.VEM_common.VEM_types import BBox, CellGeometry
from stdg_VEM.VEM_common.Errors import MeshError

HANGING_TOL = 1e-10


def signed_area(points: np.ndarray) -> float:
    x, y = points[:, 0], points[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def polygon_geometry(points: np.ndarray) -> CellGeometry:
    """Shoelace area, area-weighted centroid and max pairwise vertex distance."""
    x, y = points[:, 0], points[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cross = x * yn - xn * y
    area = 0.5 * float(cross.sum())
    if abs(area) <= 1e-14 * max(1.0, float(np.ptp(points, axis=0).max()) ** 2):
        raise MeshError("zero-area polygon")
    cx = float(((x + xn) * cross).sum()) / (6.0 * area)
    cy = float(((y + yn) * cross).sum()) / (6.0 * area)
    diff = points[:, None, :] - points[None, :, :]
    diameter = float(np.sqrt((diff ** 2).sum(axis=2)).max())
    return CellGeometry(area, np.array([cx, cy]), diameter)


def _segments_cross(p1: np.ndarray, p2: np.ndarray, q1: np.ndarray, q2: np.ndarray) -> bool:
    def orient(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> float:
        return float((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))

    d1, d2 = orient(q1, q2, p1), orient(q1, q2, p2)
    d3, d4 = orient(p1, p2, q1), orient(p1, p2, q2)
    return (d1 * d2 < 0) and (d3 * d4 < 0)


def is_simple(points: np.ndarray) -> bool:
    n = len(points)
    for i in range(n):
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue
            if _segments_cross(points[i], points[(i + 1) % n], points[j], points[(j + 1) % n]):
                return False
    return True


class PolyMesh:
    """Conforming polygonal partition of a 2D domain.

    Cells are counterclockwise vertex-index cycles. Edges are derived once, in
    order of first appearance, and stored with ``a < b``; ``cell_edge_sign``
    is +1 where the cell walks an edge from ``a`` to ``b``.
    """

    def __init__(self, vertices: np.ndarray, cells: Sequence[Sequence[int]], *,
                 name: str = "") -> None:
        vertices = np.array(vertices, dtype=float)
        assert vertices.ndim == 2 and vertices.shape[1] == 2, "vertices must be an (N, 2) array"
        assert len(cells) > 0, "mesh needs at least one cell"

        self.name: str = name
        self.vertices: np.ndarray = vertices
        self.vertices.flags.writeable = False
        self.cells: Tuple[np.ndarray, ...] = tuple(np.array(c, dtype=np.int64) for c in cells)
        for c in self.cells:
            c.flags.writeable = False

        self._check_cells()
        self._build_edges()
        self._build_geometry()

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_cells(self) -> int:
        return len(self.cells)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def cell_points(self, cell: int) -> np.ndarray:
        return self.vertices[self.cells[cell]]

    def _check_cells(self) -> None:
        n_vertices = len(self.vertices)
        for i, cell in enumerate(self.cells):
            if len(cell) < 3:
                raise MeshError(f"cell {i} has fewer than 3 vertices")
            if cell.min() < 0 or cell.max() >= n_vertices:
                raise MeshError(f"cell {i} references a missing vertex")
            if len(np.unique(cell)) != len(cell):
                raise MeshError(f"cell {i} repeats a vertex")
            area = signed_area(self.vertices[cell])
            if area <= 0.0:
                raise MeshError(f"cell {i} is clockwise or degenerate (signed area {area:.3e})")
            if not is_simple(self.vertices[cell]):
                raise MeshError(f"cell {i} is self-intersecting")

    def _build_edges(self) -> None:
        index: Dict[Tuple[int, int], int] = {}
        edges: List[Tuple[int, int]] = []
        owners: List[List[int]] = []
        directions: List[List[int]] = []
        cell_edges: List[np.ndarray] = []
        cell_signs: List[np.ndarray] = []
        for c, cell in enumerate(self.cells):
            loc_edges = np.empty(len(cell), dtype=np.int64)
            loc_signs = np.empty(len(cell), dtype=np.int64)
            for i in range(len(cell)):
                a, b = int(cell[i]), int(cell[(i + 1) % len(cell)])
                key = (min(a, b), max(a, b))
                sign = 1 if a < b else -1
                if key not in index:
                    index[key] = len(edges)
                    edges.append(key)
                    owners.append([])
                    directions.append([])
                e = index[key]
                owners[e].append(c)
                directions[e].append(sign)
                loc_edges[i] = e
                loc_signs[i] = sign
            cell_edges.append(loc_edges)
            cell_signs.append(loc_signs)

        edge_cells = -np.ones((len(edges), 2), dtype=np.int64)
        for e, (cells, signs) in enumerate(zip(owners, directions)):
            if len(cells) > 2:
                raise MeshError(f"edge {edges[e]} is shared by {len(cells)} cells")
            if len(cells) == 2 and signs[0] == signs[1]:
                raise MeshError(f"edge {edges[e]} is walked in the same direction by "
                                f"cells {cells[0]} and {cells[1]}")
            edge_cells[e, :len(cells)] = cells

        self.edges: np.ndarray = np.array(edges, dtype=np.int64)
        self.edge_cells: np.ndarray = edge_cells
        self.boundary_edges: np.ndarray = edge_cells[:, 1] < 0
        self._check_boundary_edges()
        self.cell_edges: Tuple[np.ndarray, ...] = tuple(cell_edges)
        self.cell_edge_sign: Tuple[np.ndarray, ...] = tuple(cell_signs)
        boundary_vertices = np.zeros(len(self.vertices), dtype=bool)
        boundary_vertices[self.edges[self.boundary_edges].ravel()] = True
        self.boundary_vertices: np.ndarray = boundary_vertices

    def _check_boundary_edges(self) -> None:
        """Single-cell edges must not pass through another vertex (no hanging nodes)."""
        for e in np.flatnonzero(self.boundary_edges):
            a, b = self.edges[e]
            p, d = self.vertices[a], self.vertices[b] - self.vertices[a]
            length2 = float(d @ d)
            rel = self.vertices - p
            t = rel @ d / length2
            offset = np.abs(rel[:, 0] * d[1] - rel[:, 1] * d[0]) / length2
            inside = (t > HANGING_TOL) & (t < 1.0 - HANGING_TOL) & (offset <= HANGING_TOL)
            if inside.any():
                raise MeshError(f"edge {tuple(int(v) for v in self.edges[e])} of cell "
                                f"{self.edge_cells[e, 0]} has a hanging node at vertex "
                                f"{int(np.flatnonzero(inside)[0])}")

    def _build_geometry(self) -> None:
        geometry = [polygon_geometry(self.cell_points(c)) for c in range(self.n_cells)]
        self.areas: np.ndarray = np.array([g.area for g in geometry])
        self.centroids: np.ndarray = np.array([g.centroid for g in geometry])
        self.diameters: np.ndarray = np.array([g.diameter for g in geometry])
        self.h: float = float(self.diameters.max())
        self.h_min: float = float(self.diameters.min())
        lo, hi = self.vertices.min(axis=0), self.vertices.max(axis=0)
        self.domain_bbox: BBox = BBox(float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1]))

    def geometry(self, cell: int) -> CellGeometry:
        return CellGeometry(float(self.areas[cell]), self.centroids[cell].copy(),
                            float(self.diameters[cell]))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PolyMesh):
            return NotImplemented
        return (np.array_equal(self.vertices, other.vertices)
                and len(self.cells) == len(other.cells)
                and all(np.array_equal(a, b) for a, b in zip(self.cells, other.cells)))

    def __repr__(self) -> str:
        return (f"PolyMesh(name={self.name!r}, vertices={self.n_vertices}, "
                f"cells={self.n_cells}, h={self.h:.4g})")


def cell_geometry(mesh: PolyMesh, cell: int) -> CellGeometry:
    assert 0 <= cell < mesh.n_cells, f"cell index {cell} out of range"
    return polygon_geometry(mesh.cell_points(cell))
