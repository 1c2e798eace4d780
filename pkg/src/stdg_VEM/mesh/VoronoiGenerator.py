# Copyright (c) 2026, stdg-VEM developers
# SPDX-License-Identifier: Apache-2.0

from typing import Dict, List, Optional

import numpy as np
from numpy.random import default_rng # type: ignore
from scipy.spatial import Delaunay, cKDTree # type: ignore
from scipy.spatial import QhullError # type: ignore

from stdg_VEM.VEM_common.VEM_types import BBox
from stdg_VEM.VEM_common.Errors import MeshError
from stdg_VEM.VEM_common.Log import get_log
from stdg_VEM.VEM_common.MeshGeneratorInterface import MeshGeneratorInterface
from stdg_VEM.mesh.PolyMesh import PolyMesh, polygon_geometry

WELD_TOLERANCE = 1e-10


def clip_halfplane(polygon: np.ndarray, normal: np.ndarray, offset: float) -> np.ndarray:
    """Sutherland-Hodgman clip of a convex polygon against ``normal . x <= offset``."""
    out = []
    n = len(polygon)
    dist = polygon @ normal - offset
    for i in range(n):
        p, q = polygon[i], polygon[(i + 1) % n]
        dp, dq = dist[i], dist[(i + 1) % n]
        if dp <= 0.0:
            out.append(p)
        if dp * dq < 0.0:
            out.append(p + dp / (dp - dq) * (q - p))
    return np.array(out).reshape(-1, 2)


class VoronoiGenerator(MeshGeneratorInterface):
    def __init__(self, n_seeds: int, bbox: BBox = BBox(), relax_iters: int = 0,
                 rng_seed: int = 0, *, seeds: Optional[np.ndarray] = None,
                 name: str = "") -> None:
        assert n_seeds >= 1, "n_seeds must be at least 1"
        assert relax_iters >= 0, "relax_iters must be non-negative"
        assert bbox.width > 0 and bbox.height > 0, "bounding box must have positive extent"
        self.n_seeds: int = n_seeds
        self.bbox: BBox = bbox
        self.relax_iters: int = relax_iters
        self.rng_seed: int = rng_seed
        self.scale: float = float(np.hypot(bbox.width, bbox.height))
        self.log = get_log(f"mesh.voronoi{'.' + name if name else ''}")
        if seeds is None:
            rng = default_rng(rng_seed)
            lo = np.array([bbox.x0, bbox.y0])
            hi = np.array([bbox.x1, bbox.y1])
            seeds = lo + rng.random((n_seeds, 2)) * (hi - lo)
        self.seeds: np.ndarray = np.array(seeds, dtype=float).reshape(-1, 2)
        assert len(self.seeds) == n_seeds, "explicit seeds must match n_seeds"


    def _check_seeds(self, seeds: np.ndarray) -> None:
        pairs = cKDTree(seeds).query_pairs(WELD_TOLERANCE * self.scale, output_type="ndarray")
        if len(pairs):
            i, j = pairs[0]
            raise MeshError(f"degenerate seed configuration: seeds {i} and {j} coincide "
                            f"at {seeds[i].tolist()}")


    def _neighbours(self, seeds: np.ndarray) -> List[np.ndarray]:
        everyone = [np.delete(np.arange(len(seeds)), i) for i in range(len(seeds))]
        if len(seeds) < 4:
            return everyone
        try:
            tri = Delaunay(seeds)
        except QhullError:
            return everyone
        if len(tri.coplanar):
            return everyone
        indptr, indices = tri.vertex_neighbor_vertices
        return [np.sort(indices[indptr[i]:indptr[i + 1]]) for i in range(len(seeds))]


    def _clipped_cells(self, seeds: np.ndarray) -> List[np.ndarray]:
        cells = []
        for i, neighbours in enumerate(self._neighbours(seeds)):
            polygon = self.bbox.corners()
            for j in neighbours:
                normal = seeds[j] - seeds[i]
                offset = float(normal @ (0.5 * (seeds[i] + seeds[j])))
                polygon = clip_halfplane(polygon, normal, offset)
                if len(polygon) < 3:
                    raise MeshError(f"Voronoi cell of seed {i} vanished while clipping")
            cells.append(polygon)
        return cells


    def relaxed_seeds(self) -> np.ndarray:
        seeds = self.seeds.copy()
        self._check_seeds(seeds)
        for it in range(self.relax_iters):
            seeds = np.array([polygon_geometry(p).centroid for p in self._clipped_cells(seeds)])
            self._check_seeds(seeds)
            self.log.debug(f"Lloyd iteration {it + 1}/{self.relax_iters}")
        return seeds


    def generate(self) -> PolyMesh:
        polygons = self._clipped_cells(self.relaxed_seeds())
        points = np.concatenate(polygons)
        parent = np.arange(len(points))

        def find(i: int) -> int:
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        pairs = cKDTree(points).query_pairs(WELD_TOLERANCE * self.scale, output_type="ndarray")
        for i, j in sorted(map(tuple, pairs)):
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)

        new_index: Dict[int, int] = {}
        vertices: List[np.ndarray] = []
        cells: List[List[int]] = []
        start = 0
        for polygon in polygons:
            cell: List[int] = []
            for p in range(start, start + len(polygon)):
                root = find(p)
                if root not in new_index:
                    new_index[root] = len(vertices)
                    vertices.append(points[root])
                v = new_index[root]
                if not cell or cell[-1] != v:
                    cell.append(v)
            while len(cell) > 1 and cell[0] == cell[-1]:
                cell.pop()
            if len(cell) < 3:
                raise MeshError("welding collapsed a Voronoi cell")
            cells.append(cell)
            start += len(polygon)

        mesh = PolyMesh(np.array(vertices), cells, name=f"voronoi-{self.n_seeds}-s{self.rng_seed}")
        self.log.info(f"generated {mesh}")
        return mesh


def generate_voronoi(n_seeds: int, bbox: BBox = BBox(), relax_iters: int = 0,
                     rng_seed: int = 0, seeds: Optional[np.ndarray] = None) -> PolyMesh:
    return VoronoiGenerator(n_seeds, bbox, relax_iters, rng_seed, seeds=seeds).generate()
