# Copyright (c) 2026, stdg-VEM developers
# SPDX-License-Identifier: Apache-2.0

from typing import List

import numpy as np

from stdg_VEM.VEM_common.VEM_types import BBox
from stdg_VEM.VEM_common.MeshGeneratorInterface import MeshGeneratorInterface
from stdg_VEM.mesh.PolyMesh import PolyMesh


class CartesianGenerator(MeshGeneratorInterface):
    def __init__(self, nx: int, ny: int, bbox: BBox = BBox()) -> None:
        assert nx >= 1 and ny >= 1, "nx and ny must be at least 1"
        assert bbox.width > 0 and bbox.height > 0, "bounding box must have positive extent"
        self.nx: int = nx
        self.ny: int = ny
        self.bbox: BBox = bbox


    def generate(self) -> PolyMesh:
        xs = np.linspace(self.bbox.x0, self.bbox.x1, self.nx + 1)
        ys = np.linspace(self.bbox.y0, self.bbox.y1, self.ny + 1)
        X, Y = np.meshgrid(xs, ys)
        vertices = np.column_stack([X.ravel(), Y.ravel()])

        def vid(i: int, j: int) -> int:
            return j * (self.nx + 1) + i

        cells: List[List[int]] = []
        for j in range(self.ny):
            for i in range(self.nx):
                cells.append([vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)])
        return PolyMesh(vertices, cells, name=f"cartesian-{self.nx}x{self.ny}")


def generate_cartesian(nx: int, ny: int, bbox: BBox = BBox()) -> PolyMesh:
    return CartesianGenerator(nx, ny, bbox).generate()
