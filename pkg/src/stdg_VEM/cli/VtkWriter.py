# Copyright (c) 2026, stdg-VEM developers
# SPDX-License-Identifier: Apache-2.0

from pathlib import Path
from typing import Dict, List, Sequence, Union

import numpy as np

from stdg_VEM.mesh.PolyMesh import PolyMesh

VTK_POLYGON = 7


def write_vtk(path: Union[str, Path], mesh: PolyMesh, point_data: Dict[str, np.ndarray],
              title: str = "stdg-VEM field") -> None:
    """Legacy ASCII unstructured grid of polygons with scalar point data."""
    cell_entries = sum(len(c) + 1 for c in mesh.cells)
    with open(path, "w") as f:
        f.write("# vtk DataFile Version 2.0\n")
        f.write(f"{title}\n")
        f.write("ASCII\n")
        f.write("DATASET UNSTRUCTURED_GRID\n")
        f.write(f"POINTS {mesh.n_vertices} double\n")
        for px, py in mesh.vertices:
            f.write(f"{px:.17g} {py:.17g} 0\n")
        f.write(f"CELLS {mesh.n_cells} {cell_entries}\n")
        for cell in mesh.cells:
            f.write(f"{len(cell)} {' '.join(str(int(v)) for v in cell)}\n")
        f.write(f"CELL_TYPES {mesh.n_cells}\n")
        for _ in mesh.cells:
            f.write(f"{VTK_POLYGON}\n")
        f.write(f"POINT_DATA {mesh.n_vertices}\n")
        for name, values in point_data.items():
            values = np.asarray(values, dtype=float)
            assert values.shape == (mesh.n_vertices,), f"point data {name!r} has the wrong size"
            f.write(f"SCALARS {name} double\n")
            f.write("LOOKUP_TABLE default\n")
            for v in values:
                f.write(f"{v:.17g}\n")


def write_series(directory: Union[str, Path], mesh: PolyMesh, times: Sequence[float],
                 fields: Sequence[np.ndarray], name: str = "u") -> List[Path]:
    """One ``field_XXXX.vtk`` per snapshot, vertex DoF values only."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for i, (t, values) in enumerate(zip(times, fields)):
        path = directory / f"field_{i:04d}.vtk"
        write_vtk(path, mesh, {name: np.asarray(values)[:mesh.n_vertices]},
                  title=f"stdg-VEM {name} t={t:.17g}")
        paths.append(path)
    return paths
