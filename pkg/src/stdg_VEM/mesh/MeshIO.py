# Copyright (c) 2026, stdg-VEM developers
# SPDX-License-Identifier: Apache-2.0

import json
import pathlib
from typing import Any, List, Union

import numpy as np

from stdg_VEM.VEM_common.Errors import MeshError, MeshParseError
from stdg_VEM.mesh.PolyMesh import PolyMesh, signed_area

PathLike = Union[str, pathlib.Path]


def save_mesh(mesh: PolyMesh, path: PathLike) -> None:
    document = {
        "name": mesh.name,
        "vertices": [[float(x), float(y)] for x, y in mesh.vertices],
        "cells": [[int(v) for v in cell] for cell in mesh.cells],
    }
    pathlib.Path(path).write_text(json.dumps(document, indent=1), encoding="utf-8")


def _parse_vertices(raw: Any) -> np.ndarray:
    if not isinstance(raw, list) or not raw:
        raise MeshParseError("'vertices' must be a non-empty list of [x, y] pairs")
    for i, v in enumerate(raw):
        if (not isinstance(v, list) or len(v) != 2
                or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in v)):
            raise MeshParseError(f"vertex {i} is not an [x, y] pair of numbers")
    return np.array(raw, dtype=float)


def _parse_cells(raw: Any, vertices: np.ndarray, reorient: bool) -> List[List[int]]:
    if not isinstance(raw, list) or not raw:
        raise MeshParseError("'cells' must be a non-empty list of vertex-index lists")
    cells = []
    for i, cell in enumerate(raw):
        if not isinstance(cell, list) or not all(isinstance(v, int) and not isinstance(v, bool)
                                                 for v in cell):
            raise MeshParseError(f"cell {i} is not a list of vertex indices")
        if len(cell) < 3:
            raise MeshParseError(f"cell {i} has fewer than 3 vertices")
        missing = [v for v in cell if v < 0 or v >= len(vertices)]
        if missing:
            raise MeshParseError(f"cell {i} references missing vertex {missing[0]}")
        if signed_area(vertices[cell]) < 0.0:
            if not reorient:
                raise MeshParseError(f"cell {i} is clockwise")
            cell = cell[::-1]
        cells.append(cell)
    return cells


def load_mesh(path: PathLike, *, reorient: bool = False) -> PolyMesh:
    try:
        document = json.loads(pathlib.Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise MeshParseError(f"{path}: {e}") from e
    if not isinstance(document, dict) or "vertices" not in document or "cells" not in document:
        raise MeshParseError(f"{path}: expected an object with 'vertices' and 'cells'")
    vertices = _parse_vertices(document["vertices"])
    cells = _parse_cells(document["cells"], vertices, reorient)
    try:
        return PolyMesh(vertices, cells, name=str(document.get("name", "")))
    except MeshError as e:
        raise MeshParseError(f"{path}: {e}") from e
