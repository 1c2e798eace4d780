# Copyright (c) 2026, stdg-VEM developers
# SPDX-License-Identifier: Apache-2.0

from abc import ABC
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from stdg_VEM.mesh.PolyMesh import PolyMesh


class MeshGeneratorInterface(ABC):
    def generate(self) -> "PolyMesh":
        raise Exception("Unimplemented")
