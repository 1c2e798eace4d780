# Copyright (c) 2026, stdg-VEM developers
# SPDX-License-Identifier: Apache-2.0

from typing import List, Sequence

import numpy as np

from stdg_VEM.VEM_common.VEM_types import ScalarField
from stdg_VEM.vem_element.VemElement import VemElement
from stdg_VEM.vem_element.DofMap import GlobalDofMap
from stdg_VEM.time_slab.TimeBasis import TimeBasis


def dof_interpolant(u_exact: ScalarField, dof_map: GlobalDofMap,
                    elements: Sequence[VemElement], bases: Sequence[TimeBasis]) -> List[np.ndarray]:
    """Per slab, the spatial DoFs of ``u_exact(x, y, t)`` at each time node."""
    result = []
    for basis in bases:
        slab = np.empty((basis.size, dof_map.n_dofs))
        for i, t in enumerate(basis.nodes):
            dof_map.interpolate(lambda x, y, t=t: u_exact(x, y, t), elements, out=slab[i])
        result.append(slab)
    return result
