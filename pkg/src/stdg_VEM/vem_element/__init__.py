from stdg_VEM.vem_element.VemElement import VemElement, LocalDofLayout, local_dof_layout
from stdg_VEM.vem_element.Projectors import build_pi_nabla, build_pi0_k, build_pi0_grad
from stdg_VEM.vem_element.LocalForms import (local_mass, local_stiffness, local_supg_blocks,
                                             local_advection, SupgBlocks)
from stdg_VEM.vem_element.DofMap import GlobalDofMap
