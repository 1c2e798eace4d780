from stdg_VEM.time_slab.TimePartition import TimePartition
from stdg_VEM.time_slab.TimeBasis import (TimeBasis, build_time_basis, time_jump_coupling,
                                          time_jump, project_time, weight_phi, weight_phi_deriv)
