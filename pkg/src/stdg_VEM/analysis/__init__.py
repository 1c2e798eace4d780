from stdg_VEM.analysis.Interpolation import dof_interpolant
from stdg_VEM.analysis.EnergyNorm import EnergyNorm, energy_norm
from stdg_VEM.analysis.ErrorMetrics import error_metrics
from stdg_VEM.analysis.RateTable import RateTable, rates, observed_order, read_rate_csv
