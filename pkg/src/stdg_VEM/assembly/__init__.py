from stdg_VEM.assembly.SupgParameters import compute_lambda, resolve_params
from stdg_VEM.assembly.SlabAssembler import SlabAssembler, build_elements
from stdg_VEM.assembly.LinearSolvers import DirectSolver, KrylovSolver
from stdg_VEM.assembly.SpaceTimeSolver import SpaceTimeSolver, GlobalSolution, solve
