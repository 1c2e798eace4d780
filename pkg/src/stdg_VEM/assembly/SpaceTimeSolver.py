# Copyright (c) 2026, stdg-VEM developers
# SPDX-License-Identifier: Apache-2.0

import math
import time
from typing import List, Optional, Sequence, Tuple

import numpy as np

from stdg_VEM.VEM_common.VEM_types import (ProblemData, SupgParams, SolverConfig,
                                           SlabDiagnostics)
from stdg_VEM.VEM_common.Errors import SolverError
from stdg_VEM.VEM_common.Log import get_log
from stdg_VEM.mesh.PolyMesh import PolyMesh
from stdg_VEM.vem_element.VemElement import VemElement
from stdg_VEM.vem_element.DofMap import GlobalDofMap
from stdg_VEM.time_slab.TimePartition import TimePartition
from stdg_VEM.time_slab.TimeBasis import TimeBasis, build_time_basis
from stdg_VEM.assembly.SupgParameters import resolve_params
from stdg_VEM.assembly.SlabAssembler import SlabAssembler, build_elements
from stdg_VEM.assembly.LinearSolvers import make_solver


class GlobalSolution:
    """Space-time coefficients, one (r+1, n_dofs) array per slab."""

    def __init__(self, assembler: SlabAssembler, partition: TimePartition,
                 bases: Sequence[TimeBasis], k: int, r: int) -> None:
        self.assembler = assembler
        self.mesh: PolyMesh = assembler.mesh
        self.elements: Sequence[VemElement] = assembler.elements
        self.dof_map: GlobalDofMap = assembler.dof_map
        self.problem: ProblemData = assembler.problem
        self.params: SupgParams = assembler.params
        self.partition = partition
        self.bases: List[TimeBasis] = list(bases)
        self.k = k
        self.r = r
        self.coefficients: List[np.ndarray] = []
        self.diagnostics: List[SlabDiagnostics] = []
        self.wall_time: float = 0.0
        self.tau_h_ok: bool = True

    @property
    def n_dofs(self) -> int:
        return self.partition.n_slabs * (self.r + 1) * self.dof_map.n_dofs

    def slab(self, n: int) -> np.ndarray:
        return self.coefficients[n - 1]

    def end_values(self, n: int) -> np.ndarray:
        return self.bases[n - 1].e_R @ self.coefficients[n - 1]

    def start_values(self, n: int) -> np.ndarray:
        return self.bases[n - 1].e_L @ self.coefficients[n - 1]

    def values_at(self, t: float) -> np.ndarray:
        """Spatial DoF vector at time t, taken from the slab that ends at or after t."""
        n = self.partition.slab_of(t)
        return (self.bases[n - 1].eval(np.array([t])) @ self.coefficients[n - 1])[0]

    def with_coefficients(self, coefficients: Sequence[np.ndarray]) -> "GlobalSolution":
        other = GlobalSolution(self.assembler, self.partition, self.bases, self.k, self.r)
        other.coefficients = [np.array(c, dtype=float) for c in coefficients]
        return other


class SpaceTimeSolver:
    """Sequential slab loop: assemble, eliminate Dirichlet DoFs, solve, pass the end trace on."""

    def __init__(self, mesh: PolyMesh, partition: TimePartition, problem: ProblemData,
                 params: SupgParams, k: int, r: int,
                 solver: SolverConfig = SolverConfig(),
                 elements: Optional[Sequence[VemElement]] = None) -> None:
        assert k >= 1, "VEM degree must be at least 1"
        assert r >= 0, "time degree must be non-negative"
        assert math.isclose(partition.T, problem.T), "partition must end at the final time"
        self.log = get_log("assembly.solver")
        self.mesh = mesh
        self.partition = partition
        self.problem = problem
        self.k = k
        self.r = r
        self.solver_config = solver
        self.elements = list(elements) if elements is not None else build_elements(mesh, k, params)
        sample_points = np.concatenate([mesh.vertices] +
                                       [e.quadrature.points for e in self.elements])
        self.params = resolve_params(params, k, problem, sample_points, partition, r)
        self.dof_map = GlobalDofMap(mesh, k)
        self.assembler = SlabAssembler(mesh, self.elements, self.dof_map, problem, self.params, r,
                                       threads=solver.threads)
        self.bases = [build_time_basis(interval, r) for _, interval in partition.intervals()]

    def _linear_solver(self):
        cfg = self.solver_config
        return make_solver(cfg.kind, rtol=cfg.rtol, restart=cfg.restart, maxiter=cfg.maxiter)

    def solve_slab(self, n: int, prev_end: Optional[np.ndarray]) -> Tuple[np.ndarray, SlabDiagnostics]:
        basis = self.bases[n - 1]
        system, fixed_values = self.assembler.assemble_slab(n, basis, prev_end)
        solver = self._linear_solver()
        try:
            x = solver.factorize(system.matrix).solve(system.rhs)
        except SolverError as exc:
            raise SolverError(str(exc), slab=n, residual_history=exc.residual_history) from exc
        residual = float(np.linalg.norm(system.matrix @ x - system.rhs))
        scale = max(1.0, float(np.linalg.norm(system.rhs)))
        n_dofs = self.dof_map.n_dofs
        full = np.zeros((self.r + 1, n_dofs))
        full[:, self.dof_map.free] = x.reshape(self.r + 1, self.dof_map.n_free)
        full[:, self.dof_map.fixed] = fixed_values
        diag = SlabDiagnostics(n, residual / scale, int(system.matrix.nnz),
                               solver.iterations, list(solver.residual_history))
        self.log.info(f"slab {n}/{self.partition.n_slabs}: {system.matrix.shape[0]} unknowns, "
                      f"nnz={diag.nnz}, relative residual {diag.residual:.2e}")
        return full, diag

    def solve(self) -> GlobalSolution:
        start = time.perf_counter()
        result = GlobalSolution(self.assembler, self.partition, self.bases, self.k, self.r)
        result.tau_h_ok = self.partition.tau <= self.params.c_star_check * math.sqrt(self.mesh.h_min)
        prev_end: Optional[np.ndarray] = None
        for n, _ in self.partition.intervals():
            full, diag = self.solve_slab(n, prev_end)
            result.coefficients.append(full)
            result.diagnostics.append(diag)
            prev_end = self.bases[n - 1].e_R @ full
        result.wall_time = time.perf_counter() - start
        self.log.info(f"solved {self.partition.n_slabs} slabs in {result.wall_time:.2f}s")
        return result


def solve(mesh: PolyMesh, partition: TimePartition, problem: ProblemData, params: SupgParams,
          k: int, r: int, solver: SolverConfig = SolverConfig()) -> GlobalSolution:
    return SpaceTimeSolver(mesh, partition, problem, params, k, r, solver).solve()
