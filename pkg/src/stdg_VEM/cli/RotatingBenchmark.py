# Copyright (c) 2026, stdg-VEM developers
# SPDX-License-Identifier: Apache-2.0

from pathlib import Path
from typing import List, NamedTuple, Optional, Sequence, Union

import numpy as np

from stdg_VEM.VEM_common.VEM_types import (MeshKind, ProblemData, SolverConfig, SupgParams)
from stdg_VEM.VEM_common.Log import get_log
from stdg_VEM.mesh.CartesianGenerator import generate_cartesian
from stdg_VEM.mesh.VoronoiGenerator import generate_voronoi
from stdg_VEM.time_slab.TimePartition import TimePartition
from stdg_VEM.assembly.SpaceTimeSolver import GlobalSolution, SpaceTimeSolver
from stdg_VEM.cli.VtkWriter import write_series

DISC_CENTER = (0.25, 0.5)
DISC_RADIUS = 0.2
ROTATION_CENTER = (0.5, 0.5)
EXTERIOR_RADIUS = 0.3
REPORT_TIMES = (1.5, 3.0, 6.0)
NU = 1e-20
TAU = 0.1
FINAL_TIME = 6.0


class RotatingReport(NamedTuple):
    times: List[float]
    exterior_max: List[float]
    u_min: List[float]
    u_max: List[float]

    def __str__(self) -> str:
        lines = ["t        exterior_max  min           max"]
        for row in zip(self.times, self.exterior_max, self.u_min, self.u_max):
            lines.append("  ".join(f"{v:<12.6g}" for v in row))
        return "\n".join(lines)


def disc_center(t: float) -> np.ndarray:
    """Centre of the rotated disc: counterclockwise at unit rate about (0.5, 0.5)."""
    offset = np.array(DISC_CENTER) - np.array(ROTATION_CENTER)
    c, s = np.cos(t), np.sin(t)
    return np.array(ROTATION_CENTER) + np.array([c * offset[0] - s * offset[1],
                                                 s * offset[0] + c * offset[1]])


def rotating_velocity(x, y, t):
    return (ROTATION_CENTER[1] - y) + 0.0 * x, (x - ROTATION_CENTER[0]) + 0.0 * y


def disc_indicator(x, y):
    inside = (x - DISC_CENTER[0]) ** 2 + (y - DISC_CENTER[1]) ** 2 <= DISC_RADIUS ** 2
    return inside.astype(float)


def rotating_problem(nu: float = NU, T: float = FINAL_TIME) -> ProblemData:
    return ProblemData(nu, rotating_velocity, lambda x, y, t: np.zeros_like(x),
                       disc_indicator, T)


def exterior_report(solution: GlobalSolution, times: Sequence[float] = REPORT_TIMES
                    ) -> RotatingReport:
    vertices = solution.mesh.vertices
    n_vertices = solution.mesh.n_vertices
    report = RotatingReport([], [], [], [])
    for t in times:
        if t > solution.partition.T + 1e-12:
            continue
        values = solution.values_at(t)[:n_vertices]
        outside = np.hypot(*(vertices - disc_center(t)).T) > EXTERIOR_RADIUS
        report.times.append(float(t))
        report.exterior_max.append(float(np.abs(values[outside]).max()) if outside.any() else 0.0)
        report.u_min.append(float(values.min()))
        report.u_max.append(float(values.max()))
    return report


def run_benchmark_rotating(n: int = 64, *, k: int = 1, r: int = 1,
                           mesh_kind: MeshKind = MeshKind.Cartesian,
                           params: SupgParams = SupgParams(), tau: float = TAU,
                           T: float = FINAL_TIME, solver: SolverConfig = SolverConfig(),
                           output: Optional[Union[str, Path]] = None,
                           seed: int = 0) -> RotatingReport:
    log = get_log("cli.rotating")
    if mesh_kind == MeshKind.Cartesian:
        mesh = generate_cartesian(n, n)
    else:
        mesh = generate_voronoi(n * n, relax_iters=10, rng_seed=seed)
    partition = TimePartition.with_step(T, tau)
    runner = SpaceTimeSolver(mesh, partition, rotating_problem(T=T), params, k, r, solver)
    solution = runner.solve()
    report = exterior_report(solution)
    log.info(f"rotating body ({'supg' if params.enabled else 'none'}):\n{report}")
    if output is not None:
        initial = runner.dof_map.interpolate(disc_indicator, runner.elements)
        times = [0.0] + [float(t) for t in partition.nodes[1:]]
        fields = [initial] + [solution.end_values(s) for s in range(1, partition.n_slabs + 1)]
        write_series(output, mesh, times, fields)
    return report
