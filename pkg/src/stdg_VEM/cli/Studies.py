# Copyright (c) 2026, stdg-VEM developers
# SPDX-License-Identifier: Apache-2.0

import math
from pathlib import Path
from typing import List, NamedTuple, Optional, Tuple, Union

import numpy as np
import sympy # type: ignore

from stdg_VEM.VEM_common.VEM_types import (CaseId, ErrorReport, MeshKind, SolverConfig,
                                           SupgParams)
from stdg_VEM.VEM_common.Errors import AcceptanceError, ConfigError, SolverError
from stdg_VEM.VEM_common.Log import get_log
from stdg_VEM.mesh.PolyMesh import PolyMesh
from stdg_VEM.mesh.CartesianGenerator import generate_cartesian
from stdg_VEM.mesh.VoronoiGenerator import generate_voronoi
from stdg_VEM.mesh.MeshIO import load_mesh
from stdg_VEM.time_slab.TimePartition import TimePartition
from stdg_VEM.assembly.SpaceTimeSolver import GlobalSolution, SpaceTimeSolver
from stdg_VEM.analysis.ErrorMetrics import error_metrics
from stdg_VEM.analysis.RateTable import RateTable
from stdg_VEM.analysis.ManufacturedSolutions import ManufacturedCase, case_for, expression_case
from stdg_VEM.cli.Config import MeshSpec, RunConfig, TimeSpec, ProblemSpec, echo_config, load_config
from stdg_VEM.cli.RotatingBenchmark import rotating_problem
from stdg_VEM.cli.VtkWriter import write_series

PATCH_TOL = 1e-8


class StudySpec(NamedTuple):
    case: CaseId
    k: int = 1
    r: int = 1
    mesh_kind: MeshKind = MeshKind.Cartesian
    levels: int = 3
    nu: Optional[float] = None
    params: SupgParams = SupgParams()
    output: Optional[str] = None
    base_n: int = 8
    T: Optional[float] = None
    seed: int = 0
    solver: SolverConfig = SolverConfig()
    timing: bool = True


def level_mesh(kind: MeshKind, n: int, seed: int = 0) -> PolyMesh:
    """n cells per side, or n^2 relaxed Voronoi seeds."""
    if kind == MeshKind.Cartesian:
        return generate_cartesian(n, n)
    return generate_voronoi(n * n, relax_iters=10, rng_seed=seed)


def build_mesh(spec: MeshSpec) -> PolyMesh:
    if spec.path is not None:
        return load_mesh(spec.path)
    if spec.kind == MeshKind.Cartesian:
        return generate_cartesian(spec.n, spec.n, spec.bbox)
    return generate_voronoi(spec.n_seeds, spec.bbox, spec.relax_iters, spec.seed)


def build_partition(spec: TimeSpec, T: float) -> TimePartition:
    if spec.nodes is not None:
        if not math.isclose(spec.nodes[-1], T):
            raise ConfigError("time.nodes", f"last node must equal problem.T = {T}")
        try:
            return TimePartition(spec.nodes)
        except AssertionError as exc:
            raise ConfigError("time.nodes", str(exc)) from exc
    if spec.n_slabs is not None:
        return TimePartition.uniform(T, spec.n_slabs)
    assert spec.tau is not None
    return TimePartition.with_step(T, spec.tau)


def build_case(spec: ProblemSpec, k: int, r: int) -> ManufacturedCase:
    if spec.case == CaseId.RotatingBody:
        return ManufacturedCase("rotating-body", rotating_problem(spec.nu, spec.T), None, None, None)
    if spec.case != CaseId.Custom:
        return case_for(spec.case, k, r, spec.T, spec.nu)
    assert spec.beta is not None
    try:
        return expression_case(spec.beta, spec.nu, spec.T, spec.f, spec.u0, spec.u_exact, spec.g)
    except (sympy.SympifyError, SyntaxError, TypeError, ValueError) as exc:
        raise ConfigError("problem", f"cannot use expression: {exc}") from exc


def save_solution(path: Union[str, Path], solution: GlobalSolution) -> None:
    np.savez(path,
             slab_nodes=np.array(solution.partition.nodes),
             time_nodes=np.stack([b.nodes for b in solution.bases]),
             coefficients=np.stack(solution.coefficients),
             vertices=np.array(solution.mesh.vertices), k=solution.k, r=solution.r)


def _solve_case(mesh: PolyMesh, partition: TimePartition, case: ManufacturedCase,
                params: SupgParams, k: int, r: int, solver: SolverConfig
                ) -> Tuple[GlobalSolution, Optional[ErrorReport]]:
    solution = SpaceTimeSolver(mesh, partition, case.problem, params, k, r, solver).solve()
    if case.u_exact is None or case.grad_exact is None:
        return solution, None
    return solution, error_metrics(solution, case.u_exact, case.grad_exact)


def run_converge(spec: StudySpec) -> RateTable:
    """Refinement study with tau = h, one solve per level."""
    assert spec.levels >= 2, "a rate study needs at least two levels"
    assert spec.k >= 1 and spec.r >= 0, "invalid discretization degrees"
    log = get_log("cli.converge")
    case = case_for(spec.case, spec.k, spec.r, spec.T, spec.nu)
    reports: List[ErrorReport] = []
    for level in range(spec.levels):
        mesh = level_mesh(spec.mesh_kind, spec.base_n * 2 ** level, spec.seed)
        partition = TimePartition.with_step(case.problem.T, mesh.h)
        try:
            _, report = _solve_case(mesh, partition, case, spec.params, spec.k, spec.r,
                                    spec.solver)
        except SolverError as exc:
            error = SolverError(f"level {level}: {exc}", residual_history=exc.residual_history)
            error.slab = exc.slab
            raise error from exc
        assert report is not None
        reports.append(report)
        log.info(f"level {level}: h={report.h:.4g} tau={report.tau:.4g} "
                 f"e_l2_T={report.e_l2_T:.4e} e_h1_T={report.e_h1_T:.4e}")
    table = RateTable(reports)
    if spec.output is not None:
        out = Path(spec.output)
        out.mkdir(parents=True, exist_ok=True)
        table.to_csv(out / "convergence.csv", timing=spec.timing)
    log.info(f"{case.name} k={spec.k} r={spec.r} "
             f"{'supg' if spec.params.enabled else 'none'}:\n{table}")
    return table


def check_rates(table: RateTable, case: CaseId, k: int, supg: bool = True) -> None:
    """Acceptance thresholds on the finest level pair; raises AcceptanceError."""
    failures = []
    if case == CaseId.Patch:
        for report in table.reports:
            worst = max(report.e_h1_T, report.e_l2_T, report.e_h1_QT, report.e_energy_interp)
            if worst > PATCH_TOL:
                failures.append(f"patch error {worst:.3e} at h={report.h:.4g} exceeds {PATCH_TOL}")
    else:
        if case == CaseId.Diffusion:
            bounds = {"e_h1_T": k - 0.2, "e_l2_T": k + 1 - 0.25, "e_h1_QT": k - 0.2}
        elif case == CaseId.Convection:
            bounds = {"e_energy_interp": k + 0.25}
            if supg:
                bounds["e_l2_T"] = k + 0.75
        else:
            raise ValueError(f"no rate thresholds for {case.name}")
        for metric, bound in bounds.items():
            rate = table.last_rate(metric)
            if not rate >= bound:
                failures.append(f"rate of {metric} {rate:.3f} below {bound:.3f}")
    if failures:
        raise AcceptanceError("; ".join(failures))


def run_single(config: Union[str, Path, RunConfig]) -> Tuple[GlobalSolution, Optional[ErrorReport]]:
    """Single solve driven by a config file; writes the config echo and artifacts."""
    log = get_log("cli.solve")
    if not isinstance(config, RunConfig):
        config = load_config(config)
    case = build_case(config.problem, config.k, config.r)
    mesh = build_mesh(config.mesh)
    partition = build_partition(config.time, config.problem.T)
    out = Path(config.output.directory)
    out.mkdir(parents=True, exist_ok=True)
    echo_config(config, out)

    solution, report = _solve_case(mesh, partition, case, config.supg, config.k, config.r,
                                   config.solver)
    save_solution(out / "solution.npz", solution)
    if report is not None:
        if not config.output.timing:
            report = report._replace(wall_time=0.0)
        RateTable([report]).to_csv(out / "errors.csv", timing=config.output.timing)
        log.info(f"errors: e_h1_T={report.e_h1_T:.6e} e_l2_T={report.e_l2_T:.6e} "
                 f"e_h1_QT={report.e_h1_QT:.6e} e_energy={report.e_energy_interp:.6e}")
    if config.output.vtk:
        times = [float(t) for t in partition.nodes[1:]]
        fields = [solution.end_values(n) for n in range(1, partition.n_slabs + 1)]
        write_series(out / "vtk", mesh, times, fields)
    return solution, report
