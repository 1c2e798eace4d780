import logging
import math

import numpy as np
import pytest
import scipy.sparse as sp # type: ignore

from stdg_VEM.VEM_common.VEM_types import ProblemData, SupgParams, SolverConfig, SolverKind
from stdg_VEM.VEM_common.Errors import ConfigError, SolverError
from stdg_VEM.mesh import generate_cartesian, generate_voronoi
from stdg_VEM.vem_element import GlobalDofMap
from stdg_VEM.time_slab import TimePartition, TimeBasis
from stdg_VEM.assembly import (compute_lambda, resolve_params, SlabAssembler, build_elements,
                               DirectSolver, KrylovSolver, SpaceTimeSolver, solve)
from stdg_VEM.assembly.SupgParameters import compute_lambdas, default_c_inv, sample_bar_beta
from stdg_VEM.analysis import dof_interpolant, energy_norm, error_metrics
from stdg_VEM.analysis.ManufacturedSolutions import patch_case, diffusion_case

RESOLVED = SupgParams(c_inv=10.0, bar_beta=1.0, beta_eps=1e-8)


def _zero(x, y, t=0.0):
    return np.zeros_like(x)


def _no_flow(x, y, t):
    return np.zeros_like(x), np.zeros_like(x)


def _ones(x, y):
    return np.ones_like(x)


def _assembler(mesh, k, r, problem, params=RESOLVED, threads=1):
    elements = build_elements(mesh, k, params)
    return SlabAssembler(mesh, elements, GlobalDofMap(mesh, k), problem, params, r,
                         threads=threads)


def test_lambda_diffusive_branch() -> None:
    assert compute_lambda(0.1, RESOLVED, 1.0) == pytest.approx(1e-5, rel=1e-12)


def test_lambda_advective_branch() -> None:
    assert compute_lambda(0.1, RESOLVED, 1e-10) == pytest.approx(1e-2, rel=1e-12)
    assert compute_lambda(0.1, RESOLVED, 0.0) == pytest.approx(1e-2, rel=1e-12)


def test_lambda_monotone_in_h() -> None:
    values = compute_lambdas([0.4, 0.2, 0.1, 0.05, 0.025], RESOLVED, 1e-3)
    assert np.all(np.diff(values) < 0.0)
    assert np.all(values > 0.0)


def test_lambda_disabled() -> None:
    assert compute_lambda(0.1, RESOLVED._replace(enabled=False), 1.0) == 0.0


def test_lambda_needs_resolved_params() -> None:
    with pytest.raises(AssertionError):
        compute_lambda(0.1, SupgParams(), 1.0)


def test_resolve_defaults() -> None:
    case = diffusion_case()
    mesh = generate_cartesian(4, 4)
    partition = TimePartition.uniform(case.problem.T, 3)
    params = resolve_params(SupgParams(), 2, case.problem, mesh.vertices, partition, 1)
    assert params.c_inv == default_c_inv(2) == 40.0
    sampled = sample_bar_beta(case.problem, mesh.vertices, partition, 1)
    assert params.bar_beta == pytest.approx(1.05 * sampled)
    assert params.beta_eps == pytest.approx(1e-8 * params.bar_beta)


def test_resolve_zero_velocity_defaults_bar_beta() -> None:
    problem = ProblemData(1.0, _no_flow, _zero, _ones, 1.0)
    mesh = generate_cartesian(2, 2)
    params = resolve_params(SupgParams(), 1, problem, mesh.vertices,
                            TimePartition.uniform(1.0, 1))
    assert params.bar_beta == 1.0


@pytest.mark.parametrize("field,params", [("supg.zeta", SupgParams(zeta=0.0)),
                                          ("supg.c_inv", SupgParams(c_inv=-1.0)),
                                          ("supg.beta_eps", SupgParams(beta_eps=0.0))])
def test_resolve_rejects_bad_params(field: str, params: SupgParams) -> None:
    problem = ProblemData(1.0, _no_flow, _zero, _ones, 1.0)
    mesh = generate_cartesian(2, 2)
    try:
        resolve_params(params, 1, problem, mesh.vertices, TimePartition.uniform(1.0, 1))
        assert False, "Should have failed"
    except ConfigError as e:
        assert e.field == field


@pytest.mark.parametrize("k", [1, 2, 3])
def test_lambda_cap_on_test_meshes(k: int) -> None:
    case = diffusion_case(nu=1e-6)
    for mesh in (generate_cartesian(4, 4), generate_voronoi(16, relax_iters=2, rng_seed=3)):
        partition = TimePartition.uniform(case.problem.T, 2)
        params = resolve_params(SupgParams(), k, case.problem, mesh.vertices, partition)
        assert compute_lambdas(mesh.diameters, params, case.problem.nu).max() <= 1.0


def test_skew_block_is_antisymmetric() -> None:
    mesh = generate_voronoi(12, relax_iters=2, rng_seed=5)
    swirl = diffusion_case()
    assembler = _assembler(mesh, 2, 1, swirl.problem)
    skew = assembler.skew_matrix(TimeBasis((0.0, 0.3), 1))
    norm = abs(skew).max()
    assert norm > 0.0
    assert abs(skew + skew.T).max() <= 1e-12 * norm
    x = np.random.default_rng(0).standard_normal(skew.shape[0])
    assert abs(x @ (skew @ x)) <= 1e-12 * norm * (x @ x)


def _uniform_flow(x, y, t):
    return np.ones_like(x), np.full_like(x, 0.5)


def test_streamline_operators_use_low_degree_gradient() -> None:
    mesh = generate_voronoi(8, relax_iters=2, rng_seed=1)
    problem = ProblemData(1e-3, _uniform_flow, _zero, _zero, 1.0)
    assembler = _assembler(mesh, 2, 1, problem)
    basis = TimeBasis((0.0, 0.25), 1)
    samples = assembler.sample(basis)
    for c, element in enumerate(assembler.elements):
        assert element.adv_degree == 2
        lt, l, _, adv = assembler._streamline_rows(c, samples)
        low = element.grad_values[0] + 0.5 * element.grad_values[1]
        high = element.adv_grad_values[0] + 0.5 * element.adv_grad_values[1]
        expected = np.vstack([np.kron(samples.dphi[q][None, :], element.phi0)
                              + np.kron(samples.phi[q][None, :], low)
                              for q in range(len(samples.t))])
        assert lt == pytest.approx(expected, abs=1e-12)
        diffusion = np.vstack([np.kron(samples.phi[q][None, :], element.div_values)
                               for q in range(len(samples.t))])
        assert l == pytest.approx(expected - 1e-3 * diffusion, abs=1e-12)
        # the skew form keeps the advection projection
        assert adv[0] == pytest.approx(high, abs=1e-12)


def test_single_cell_heat_step() -> None:
    mesh = generate_cartesian(1, 1)
    problem = ProblemData(1.0, _no_flow, _zero, _ones, 0.5)
    params = RESOLVED._replace(enabled=False)
    assembler = _assembler(mesh, 1, 0, problem, params)
    element = assembler.elements[0]
    matrix, rhs, _, _ = assembler.assemble_full(TimeBasis((0.0, 0.5), 0))
    assert matrix.toarray() == pytest.approx(element.M_loc + 0.5 * element.A_loc, abs=1e-12)
    assert rhs == pytest.approx(np.full(4, 0.25), abs=1e-13)


def test_second_slab_uses_previous_trace() -> None:
    mesh = generate_cartesian(2, 2)
    problem = ProblemData(1.0, _no_flow, _zero, _ones, 1.0)
    assembler = _assembler(mesh, 1, 1, problem)
    prev = np.random.default_rng(1).standard_normal(assembler.dof_map.n_dofs)
    _, rhs, _, _ = assembler.assemble_full(TimeBasis((0.5, 1.0), 1), prev)
    mass = sum(sp.coo_matrix((e.M_loc.ravel(), (np.repeat(d, len(d)), np.tile(d, len(d)))),
                             shape=(9, 9)) for e, d in zip(assembler.elements,
                                                           assembler.dof_map.cell_dofs))
    n = assembler.dof_map.n_dofs
    assert rhs[:n] == pytest.approx(mass @ prev, abs=1e-12)
    assert rhs[n:] == pytest.approx(np.zeros(n), abs=1e-12)


def test_assemble_slab_checks_trace_argument() -> None:
    mesh = generate_cartesian(2, 2)
    problem = ProblemData(1.0, _no_flow, _zero, _ones, 1.0)
    assembler = _assembler(mesh, 1, 0, problem)
    with pytest.raises(AssertionError):
        assembler.assemble_slab(2, TimeBasis((0.5, 1.0), 0), None)


def test_assemble_slab_warns_on_large_step(caplog) -> None:
    mesh = generate_cartesian(8, 8)
    problem = ProblemData(1.0, _no_flow, _zero, _ones, 1.0)
    assembler = _assembler(mesh, 1, 0, problem)
    with caplog.at_level(logging.WARNING, logger="stdg"):
        system, values = assembler.assemble_slab(1, TimeBasis((0.0, 1.0), 0))
    assert "exceeds" in caplog.text
    assert system.matrix.shape == (assembler.dof_map.n_free, assembler.dof_map.n_free)
    assert values.shape == (1, len(assembler.dof_map.fixed))


def test_non_finite_data_is_rejected() -> None:
    mesh = generate_cartesian(2, 2)

    def bad_source(x, y, t):
        return np.full_like(x, np.nan)

    problem = ProblemData(1.0, _no_flow, bad_source, _ones, 1.0)
    assembler = _assembler(mesh, 1, 0, problem)
    with pytest.raises(SolverError):
        assembler.sample(TimeBasis((0.0, 1.0), 0))


def test_zero_data_gives_zero_solution() -> None:
    mesh = generate_voronoi(9, relax_iters=1, rng_seed=2)
    problem = ProblemData(0.0, _no_flow, _zero, lambda x, y: np.zeros_like(x), 1.0)
    solution = solve(mesh, TimePartition.uniform(1.0, 2), problem, SupgParams(), 2, 1)
    for w in solution.coefficients:
        assert not np.any(w)
    assert solution.n_dofs == 2 * 2 * GlobalDofMap(mesh, 2).n_dofs


@pytest.mark.parametrize("k,mesh", [(1, "cartesian"), (2, "cartesian"), (1, "voronoi"),
                                    (2, "voronoi")])
def test_patch_reproduces_polynomials(k: int, mesh: str) -> None:
    r = k
    case = patch_case(k, r)
    grid = generate_cartesian(4, 4) if mesh == "cartesian" else generate_voronoi(
        16, relax_iters=2, rng_seed=4)
    solution = solve(grid, TimePartition.uniform(1.0, 2), case.problem, SupgParams(), k, r)
    interpolant = dof_interpolant(case.u_exact, solution.dof_map, solution.elements,
                                  solution.bases)
    scale = max(np.abs(i).max() for i in interpolant)
    for w, i in zip(solution.coefficients, interpolant):
        assert np.abs(w - i).max() <= 1e-8 * scale
    difference = [w - i for w, i in zip(solution.coefficients, interpolant)]
    assert energy_norm(solution, difference).total <= 1e-8 * scale


@pytest.mark.slow
def test_patch_reproduces_polynomials_k3() -> None:
    case = patch_case(3, 2)
    grid = generate_voronoi(16, relax_iters=2, rng_seed=4)
    solution = solve(grid, TimePartition.uniform(1.0, 2), case.problem, SupgParams(), 3, 2)
    interpolant = dof_interpolant(case.u_exact, solution.dof_map, solution.elements,
                                  solution.bases)
    scale = max(np.abs(i).max() for i in interpolant)
    for w, i in zip(solution.coefficients, interpolant):
        assert np.abs(w - i).max() <= 1e-8 * scale


def test_heat_decay_against_separable_solution() -> None:
    decay = 2.0 * math.pi ** 2

    def u_exact(x, y, t):
        return np.exp(-decay * t) * np.sin(math.pi * x) * np.sin(math.pi * y)

    def grad_exact(x, y, t):
        a = np.exp(-decay * t) * math.pi
        return (a * np.cos(math.pi * x) * np.sin(math.pi * y),
                a * np.sin(math.pi * x) * np.cos(math.pi * y))

    problem = ProblemData(1.0, _no_flow, _zero, lambda x, y: u_exact(x, y, 0.0), 0.1)
    solution = solve(generate_cartesian(8, 8), TimePartition.uniform(0.1, 4), problem,
                     SupgParams(), 1, 1)
    report = error_metrics(solution, u_exact, grad_exact)
    amplitude = 0.5 * math.exp(-decay * 0.1)
    assert report.e_l2_T < 0.1 * amplitude


def test_causality() -> None:
    mesh = generate_cartesian(3, 3)
    case = diffusion_case(T=1.0)

    def late_source(x, y, t):
        return case.problem.f(x, y, t) + (10.0 if t > 0.5 else 0.0)

    partition = TimePartition.uniform(1.0, 2)
    base = solve(mesh, partition, case.problem, SupgParams(), 1, 1)
    changed = solve(mesh, partition, case.problem._replace(f=late_source), SupgParams(), 1, 1)
    assert np.array_equal(base.slab(1), changed.slab(1))
    assert not np.allclose(base.slab(2), changed.slab(2))


def test_recomputing_a_slab_is_deterministic() -> None:
    mesh = generate_voronoi(9, relax_iters=1, rng_seed=7)
    case = diffusion_case(T=1.0)
    solver = SpaceTimeSolver(mesh, TimePartition.uniform(1.0, 2), case.problem, SupgParams(),
                             2, 1)
    solution = solver.solve()
    again, _ = solver.solve_slab(2, solution.end_values(1))
    assert np.array_equal(again, solution.slab(2))


def test_thread_count_does_not_change_results() -> None:
    mesh = generate_voronoi(16, relax_iters=1, rng_seed=8)
    case = diffusion_case(T=0.5)
    partition = TimePartition.uniform(0.5, 2)
    serial = solve(mesh, partition, case.problem, SupgParams(), 2, 1, SolverConfig(threads=1))
    parallel = solve(mesh, partition, case.problem, SupgParams(), 2, 1, SolverConfig(threads=4))
    for a, b in zip(serial.coefficients, parallel.coefficients):
        assert np.array_equal(a, b)


def test_krylov_matches_direct() -> None:
    mesh = generate_cartesian(4, 4)
    case = diffusion_case(T=0.5)
    partition = TimePartition.uniform(0.5, 2)
    direct = solve(mesh, partition, case.problem, SupgParams(), 2, 1)
    krylov = solve(mesh, partition, case.problem, SupgParams(), 2, 1,
                   SolverConfig(kind=SolverKind.Krylov, rtol=1e-12))
    for a, b in zip(direct.coefficients, krylov.coefficients):
        assert a == pytest.approx(b, abs=1e-8)
    assert all(d.iterations > 0 for d in krylov.diagnostics)
    assert all(d.residual < 1e-8 for d in direct.diagnostics)


def test_direct_solver_singular_matrix() -> None:
    try:
        DirectSolver().factorize(sp.csr_matrix((3, 3)))
        assert False, "Should have failed"
    except SolverError as e:
        assert "singular" in str(e)


def test_solver_error_carries_slab_index() -> None:
    error = SolverError("GMRES did not converge", slab=4, residual_history=[1.0, 0.5])
    assert str(error).startswith("slab 4: ")
    assert error.residual_history == [1.0, 0.5]
    assert error.exit_code == 3


def test_solver_requires_factorization() -> None:
    with pytest.raises(AssertionError):
        DirectSolver().solve(np.ones(2))
    with pytest.raises(AssertionError):
        KrylovSolver().solve(np.ones(2))


def test_krylov_solver_small_system() -> None:
    matrix = sp.diags([[-1.0] * 9, [4.0] * 10, [-2.0] * 9], [-1, 0, 1]).tocsr()
    rhs = np.arange(10, dtype=float)
    x = KrylovSolver(rtol=1e-12).factorize(matrix).solve(rhs)
    assert matrix @ x == pytest.approx(rhs, abs=1e-9)


@pytest.mark.slow
def test_energy_norm_uniform_in_nu() -> None:
    mesh = generate_cartesian(16, 16)
    swirl = diffusion_case()
    values = []
    for nu in (1.0, 1e-2, 1e-4, 1e-10):
        problem = ProblemData(nu, swirl.problem.beta,
                              lambda x, y, t: np.ones_like(x),
                              lambda x, y: np.sin(math.pi * x) * np.sin(math.pi * y), 0.5)
        solution = solve(mesh, TimePartition.uniform(0.5, 4), problem, SupgParams(), 1, 1)
        values.append(energy_norm(solution, solution.coefficients).total)
    assert max(values) / min(values) < 10.0

