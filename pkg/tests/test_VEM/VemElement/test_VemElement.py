import math

import numpy as np
import pytest
import sympy
from scipy.linalg import eigh, null_space # type: ignore

from stdg_VEM.VEM_common.VEM_types import AdvectionProjection
from stdg_VEM.mesh import generate_cartesian, generate_voronoi
from stdg_VEM.poly_basis import n_monomials, polygon_quadrature
from stdg_VEM.vem_element import (VemElement, GlobalDofMap, local_dof_layout, local_supg_blocks,
                                  local_advection)
from stdg_VEM.vem_element.VemElement import edge_node_parameters

SQUARE = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
HEXAGON = np.array([[math.cos(a), math.sin(a)] for a in np.arange(6) * math.pi / 3])
PENTAGON = np.array([[0.0, 0.0], [1.0, 0.0], [1.3, 0.7], [0.4, 1.2], [-0.2, 0.6]])

TOL = 1e-10


def _voronoi_cells():
    mesh = generate_voronoi(12, relax_iters=3, rng_seed=9)
    return [mesh.cell_points(c) for c in range(mesh.n_cells)]


CELLS = [SQUARE, HEXAGON, PENTAGON] + _voronoi_cells()[:4]


def test_layout_counts() -> None:
    layout = local_dof_layout(5, 3)
    assert layout.total == 5 + 5 * 2 + 3
    assert list(layout.edge_dofs(1)) == [7, 8]
    assert list(layout.edge_trace_dofs(4)) == [4, 13, 14, 0]
    assert list(layout.moment_dofs) == [15, 16, 17]
    assert local_dof_layout(4, 1).total == 4


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("cell", range(len(CELLS)))
def test_projector_polynomial_consistency(k: int, cell: int) -> None:
    element = VemElement(CELLS[cell], k)
    eye = np.eye(n_monomials(k))
    assert element.pi_nabla @ element.D == pytest.approx(eye, abs=TOL)
    assert element.pi0 @ element.D == pytest.approx(eye, abs=TOL)
    Dx, Dy = element.basis.derivative_matrices()
    assert element.pi0_grad[0] @ element.D == pytest.approx(Dx, abs=TOL)
    assert element.pi0_grad[1] @ element.D == pytest.approx(Dy, abs=TOL)
    pad = np.zeros((n_monomials(k) - Dx.shape[0], Dx.shape[1]))
    assert element.pi0_grad_adv[0] @ element.D == pytest.approx(np.vstack([Dx, pad]), abs=TOL)
    assert element.pi0_grad_adv[1] @ element.D == pytest.approx(np.vstack([Dy, pad]), abs=TOL)


def test_pi_nabla_vertex_hat_k1_square() -> None:
    element = VemElement(SQUARE, 1)
    h = element.diameter
    # boundary integral of the first hat function times the outward normal
    assert element.pi_nabla[1, 0] / h == pytest.approx(-0.5, abs=1e-13)
    assert element.pi_nabla[2, 0] / h == pytest.approx(-0.5, abs=1e-13)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_constants_project_to_constants(k: int) -> None:
    element = VemElement(HEXAGON, k)
    ones = element.D[:, 0]
    expected = np.eye(element.basis.dim)[0]
    assert element.pi_nabla @ ones == pytest.approx(expected, abs=TOL)
    assert element.pi0 @ ones == pytest.approx(expected, abs=TOL)
    assert element.pi0_grad[0] @ ones == pytest.approx(np.zeros(n_monomials(k - 1)), abs=TOL)


def test_pi0_reproduces_moment_dofs() -> None:
    element = VemElement(HEXAGON, 2)
    v = np.random.default_rng(3).standard_normal(element.n_dofs)
    moments = element.H @ element.pi0 @ v
    assert moments[0] == pytest.approx(element.area * v[element.layout.moment_dofs[0]], rel=1e-12)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_enhancement_constraint(k: int) -> None:
    element = VemElement(PENTAGON, k)
    low = n_monomials(k - 2)
    assert (element.H @ element.pi0)[low:] == pytest.approx((element.H @ element.pi_nabla)[low:],
                                                            abs=1e-11)


def test_pi0_grad_boundary_oracle() -> None:
    element = VemElement(SQUARE, 2)
    v = np.random.default_rng(4).standard_normal(element.n_dofs)
    n = element.pi0_grad[0].shape[0]
    integral_x = (element.H[:n, :n] @ element.pi0_grad[0] @ v)[0]
    integral_y = (element.H[:n, :n] @ element.pi0_grad[1] @ v)[0]
    # Simpson on each edge integrates the quadratic trace exactly
    normals = [(0.0, -1.0), (1.0, 0.0), (0.0, 1.0), (-1.0, 0.0)]
    expected = np.zeros(2)
    for edge in range(4):
        a, b = v[edge], v[(edge + 1) % 4]
        mid = v[element.layout.edge_dofs(edge)[0]]
        expected += (a + 4.0 * mid + b) / 6.0 * np.array(normals[edge])
    assert [integral_x, integral_y] == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("cell", [0, 1, 2, 3])
def test_local_forms(k: int, cell: int) -> None:
    element = VemElement(CELLS[cell], k)
    M, A = element.M_loc, element.A_loc
    assert M == pytest.approx(M.T, abs=1e-12)
    assert A == pytest.approx(A.T, abs=1e-12)
    ones = element.D[:, 0]
    assert A @ ones == pytest.approx(np.zeros(element.n_dofs), abs=1e-11)
    assert ones @ M @ ones == pytest.approx(element.area, rel=1e-11)
    assert np.linalg.eigvalsh(M).min() > 0.0
    eigs = np.linalg.eigvalsh(A)
    assert abs(eigs[0]) < 1e-10
    assert eigs[1] > 1e-8


def test_mass_exact_on_polynomials() -> None:
    element = VemElement(SQUARE, 1)
    assert element.D.T @ element.M_loc @ element.D == pytest.approx(element.H, abs=1e-13)
    element = VemElement(PENTAGON, 2)
    assert element.D.T @ element.M_loc @ element.D == pytest.approx(element.H, abs=1e-12)


def test_stabilization_spectral_sanity() -> None:
    element = VemElement(SQUARE, 2)
    dim = element.basis.dim
    eigs = np.linalg.eigvalsh(element.S_m) / element.area
    # kernel is the polynomial subspace
    assert eigs[:dim] == pytest.approx(np.zeros(dim), abs=1e-10)
    assert eigs[dim:].min() > 1.0 - 1e-10
    assert eigs.max() < 1e3


def _well_shaped_voronoi_cells():
    mesh = generate_voronoi(16, relax_iters=10, rng_seed=3)
    cells = []
    for c in range(mesh.n_cells):
        points = mesh.cell_points(c)
        edges = np.linalg.norm(np.roll(points, -1, axis=0) - points, axis=1)
        if edges.min() >= 0.1 * mesh.diameters[c]:
            cells.append(points)
    assert cells, "no well-shaped cell in the Voronoi mesh"
    return cells[:3]


def _fan_lifting_grams(element: VemElement):
    """L2 and H1 Grams of a conforming piecewise P_k lifting of the DoFs.

    On each fan triangle (centroid, p, q) the lifting interpolates the
    edge trace on pq and the H1 projection at the remaining Lagrange nodes.
    """
    k = element.k
    assert k <= 3, "the lifting uses at most one interior node"
    c = element.geometry.centroid
    s = edge_node_parameters(k)
    n = len(element.points)
    L2 = np.zeros((element.n_dofs, element.n_dofs))
    H1 = np.zeros_like(L2)
    for i in range(n):
        p, q = element.points[i], element.points[(i + 1) % n]
        outer = np.vstack([p, p + s[:, None] * (q - p), q])
        outer_rows = np.zeros((k + 1, element.n_dofs))
        outer_rows[0, i] = 1.0
        outer_rows[-1, (i + 1) % n] = 1.0
        for j, dof in enumerate(element.layout.edge_dofs(i)):
            outer_rows[1 + j, dof] = 1.0
        inner = [c[None, :], c + s[:, None] * (p - c), c + s[:, None] * (q - c)]
        if k == 3:
            inner.append(((c + p + q) / 3.0)[None, :])
        inner = np.vstack(inner)
        rows = np.vstack([outer_rows, element.basis.eval(inner) @ element.pi_nabla])
        coeffs = np.linalg.solve(element.basis.eval(np.vstack([outer, inner])), rows)
        triangle = np.array([c, p, q])
        rule = polygon_quadrature(triangle, 2 * k + 2, triangle.mean(axis=0))
        values = element.basis.eval(rule.points) @ coeffs
        grads = np.einsum("qmd,mi->qdi", element.basis.eval_grad(rule.points), coeffs)
        L2 += values.T @ (rule.weights[:, None] * values)
        H1 += np.einsum("q,qdi,qdj->ij", rule.weights, grads, grads)
    return L2, H1


def test_fan_lifting_reproduces_polynomials() -> None:
    element = VemElement(PENTAGON, 2)
    L2, H1 = _fan_lifting_grams(element)
    D = element.D
    assert D.T @ L2 @ D == pytest.approx(element.H, abs=1e-11)
    Dx, Dy = element.basis.derivative_matrices()
    low = element.H[:Dx.shape[0], :Dx.shape[0]]
    assert D.T @ H1 @ D == pytest.approx(Dx.T @ low @ Dx + Dy.T @ low @ Dy, abs=1e-10)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_stabilization_equivalent_to_lifted_grams(k: int) -> None:
    for points in [PENTAGON] + _well_shaped_voronoi_cells():
        element = VemElement(points, k)
        L2, H1 = _fan_lifting_grams(element)
        # complement of the polynomial DoF vectors, where both stabilizations are definite
        Q = null_space(element.D.T)
        for S, gram in ((element.S_m, L2), (element.S_a, H1)):
            eigs = eigh(Q.T @ S @ Q, Q.T @ gram @ Q, eigvals_only=True)
            assert eigs.min() >= 1e-3
            assert eigs.max() <= 1e3


def test_supg_blocks_use_low_degree_gradient() -> None:
    element = VemElement(_well_shaped_voronoi_cells()[0], 2)
    assert element.adv_degree == 2
    n = len(element.quadrature.weights)
    bx, by = np.full(n, 1.0), np.full(n, 0.5)
    v = np.random.default_rng(12).standard_normal(element.n_dofs)
    blocks = local_supg_blocks(element, bx, by)
    low = bx[:, None] * element.grad_values[0] + by[:, None] * element.grad_values[1]
    high = bx[:, None] * element.adv_grad_values[0] + by[:, None] * element.adv_grad_values[1]
    assert blocks.advection @ v == pytest.approx(low @ v, abs=1e-12)
    assert not np.allclose(low @ v, high @ v)
    B = local_advection(element, bx, by)
    expected = element.phi0.T @ (element.quadrature.weights[:, None] * high)
    assert B == pytest.approx(expected, abs=1e-12)


def test_supg_blocks_zero_velocity() -> None:
    element = VemElement(PENTAGON, 2)
    n = len(element.quadrature.weights)
    blocks = local_supg_blocks(element, np.zeros(n), np.zeros(n))
    assert not blocks.advection.any()
    assert blocks.phi0.shape == (n, element.n_dofs)


@pytest.mark.parametrize("projection", [AdvectionProjection.K, AdvectionProjection.KMinusOne])
def test_supg_blocks_on_polynomials(projection: AdvectionProjection) -> None:
    k = 2
    element = VemElement(PENTAGON, k, advection_projection=projection)
    rng = np.random.default_rng(6)
    coeffs = rng.standard_normal(element.basis.dim)
    v = element.D @ coeffs
    points = element.quadrature.points
    n = len(points)
    beta = (0.7, -1.1)
    blocks = local_supg_blocks(element, np.full(n, beta[0]), np.full(n, beta[1]))
    grads = np.einsum("qmd,m->qd", element.basis.eval_grad(points), coeffs)
    assert blocks.advection @ v == pytest.approx(grads @ np.array(beta), abs=1e-10)
    lap = element.basis.restrict(0).eval(points) @ (element.basis.laplacian_matrix() @ coeffs)
    assert blocks.div_grad @ v == pytest.approx(lap, abs=1e-10)
    assert blocks.phi0 @ v == pytest.approx(element.basis.eval(points) @ coeffs, abs=1e-10)


def test_divergence_symbolic_oracle() -> None:
    element = VemElement(SQUARE, 2)
    v = np.random.default_rng(8).standard_normal(element.n_dofs)
    x, y = sympy.symbols("x y")
    low = element.basis.restrict(1)
    xc, yc = element.basis.center
    h = element.basis.scale
    polys = [sum(c * ((x - xc) / h) ** a * ((y - yc) / h) ** b
                 for c, (a, b) in zip(g @ v, low.index_map)) for g in element.pi0_grad]
    div = sympy.diff(polys[0], x) + sympy.diff(polys[1], y)
    assert float(div) == pytest.approx(float((element.div_coefficients @ v)[0]), abs=1e-12)


def test_advection_of_constants_vanishes() -> None:
    element = VemElement(HEXAGON, 2)
    n = len(element.quadrature.weights)
    B = local_advection(element, np.full(n, 1.0), np.full(n, 2.0))
    assert B @ element.D[:, 0] == pytest.approx(np.zeros(element.n_dofs), abs=1e-12)


def test_dof_values_of_polynomial() -> None:
    element = VemElement(PENTAGON, 3)
    coeffs = np.random.default_rng(2).standard_normal(element.basis.dim)

    def poly(px, py):
        return element.basis.eval(np.column_stack([px, py])) @ coeffs

    assert element.dof_values(poly) == pytest.approx(element.D @ coeffs, abs=1e-11)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_global_dof_map_counts(k: int) -> None:
    mesh = generate_cartesian(2, 2)
    dof_map = GlobalDofMap(mesh, k)
    assert dof_map.n_dofs == 9 + 12 * (k - 1) + 4 * n_monomials(k - 2)
    assert dof_map.boundary.sum() == 8 + 8 * (k - 1)
    assert dof_map.n_free == dof_map.n_dofs - dof_map.boundary.sum()
    assert all(len(d) == 4 * k + n_monomials(k - 2) for d in dof_map.cell_dofs)


def test_global_edge_nodes_match_local_positions() -> None:
    mesh = generate_voronoi(9, relax_iters=2, rng_seed=1)
    dof_map = GlobalDofMap(mesh, 3)
    for c in range(mesh.n_cells):
        element = VemElement(mesh.cell_points(c), 3)
        dofs = dof_map.cell_dofs[c]
        for edge in range(element.layout.n_vertices):
            local = element.edge_node_points(edge)
            assert dof_map.points[dofs[element.layout.edge_dofs(edge)]] == pytest.approx(local)


def test_global_interpolation_of_polynomial() -> None:
    mesh = generate_voronoi(9, relax_iters=2, rng_seed=1)
    dof_map = GlobalDofMap(mesh, 2)
    elements = [VemElement(mesh.cell_points(c), 2) for c in range(mesh.n_cells)]

    def u(px, py):
        return 1.0 + px - 2.0 * py + px * py

    values = dof_map.interpolate(u, elements)
    for element, dofs in zip(elements, dof_map.cell_dofs):
        assert values[dofs] == pytest.approx(element.dof_values(u), abs=1e-12)
