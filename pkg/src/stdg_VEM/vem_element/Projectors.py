# Copyright (c) 2026, stdg-VEM developers
# SPDX-License-Identifier: Apache-2.0

from typing import TYPE_CHECKING, Tuple

import numpy as np

from stdg_VEM.VEM_common.Errors import MeshError
from stdg_VEM.poly_basis.MonomialBasis import n_monomials

if TYPE_CHECKING:
    from stdg_VEM.vem_element.VemElement import VemElement


def _solve(matrix: np.ndarray, rhs: np.ndarray, what: str) -> np.ndarray:
    try:
        return np.linalg.solve(matrix, rhs)
    except np.linalg.LinAlgError as exc:
        raise MeshError(f"singular {what} system, degenerate cell geometry") from exc


def build_dof_matrix(element: "VemElement") -> np.ndarray:
    """D[i, a] = dof_i(m_a)."""
    layout, basis = element.layout, element.basis
    D = np.empty((layout.total, basis.dim))
    D[layout.vertex_dofs] = basis.eval(element.points)
    for edge in range(layout.n_vertices):
        if layout.n_edge_nodes:
            D[layout.edge_dofs(edge)] = basis.eval(element.edge_node_points(edge))
    D[layout.moment_dofs] = element.H[:layout.n_moments] / element.area
    return D


def build_pi_nabla(element: "VemElement") -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Returns (B, G, Pi) with G = B D and Pi = G^-1 B.

    Row 0 of B is the boundary integral of each basis function, so the
    constant mode of the projection matches the boundary average.
    """
    basis, layout = element.basis, element.layout
    B = np.zeros((basis.dim, layout.total))
    if layout.n_moments:
        lap = basis.laplacian_matrix()
        B[:, layout.moment_dofs] -= element.area * lap.T
    for edge in element.edges:
        dn = basis.eval_grad(edge.points) @ edge.normal
        B[:, edge.trace_dofs] += dn.T @ (edge.weights[:, None] * edge.trace)
    B[0] = 0.0
    for edge in element.edges:
        B[0, edge.trace_dofs] += edge.weights @ edge.trace
    G = B @ element.D
    return B, G, _solve(G, B, "H1 projection")


def build_pi0_k(element: "VemElement") -> Tuple[np.ndarray, np.ndarray]:
    """Returns (C, Pi) where C holds the moments of v against every monomial.

    Moments up to degree k-2 are DoFs; degrees k-1 and k come from the
    enhancement constraint and equal those of the H1 projection.
    """
    layout = element.layout
    C = element.H @ element.pi_nabla
    C[:layout.n_moments] = 0.0
    C[np.arange(layout.n_moments), layout.moment_dofs] = element.area
    return C, _solve(element.H, C, "L2 projection")


def build_pi0_grad(element: "VemElement", degree: int) -> Tuple[np.ndarray, np.ndarray]:
    """L2 projection of the gradient onto vector polynomials of ``degree``.

    Integration by parts against p in P_degree moves the derivative onto
    the monomial; interior moments of v up to degree-1 are read from C,
    which is exact for degree <= k in the enhanced space.
    """
    assert 0 <= degree <= element.k, f"gradient projection degree {degree} out of range"
    target = element.basis.restrict(degree)
    n = target.dim
    n_low = n_monomials(degree - 1)
    Dx, Dy = target.derivative_matrices()
    Hd = element.H[:n, :n]
    result = []
    for component, Dc in enumerate((Dx, Dy)):
        E = np.zeros((n, element.layout.total))
        if n_low:
            E -= Dc.T @ element.C[:n_low]
        for edge in element.edges:
            values = target.eval(edge.points) * edge.normal[component]
            E[:, edge.trace_dofs] += values.T @ (edge.weights[:, None] * edge.trace)
        result.append(_solve(Hd, E, "gradient projection"))
    return result[0], result[1]
