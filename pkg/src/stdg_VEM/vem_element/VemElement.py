# Copyright (c) 2026, stdg-VEM developers
# SPDX-License-Identifier: Apache-2.0

from typing import NamedTuple, Tuple

import numpy as np

from stdg_VEM.VEM_common.VEM_types import AdvectionProjection, ScalarField
from stdg_VEM.VEM_common.Log import get_log
from stdg_VEM.mesh.PolyMesh import polygon_geometry
from stdg_VEM.poly_basis.MonomialBasis import MonomialBasis, n_monomials
from stdg_VEM.poly_basis.Quadrature import (polygon_quadrature, edge_quadrature,
                                            monomial_mass_matrix, lobatto_nodes)
from stdg_VEM.poly_basis.Lagrange import lagrange_values
from stdg_VEM.vem_element.Projectors import (build_dof_matrix, build_pi_nabla, build_pi0_k,
                                             build_pi0_grad)
from stdg_VEM.vem_element.LocalForms import local_mass, local_stiffness


class LocalDofLayout(NamedTuple):
    """Local DoF order: vertices, then k-1 nodes per edge, then moments."""
    n_vertices: int
    n_edge_nodes: int
    n_moments: int

    @property
    def vertex_dofs(self) -> np.ndarray:
        return np.arange(self.n_vertices)

    def edge_dofs(self, edge: int) -> np.ndarray:
        start = self.n_vertices + edge * self.n_edge_nodes
        return np.arange(start, start + self.n_edge_nodes)

    def edge_trace_dofs(self, edge: int) -> np.ndarray:
        return np.concatenate([[edge], self.edge_dofs(edge), [(edge + 1) % self.n_vertices]])

    @property
    def moment_dofs(self) -> np.ndarray:
        start = self.n_vertices * (1 + self.n_edge_nodes)
        return np.arange(start, start + self.n_moments)

    @property
    def total(self) -> int:
        return self.n_vertices * (1 + self.n_edge_nodes) + self.n_moments


def local_dof_layout(n_vertices: int, k: int) -> LocalDofLayout:
    return LocalDofLayout(n_vertices, k - 1, n_monomials(k - 2))


def edge_node_parameters(k: int) -> np.ndarray:
    """Positions in (0, 1) of the interior Gauss-Lobatto nodes of order k."""
    return 0.5 * (lobatto_nodes(k)[1:-1] + 1.0)


class EdgeData(NamedTuple):
    trace_dofs: np.ndarray
    normal: np.ndarray
    points: np.ndarray
    weights: np.ndarray
    trace: np.ndarray


class VemElement:
    """Enhanced virtual element of degree k on one polygon.

    Projector matrices map local DoF vectors to monomial coefficients:
    ``pi_nabla`` for the H1 projection, ``pi0`` for the L2 projection of
    degree k, ``pi0_grad`` for the L2 projection of the gradient onto
    degree k-1 vectors and ``pi0_grad_adv`` for the gradient used by the
    advection form.
    """

    def __init__(self, points: np.ndarray, k: int, *, mass_scale: str = "area",
                 stiff_scale: float = 1.0,
                 advection_projection: AdvectionProjection = AdvectionProjection.K,
                 name: str = "") -> None:
        assert k >= 1, "VEM degree must be at least 1"
        self.log = get_log(f"vem_element{'.' + name if name else ''}")
        self.points: np.ndarray = np.asarray(points, dtype=float)
        self.k: int = k
        self.geometry = polygon_geometry(self.points)
        self.area: float = self.geometry.area
        self.diameter: float = self.geometry.diameter
        self.basis = MonomialBasis(self.geometry.centroid, self.diameter, k)
        self.layout: LocalDofLayout = local_dof_layout(len(self.points), k)
        self.quadrature = polygon_quadrature(self.points, 2 * k + 2, self.geometry.centroid)
        self.H: np.ndarray = monomial_mass_matrix(self.basis, self.quadrature)
        self.edges: Tuple[EdgeData, ...] = tuple(self._edge_data(i)
                                                 for i in range(len(self.points)))

        self.D: np.ndarray = build_dof_matrix(self)
        self.B, self.G, self.pi_nabla = build_pi_nabla(self)
        self.C, self.pi0 = build_pi0_k(self)
        self.pi0_grad: Tuple[np.ndarray, np.ndarray] = build_pi0_grad(self, k - 1)
        self.adv_degree: int = k if advection_projection == AdvectionProjection.K else k - 1
        self.pi0_grad_adv = (build_pi0_grad(self, k) if self.adv_degree == k
                             else self.pi0_grad)

        self.M_loc, self.S_m = local_mass(self, mass_scale)
        self.A_loc, self.S_a = local_stiffness(self, stiff_scale)
        self._tabulate()
        self.log.debug(f"built degree {k} element with {self.n_dofs} DoFs, "
                       f"cond(G)={np.linalg.cond(self.G):.3e}")

    @property
    def n_dofs(self) -> int:
        return self.layout.total

    def _edge_data(self, edge: int) -> EdgeData:
        p = self.points[edge]
        q = self.points[(edge + 1) % len(self.points)]
        d = q - p
        length = float(np.hypot(*d))
        rule = edge_quadrature(p, q, 2 * self.k + 1)
        s = (rule.points - p) @ d / length ** 2
        nodes = np.concatenate([[0.0], edge_node_parameters(self.k), [1.0]])
        return EdgeData(self.layout.edge_trace_dofs(edge), np.array([d[1], -d[0]]) / length,
                        rule.points, rule.weights, lagrange_values(nodes, s))

    def edge_node_points(self, edge: int) -> np.ndarray:
        p = self.points[edge]
        q = self.points[(edge + 1) % len(self.points)]
        return p + edge_node_parameters(self.k)[:, None] * (q - p)

    def _tabulate(self) -> None:
        qp = self.quadrature.points
        self.phi0: np.ndarray = self.basis.eval(qp) @ self.pi0
        low = self.basis.restrict(self.k - 1)
        self.grad_values: np.ndarray = np.stack([low.eval(qp) @ g for g in self.pi0_grad])
        adv = self.basis.restrict(self.adv_degree)
        self.adv_grad_values: np.ndarray = np.stack([adv.eval(qp) @ g for g in self.pi0_grad_adv])
        Dx, Dy = low.derivative_matrices()
        self.div_coefficients: np.ndarray = Dx @ self.pi0_grad[0] + Dy @ self.pi0_grad[1]
        if self.k >= 2:
            self.div_values: np.ndarray = self.basis.restrict(self.k - 2).eval(qp) @ self.div_coefficients
        else:
            self.div_values = np.zeros((len(qp), self.n_dofs))

    def dof_values(self, func: ScalarField, degree: int = -1) -> np.ndarray:
        """Degrees of freedom of a pointwise function ``func(x, y)``."""
        out = np.empty(self.n_dofs)
        x, y = self.points[:, 0], self.points[:, 1]
        out[self.layout.vertex_dofs] = np.broadcast_to(func(x, y), x.shape)
        for edge in range(len(self.points)):
            nodes = self.edge_node_points(edge)
            out[self.layout.edge_dofs(edge)] = np.broadcast_to(func(nodes[:, 0], nodes[:, 1]),
                                                              (len(nodes),))
        if self.layout.n_moments:
            degree = 2 * self.k + 6 if degree < 0 else degree
            rule = polygon_quadrature(self.points, degree, self.geometry.centroid)
            values = np.broadcast_to(func(rule.points[:, 0], rule.points[:, 1]),
                                     rule.weights.shape)
            monomials = self.basis.restrict(self.k - 2).eval(rule.points)
            out[self.layout.moment_dofs] = monomials.T @ (rule.weights * values) / self.area
        return out
