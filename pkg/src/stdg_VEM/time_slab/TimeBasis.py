# Copyright (c) 2026, stdg-VEM developers
# SPDX-License-Identifier: Apache-2.0

from typing import Callable, Optional, Tuple

import numpy as np

from stdg_VEM.VEM_common.VEM_types import QuadratureRule
from stdg_VEM.poly_basis.Quadrature import lobatto_nodes, interval_quadrature
from stdg_VEM.poly_basis.Lagrange import lagrange_values, lagrange_derivatives


class TimeBasis:
    """Nodal Lagrange basis of degree r on one slab.

    ``K_t[i, j]`` is the integral of phi_i' phi_j, so the upwind time
    derivative of the trial function j tested with i is ``K_t.T[i, j]``.
    ``K2_t`` integrates phi_i' phi_j'.
    """

    def __init__(self, interval: Tuple[float, float], r: int) -> None:
        a, b = interval
        assert b > a, "slab length must be positive"
        assert r >= 0, "time degree must be non-negative"
        self.interval: Tuple[float, float] = (float(a), float(b))
        self.degree: int = r
        self.tau: float = float(b - a)
        self.nodes: np.ndarray = a + 0.5 * (lobatto_nodes(r) + 1.0) * self.tau

        rule = self.quadrature(2 * r + 2)
        phi = self.eval(rule.points)
        dphi = self.deriv(rule.points)
        w = rule.weights[:, None]
        self.M_t: np.ndarray = phi.T @ (w * phi)
        self.K_t: np.ndarray = dphi.T @ (w * phi)
        self.K2_t: np.ndarray = dphi.T @ (w * dphi)
        self.e_L: np.ndarray = self.eval(np.array([a]))[0]
        self.e_R: np.ndarray = self.eval(np.array([b]))[0]

    @property
    def size(self) -> int:
        return self.degree + 1

    def eval(self, t: np.ndarray) -> np.ndarray:
        if self.degree == 0:
            return np.ones((np.size(t), 1))
        return lagrange_values(self.nodes, t)

    def deriv(self, t: np.ndarray) -> np.ndarray:
        if self.degree == 0:
            return np.zeros((np.size(t), 1))
        return lagrange_derivatives(self.nodes, t)

    def quadrature(self, degree: int) -> QuadratureRule:
        return interval_quadrature(*self.interval, degree)

    def __repr__(self) -> str:
        return f"TimeBasis(interval={self.interval}, r={self.degree})"


def build_time_basis(interval: Tuple[float, float], r: int) -> TimeBasis:
    return TimeBasis(interval, r)


def time_jump_coupling(basis_prev: TimeBasis,
                       basis_next: TimeBasis) -> Tuple[np.ndarray, np.ndarray]:
    """(e_R of the earlier slab, e_L of the later slab) at their shared node."""
    assert np.isclose(basis_prev.interval[1], basis_next.interval[0]), "slabs are not adjacent"
    return basis_prev.e_R, basis_next.e_L


def time_jump(coeffs_prev: np.ndarray, coeffs_next: np.ndarray,
              basis_prev: TimeBasis, basis_next: TimeBasis) -> np.ndarray:
    """[[w]]_n = w(t_n^-) - w(t_n^+) for nodal coefficients stacked along axis 0."""
    e_R, e_L = time_jump_coupling(basis_prev, basis_next)
    return np.tensordot(e_R, coeffs_prev, axes=1) - np.tensordot(e_L, coeffs_next, axes=1)


def project_time(f: Callable[[np.ndarray], np.ndarray], basis: TimeBasis,
                 degree: Optional[int] = None) -> np.ndarray:
    """Coefficients of the L2(I_n) projection of ``f`` onto P_r."""
    rule = basis.quadrature(2 * basis.degree + 6 if degree is None else degree)
    load = basis.eval(rule.points).T @ (rule.weights * np.broadcast_to(f(rule.points),
                                                                       rule.weights.shape))
    return np.linalg.solve(basis.M_t, load)


def weight_phi(t: np.ndarray, T: float) -> np.ndarray:
    """Exponential weight T exp((T - t)/T), bounded by T and e T on [0, T]."""
    return T * np.exp((T - np.asarray(t, dtype=float)) / T)


def weight_phi_deriv(t: np.ndarray, T: float) -> np.ndarray:
    return -np.exp((T - np.asarray(t, dtype=float)) / T)
