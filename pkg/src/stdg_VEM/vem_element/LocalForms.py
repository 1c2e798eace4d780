# Copyright (c) 2026, stdg-VEM developers
# SPDX-License-Identifier: Apache-2.0

from typing import TYPE_CHECKING, NamedTuple, Tuple

import numpy as np

if TYPE_CHECKING:
    from stdg_VEM.vem_element.VemElement import VemElement

SYMMETRY_TOL = 1e-12


class SupgBlocks(NamedTuple):
    """Values at the cell quadrature points, each of shape (n_points, n_dofs)."""
    phi0: np.ndarray
    advection: np.ndarray
    div_grad: np.ndarray
    weights: np.ndarray
    s_a: np.ndarray


def _dofi_dofi(element: "VemElement", projector: np.ndarray) -> np.ndarray:
    residual = np.eye(element.n_dofs) - element.D @ projector
    return residual.T @ residual


def _beta_dot(grad_values: np.ndarray, beta_x: np.ndarray, beta_y: np.ndarray) -> np.ndarray:
    return beta_x[:, None] * grad_values[0] + beta_y[:, None] * grad_values[1]


def _check_symmetric(matrix: np.ndarray, what: str) -> np.ndarray:
    scale = max(1.0, float(np.abs(matrix).max()))
    if np.abs(matrix - matrix.T).max() > SYMMETRY_TOL * scale:
        raise AssertionError(f"{what} is not symmetric")
    return 0.5 * (matrix + matrix.T)


def local_mass(element: "VemElement", scale: str = "area") -> Tuple[np.ndarray, np.ndarray]:
    """m_h^K as (M_loc, S_m), with S_m the scaled dofi-dofi stabilization."""
    if scale == "area":
        factor = element.area
    elif scale == "diameter2":
        factor = element.diameter ** 2
    else:
        raise ValueError(f"unknown mass stabilization scale {scale!r}")
    S_m = factor * _dofi_dofi(element, element.pi0)
    M = element.pi0.T @ element.H @ element.pi0 + S_m
    return _check_symmetric(M, "local mass matrix"), S_m


def local_stiffness(element: "VemElement", scale: float = 1.0) -> Tuple[np.ndarray, np.ndarray]:
    n = element.pi0_grad[0].shape[0]
    H = element.H[:n, :n]
    S_a = scale * _dofi_dofi(element, element.pi_nabla)
    A = sum(g.T @ H @ g for g in element.pi0_grad) + S_a
    return _check_symmetric(A, "local stiffness matrix"), S_a


def local_supg_blocks(element: "VemElement", beta_x: np.ndarray,
                      beta_y: np.ndarray) -> SupgBlocks:
    """Operator values for L and its streamline part at sampled velocities.

    ``beta_x``/``beta_y`` are velocity samples at the cell quadrature
    points. ``advection`` is beta . Pi0_{k-1} grad v and ``div_grad`` is
    the divergence of the same gradient projection.
    """
    advection = _beta_dot(element.grad_values, beta_x, beta_y)
    return SupgBlocks(element.phi0, advection, element.div_values,
                      element.quadrature.weights, element.S_a)


def local_advection(element: "VemElement", beta_x: np.ndarray, beta_y: np.ndarray) -> np.ndarray:
    """B[i, j] = (beta . grad-projection phi_j, Pi0 phi_i)_K, with the advection projection."""
    advection = _beta_dot(element.adv_grad_values, beta_x, beta_y)
    return element.phi0.T @ (element.quadrature.weights[:, None] * advection)
