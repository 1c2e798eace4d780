# Copyright (c) 2026, stdg-VEM developers
# SPDX-License-Identifier: Apache-2.0

from functools import lru_cache
from typing import Optional, Tuple

import numpy as np
from numpy.polynomial import legendre # type: ignore

from stdg_VEM.VEM_common.VEM_types import QuadratureRule
from stdg_VEM.VEM_common.Errors import MeshError
from stdg_VEM.mesh.PolyMesh import polygon_geometry
from stdg_VEM.poly_basis.MonomialBasis import MonomialBasis


@lru_cache(maxsize=None)
def gauss_legendre(n_points: int) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre rule on [0, 1]."""
    s, w = legendre.leggauss(n_points)
    return 0.5 * (s + 1.0), 0.5 * w


@lru_cache(maxsize=None)
def lobatto_nodes(order: int) -> np.ndarray:
    """order+1 Gauss-Lobatto nodes on [-1, 1]; the midpoint for order 0."""
    if order == 0:
        return np.zeros(1)
    interior = np.sort(legendre.Legendre.basis(order).deriv().roots().real)
    return np.concatenate([[-1.0], interior, [1.0]])


def interval_quadrature(a: float, b: float, degree: int) -> QuadratureRule:
    s, w = gauss_legendre(degree // 2 + 1)
    return QuadratureRule(a + (b - a) * s, (b - a) * w, degree)


@lru_cache(maxsize=None)
def _reference_triangle(degree: int) -> Tuple[np.ndarray, np.ndarray]:
    # collapsed tensor rule: the Duffy jacobian adds one degree in the first direction
    s, w = gauss_legendre((degree + 3) // 2)
    xi, eta = np.meshgrid(s, s, indexing="ij")
    wx, wy = np.meshgrid(w, w, indexing="ij")
    x = xi.ravel()
    y = (eta * (1.0 - xi)).ravel()
    weights = (wx * wy * (1.0 - xi)).ravel()
    return np.column_stack([x, y]), weights


def triangle_quadrature(a: np.ndarray, b: np.ndarray, c: np.ndarray,
                        degree: int) -> QuadratureRule:
    ref, w = _reference_triangle(degree)
    jac = np.column_stack([b - a, c - a])
    det = float(np.linalg.det(jac))
    return QuadratureRule(a + ref @ jac.T, w * det, degree)


def polygon_quadrature(points: np.ndarray, degree: int,
                       center: Optional[np.ndarray] = None) -> QuadratureRule:
    """Fan sub-triangulation from ``center`` (default: the area-weighted centroid).

    Fan triangles carry signed weights, so the rule stays exact for any
    simple polygon even when the centroid does not see the whole boundary.
    """
    points = np.asarray(points, dtype=float)
    x, y = points[:, 0], points[:, 1]
    total = 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))
    if abs(total) <= 1e-300:
        raise MeshError("cannot integrate over a zero-area polygon")
    if center is None:
        center = polygon_geometry(points).centroid
    all_points, all_weights = [], []
    n = len(points)
    for i in range(n):
        p, q = points[i], points[(i + 1) % n]
        tri = 0.5 * ((p[0] - center[0]) * (q[1] - center[1])
                     - (q[0] - center[0]) * (p[1] - center[1]))
        if abs(tri) <= 1e-14 * abs(total):
            continue
        rule = triangle_quadrature(center, p, q, degree)
        all_points.append(rule.points)
        all_weights.append(rule.weights)
    return QuadratureRule(np.concatenate(all_points), np.concatenate(all_weights), degree)


def edge_quadrature(p0: np.ndarray, p1: np.ndarray, degree: int) -> QuadratureRule:
    p0, p1 = np.asarray(p0, dtype=float), np.asarray(p1, dtype=float)
    s, w = gauss_legendre(degree // 2 + 1)
    length = float(np.hypot(*(p1 - p0)))
    return QuadratureRule(p0 + s[:, None] * (p1 - p0), w * length, degree)


def edge_parameters(degree: int) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre parameters in [0, 1] and unit-length weights for edges."""
    return gauss_legendre(degree // 2 + 1)


def monomial_mass_matrix(basis: MonomialBasis, quadrature: QuadratureRule) -> np.ndarray:
    assert quadrature.exactness_degree >= 2 * basis.degree, \
        "quadrature must integrate products of basis monomials exactly"
    values = basis.eval(quadrature.points)
    H = values.T @ (quadrature.weights[:, None] * values)
    return 0.5 * (H + H.T)
