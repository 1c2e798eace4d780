# Copyright (c) 2026, stdg-VEM developers
# SPDX-License-Identifier: Apache-2.0

from typing import List, Tuple

import numpy as np


def n_monomials(degree: int) -> int:
    return (degree + 1) * (degree + 2) // 2 if degree >= 0 else 0


def monomial_index(a: int, b: int) -> int:
    d = a + b
    return d * (d + 1) // 2 + b


class MonomialBasis:
    """Scaled and shifted monomials m_(a,b) = ((x - xc)/h)^a ((y - yc)/h)^b.

    Multi-indices are graded lexicographic: (0,0), (1,0), (0,1), (2,0), (1,1), ...
    This ordering is also the on-disk order of monomial coefficients.
    """

    def __init__(self, center: np.ndarray, scale: float, degree: int) -> None:
        assert scale > 0.0, "monomial scale must be positive"
        assert degree >= 0, "monomial degree must be non-negative"
        self.center: np.ndarray = np.asarray(center, dtype=float).reshape(2)
        self.scale: float = float(scale)
        self.degree: int = degree
        self.index_map: List[Tuple[int, int]] = [(d - j, j) for d in range(degree + 1)
                                                  for j in range(d + 1)]
        self._a = np.array([a for a, _ in self.index_map])
        self._b = np.array([b for _, b in self.index_map])

    @property
    def dim(self) -> int:
        return len(self.index_map)

    def restrict(self, degree: int) -> "MonomialBasis":
        return MonomialBasis(self.center, self.scale, degree)

    def _scaled(self, points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        points = np.asarray(points, dtype=float).reshape(-1, 2)
        xi = (points[:, 0] - self.center[0]) / self.scale
        eta = (points[:, 1] - self.center[1]) / self.scale
        return xi, eta

    def eval(self, points: np.ndarray) -> np.ndarray:
        xi, eta = self._scaled(points)
        return xi[:, None] ** self._a[None, :] * eta[:, None] ** self._b[None, :]

    def eval_grad(self, points: np.ndarray) -> np.ndarray:
        xi, eta = self._scaled(points)
        a, b = self._a[None, :], self._b[None, :]
        dx = a * xi[:, None] ** np.maximum(a - 1, 0) * eta[:, None] ** b
        dy = b * xi[:, None] ** a * eta[:, None] ** np.maximum(b - 1, 0)
        return np.stack([dx, dy], axis=2) / self.scale

    def derivative_matrices(self) -> Tuple[np.ndarray, np.ndarray]:
        """Coefficient maps P_k -> P_{k-1} for d/dx and d/dy."""
        target = n_monomials(self.degree - 1)
        Dx = np.zeros((target, self.dim))
        Dy = np.zeros((target, self.dim))
        for col, (a, b) in enumerate(self.index_map):
            if a > 0:
                Dx[monomial_index(a - 1, b), col] = a / self.scale
            if b > 0:
                Dy[monomial_index(a, b - 1), col] = b / self.scale
        return Dx, Dy

    def laplacian_matrix(self) -> np.ndarray:
        """Coefficient map P_k -> P_{k-2} for the Laplacian."""
        target = n_monomials(self.degree - 2)
        L = np.zeros((target, self.dim))
        for col, (a, b) in enumerate(self.index_map):
            if a > 1:
                L[monomial_index(a - 2, b), col] += a * (a - 1) / self.scale ** 2
            if b > 1:
                L[monomial_index(a, b - 2), col] += b * (b - 1) / self.scale ** 2
        return L


def eval_basis(basis: MonomialBasis, points: np.ndarray) -> np.ndarray:
    return basis.eval(points)


def eval_basis_grad(basis: MonomialBasis, points: np.ndarray) -> np.ndarray:
    return basis.eval_grad(points)
