# Copyright (c) 2026, stdg-VEM developers
# SPDX-License-Identifier: Apache-2.0

from typing import List, NamedTuple, Optional, Sequence

import numpy as np

from stdg_VEM.VEM_common.VEM_types import ErrorReport, ScalarField, VectorField
from stdg_VEM.poly_basis.Quadrature import polygon_quadrature
from stdg_VEM.assembly.SpaceTimeSolver import GlobalSolution
from stdg_VEM.analysis.Interpolation import dof_interpolant
from stdg_VEM.analysis.EnergyNorm import EnergyNorm


class _CellTables(NamedTuple):
    points: np.ndarray
    weights: np.ndarray
    values: np.ndarray
    grads: np.ndarray


def _tables(solution: GlobalSolution) -> List[_CellTables]:
    tables = []
    for element in solution.elements:
        rule = polygon_quadrature(element.points, 2 * element.k + 6, element.geometry.centroid)
        tables.append(_CellTables(rule.points, rule.weights,
                                  element.basis.eval(rule.points) @ element.pi0,
                                  element.basis.eval_grad(rule.points).transpose(2, 0, 1)
                                  @ element.pi_nabla))
    return tables


def _squared_errors(solution: GlobalSolution, tables: Sequence[_CellTables], w: np.ndarray,
                    t: float, u_exact: ScalarField, grad_exact: VectorField):
    l2 = h1 = 0.0
    for dofs, tab in zip(solution.dof_map.cell_dofs, tables):
        x, y = tab.points[:, 0], tab.points[:, 1]
        local = w[dofs]
        u = np.broadcast_to(u_exact(x, y, t), x.shape)
        ux, uy = grad_exact(x, y, t)
        du = np.stack([np.broadcast_to(ux, x.shape), np.broadcast_to(uy, x.shape)])
        l2 += float(tab.weights @ (u - tab.values @ local) ** 2)
        h1 += float(tab.weights @ ((du - tab.grads @ local) ** 2).sum(axis=0))
    return l2, h1


def error_metrics(solution: GlobalSolution, u_exact: ScalarField, grad_exact: VectorField,
                  interpolant: Optional[Sequence[np.ndarray]] = None,
                  energy: Optional[EnergyNorm] = None) -> ErrorReport:
    """Final-time and space-time errors of the projected discrete solution."""
    tables = _tables(solution)
    T = solution.partition.T
    l2_T, h1_T = _squared_errors(solution, tables, solution.end_values(solution.partition.n_slabs),
                                 T, u_exact, grad_exact)
    qt = 0.0
    for basis, w in zip(solution.bases, solution.coefficients):
        rule = basis.quadrature(2 * solution.r + 6)
        values = basis.eval(rule.points) @ w
        for weight, t, v in zip(rule.weights, rule.points, values):
            l2, h1 = _squared_errors(solution, tables, v, float(t), u_exact, grad_exact)
            qt += weight * (l2 + h1)

    if interpolant is None:
        interpolant = dof_interpolant(u_exact, solution.dof_map, solution.elements, solution.bases)
    energy = EnergyNorm(solution) if energy is None else energy
    difference = [w - i for w, i in zip(solution.coefficients, interpolant)]
    e_energy = energy(difference).total
    return ErrorReport(float(np.sqrt(h1_T)), float(np.sqrt(l2_T)), float(np.sqrt(qt)),
                       float(e_energy), solution.mesh.h, solution.partition.tau,
                       solution.n_dofs, solution.wall_time)
