# Copyright (c) 2026, stdg-VEM developers
# SPDX-License-Identifier: Apache-2.0

from typing import Dict, Sequence

import numpy as np
import scipy.sparse as sp # type: ignore

from stdg_VEM.VEM_common.VEM_types import EnergyNormBreakdown
from stdg_VEM.assembly.SpaceTimeSolver import GlobalSolution


def _assemble(solution: GlobalSolution, blocks: Sequence[np.ndarray]) -> sp.csr_matrix:
    n = solution.dof_map.n_dofs
    rows, cols, vals = [], [], []
    for dofs, block in zip(solution.dof_map.cell_dofs, blocks):
        rows.append(np.repeat(dofs, len(dofs)))
        cols.append(np.tile(dofs, len(dofs)))
        vals.append(block.ravel())
    return sp.coo_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                         shape=(n, n)).tocsr()


def _time_form(time_matrix: np.ndarray, space_matrix: sp.csr_matrix, w: np.ndarray) -> float:
    return float(np.sum(time_matrix * (w @ (space_matrix @ w.T))))


class EnergyNorm:
    """Space-time energy norm of a discrete function on a solved configuration.

    L2 and gradient terms go through the L2 projections; the jump terms use
    plain L2 norms of projected traces; the SUPG seminorm reuses the
    streamline operator and the dofi-dofi residual of the scheme.
    """

    def __init__(self, solution: GlobalSolution) -> None:
        self.solution = solution
        elements = solution.elements
        self.mass = _assemble(solution, [e.pi0.T @ e.H @ e.pi0 for e in elements])
        grads = []
        for e in elements:
            n = e.pi0_grad[0].shape[0]
            grads.append(sum(g.T @ e.H[:n, :n] @ g for g in e.pi0_grad))
        self.grad = _assemble(solution, grads)
        lambdas = solution.assembler.lambdas
        self.extra_space = _assemble(solution, [lam * e.S_m for lam, e in zip(lambdas, elements)])
        self._supg: Dict[int, sp.csr_matrix] = {}

    def supg_matrix(self, n: int) -> sp.csr_matrix:
        if n not in self._supg:
            self._supg[n] = self.solution.assembler.supg_norm_matrix(self.solution.bases[n - 1])
        return self._supg[n]

    def __call__(self, coefficients: Sequence[np.ndarray], drop_jumps: bool = False
                 ) -> EnergyNormBreakdown:
        sol = self.solution
        assert len(coefficients) == len(sol.bases), "one coefficient array per slab is required"
        l2 = grad = supg = extra = 0.0
        for n, (basis, w) in enumerate(zip(sol.bases, coefficients), start=1):
            l2 += _time_form(basis.M_t, self.mass, w)
            grad += _time_form(basis.M_t, self.grad, w)
            flat = w.ravel()
            supg += float(flat @ (self.supg_matrix(n) @ flat))
            if sol.params.extra_time_stab and sol.params.enabled:
                extra += _time_form(basis.K2_t, self.extra_space, w)

        def sq(v: np.ndarray) -> float:
            return float(v @ (self.mass @ v))

        end = sol.bases[-1].e_R @ coefficients[-1]
        if drop_jumps:
            jump = sq(end)
        else:
            jump = sq(end) + sq(sol.bases[0].e_L @ coefficients[0])
            for n in range(1, len(coefficients)):
                jump += sq(sol.bases[n - 1].e_R @ coefficients[n - 1]
                           - sol.bases[n].e_L @ coefficients[n])
            jump *= 0.5
        return EnergyNormBreakdown(l2, jump, sol.problem.nu * grad, supg, extra)


def energy_norm(solution: GlobalSolution, coefficients: Sequence[np.ndarray],
                drop_jumps: bool = False) -> EnergyNormBreakdown:
    return EnergyNorm(solution)(coefficients, drop_jumps=drop_jumps)
