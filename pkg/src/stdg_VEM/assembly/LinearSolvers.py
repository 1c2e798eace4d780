# Copyright (c) 2026, stdg-VEM developers
# SPDX-License-Identifier: Apache-2.0

from typing import List, Optional, TypeVar

import numpy as np
import scipy.sparse as sp # type: ignore
import scipy.sparse.linalg as spla # type: ignore

from stdg_VEM.VEM_common.VEM_types import SolverKind
from stdg_VEM.VEM_common.Errors import SolverError
from stdg_VEM.VEM_common.LinearSolverInterface import LinearSolverInterface
from stdg_VEM.VEM_common.Log import get_log

T = TypeVar('T')


class DirectSolver(LinearSolverInterface):
    """Sparse LU via SuperLU."""

    def __init__(self, name: str = "direct") -> None:
        self.log = get_log(f"assembly.{name}")
        self.residual_history: List[float] = []
        self.iterations: int = 0
        self._lu = None

    def factorize(self: T, matrix) -> T:
        try:
            self._lu = spla.splu(sp.csc_matrix(matrix))
        except RuntimeError as exc:
            raise SolverError(f"singular slab matrix ({exc})") from exc
        self.log.debug(f"LU factors nnz L={self._lu.L.nnz} U={self._lu.U.nnz}")
        return self

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        assert self._lu is not None, "factorize() must be called before solve()"
        x = self._lu.solve(rhs)
        if not np.all(np.isfinite(x)):
            raise SolverError("direct solve produced non-finite values")
        return x


class KrylovSolver(LinearSolverInterface):
    """Restarted GMRES preconditioned with an incomplete LU factorization."""

    def __init__(self, rtol: float = 1e-10, restart: int = 50, maxiter: int = 500,
                 drop_tol: float = 1e-5, fill_factor: float = 20.0,
                 name: str = "krylov") -> None:
        assert rtol > 0.0, "relative tolerance must be positive"
        assert restart >= 1 and maxiter >= 1, "GMRES restart and maxiter must be positive"
        self.log = get_log(f"assembly.{name}")
        self.rtol = rtol
        self.restart = restart
        self.maxiter = maxiter
        self.drop_tol = drop_tol
        self.fill_factor = fill_factor
        self.residual_history: List[float] = []
        self.iterations: int = 0
        self._matrix: Optional[sp.csc_matrix] = None
        self._precond: Optional[spla.LinearOperator] = None

    def factorize(self: T, matrix) -> T:
        self._matrix = sp.csc_matrix(matrix)
        try:
            ilu = spla.spilu(self._matrix, drop_tol=self.drop_tol, fill_factor=self.fill_factor)
        except RuntimeError as exc:
            raise SolverError(f"incomplete factorization failed ({exc})") from exc
        self._precond = spla.LinearOperator(self._matrix.shape, ilu.solve)
        return self

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        assert self._matrix is not None, "factorize() must be called before solve()"
        self.residual_history = []

        def record(residual: float) -> None:
            self.residual_history.append(float(residual))

        x, info = spla.gmres(self._matrix, rhs, M=self._precond, rtol=self.rtol,
                             restart=self.restart, maxiter=self.maxiter,
                             callback=record, callback_type="pr_norm")
        self.iterations = len(self.residual_history)
        if info != 0 or not np.all(np.isfinite(x)):
            raise SolverError(f"GMRES did not converge (info={info}, "
                              f"{self.iterations} iterations)",
                              residual_history=list(self.residual_history))
        self.log.debug(f"GMRES converged in {self.iterations} iterations")
        return x


def make_solver(kind: SolverKind, **options) -> LinearSolverInterface:
    if kind == SolverKind.Direct:
        return DirectSolver()
    return KrylovSolver(**options)
