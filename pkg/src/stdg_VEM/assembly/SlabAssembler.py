# Copyright (c) 2026, stdg-VEM developers
# SPDX-License-Identifier: Apache-2.0

import math
from concurrent.futures import ThreadPoolExecutor
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp # type: ignore

from stdg_VEM.VEM_common.VEM_types import ProblemData, SupgParams, SlabSystem
from stdg_VEM.VEM_common.Errors import SolverError
from stdg_VEM.VEM_common.Log import get_log
from stdg_VEM.mesh.PolyMesh import PolyMesh
from stdg_VEM.vem_element.VemElement import VemElement
from stdg_VEM.vem_element.DofMap import GlobalDofMap
from stdg_VEM.time_slab.TimeBasis import TimeBasis
from stdg_VEM.assembly.SupgParameters import compute_lambdas


class SlabSamples(NamedTuple):
    """Data sampled on every cell quadrature point at the slab time nodes."""
    t: np.ndarray
    w_t: np.ndarray
    phi: np.ndarray
    dphi: np.ndarray
    beta_x: np.ndarray
    beta_y: np.ndarray
    f: np.ndarray
    beta_kn: np.ndarray


class CellTerms(NamedTuple):
    lhs: np.ndarray
    rhs: np.ndarray
    skew: np.ndarray
    supg_norm: np.ndarray


def build_elements(mesh: PolyMesh, k: int, params: SupgParams) -> List[VemElement]:
    return [VemElement(mesh.cell_points(c), k, mass_scale=params.stab_mass_scale,
                       stiff_scale=params.stab_stiff_scale,
                       advection_projection=params.advection_projection, name=f"cell{c}")
            for c in range(mesh.n_cells)]


def _broadcast(value, shape: Tuple[int, ...]) -> np.ndarray:
    return np.broadcast_to(np.asarray(value, dtype=float), shape)


class SlabAssembler:
    """Space-time system of one slab, assembled cell by cell.

    Unknowns are time-major: index ``i * n_dofs + s`` for time node i and
    global spatial DoF s.
    """

    def __init__(self, mesh: PolyMesh, elements: Sequence[VemElement], dof_map: GlobalDofMap,
                 problem: ProblemData, params: SupgParams, r: int, *, threads: int = 1) -> None:
        assert len(elements) == mesh.n_cells, "one element per cell is required"
        assert problem.nu >= 0.0, "diffusion coefficient must be non-negative"
        assert problem.T > 0.0, "final time must be positive"
        assert threads >= 1, "thread count must be positive"
        self.log = get_log("assembly")
        self.mesh = mesh
        self.elements = elements
        self.dof_map = dof_map
        self.problem = problem
        self.params = params
        self.r = r
        self.threads = threads
        self.lambdas: np.ndarray = compute_lambdas(mesh.diameters, params, problem.nu)

        sizes = [len(e.quadrature.weights) for e in elements]
        self.offsets: np.ndarray = np.concatenate([[0], np.cumsum(sizes)])
        self.points: np.ndarray = np.concatenate([e.quadrature.points for e in elements])
        self.log.debug(f"lambda range [{self.lambdas.min():.3e}, {self.lambdas.max():.3e}] "
                       f"over {mesh.n_cells} cells")

    def sample(self, basis: TimeBasis) -> SlabSamples:
        rule = basis.quadrature(2 * self.r + 6)
        x, y = self.points[:, 0], self.points[:, 1]
        shape = (len(rule.points), len(x))
        beta_x, beta_y, f = np.empty(shape), np.empty(shape), np.empty(shape)
        for q, t in enumerate(rule.points):
            bx, by = self.problem.beta(x, y, t)
            beta_x[q], beta_y[q] = _broadcast(bx, x.shape), _broadcast(by, x.shape)
            f[q] = _broadcast(self.problem.f(x, y, t), x.shape)
        if not (np.all(np.isfinite(beta_x)) and np.all(np.isfinite(beta_y))
                and np.all(np.isfinite(f))):
            raise SolverError("non-finite velocity or source samples")
        speed = np.hypot(beta_x, beta_y)
        beta_kn = np.array([max(self.params.beta_eps, float(speed[:, a:b].max()))
                            for a, b in zip(self.offsets[:-1], self.offsets[1:])])
        return SlabSamples(rule.points, rule.weights, basis.eval(rule.points),
                           basis.deriv(rule.points), beta_x, beta_y, f, beta_kn)

    def _streamline_rows(self, c: int, samples: SlabSamples) -> Tuple[np.ndarray, np.ndarray,
                                                                      np.ndarray, np.ndarray]:
        """Rows of L~ and L over the cell space-time quadrature, with weights.

        L and L~ use the degree k-1 gradient projection; the last entry holds
        beta . grad with the advection projection for the skew form.
        """
        element = self.elements[c]
        a, b = self.offsets[c], self.offsets[c + 1]
        lt_rows, l_rows, weights, advections = [], [], [], []
        for q in range(len(samples.t)):
            bx, by = samples.beta_x[q, a:b, None], samples.beta_y[q, a:b, None]
            low = bx * element.grad_values[0] + by * element.grad_values[1]
            adv = bx * element.adv_grad_values[0] + by * element.adv_grad_values[1]
            streamline = (np.kron(samples.dphi[q][None, :], element.phi0)
                          + np.kron(samples.phi[q][None, :], low))
            lt_rows.append(streamline)
            l_rows.append(streamline - self.problem.nu
                          * np.kron(samples.phi[q][None, :], element.div_values))
            weights.append(samples.w_t[q] * element.quadrature.weights)
            advections.append(adv)
        return np.vstack(lt_rows), np.vstack(l_rows), np.concatenate(weights), np.stack(advections)

    def cell_terms(self, c: int, basis: TimeBasis, samples: SlabSamples,
                   prev_end: Optional[np.ndarray]) -> CellTerms:
        element = self.elements[c]
        dofs = self.dof_map.cell_dofs[c]
        a, b = self.offsets[c], self.offsets[c + 1]
        lam = float(self.lambdas[c])
        nu = self.problem.nu
        w_x = element.quadrature.weights

        lhs = np.kron(basis.K_t.T + np.outer(basis.e_L, basis.e_L), element.M_loc)
        lhs += nu * np.kron(basis.M_t, element.A_loc)

        lt, l, w, adv = self._streamline_rows(c, samples)
        skew = np.zeros_like(lhs)
        for q in range(len(samples.t)):
            B = element.phi0.T @ (w_x[:, None] * adv[q])
            skew += samples.w_t[q] * np.kron(np.outer(samples.phi[q], samples.phi[q]),
                                             0.5 * (B - B.T))
        lhs += skew

        supg_norm = np.zeros_like(lhs)
        if lam > 0.0:
            beta_kn = float(samples.beta_kn[c])
            supg_norm = lam * (lt.T @ (w[:, None] * lt))
            supg_norm += beta_kn ** 2 * lam * np.kron(basis.M_t, element.S_a)
            lhs += lam * (lt.T @ (w[:, None] * l))
            lhs += beta_kn ** 2 * lam * np.kron(basis.M_t, element.S_a)
            if self.params.extra_time_stab:
                lhs += lam * np.kron(basis.K2_t, element.S_m)

        f = samples.f[:, a:b]
        rhs = np.einsum("q,qi,qp,ps->is", samples.w_t, samples.phi, f * w_x[None, :],
                        element.phi0).ravel()
        if lam > 0.0:
            rhs += lam * (lt.T @ (w * f.ravel()))
        if prev_end is None:
            u0 = _broadcast(self.problem.u0(element.quadrature.points[:, 0],
                                            element.quadrature.points[:, 1]), w_x.shape)
            initial = element.phi0.T @ (w_x * u0)
        else:
            initial = element.M_loc @ prev_end[dofs]
        rhs += np.kron(basis.e_L, initial)
        return CellTerms(lhs, rhs, skew, supg_norm)

    def _global_indices(self, c: int) -> np.ndarray:
        n = self.dof_map.n_dofs
        return (np.arange(self.r + 1)[:, None] * n + self.dof_map.cell_dofs[c][None, :]).ravel()

    def _map_cells(self, basis: TimeBasis, samples: SlabSamples,
                   prev_end: Optional[np.ndarray]) -> List[CellTerms]:
        cells = range(self.mesh.n_cells)
        if self.threads == 1:
            return [self.cell_terms(c, basis, samples, prev_end) for c in cells]
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            return list(pool.map(lambda c: self.cell_terms(c, basis, samples, prev_end), cells))

    def _to_sparse(self, blocks: Sequence[np.ndarray]) -> sp.csr_matrix:
        size = (self.r + 1) * self.dof_map.n_dofs
        rows, cols, vals = [], [], []
        for c, block in enumerate(blocks):
            idx = self._global_indices(c)
            rows.append(np.repeat(idx, len(idx)))
            cols.append(np.tile(idx, len(idx)))
            vals.append(block.ravel())
        return sp.coo_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                             shape=(size, size)).tocsr()

    def assemble_full(self, basis: TimeBasis, prev_end: Optional[np.ndarray] = None
                      ) -> Tuple[sp.csr_matrix, np.ndarray, SlabSamples, List[CellTerms]]:
        """Unreduced slab matrix and load over all spatial DoFs."""
        samples = self.sample(basis)
        terms = self._map_cells(basis, samples, prev_end)
        matrix = self._to_sparse([t.lhs for t in terms])
        rhs = np.zeros((self.r + 1) * self.dof_map.n_dofs)
        for c, t in enumerate(terms):
            np.add.at(rhs, self._global_indices(c), t.rhs)
        return matrix, rhs, samples, terms

    def skew_matrix(self, basis: TimeBasis) -> sp.csr_matrix:
        samples = self.sample(basis)
        return self._to_sparse([t.skew for t in self._map_cells(basis, samples, None)])

    def supg_norm_matrix(self, basis: TimeBasis) -> sp.csr_matrix:
        samples = self.sample(basis)
        return self._to_sparse([t.supg_norm for t in self._map_cells(basis, samples, None)])

    def boundary_values(self, basis: TimeBasis) -> np.ndarray:
        """Dirichlet values of the fixed DoFs at each time node, shape (r+1, n_fixed)."""
        if self.problem.g is None:
            return np.zeros((self.r + 1, len(self.dof_map.fixed)))
        g = self.problem.g
        return np.stack([self.dof_map.boundary_values(lambda x, y, t=t: g(x, y, t))
                         for t in basis.nodes])

    def assemble_slab(self, n: int, basis: TimeBasis,
                      prev_end: Optional[np.ndarray] = None) -> Tuple[SlabSystem, np.ndarray]:
        """Reduced system on the free DoFs and the fixed values used for the lifting."""
        assert (n == 1) == (prev_end is None), "only the first slab starts from the initial datum"
        h_min = self.mesh.h_min
        if basis.tau > self.params.c_star_check * math.sqrt(h_min):
            self.log.warning(f"slab {n}: tau={basis.tau:.4g} exceeds "
                             f"{self.params.c_star_check:g}*sqrt(h_min)={self.params.c_star_check * math.sqrt(h_min):.4g}")
        matrix, rhs, _, _ = self.assemble_full(basis, prev_end)
        n_dofs = self.dof_map.n_dofs
        offsets = np.arange(self.r + 1)[:, None] * n_dofs
        free = (offsets + self.dof_map.free[None, :]).ravel()
        fixed = (offsets + self.dof_map.fixed[None, :]).ravel()
        values = self.boundary_values(basis)
        reduced_rhs = rhs[free] - matrix[free][:, fixed] @ values.ravel()
        reduced = matrix[free][:, free].tocsr()
        if not (np.all(np.isfinite(reduced.data)) and np.all(np.isfinite(reduced_rhs))):
            raise SolverError("non-finite entries in the slab system", slab=n)
        return SlabSystem(reduced, reduced_rhs, n), values
