# Copyright (c) 2026, stdg-VEM developers
# SPDX-License-Identifier: Apache-2.0

import enum
from typing import Any, Callable, List, NamedTuple, Optional, Tuple

import numpy as np

# Data callbacks are vectorized over numpy arrays of coordinates.
ScalarField = Callable[..., Any]
VectorField = Callable[..., Tuple[Any, Any]]


class MeshKind(enum.IntEnum):
    Cartesian = 0b0
    Voronoi   = 0b1


class StabMode(enum.IntEnum):
    NONE = 0b0
    SUPG = 0b1


class SolverKind(enum.IntEnum):
    Direct = 0b0
    Krylov = 0b1


class AdvectionProjection(enum.IntEnum):
    KMinusOne = 0b0
    K         = 0b1


class CaseId(enum.IntEnum):
    Diffusion    = 0b0
    Convection   = 0b1
    Patch        = 0b10
    RotatingBody = 0b11
    Custom       = 0b100


def parse_enum(enum_type: Any, value: str) -> Any:
    normalized = value.replace("-", "").replace("_", "").lower()
    for member in enum_type:
        if member.name.lower() == normalized:
            return member
    raise ValueError(f"{value!r} is not one of "
                     f"{', '.join(m.name.lower() for m in enum_type)}")


class BBox(NamedTuple):
    x0: float = 0.0
    y0: float = 0.0
    x1: float = 1.0
    y1: float = 1.0

    @property
    def width(self) -> float:
        return self.x1 - self.x0

    @property
    def height(self) -> float:
        return self.y1 - self.y0

    @property
    def area(self) -> float:
        return self.width * self.height

    def corners(self) -> np.ndarray:
        return np.array([[self.x0, self.y0], [self.x1, self.y0],
                         [self.x1, self.y1], [self.x0, self.y1]], dtype=float)


class CellGeometry(NamedTuple):
    area: float
    centroid: np.ndarray
    diameter: float


class QuadratureRule(NamedTuple):
    points: np.ndarray
    weights: np.ndarray
    exactness_degree: int


class MeshQualityReport(NamedTuple):
    rho_star_estimate: np.ndarray
    min_edge_ratio: np.ndarray
    worst_cell: int
    rho: float
    violations: List[int]

    @property
    def ok(self) -> bool:
        return len(self.violations) == 0

    def __str__(self) -> str:
        lines = [f"cells: {self.rho_star_estimate.size}",
                 f"min rho_star: {self.rho_star_estimate.min():.6g}",
                 f"min edge ratio: {self.min_edge_ratio.min():.6g}",
                 f"worst cell: {self.worst_cell}",
                 f"threshold: {self.rho:.6g}"]
        if self.ok:
            lines.append("regularity: ok")
        else:
            lines.append(f"regularity: {len(self.violations)} violating cells "
                         f"{self.violations[:10]}")
        return "\n".join(lines)


class ProblemData(NamedTuple):
    nu: float
    beta: VectorField
    f: ScalarField
    u0: ScalarField
    T: float
    g: Optional[ScalarField] = None


class SupgParams(NamedTuple):
    zeta: float = 0.1
    c_inv: Optional[float] = None
    beta_eps: Optional[float] = None
    bar_beta: Optional[float] = None
    enabled: bool = True
    extra_time_stab: bool = False
    c_star_check: float = 1.0
    stab_mass_scale: str = "area"
    stab_stiff_scale: float = 1.0
    advection_projection: AdvectionProjection = AdvectionProjection.K


class SlabSystem(NamedTuple):
    matrix: Any
    rhs: np.ndarray
    slab: int


class SlabDiagnostics(NamedTuple):
    slab: int
    residual: float
    nnz: int
    iterations: int
    residual_history: List[float]


class EnergyNormBreakdown(NamedTuple):
    l2: float
    jump: float
    grad: float
    supg: float
    extra: float = 0.0

    @property
    def total(self) -> float:
        return float(np.sqrt(self.l2 + self.jump + self.grad + self.supg + self.extra))


class ErrorReport(NamedTuple):
    e_h1_T: float
    e_l2_T: float
    e_h1_QT: float
    e_energy_interp: float
    h: float
    tau: float
    n_dofs: int
    wall_time: float = 0.0


ERROR_METRICS = ("e_h1_T", "e_l2_T", "e_h1_QT", "e_energy_interp")


class SolverConfig(NamedTuple):
    kind: SolverKind = SolverKind.Direct
    rtol: float = 1e-10
    restart: int = 50
    maxiter: int = 500
    threads: int = 1
