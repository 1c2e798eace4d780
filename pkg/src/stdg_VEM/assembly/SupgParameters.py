# Copyright (c) 2026, stdg-VEM developers
# SPDX-License-Identifier: Apache-2.0

import math
from typing import Sequence

import numpy as np

from stdg_VEM.VEM_common.VEM_types import ProblemData, SupgParams
from stdg_VEM.VEM_common.Errors import ConfigError
from stdg_VEM.VEM_common.Log import get_log
from stdg_VEM.time_slab.TimePartition import TimePartition
from stdg_VEM.poly_basis.Quadrature import interval_quadrature

BAR_BETA_SAFETY = 1.05
BETA_EPS_FACTOR = 1e-8


def default_c_inv(k: int) -> float:
    return 10.0 * k * k


def sample_bar_beta(problem: ProblemData, points: np.ndarray, partition: TimePartition,
                    r: int = 1) -> float:
    """Sampled max |beta| over the given points and the slab time quadrature nodes."""
    peak = 0.0
    for _, (a, b) in partition.intervals():
        for t in np.concatenate([[a, b], interval_quadrature(a, b, 2 * r + 6).points]):
            bx, by = problem.beta(points[:, 0], points[:, 1], t)
            speed = np.hypot(np.broadcast_to(bx, points[:, 0].shape),
                             np.broadcast_to(by, points[:, 0].shape))
            peak = max(peak, float(np.max(speed)))
    return peak


def resolve_params(params: SupgParams, k: int, problem: ProblemData,
                   points: np.ndarray, partition: TimePartition, r: int = 1) -> SupgParams:
    """Fill in C_inv, bar_beta and beta_eps defaults and validate the result."""
    log = get_log("assembly.supg")
    c_inv = default_c_inv(k) if params.c_inv is None else params.c_inv
    bar_beta = params.bar_beta
    if bar_beta is None:
        sampled = sample_bar_beta(problem, points, partition, r)
        bar_beta = BAR_BETA_SAFETY * sampled if sampled > 0.0 else 1.0
        log.info(f"sampled |beta| max {sampled:.6g}, using bar_beta = {bar_beta:.6g}")
    beta_eps = BETA_EPS_FACTOR * bar_beta if params.beta_eps is None else params.beta_eps
    if not params.zeta > 0.0:
        raise ConfigError("supg.zeta", f"must be positive, got {params.zeta}")
    if not c_inv > 0.0:
        raise ConfigError("supg.c_inv", f"must be positive, got {c_inv}")
    if not (bar_beta > 0.0 and math.isfinite(bar_beta)):
        raise ConfigError("supg.bar_beta", f"must be positive and finite, got {bar_beta}")
    if not beta_eps > 0.0:
        raise ConfigError("supg.beta_eps", f"must be positive, got {beta_eps}")
    return params._replace(c_inv=float(c_inv), bar_beta=float(bar_beta), beta_eps=float(beta_eps))


def compute_lambda(h_K: float, params: SupgParams, nu: float) -> float:
    """lambda_Kn = zeta min{h_K^2 / (nu C_inv^2), h_K / bar_beta}; zero when SUPG is off."""
    assert h_K > 0.0, "cell diameter must be positive"
    assert params.c_inv is not None and params.bar_beta is not None, "parameters not resolved"
    if not params.enabled:
        return 0.0
    diffusive = h_K * h_K / (nu * params.c_inv ** 2) if nu > 0.0 else math.inf
    value = params.zeta * min(diffusive, h_K / params.bar_beta)
    if not math.isfinite(value):
        raise ConfigError("supg", f"non-finite lambda for h_K={h_K}, nu={nu}")
    return value


def compute_lambdas(diameters: Sequence[float], params: SupgParams, nu: float) -> np.ndarray:
    return np.array([compute_lambda(float(h), params, nu) for h in diameters])
