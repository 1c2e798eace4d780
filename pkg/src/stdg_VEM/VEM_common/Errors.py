# Copyright (c) 2026, stdg-VEM developers
# SPDX-License-Identifier: Apache-2.0

from typing import List, Optional


class StdgError(Exception):
    exit_code: int = 1


class MeshError(StdgError):
    exit_code = 2


class MeshParseError(MeshError):
    pass


class ConfigError(StdgError):
    exit_code = 2

    def __init__(self, field: str, message: str) -> None:
        super().__init__(f"{field}: {message}")
        self.field = field


class SolverError(StdgError):
    exit_code = 3

    def __init__(self, message: str, slab: Optional[int] = None,
                 residual_history: Optional[List[float]] = None) -> None:
        if slab is not None:
            message = f"slab {slab}: {message}"
        super().__init__(message)
        self.slab = slab
        self.residual_history: List[float] = residual_history or []


class RateError(StdgError):
    pass


class AcceptanceError(StdgError):
    exit_code = 4
