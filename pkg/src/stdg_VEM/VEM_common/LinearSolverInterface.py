# Copyright (c) 2026, stdg-VEM developers
# SPDX-License-Identifier: Apache-2.0

from abc import ABC
from typing import List, TypeVar

import numpy as np

T = TypeVar('T')


class LinearSolverInterface(ABC):
    residual_history: List[float]
    iterations: int

    def factorize(self: T, matrix) -> T:
        raise Exception("Unimplemented")
    def solve(self, rhs: np.ndarray) -> np.ndarray:
        raise Exception("Unimplemented")
