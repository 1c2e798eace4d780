# Copyright (c) 2026, stdg-VEM developers
# SPDX-License-Identifier: Apache-2.0

import math
from typing import Iterator, Sequence, Tuple

import numpy as np


class TimePartition:
    """Slabs I_n = (t_{n-1}, t_n) of (0, T); slabs are numbered from 1."""

    def __init__(self, nodes: Sequence[float]) -> None:
        nodes = np.array(nodes, dtype=float)
        assert nodes.ndim == 1 and len(nodes) >= 2, "a partition needs at least two nodes"
        assert nodes[0] == 0.0, "time partition must start at t = 0"
        assert np.all(np.diff(nodes) > 0.0), "time nodes must be strictly increasing"
        self.nodes: np.ndarray = nodes
        self.nodes.flags.writeable = False

    @classmethod
    def uniform(cls, T: float, n_slabs: int) -> "TimePartition":
        assert T > 0.0, "final time must be positive"
        assert n_slabs >= 1, "at least one slab is needed"
        return cls(np.linspace(0.0, T, n_slabs + 1))

    @classmethod
    def with_step(cls, T: float, tau: float) -> "TimePartition":
        """Uniform partition whose step is the closest to ``tau`` giving an integer slab count."""
        assert tau > 0.0, "time step must be positive"
        return cls.uniform(T, max(1, int(math.floor(T / tau + 0.5))))

    @property
    def T(self) -> float:
        return float(self.nodes[-1])

    @property
    def n_slabs(self) -> int:
        return len(self.nodes) - 1

    @property
    def tau_n(self) -> np.ndarray:
        return np.diff(self.nodes)

    @property
    def tau(self) -> float:
        return float(self.tau_n.max())

    def interval(self, n: int) -> Tuple[float, float]:
        assert 1 <= n <= self.n_slabs, f"slab {n} out of range"
        return float(self.nodes[n - 1]), float(self.nodes[n])

    def intervals(self) -> Iterator[Tuple[int, Tuple[float, float]]]:
        for n in range(1, self.n_slabs + 1):
            yield n, self.interval(n)

    def slab_of(self, t: float) -> int:
        """Slab containing t, with t_n itself assigned to slab n."""
        n = int(np.searchsorted(self.nodes, t, side="left"))
        return min(max(n, 1), self.n_slabs)

    def __repr__(self) -> str:
        return f"TimePartition(T={self.T:.6g}, slabs={self.n_slabs}, tau={self.tau:.6g})"
