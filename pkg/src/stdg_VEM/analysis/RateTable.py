# Copyright (c) 2026, stdg-VEM developers
# SPDX-License-Identifier: Apache-2.0

import math
from pathlib import Path
from typing import Dict, List, Sequence, Union

import numpy as np
import pandas as pd # type: ignore

from stdg_VEM.VEM_common.VEM_types import ErrorReport, ERROR_METRICS
from stdg_VEM.VEM_common.Errors import RateError

CSV_VERSION = "# stdg-csv v1"
EXACT_TOL = 1e-12
RATE_COLUMNS = {"e_h1_T": "rate_h1_T", "e_l2_T": "rate_l2_T",
                "e_h1_QT": "rate_h1_QT", "e_energy_interp": "rate_energy"}
CSV_COLUMNS = ["level", "h", "tau", "n_dofs", *ERROR_METRICS, *RATE_COLUMNS.values(),
               "wall_time_s"]


def _format(value: float) -> str:
    return "" if math.isnan(value) else f"{value:.10e}"


def observed_order(e_coarse: float, e_fine: float, h_coarse: float, h_fine: float) -> float:
    """log(e_i/e_{i+1}) / log(h_i/h_{i+1}); NaN when both errors are at round-off."""
    if e_coarse <= EXACT_TOL and e_fine <= EXACT_TOL:
        return math.nan
    if e_coarse <= 0.0 or e_fine <= 0.0:
        return math.nan
    return math.log(e_coarse / e_fine) / math.log(h_coarse / h_fine)


class RateTable:
    """Error reports ordered by decreasing h with observed orders between neighbours."""

    def __init__(self, reports: Sequence[ErrorReport]) -> None:
        assert len(reports) >= 1, "a rate table needs at least one report"
        h = np.array([r.h for r in reports])
        if np.any(np.diff(h) >= 0.0):
            raise RateError(f"mesh sizes must strictly decrease, got {h.tolist()}")
        self.reports: List[ErrorReport] = list(reports)

    def rates(self, metric: str) -> List[float]:
        assert metric in ERROR_METRICS, f"unknown error metric {metric!r}"
        values = [getattr(r, metric) for r in self.reports]
        return [observed_order(values[i], values[i + 1], self.reports[i].h, self.reports[i + 1].h)
                for i in range(len(values) - 1)]

    def last_rate(self, metric: str) -> float:
        assert len(self.reports) >= 2, "rates need at least two levels"
        return self.rates(metric)[-1]

    def to_frame(self, timing: bool = True) -> pd.DataFrame:
        rows: List[Dict[str, Union[int, float]]] = []
        for level, report in enumerate(self.reports):
            row: Dict[str, Union[int, float]] = {"level": level, "h": report.h,
                                                 "tau": report.tau, "n_dofs": report.n_dofs}
            for metric in ERROR_METRICS:
                row[metric] = getattr(report, metric)
            rows.append(row)
        frame = pd.DataFrame(rows)
        for metric, column in RATE_COLUMNS.items():
            frame[column] = [math.nan] + self.rates(metric)
        frame["wall_time_s"] = [r.wall_time if timing else 0.0 for r in self.reports]
        return frame[CSV_COLUMNS]

    def to_csv(self, path: Union[str, Path], timing: bool = True) -> None:
        """Versioned CSV; rates between exactly reproduced levels are written as ``exact``."""
        frame = self.to_frame(timing)
        text = pd.DataFrame({"level": frame["level"].astype(int).astype(str),
                             "n_dofs": frame["n_dofs"].astype(int).astype(str)})
        for column in CSV_COLUMNS:
            if column not in text:
                text[column] = [_format(v) for v in frame[column]]
        for metric, column in RATE_COLUMNS.items():
            errors = frame[metric].to_numpy()
            for i in range(1, len(errors)):
                if errors[i - 1] <= EXACT_TOL and errors[i] <= EXACT_TOL:
                    text.loc[i, column] = "exact"
        with open(path, "w", newline="") as handle:
            handle.write(CSV_VERSION + "\n")
            text[CSV_COLUMNS].to_csv(handle, index=False)

    def __str__(self) -> str:
        return self.to_frame().to_string(index=False, float_format=lambda v: f"{v:.4e}")


def rates(reports: Sequence[ErrorReport]) -> RateTable:
    if len(reports) < 2:
        raise RateError("at least two reports are needed to compute rates")
    return RateTable(reports)


def read_rate_csv(path: Union[str, Path]) -> pd.DataFrame:
    with open(path) as handle:
        header = handle.readline().rstrip("\n")
    if header != CSV_VERSION:
        raise ValueError(f"{path}: unsupported CSV header {header!r}")
    return pd.read_csv(path, skiprows=1, keep_default_na=False, dtype=str)
