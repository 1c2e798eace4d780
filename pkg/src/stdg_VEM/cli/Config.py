# Copyright (c) 2026, stdg-VEM developers
# SPDX-License-Identifier: Apache-2.0

import json
import math
import sys
from pathlib import Path
from typing import Any, Dict, NamedTuple, Optional, Tuple, Union

from stdg_VEM.VEM_common.VEM_types import (AdvectionProjection, BBox, CaseId, MeshKind,
                                           SolverConfig, SolverKind, StabMode, SupgParams,
                                           parse_enum)
from stdg_VEM.VEM_common.Errors import ConfigError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib # type: ignore

_REQUIRED = object()


class ProblemSpec(NamedTuple):
    case: CaseId
    nu: float
    T: float
    beta: Optional[Tuple[str, str]] = None
    f: Optional[str] = None
    u0: Optional[str] = None
    u_exact: Optional[str] = None
    g: Optional[str] = None


class MeshSpec(NamedTuple):
    kind: MeshKind = MeshKind.Cartesian
    n: int = 8
    n_seeds: int = 64
    relax_iters: int = 10
    seed: int = 0
    path: Optional[str] = None
    bbox: BBox = BBox()


class TimeSpec(NamedTuple):
    n_slabs: Optional[int] = None
    tau: Optional[float] = None
    nodes: Optional[Tuple[float, ...]] = None


class OutputSpec(NamedTuple):
    directory: str = "out"
    vtk: bool = False
    timing: bool = True


class RunConfig(NamedTuple):
    problem: ProblemSpec
    k: int
    r: int
    mesh: MeshSpec
    time: TimeSpec
    supg: SupgParams
    solver: SolverConfig
    output: OutputSpec
    source_text: str = ""
    source_suffix: str = ".toml"


def _section(doc: Dict[str, Any], name: str) -> Dict[str, Any]:
    value = doc.get(name, {})
    if not isinstance(value, dict):
        raise ConfigError(name, "must be a table")
    return value


def _get(section: Dict[str, Any], prefix: str, name: str, kind: type,
         default: Any = _REQUIRED) -> Any:
    field = f"{prefix}.{name}"
    if name not in section:
        if default is _REQUIRED:
            raise ConfigError(field, "missing required field")
        return default
    value = section[name]
    if kind is float and isinstance(value, (int, float)) and not isinstance(value, bool):
        value = float(value)
        if not math.isfinite(value):
            raise ConfigError(field, "must be finite")
        return value
    if kind is int and isinstance(value, int) and not isinstance(value, bool):
        return value
    if kind is bool and isinstance(value, bool):
        return value
    if kind is str and isinstance(value, (str, int, float)) and not isinstance(value, bool):
        return str(value)
    if kind is list and isinstance(value, list):
        return value
    raise ConfigError(field, f"expected {kind.__name__}, got {type(value).__name__}")


def _enum(section: Dict[str, Any], prefix: str, name: str, enum_type: Any, default: Any) -> Any:
    value = _get(section, prefix, name, str, None)
    if value is None:
        return default
    try:
        return parse_enum(enum_type, value)
    except ValueError as exc:
        raise ConfigError(f"{prefix}.{name}", str(exc)) from exc


def _problem(doc: Dict[str, Any]) -> ProblemSpec:
    sec = _section(doc, "problem")
    case = _enum(sec, "problem", "case", CaseId, CaseId.Custom)
    nu = _get(sec, "problem", "nu", float)
    T = _get(sec, "problem", "T", float)
    if nu < 0.0:
        raise ConfigError("problem.nu", "must be non-negative")
    if T <= 0.0:
        raise ConfigError("problem.T", "must be positive")
    beta = _get(sec, "problem", "beta", list, None)
    if beta is not None:
        if len(beta) != 2:
            raise ConfigError("problem.beta", "needs exactly two components")
        beta = (str(beta[0]), str(beta[1]))
    spec = ProblemSpec(case, nu, T, beta, _get(sec, "problem", "f", str, None),
                       _get(sec, "problem", "u0", str, None),
                       _get(sec, "problem", "u_exact", str, None),
                       _get(sec, "problem", "g", str, None))
    if case == CaseId.Custom:
        if spec.beta is None:
            raise ConfigError("problem.beta", "missing required field")
        if spec.u_exact is None and spec.u0 is None:
            raise ConfigError("problem.u0", "missing required field (or give problem.u_exact)")
        if spec.u_exact is None and spec.f is None:
            raise ConfigError("problem.f", "missing required field (or give problem.u_exact)")
    return spec


def _mesh(doc: Dict[str, Any]) -> MeshSpec:
    sec = _section(doc, "mesh")
    bbox = _get(sec, "mesh", "bbox", list, [0.0, 0.0, 1.0, 1.0])
    if len(bbox) != 4 or not (bbox[2] > bbox[0] and bbox[3] > bbox[1]):
        raise ConfigError("mesh.bbox", "must be [x0, y0, x1, y1] with x1 > x0 and y1 > y0")
    spec = MeshSpec(_enum(sec, "mesh", "kind", MeshKind, MeshKind.Cartesian),
                    _get(sec, "mesh", "n", int, 8), _get(sec, "mesh", "n_seeds", int, 64),
                    _get(sec, "mesh", "relax_iters", int, 10), _get(sec, "mesh", "seed", int, 0),
                    _get(sec, "mesh", "path", str, None), BBox(*(float(v) for v in bbox)))
    if spec.n < 1:
        raise ConfigError("mesh.n", "must be at least 1")
    if spec.n_seeds < 1:
        raise ConfigError("mesh.n_seeds", "must be at least 1")
    if spec.relax_iters < 0:
        raise ConfigError("mesh.relax_iters", "must be non-negative")
    return spec


def _time(doc: Dict[str, Any]) -> TimeSpec:
    sec = _section(doc, "time")
    nodes = _get(sec, "time", "nodes", list, None)
    spec = TimeSpec(_get(sec, "time", "n_slabs", int, None), _get(sec, "time", "tau", float, None),
                    tuple(float(v) for v in nodes) if nodes is not None else None)
    if sum(v is not None for v in spec) != 1:
        raise ConfigError("time", "give exactly one of n_slabs, tau, nodes")
    if spec.n_slabs is not None and spec.n_slabs < 1:
        raise ConfigError("time.n_slabs", "must be at least 1")
    if spec.tau is not None and spec.tau <= 0.0:
        raise ConfigError("time.tau", "must be positive")
    return spec


def _supg(doc: Dict[str, Any]) -> SupgParams:
    sec = _section(doc, "supg")
    mode = _enum(sec, "supg", "mode", StabMode, StabMode.SUPG)
    projection = _get(sec, "supg", "advection_projection", str, "k")
    if projection not in ("k", "k-1"):
        raise ConfigError("supg.advection_projection", "must be 'k' or 'k-1'")
    mass_scale = _get(sec, "supg", "stab_mass_scale", str, "area")
    if mass_scale not in ("area", "diameter2"):
        raise ConfigError("supg.stab_mass_scale", "must be 'area' or 'diameter2'")
    params = SupgParams(zeta=_get(sec, "supg", "zeta", float, 0.1),
                        c_inv=_get(sec, "supg", "c_inv", float, None),
                        beta_eps=_get(sec, "supg", "beta_eps", float, None),
                        bar_beta=_get(sec, "supg", "bar_beta", float, None),
                        enabled=mode == StabMode.SUPG,
                        extra_time_stab=_get(sec, "supg", "extra_time_stab", bool, False),
                        c_star_check=_get(sec, "supg", "c_star", float, 1.0),
                        stab_mass_scale=mass_scale,
                        stab_stiff_scale=_get(sec, "supg", "stab_stiff_scale", float, 1.0),
                        advection_projection=(AdvectionProjection.K if projection == "k"
                                              else AdvectionProjection.KMinusOne))
    for name in ("zeta", "c_inv", "beta_eps", "bar_beta", "stab_stiff_scale"):
        value = getattr(params, name)
        if value is not None and value <= 0.0:
            raise ConfigError(f"supg.{name}", "must be positive")
    return params


def _solver(doc: Dict[str, Any]) -> SolverConfig:
    sec = _section(doc, "solver")
    cfg = SolverConfig(_enum(sec, "solver", "kind", SolverKind, SolverKind.Direct),
                       _get(sec, "solver", "rtol", float, 1e-10),
                       _get(sec, "solver", "restart", int, 50),
                       _get(sec, "solver", "maxiter", int, 500),
                       _get(sec, "solver", "threads", int, 1))
    if cfg.rtol <= 0.0:
        raise ConfigError("solver.rtol", "must be positive")
    for name in ("restart", "maxiter", "threads"):
        if getattr(cfg, name) < 1:
            raise ConfigError(f"solver.{name}", "must be at least 1")
    return cfg


def parse_config(doc: Dict[str, Any], source_text: str = "",
                 source_suffix: str = ".toml") -> RunConfig:
    disc = _section(doc, "discretization")
    k = _get(disc, "discretization", "k", int, 1)
    r = _get(disc, "discretization", "r", int, 1)
    if k < 1:
        raise ConfigError("discretization.k", "must be at least 1")
    if r < 0:
        raise ConfigError("discretization.r", "must be non-negative")
    out = _section(doc, "output")
    output = OutputSpec(_get(out, "output", "directory", str, "out"),
                        _get(out, "output", "vtk", bool, False),
                        _get(out, "output", "timing", bool, True))
    return RunConfig(_problem(doc), k, r, _mesh(doc), _time(doc), _supg(doc), _solver(doc),
                     output, source_text, source_suffix)


def load_config(path: Union[str, Path]) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc.strerror}") from exc
    try:
        if path.suffix == ".json":
            doc = json.loads(text)
        else:
            doc = tomllib.loads(text)
    except (ValueError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError("config", f"cannot parse {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config", "top level must be a table")
    return parse_config(doc, text, path.suffix or ".toml")


def echo_config(config: RunConfig, directory: Union[str, Path]) -> Path:
    target = Path(directory) / f"config{config.source_suffix}"
    target.write_text(config.source_text)
    return target
