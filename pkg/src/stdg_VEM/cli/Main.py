# Copyright (c) 2026, stdg-VEM developers
# SPDX-License-Identifier: Apache-2.0

import argparse
from pathlib import Path
from typing import List, Optional

from stdg_VEM._version import __version__
from stdg_VEM.VEM_common.VEM_types import (CaseId, MeshKind, SolverConfig, StabMode,
                                           SupgParams, parse_enum)
from stdg_VEM.VEM_common.Errors import AcceptanceError, ConfigError, StdgError
from stdg_VEM.VEM_common.Log import configure, get_log
from stdg_VEM.mesh.CartesianGenerator import generate_cartesian
from stdg_VEM.mesh.VoronoiGenerator import generate_voronoi
from stdg_VEM.mesh.MeshQuality import DEFAULT_RHO, check_regularity
from stdg_VEM.mesh.MeshIO import load_mesh, save_mesh
from stdg_VEM.cli.Studies import StudySpec, check_rates, run_converge, run_single
from stdg_VEM.cli.RotatingBenchmark import run_benchmark_rotating


def _enum_arg(enum_type):
    def parse(value: str):
        try:
            return parse_enum(enum_type, value)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from exc
    return parse


def _at_least(args: argparse.Namespace, minimum: int, *names: str) -> None:
    for name in names:
        if getattr(args, name) < minimum:
            raise ConfigError(f"--{name.replace('_', '-')}", f"must be at least {minimum}")


def _positive(args: argparse.Namespace, *names: str) -> None:
    for name in names:
        value = getattr(args, name)
        if value is not None and not value > 0.0:
            raise ConfigError(f"--{name.replace('_', '-')}", "must be positive")


def _check_discretization(args: argparse.Namespace) -> None:
    _at_least(args, 1, "k", "threads")
    _at_least(args, 0, "r")
    _positive(args, "zeta", "T")


def _mesh_gen(args: argparse.Namespace) -> int:
    _at_least(args, 1, "n")
    _at_least(args, 0, "seeds", "relax")
    if args.kind == MeshKind.Cartesian:
        mesh = generate_cartesian(args.n, args.n)
    else:
        mesh = generate_voronoi(args.seeds or args.n * args.n, relax_iters=args.relax,
                                rng_seed=args.seed)
    save_mesh(mesh, args.output)
    print(f"{mesh!r} -> {args.output}")
    return 0


def _mesh_check(args: argparse.Namespace) -> int:
    if not 0.0 < args.rho < 1.0:
        raise ConfigError("--rho", "must lie in (0, 1)")
    mesh = load_mesh(args.path, reorient=args.reorient)
    report = check_regularity(mesh, args.rho)
    print(repr(mesh))
    print(report)
    return 0 if report.ok else AcceptanceError.exit_code


def _params(args: argparse.Namespace) -> SupgParams:
    return SupgParams(enabled=args.stab == StabMode.SUPG, zeta=args.zeta,
                      extra_time_stab=args.extra_time_stab)


def _converge(args: argparse.Namespace) -> int:
    if args.case not in (CaseId.Diffusion, CaseId.Convection, CaseId.Patch):
        raise ConfigError("case", "converge supports diffusion, convection and patch")
    _check_discretization(args)
    _at_least(args, 2, "levels")
    _at_least(args, 1, "base_n")
    if args.nu is not None and not args.nu >= 0.0:
        raise ConfigError("--nu", "must be non-negative")
    spec = StudySpec(args.case, args.k, args.r, args.mesh, args.levels, args.nu, _params(args),
                     args.output, args.base_n, args.T, args.seed,
                     SolverConfig(threads=args.threads), not args.no_timing)
    table = run_converge(spec)
    print(table)
    if args.assert_rates:
        check_rates(table, args.case, args.k, supg=args.stab == StabMode.SUPG)
    return 0


def _bench(args: argparse.Namespace) -> int:
    _check_discretization(args)
    _at_least(args, 1, "n")
    _positive(args, "tau")
    report = run_benchmark_rotating(args.n, k=args.k, r=args.r, mesh_kind=args.mesh,
                                    params=_params(args), tau=args.tau, T=args.T,
                                    solver=SolverConfig(threads=args.threads),
                                    output=None if args.no_vtk else args.output, seed=args.seed)
    print(report)
    return 0


def _solve(args: argparse.Namespace) -> int:
    _, report = run_single(args.config)
    if report is not None:
        print(report)
    return 0


def _add_stab_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--stab", type=_enum_arg(StabMode), default=StabMode.SUPG,
                        help="supg or none (default: supg)")
    parser.add_argument("--zeta", type=float, default=0.1, help="SUPG scaling (default: 0.1)")
    parser.add_argument("--extra-time-stab", action="store_true",
                        help="add the time-derivative stabilization term")
    parser.add_argument("--threads", type=int, default=1, help="assembly threads (default: 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stdg", description="SUPG time-DG virtual element "
                                     "solver for 2D advection-diffusion")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    parser.add_argument("-q", "--quiet", action="store_true")
    commands = parser.add_subparsers(dest="command", required=True)

    mesh = commands.add_parser("mesh", help="generate or check polygonal meshes")
    mesh_commands = mesh.add_subparsers(dest="mesh_command", required=True)
    gen = mesh_commands.add_parser("gen", help="generate a mesh of the unit square")
    gen.add_argument("--kind", type=_enum_arg(MeshKind), default=MeshKind.Cartesian)
    gen.add_argument("--n", type=int, default=8, help="cells per side (default: 8)")
    gen.add_argument("--seeds", type=int, default=0, help="Voronoi seeds (default: n*n)")
    gen.add_argument("--relax", type=int, default=10, help="Lloyd iterations (default: 10)")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("-o", "--output", type=Path, required=True)
    gen.set_defaults(handler=_mesh_gen)
    check = mesh_commands.add_parser("check", help="report mesh regularity",
                                     description="Report mesh regularity; exits with 4 when "
                                     "a cell violates the thresholds.")
    check.add_argument("path", type=Path)
    check.add_argument("--rho", type=float, default=DEFAULT_RHO)
    check.add_argument("--reorient", action="store_true", help="accept clockwise cells")
    check.set_defaults(handler=_mesh_check)

    converge = commands.add_parser("converge", help="manufactured-solution convergence study")
    converge.add_argument("--case", type=_enum_arg(CaseId), required=True,
                          help="diffusion, convection or patch")
    converge.add_argument("--k", type=int, default=1)
    converge.add_argument("--r", type=int, default=1)
    converge.add_argument("--mesh", type=_enum_arg(MeshKind), default=MeshKind.Cartesian)
    converge.add_argument("--levels", type=int, default=3)
    converge.add_argument("--base-n", type=int, default=8, help="cells per side on level 0")
    converge.add_argument("--nu", type=float, default=None)
    converge.add_argument("--T", type=float, default=None)
    converge.add_argument("--seed", type=int, default=0)
    converge.add_argument("-o", "--output", default=None)
    converge.add_argument("--assert-rates", action="store_true")
    converge.add_argument("--no-timing", action="store_true", help="write wall_time_s as 0")
    _add_stab_options(converge)
    converge.set_defaults(handler=_converge)

    bench = commands.add_parser("bench", help="benchmarks")
    bench_commands = bench.add_subparsers(dest="bench_command", required=True)
    rotating = bench_commands.add_parser("rotating", help="rotating disc transport")
    rotating.add_argument("--n", type=int, default=64)
    rotating.add_argument("--k", type=int, default=1)
    rotating.add_argument("--r", type=int, default=1)
    rotating.add_argument("--mesh", type=_enum_arg(MeshKind), default=MeshKind.Cartesian)
    rotating.add_argument("--tau", type=float, default=0.1)
    rotating.add_argument("--T", type=float, default=6.0)
    rotating.add_argument("--seed", type=int, default=0)
    rotating.add_argument("-o", "--output", default="rotating")
    rotating.add_argument("--no-vtk", action="store_true")
    _add_stab_options(rotating)
    rotating.set_defaults(handler=_bench)

    solve = commands.add_parser("solve", help="single solve from a TOML or JSON config")
    solve.add_argument("-c", "--config", type=Path, required=True)
    solve.set_defaults(handler=_solve)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure(-1 if args.quiet else args.verbose)
    log = get_log("cli")
    try:
        return args.handler(args)
    except StdgError as exc:
        log.error(str(exc))
        return exc.exit_code
