# Copyright (c) 2026, stdg-VEM developers
# SPDX-License-Identifier: Apache-2.0

from typing import Callable, NamedTuple, Optional, Sequence, Union

import numpy as np
import sympy # type: ignore

from stdg_VEM.VEM_common.VEM_types import CaseId, ProblemData, ScalarField, VectorField

x, y, t = sympy.symbols("x y t", real=True)
Expr = Union[str, float, sympy.Expr]

DIFFUSION_NU = 1.0
CONVECTION_NU = 1e-10
DEFAULT_T = 1.5


class ManufacturedCase(NamedTuple):
    name: str
    problem: ProblemData
    u_exact: Optional[ScalarField]
    grad_exact: Optional[VectorField]
    u_expr: Optional[sympy.Expr]


def to_expr(value: Expr) -> sympy.Expr:
    return sympy.sympify(value, locals={"x": x, "y": y, "t": t, "pi": sympy.pi})


def lambdify_scalar(expr: Expr, args=(x, y, t)) -> Callable[..., np.ndarray]:
    """Vectorized callback ``f(*args)`` that always returns an array shaped like its first argument."""
    fn = sympy.lambdify(args, to_expr(expr), modules="numpy")

    def field(*values):
        shape = np.shape(values[0])
        return np.broadcast_to(np.asarray(fn(*values), dtype=float), shape)

    return field


def lambdify_vector(exprs: Sequence[Expr], args=(x, y, t)) -> Callable[..., tuple]:
    fx, fy = (lambdify_scalar(e, args) for e in exprs)
    return lambda *values: (fx(*values), fy(*values))


def divergence(beta: Sequence[Expr]) -> sympy.Expr:
    bx, by = (to_expr(b) for b in beta)
    return sympy.simplify(sympy.diff(bx, x) + sympy.diff(by, y))


def source_term(u: Expr, beta: Sequence[Expr], nu: float) -> sympy.Expr:
    """f = du/dt - nu Laplace(u) + beta . grad(u)."""
    u = to_expr(u)
    bx, by = (to_expr(b) for b in beta)
    return (sympy.diff(u, t) - nu * (sympy.diff(u, x, 2) + sympy.diff(u, y, 2))
            + bx * sympy.diff(u, x) + by * sympy.diff(u, y))


def manufactured_case(name: str, u: Expr, beta: Sequence[Expr], nu: float,
                      T: float) -> ManufacturedCase:
    u = to_expr(u)
    f = source_term(u, beta, nu)
    problem = ProblemData(nu, lambdify_vector(beta), lambdify_scalar(f),
                          lambdify_scalar(u.subs(t, 0), (x, y)), T, lambdify_scalar(u))
    grad = lambdify_vector([sympy.diff(u, x), sympy.diff(u, y)])
    return ManufacturedCase(name, problem, lambdify_scalar(u), grad, u)


def smooth_solution() -> sympy.Expr:
    return sympy.exp(sympy.Rational(3, 10) * t) * sympy.sin(sympy.pi * x) * sympy.sin(sympy.pi * y)


def swirl_velocity() -> Sequence[sympy.Expr]:
    s = sympy.exp(t / 2) * sympy.sin(sympy.pi * (x + y))
    return [s, -s]


def patch_solution(k: int, r: int) -> sympy.Expr:
    """Space-time polynomial of degree k in space and r in time."""
    space = sum(sympy.Rational(a + 2 * b + 1, a + b + 1) * x ** a * y ** b
                for a in range(k + 1) for b in range(k + 1 - a))
    time = sum(t ** j / (j + 1) for j in range(r + 1))
    return sympy.expand(space * time)


def diffusion_case(T: float = DEFAULT_T, nu: float = DIFFUSION_NU) -> ManufacturedCase:
    return manufactured_case("diffusion", smooth_solution(), swirl_velocity(), nu, T)


def convection_case(T: float = DEFAULT_T, nu: float = CONVECTION_NU) -> ManufacturedCase:
    return manufactured_case("convection", smooth_solution(), swirl_velocity(), nu, T)


def patch_case(k: int, r: int, T: float = 1.0, nu: float = 1.0) -> ManufacturedCase:
    return manufactured_case("patch", patch_solution(k, r), [1, 1], nu, T)


def case_for(case: CaseId, k: int = 1, r: int = 1, T: Optional[float] = None,
             nu: Optional[float] = None) -> ManufacturedCase:
    if case == CaseId.Diffusion:
        return diffusion_case(DEFAULT_T if T is None else T, DIFFUSION_NU if nu is None else nu)
    if case == CaseId.Convection:
        return convection_case(DEFAULT_T if T is None else T, CONVECTION_NU if nu is None else nu)
    if case == CaseId.Patch:
        return patch_case(k, r, 1.0 if T is None else T, 1.0 if nu is None else nu)
    raise ValueError(f"{case.name} is not a manufactured-solution case")


def expression_case(beta: Sequence[Expr], nu: float, T: float, f: Optional[Expr] = None,
                    u0: Optional[Expr] = None, u_exact: Optional[Expr] = None,
                    g: Optional[Expr] = None) -> ManufacturedCase:
    """Problem from user expressions in x, y, t.

    With ``u_exact`` alone, f and u0 are derived from it and it also serves
    as Dirichlet datum unless ``g`` is given.
    """
    for value in (*beta, f, u0, u_exact, g):
        if value is not None:
            unknown = to_expr(value).free_symbols - {x, y, t}
            if unknown:
                raise ValueError(f"unknown symbols {sorted(map(str, unknown))} in {value!r}")
    if u_exact is not None and f is None and u0 is None:
        case = manufactured_case("custom", u_exact, beta, nu, T)
        if g is not None:
            case = case._replace(problem=case.problem._replace(g=lambdify_scalar(g)))
        return case
    assert f is not None or u_exact is not None, "a source term or exact solution is required"
    assert u0 is not None or u_exact is not None, "an initial datum or exact solution is required"
    u_expr = to_expr(u_exact) if u_exact is not None else None
    if f is None:
        f = source_term(u_expr, beta, nu)
    if u0 is None:
        u0 = u_expr.subs(t, 0)
    if g is None and u_expr is not None:
        g = u_expr
    problem = ProblemData(nu, lambdify_vector(beta), lambdify_scalar(f),
                          lambdify_scalar(u0, (x, y)), T,
                          lambdify_scalar(g) if g is not None else None)
    if u_expr is None:
        return ManufacturedCase("custom", problem, None, None, None)
    grad = lambdify_vector([sympy.diff(u_expr, x), sympy.diff(u_expr, y)])
    return ManufacturedCase("custom", problem, lambdify_scalar(u_expr), grad, u_expr)
