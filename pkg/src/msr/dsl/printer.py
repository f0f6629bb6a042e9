"""Print syntax trees back to canonical source text."""

from __future__ import annotations

from . import ast as A

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}
UNARY_PREC = 3
ATOM_PREC = 5


def _prec(e) -> int:
    if isinstance(e, A.Binary):
        return _PREC[e.op]
    if isinstance(e, A.Unary):
        return UNARY_PREC
    return ATOM_PREC


def _wrap(e, need: int) -> str:
    s = print_expr(e)
    return f"({s})" if _prec(e) < need else s


def print_expr(e) -> str:
    if isinstance(e, A.Num):
        return str(e.value)
    if isinstance(e, A.Name):
        return e.id
    if isinstance(e, A.Call):
        return f"{e.fn}({', '.join(print_expr(a) for a in e.args)})"
    if isinstance(e, A.Unary):
        return "-" + _wrap(e.operand, UNARY_PREC)
    if isinstance(e, A.Binary):
        p = _PREC[e.op]
        if e.op == "^":
            # right associative; the exponent is parsed as a unary expression
            return f"{_wrap(e.left, p + 1)}^{_wrap(e.right, UNARY_PREC)}"
        left = _wrap(e.left, p)
        right = _wrap(e.right, p + 1)
        if e.op in "+-":
            return f"{left} {e.op} {right}"
        return f"{left}{e.op}{right}"
    raise TypeError(f"not an expression node: {e!r}")


def _list(items) -> str:
    return ", ".join(print_expr(x) for x in items)


def print_statement(s) -> str:
    if isinstance(s, A.ChartDecl):
        return f"chart {s.name} ({', '.join(s.variables)})"
    if isinstance(s, A.FibrationDecl):
        out = f"fibration {s.name} ({', '.join(s.variables)})"
        if s.over is not None:
            out += f" over ({', '.join(s.over)})"
        return out
    if isinstance(s, A.Let):
        return f"{s.kind} {s.name} = {print_expr(s.expr)}"
    if isinstance(s, A.OmegaDecl):
        head = "omega" if s.n is None else f"omega n={s.n}"
        return f"{head} = {print_expr(s.expr)}"
    if isinstance(s, A.ActionDecl):
        return f"action {_list(s.items)}"
    if isinstance(s, A.StructConstDecl):
        return f"structconst [{s.a}, {s.b}] = {print_expr(s.expr)}"
    if isinstance(s, A.ConstraintsDecl):
        if s.from_level:
            return "constraints level 0 of moment" if s.zero_level else "constraints level of moment"
        return f"constraints {_list(s.gens)}"
    if isinstance(s, A.MomentDecl):
        if s.potential is not None:
            return f"moment from potential {s.potential}"
        return f"moment {_list(s.comps)}"
    if isinstance(s, A.LevelDecl):
        return f"level {_list(s.comps)}"
    if isinstance(s, A.CheckQuery):
        out = f"check {s.kind}"
        if s.args:
            out += " " + _list(s.args)
        return out + _expect_bool(s.expect)
    if isinstance(s, A.ReduceTangentQuery):
        out = "reduce tangent-module"
        if s.expect is not None:
            out += " expect " + _list(s.expect)
        return out
    if isinstance(s, A.ReduceQuery):
        return f"reduce {print_expr(s.expr)}{_expect_bool(s.expect)}"
    if isinstance(s, A.ReducedBasisQuery):
        out = f"reduced-basis degree={s.degree}"
        if s.ansatz:
            out += " ansatz " + _list(s.ansatz)
        if s.expect is not None:
            out += " expect " + _list(s.expect)
        return out
    if isinstance(s, A.JacobiQuery):
        out = f"jacobi arity={s.arity}"
        if s.sample:
            out += " sample " + _list(s.sample)
        if s.trials is not None:
            out += f" trials={s.trials}"
        return out
    raise TypeError(f"not a statement node: {s!r}")


def _expect_bool(v) -> str:
    if v is None:
        return ""
    return " expect true" if v else " expect false"


def print_scenario(sc: A.Scenario) -> str:
    return "".join(print_statement(s) + "\n" for s in sc.statements)
