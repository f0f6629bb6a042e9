"""Execute scenario queries and render verdict records."""

from __future__ import annotations

import json
import time
from fractions import Fraction

from ..cartan import FieldExpr, FormExpr
from ..errors import MsrError
from ..groebner import SubmoduleBasis
from ..plectic import Observable, check_higher_jacobi, hamiltonian_field_for, is_hamiltonian_pair
from ..polyalg import Poly
from ..reduction import check_closure, check_poisson_descent, symplectic_predicates
from ..symmetry import check_covariant_moment_map, verify_action
from . import ast as A
from .elaborate import BUILTINS, Environment, elaborate
from .lexer import DslError, SemanticError
from .parser import parse_syntax
from .printer import print_statement

SCHEMA = 1
TIMING_FIELD = "time_ms"


class Scenario:
    """A parsed and elaborated scenario."""

    def __init__(self, tree: A.Scenario, env: Environment, source: str = ""):
        self.tree = tree
        self.env = env
        self.source = source

    @property
    def queries(self):
        return self.tree.queries


def _names_in(e, out):
    if isinstance(e, A.Name):
        out.append(e)
    elif isinstance(e, A.Call):
        if e.fn == "e":
            return
        for a in e.args:
            _names_in(a, out)
    elif isinstance(e, A.Unary):
        _names_in(e.operand, out)
    elif isinstance(e, A.Binary):
        _names_in(e.left, out)
        _names_in(e.right, out)


def _calls_in(e, out):
    if isinstance(e, A.Call):
        out.append(e)
        for a in e.args:
            _calls_in(a, out)
    elif isinstance(e, A.Unary):
        _calls_in(e.operand, out)
    elif isinstance(e, A.Binary):
        _calls_in(e.left, out)
        _calls_in(e.right, out)


def _query_exprs(q):
    if isinstance(q, A.CheckQuery):
        return q.args
    if isinstance(q, A.ReduceTangentQuery):
        return q.expect or ()
    if isinstance(q, A.ReduceQuery):
        return (q.expr,)
    if isinstance(q, A.ReducedBasisQuery):
        return q.ansatz + (q.expect or ())
    if isinstance(q, A.JacobiQuery):
        return q.sample
    return ()


def resolve_queries(tree: A.Scenario, env: Environment):
    """Static name check of query expressions."""
    known = set(env.names) | set(env.chart.variables if env.chart else ())
    for q in tree.queries:
        for e in _query_exprs(q):
            names, calls = [], []
            _names_in(e, names)
            _calls_in(e, calls)
            for n in names:
                if n.id not in known:
                    raise SemanticError(f"unknown name {n.id!r}", n.span.line, n.span.col)
            for c in calls:
                if c.fn not in BUILTINS:
                    raise SemanticError(f"unknown function {c.fn!r}", c.span.line, c.span.col)


def parse(source: str, order: str = "grevlex") -> Scenario:
    """Parse and elaborate; raises ParseError or SemanticError with a source span."""
    tree = parse_syntax(source)
    env = elaborate(tree, order)
    resolve_queries(tree, env)
    return Scenario(tree, env, source)


# -- query execution ------------------------------------------------------

def _str_field_list(fields):
    return [str(f) for f in fields]


def _subject(env: Environment, node, value):
    if isinstance(value, (Fraction, Poly)):
        return FormExpr.function(env._poly(value))
    return value


def _run_check(env: Environment, q: A.CheckQuery):
    k = q.kind
    vals = [env.eval(a) for a in q.args]
    if k == "nondegenerate":
        rep = env.require_plectic(q).nondegenerate
        det = {"status": rep.status, "detail": rep.detail}
        if rep.witness is not None:
            det["witness"] = str(rep.witness)
        return rep.status == "yes", det
    if k == "action":
        rep = verify_action(env.action())
        return rep.ok, rep.as_dict()
    if k == "moment":
        rep = check_covariant_moment_map(env.require_plectic(q), env.moment())
        return rep.ok, rep.as_dict()
    if k == "hamiltonian":
        P = env.require_plectic(q)
        if len(vals) == 2:
            v = env._want(q.args[0], vals[0], "field")
            a = env._want(q.args[1], vals[1], "form")
            return is_hamiltonian_pair(P, v, a), {}
        x = vals[0]
        if isinstance(x, Observable):
            if x.degree != 0:
                return False, {"detail": "not a degree-0 observable"}
            return is_hamiltonian_pair(P, x.field, x.form), {}
        a = env._want(q.args[0], x, "form")
        try:
            v = hamiltonian_field_for(P, a)
        except MsrError as exc:
            return False, {"detail": str(exc)}
        return True, {"field": str(v)}
    if k == "identical":
        a, b = (_subject(env, n, v) for n, v in zip(q.args, vals))
        same = type(a) is type(b) and a == b
        return same, {"left": str(a), "right": str(b)}
    ca = env.constraint_action()
    if k == "tangent":
        c = ca.is_tangent(env._want(q.args[0], vals[0], "field"))
        return c.value, c.certificate
    if k == "fundamental":
        c = ca.in_fundamental_plus_vanishing(env._want(q.args[0], vals[0], "field"))
        return c.value, c.certificate
    if k == "contains":
        p = env._want(q.args[0], vals[0], "poly")
        w = ca.ideal.witness(p, env.order)
        if w is None:
            return False, {"normal_form": str(ca.ideal.normal_form(p, env.order))}
        return True, {"generators": [str(g) for g in ca.ideal.generators], "cofactors": [str(c) for c in w]}
    if k in ("reducible", "vanishing"):
        x = _subject(env, q.args[0], vals[0])
        if k == "reducible":
            if isinstance(x, Observable):
                r = ca.is_reducible_observable(x)
            elif isinstance(x, FieldExpr):
                r = ca.is_reducible_field(x)
            else:
                r = ca.is_reducible_form(x)
            return r.reducible, {"certificates": r.certificates}
        if isinstance(x, Observable):
            r = ca.in_vanishing_observable_ideal(x)
            return bool(r.in_vanishing_ideal), {"certificates": r.certificates}
        if isinstance(x, FieldExpr):
            c = ca.in_vanishing_field_ideal(x)
            return c.value, c.certificate
        c = ca.in_vanishing_form_ideal(x)
        return c.value, {"proven": c.proven, **c.certificate}
    if k == "equal":
        a = env._want(q.args[0], vals[0], "observable")
        b = env._want(q.args[1], vals[1], "observable")
        return ca.reduced_equal(a, b), {}
    if k == "symplectic":
        rec = symplectic_predicates(ca, env._want(q.args[0], vals[0], "poly"))
        return rec.first_class, rec.as_dict()
    if k == "poisson-descent":
        rep = check_poisson_descent(ca, [env._want(a, v, "poly") for a, v in zip(q.args, vals)])
        return rep.ok, rep.as_dict()
    if k == "closure":
        sample = [env._want(a, v, "observable") for a, v in zip(q.args, vals)] or env.observables()
        rep = check_closure(ca, sample)
        return rep.ok, rep.as_dict()
    raise MsrError(f"unknown check {k}")  # pragma: no cover


def _run_query(env: Environment, q):
    if isinstance(q, A.CheckQuery):
        return _run_check(env, q)
    if isinstance(q, A.ReduceTangentQuery):
        ca = env.constraint_action()
        det = {"generators": _str_field_list(ca.tangent_generators())}
        if q.expect is None:
            return True, det
        exp = [env._want(e, env.eval(e), "field") for e in q.expect]
        other = SubmoduleBasis(ca.chart, ca.chart.dim, [tuple(f.components) for f in exp])
        return ca.tangent_module.equals(other, env.order), det
    if isinstance(q, A.ReduceQuery):
        ca = env.constraint_action()
        x = _subject(env, q.expr, env.eval(q.expr))
        if isinstance(x, Observable):
            r = ca.is_reducible_observable(x)
            van = None
            if r.reducible:
                van = ca.in_vanishing_observable_ideal(x, require_reducible=False).in_vanishing_ideal
        elif isinstance(x, FieldExpr):
            r = ca.is_reducible_field(x)
            van = ca.in_fundamental_plus_vanishing(x).value if r.reducible else None
        else:
            r = ca.is_reducible_form(x)
            van = ca.in_vanishing_form_ideal(x).value if r.reducible else None
        return r.reducible, {"subject": r.subject, "reducible": r.reducible, "in_vanishing_ideal": van,
                             "certificates": r.certificates}
    if isinstance(q, A.ReducedBasisQuery):
        ca = env.constraint_action()
        ansatz = [env._want(e, env.eval(e), "form") for e in q.ansatz] or None
        rb = ca.reduced_basis_upto_degree(q.degree, ansatz)
        det = {"representatives": rb.labels(), "dimension": rb.dimension,
               "reducible_dimension": rb.reducible_dim, "vanishing_dimension": rb.vanishing_dim}
        if q.expect is None:
            return True, det
        exp = [env._want(e, env.eval(e), "form") for e in q.expect]
        got = [o.form for o in rb.representatives]
        same = len(exp) == len(got) and all(any(g == x for g in got) for x in exp)
        return same, det
    if isinstance(q, A.JacobiQuery):
        P = env.require_plectic(q)
        sample = [env._want(e, env.eval(e), "observable") for e in q.sample] or env.observables()
        rep = check_higher_jacobi(P, sample, q.arity, trials=q.trials or 20)
        return rep.holds, rep.as_dict()
    raise MsrError("not a query")  # pragma: no cover


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    return str(x)


def run(sc: Scenario) -> list[dict]:
    """Run all queries in declaration order; engine errors are recorded per query."""
    out = []
    for i, q in enumerate(sc.queries):
        rec = {"index": i, "line": q.span.line, "query": print_statement(q)}
        expect = getattr(q, "expect", None)
        if isinstance(expect, tuple):
            expect = None
        t0 = time.perf_counter()
        try:
            value, details = _run_query(sc.env, q)
            rec["value"] = bool(value)
            rec["expect"] = expect
            rec["pass"] = bool(value) == expect if expect is not None else bool(value)
            rec["details"] = _jsonable(details)
        except DslError as exc:
            rec["error"] = str(exc)
            rec["pass"] = False
        except (MsrError, ValueError, ZeroDivisionError, ArithmeticError) as exc:
            rec["error"] = f"line {q.span.line}, col {q.span.col}: {exc}"
            rec["pass"] = False
        rec[TIMING_FIELD] = round((time.perf_counter() - t0) * 1000, 3)
        out.append(rec)
    return out


def to_json(results: list[dict], name: str = "") -> str:
    doc = {"schema": SCHEMA, "scenario": name, "results": results,
           "summary": summarize(results)}
    return json.dumps(doc, indent=2, sort_keys=True)


def summarize(results: list[dict]) -> dict:
    return {"queries": len(results), "passed": sum(1 for r in results if r.get("pass")),
            "failed": sum(1 for r in results if not r.get("pass") and "error" not in r),
            "errors": sum(1 for r in results if "error" in r)}


def strip_timing(doc):
    if isinstance(doc, dict):
        return {k: strip_timing(v) for k, v in doc.items() if k != TIMING_FIELD}
    if isinstance(doc, list):
        return [strip_timing(v) for v in doc]
    return doc


def format_text(results: list[dict]) -> str:
    lines = []
    for r in results:
        if "error" in r:
            lines.append(f"[ERROR] {r['query']}: {r['error']}")
            continue
        tag = "PASS" if r["pass"] else "FAIL"
        val = "true" if r["value"] else "false"
        extra = ""
        det = r.get("details", {})
        if "representatives" in det:
            extra = " {" + ", ".join(det["representatives"]) + "}"
        elif "generators" in det and r["query"].startswith("reduce tangent-module"):
            extra = " <" + ", ".join(det["generators"]) + ">"
        lines.append(f"[{tag}] {r['query']} -> {val}{extra}")
    s = summarize(results)
    lines.append(f"{s['passed']}/{s['queries']} passed, {s['failed']} failed, {s['errors']} errors")
    return "\n".join(lines)


def exit_code(results: list[dict]) -> int:
    if any("error" in r for r in results):
        return 2
    if any(not r["pass"] for r in results):
        return 1
    return 0
