"""Resolve names and evaluate scenario expressions into engine objects."""

from __future__ import annotations

from fractions import Fraction

from .. import cartan
from ..cartan import FieldExpr, FormExpr
from ..errors import MsrError
from ..groebner import Ideal
from ..plectic import Observable, PlecticStructure, leibniz_bracket, multibracket
from ..polyalg import Chart, Poly
from ..reduction import ConstraintAction
from ..symmetry import (LieAlgebraAction, MomentMap, level_set_ideal, moment_from_potential,
                        prolong_field)
from . import ast as A
from .lexer import SemanticError

MAX_EXPONENT = 64
BUILTINS = {"d", "e", "iota", "lie", "bracket", "mbracket", "leibniz", "ham", "pair", "low", "prolong"}


def kind_of(v) -> str:
    if isinstance(v, Fraction):
        return "number"
    if isinstance(v, Poly):
        return "polynomial"
    if isinstance(v, FormExpr):
        return f"{v.degree}-form"
    if isinstance(v, FieldExpr):
        return "vector field"
    if isinstance(v, Observable):
        return f"observable of degree {v.degree}"
    return type(v).__name__


def _err(node, msg):
    sp = getattr(node, "span", None) or A.Span(0, 0)
    return SemanticError(msg, sp.line, sp.col)


def _is_scalar(v) -> bool:
    return isinstance(v, (Fraction, Poly)) or (isinstance(v, FormExpr) and v.degree == 0)


class Environment:
    """Declarations of a scenario after elaboration; engine objects are built lazily."""

    def __init__(self):
        self.chart: Chart | None = None
        self.base: Chart | None = None
        self.sigma: tuple | None = None
        self.names: dict[str, object] = {}
        self.kinds: dict[str, str] = {}
        self.plectic: PlecticStructure | None = None
        self.potential: FormExpr | None = None
        self.action_fields: list[FieldExpr] = []
        self.action_names: list[str] = []
        self.struct: dict[tuple[int, int], list[Fraction]] = {}
        self.constraint_gens: list[Poly] | None = None
        self.constraints_from_level = False
        self.constraints_zero_level = False
        self.moment_comps: list[FormExpr] | None = None
        self.moment_potential: str | None = None
        self.level: list[FormExpr] | None = None
        self.order = "grevlex"
        self._ca = None
        self._action = None
        self._moment = None

    # -- lazily built engine objects -------------------------------------

    def action(self) -> LieAlgebraAction:
        if self._action is None:
            chart = self.require_chart(None)
            m = len(self.action_fields)
            c = [[[Fraction(0)] * m for _ in range(m)] for _ in range(m)]
            for (i, j), vec in self.struct.items():
                c[i][j] = list(vec)
                c[j][i] = [-x for x in vec]
            self._action = LieAlgebraAction(chart, self.action_fields, c, self.action_names)
        return self._action

    def moment(self) -> MomentMap:
        if self._moment is None:
            P = self.require_plectic(None)
            if self.moment_potential is not None:
                theta = self.names[self.moment_potential]
                m = moment_from_potential(P, self.action(), theta)
            elif self.moment_comps is not None:
                m = MomentMap(self.action(), self.moment_comps)
            else:
                raise MsrError("no moment map declared")
            if self.level is not None:
                m = m.with_level(self.level)
            self._moment = m
        return self._moment

    def constraint_ideal(self) -> Ideal:
        chart = self.require_chart(None)
        if self.constraints_from_level:
            m = self.moment()
            if self.constraints_zero_level:
                m = m.with_level([FormExpr.zero(chart, f.degree) for f in m.components])
            return level_set_ideal(m)
        return Ideal(chart, self.constraint_gens or [])

    def constraint_action(self) -> ConstraintAction:
        if self._ca is None:
            P = self.require_plectic(None)
            mom = None
            if self.moment_potential is not None or self.moment_comps is not None:
                mom = self.moment()
            self._ca = ConstraintAction(P, self.constraint_ideal(), self.action(), moment=mom,
                                        order=self.order)
        return self._ca

    def observables(self) -> list[Observable]:
        return [v for k, v in self.names.items() if self.kinds.get(k) == "observable"]

    def require_chart(self, node) -> Chart:
        if self.chart is None:
            raise _err(node, "no chart declared") if node is not None else MsrError("no chart declared")
        return self.chart

    def require_plectic(self, node) -> PlecticStructure:
        if self.plectic is None:
            if node is None:
                raise MsrError("no plectic form declared (use omega or potential)")
            raise _err(node, "no plectic form declared (use omega or potential)")
        return self.plectic

    # -- expressions ------------------------------------------------------

    def eval(self, e):
        try:
            return self._eval(e)
        except SemanticError:
            raise
        except (MsrError, ValueError, ZeroDivisionError, ArithmeticError, KeyError, TypeError) as exc:
            raise _err(e, str(exc) or type(exc).__name__) from None

    def _eval(self, e):
        if isinstance(e, A.Num):
            return Fraction(e.value)
        if isinstance(e, A.Name):
            if e.id in self.names:
                return self.names[e.id]
            if self.chart is not None and e.id in self.chart.variables:
                return self.chart.var(e.id)
            raise _err(e, f"unknown name {e.id!r}")
        if isinstance(e, A.Unary):
            v = self._eval(e.operand)
            return -v
        if isinstance(e, A.Binary):
            if e.op == "^":
                return self._power(e)
            left = self._eval(e.left)
            right = self._eval(e.right)
            if e.op in "+-":
                return self._add(e, left, right, e.op)
            if e.op == "*":
                return self._mul(e, left, right)
            if e.op == "/":
                return self._div(e, left, right)
        if isinstance(e, A.Call):
            return self._call(e)
        raise _err(e, "malformed expression")

    def _poly(self, v):
        chart = self.require_chart(None)
        return Poly.const(chart, v) if isinstance(v, Fraction) else v

    def _as_form(self, v):
        if isinstance(v, FormExpr):
            return v
        if isinstance(v, (Fraction, Poly)):
            return FormExpr.function(self._poly(v))
        return None

    def _add(self, node, a, b, op):
        if isinstance(a, Fraction) and isinstance(b, Fraction):
            return a + b if op == "+" else a - b
        if isinstance(a, (Fraction, Poly)) and isinstance(b, (Fraction, Poly)):
            a, b = self._poly(a), self._poly(b)
            return a + b if op == "+" else a - b
        # zero literals act as the zero of the other operand
        if isinstance(a, Fraction) and a == 0 and not isinstance(b, (Fraction, Poly)):
            return b if op == "+" else -b
        if isinstance(b, Fraction) and b == 0 and not isinstance(a, (Fraction, Poly)):
            return a
        fa, fb = self._as_form(a), self._as_form(b)
        if fa is not None and fb is not None:
            if fa.degree != fb.degree and fa and fb:
                raise _err(node, f"degree mismatch: cannot add a {fa.degree}-form and a {fb.degree}-form")
            return fa + fb if op == "+" else fa - fb
        if isinstance(a, FieldExpr) and isinstance(b, FieldExpr):
            return a + b if op == "+" else a - b
        if isinstance(a, Observable) and isinstance(b, Observable):
            if a.degree != b.degree and a and b:
                raise _err(node, f"degree mismatch: observables of degree {a.degree} and {b.degree}")
            return a + b if op == "+" else a - b
        raise _err(node, f"cannot {'add' if op == '+' else 'subtract'} {kind_of(a)} and {kind_of(b)}")

    def _mul(self, node, a, b):
        if isinstance(a, Fraction) and isinstance(b, Fraction):
            return a * b
        if isinstance(b, (Fraction, Poly)) and not isinstance(a, (Fraction, Poly)):
            a, b = b, a
        if isinstance(a, Fraction):
            if isinstance(b, Observable):
                return b.scale(a)
            return b * a
        if isinstance(a, Poly):
            if isinstance(b, (Poly, FormExpr, FieldExpr)):
                return b * a
            if isinstance(b, Observable):
                raise _err(node, "observables can only be scaled by numbers")
        fa, fb = self._as_form(a), self._as_form(b)
        if fa is not None and fb is not None:
            raise _err(node, "use ^ for the wedge product of forms")
        raise _err(node, f"cannot multiply {kind_of(a)} by {kind_of(b)}")

    def _div(self, node, a, b):
        c = b
        if isinstance(b, Poly) and b.is_constant():
            c = b.constant_value()
        if not isinstance(c, Fraction):
            raise _err(node, "division is only allowed by constants")
        if c == 0:
            raise _err(node, "division by zero")
        if isinstance(a, Observable):
            return a.scale(1 / c)
        if isinstance(a, Fraction):
            return a / c
        return a * (1 / c)

    def _power(self, node):
        left = self._eval(node.left)
        right = self._eval(node.right)
        if _is_scalar(left) and _is_scalar(right):
            if isinstance(right, FormExpr):
                right = right.as_function()
            if isinstance(right, Poly):
                if not right.is_constant():
                    raise _err(node, "exponent must be an integer constant")
                right = right.constant_value()
            if right.denominator != 1 or right < 0:
                raise _err(node, f"exponent must be a non-negative integer, got {right}")
            k = int(right)
            if k > MAX_EXPONENT:
                raise _err(node, f"exponent {k} exceeds the limit {MAX_EXPONENT}")
            if isinstance(left, FormExpr):
                return FormExpr.function(left.as_function() ** k)
            return left ** k
        fa, fb = self._as_form(left), self._as_form(right)
        if fa is None or fb is None:
            raise _err(node, f"cannot wedge {kind_of(left)} with {kind_of(right)}")
        if fa.degree + fb.degree > self.require_chart(node).dim:
            return FormExpr.zero(fa.chart, fa.degree + fb.degree)
        return cartan.wedge(fa, fb)

    def _want(self, node, v, kind):
        if kind == "form":
            f = self._as_form(v)
            if f is None:
                raise _err(node, f"expected a form, got {kind_of(v)}")
            return f
        if kind == "field":
            if isinstance(v, FieldExpr):
                return v
            if isinstance(v, Fraction) and v == 0:
                return FieldExpr.zero(self.require_chart(node))
            raise _err(node, f"expected a vector field, got {kind_of(v)}")
        if kind == "observable":
            if isinstance(v, Observable):
                return v
            raise _err(node, f"expected an observable, got {kind_of(v)}")
        if kind == "poly":
            if isinstance(v, (Fraction, Poly)):
                return self._poly(v)
            if isinstance(v, FormExpr) and v.degree == 0:
                return v.as_function()
            raise _err(node, f"expected a polynomial, got {kind_of(v)}")
        raise AssertionError(kind)

    def _call(self, e: A.Call):
        fn, args = e.fn, e.args
        arity = {"d": 1, "e": 1, "iota": 2, "lie": 2, "bracket": 2, "leibniz": 2, "ham": 1,
                 "pair": 2, "low": 2, "prolong": 1}
        if fn not in BUILTINS:
            raise _err(e, f"unknown function {fn!r}")
        if fn in arity and len(args) != arity[fn]:
            raise _err(e, f"{fn} takes {arity[fn]} argument(s), got {len(args)}")
        if fn == "e":
            if not isinstance(args[0], A.Name):
                raise _err(e, "e() takes a coordinate name")
            chart = self.require_chart(e)
            if args[0].id not in chart.variables:
                raise _err(args[0], f"unknown variable {args[0].id!r}")
            return FieldExpr.coordinate(chart, args[0].id)
        vals = [self._eval(a) for a in args]
        if fn == "d":
            return cartan.exterior_derivative(self._want(args[0], vals[0], "form"))
        if fn == "iota":
            return cartan.interior_product(self._want(args[0], vals[0], "field"),
                                           self._want(args[1], vals[1], "form"))
        if fn == "lie":
            v = self._want(args[0], vals[0], "field")
            if isinstance(vals[1], FieldExpr):
                return cartan.lie_bracket(v, vals[1])
            return cartan.lie_derivative(v, self._want(args[1], vals[1], "form"))
        if fn == "bracket":
            if isinstance(vals[0], Observable) or isinstance(vals[1], Observable):
                P = self.require_plectic(e)
                return multibracket(P, [self._want(a, v, "observable") for a, v in zip(args, vals)])
            return cartan.lie_bracket(self._want(args[0], vals[0], "field"),
                                      self._want(args[1], vals[1], "field"))
        if fn == "mbracket":
            if not args:
                raise _err(e, "mbracket needs at least one argument")
            P = self.require_plectic(e)
            return multibracket(P, [self._want(a, v, "observable") for a, v in zip(args, vals)])
        if fn == "leibniz":
            P = self.require_plectic(e)
            return leibniz_bracket(P, self._want(args[0], vals[0], "observable"),
                                   self._want(args[1], vals[1], "observable"))
        if fn == "ham":
            P = self.require_plectic(e)
            return Observable.hamiltonian(P, self._want(args[0], vals[0], "form"))
        if fn == "pair":
            P = self.require_plectic(e)
            return Observable.pair(P, self._want(args[0], vals[0], "field"),
                                   self._want(args[1], vals[1], "form"))
        if fn == "low":
            P = self.require_plectic(e)
            deg = vals[0]
            if not isinstance(deg, Fraction) or deg.denominator != 1:
                raise _err(args[0], "low() needs an integer degree")
            return Observable.low(P, int(deg), self._want(args[1], vals[1], "form"))
        if fn == "prolong":
            return self._prolong(e, self._want(args[0], vals[0], "field"))
        raise AssertionError(fn)  # pragma: no cover

    def _prolong(self, node, v: FieldExpr) -> FieldExpr:
        if self.base is None:
            raise _err(node, "prolong() needs a fibration declaration")
        theta = self.potential
        if theta is None:
            raise _err(node, "prolong() needs a potential")
        chart = self.chart
        fiber = [x for x in chart.variables if x not in self.base.variables]
        for x in fiber:
            if v.component(x):
                raise _err(node, f"prolong() takes a field on the base; it has a component along {x}")
        comps = []
        for x in self.base.variables:
            c = v.component(x)
            if c.variables_used() - set(self.base.variables):
                raise _err(node, f"component along {x} depends on fiber coordinates")
            comps.append(c.to_chart(self.base))
        base_field = FieldExpr(self.base, comps)
        return prolong_field(self.base, chart, theta, base_field, self.sigma)

    # -- declarations -----------------------------------------------------

    def declare(self, s):
        try:
            self._declare(s)
        except SemanticError:
            raise
        except (MsrError, ValueError, ZeroDivisionError, ArithmeticError, KeyError, TypeError) as exc:
            raise _err(s, str(exc) or type(exc).__name__) from None

    def _define(self, s, name, value, kind):
        if name in self.names:
            raise _err(s, f"{name!r} is already defined")
        if self.chart is not None and name in self.chart.variables:
            raise _err(s, f"{name!r} is a coordinate name")
        if name in BUILTINS:
            raise _err(s, f"{name!r} is a built-in function")
        self.names[name] = value
        self.kinds[name] = kind

    def _declare(self, s):
        if isinstance(s, A.ChartDecl):
            if self.chart is not None:
                raise _err(s, "only one chart may be declared")
            if not s.variables:
                raise _err(s, "a chart needs at least one coordinate")
            if len(set(s.variables)) != len(s.variables):
                raise _err(s, "duplicate coordinate names")
            for v in s.variables:
                if v in BUILTINS:
                    raise _err(s, f"{v!r} is a built-in function and cannot be a coordinate")
            self.chart = Chart(s.name, s.variables)
            return
        chart = self.require_chart(s)
        if isinstance(s, A.FibrationDecl):
            if self.base is not None:
                raise _err(s, "only one fibration may be declared")
            for v in s.variables + (s.over or ()):
                if v not in chart.variables:
                    raise _err(s, f"unknown variable {v!r}")
            if s.over and not set(s.over) <= set(s.variables):
                raise _err(s, "'over' variables must be base variables")
            self.base = chart.subchart(s.variables, s.name)
            self.sigma = tuple(s.over) if s.over else None
            return
        if isinstance(s, A.Let):
            v = self.eval(s.expr)
            if s.kind == "potential":
                theta = self._want(s.expr, v, "form")
                if self.potential is not None:
                    raise _err(s, "only one potential may be declared")
                self._define(s, s.name, theta, "form")
                self.potential = theta
                if self.plectic is None:
                    self._set_plectic(s, cartan.exterior_derivative(theta), None)
                return
            kind = s.kind
            self._define(s, s.name, self._want(s.expr, v, kind), kind)
            return
        if isinstance(s, A.OmegaDecl):
            om = self._want(s.expr, self.eval(s.expr), "form")
            if self.plectic is not None and self.potential is None:
                raise _err(s, "omega is already declared")
            if self.plectic is not None and om != self.plectic.omega:
                raise _err(s, "omega differs from d of the declared potential")
            self._set_plectic(s, om, s.n)
            return
        if isinstance(s, A.ActionDecl):
            if self.action_fields:
                raise _err(s, "only one action may be declared")
            for k, item in enumerate(s.items):
                f = self._want(item, self.eval(item), "field")
                self.action_fields.append(f)
                self.action_names.append(item.id if isinstance(item, A.Name) else f"xi{k + 1}")
            return
        if isinstance(s, A.StructConstDecl):
            idx = {n: i for i, n in enumerate(self.action_names)}
            for n in (s.a, s.b):
                if n not in idx:
                    raise _err(s, f"{n!r} is not an action generator")
            i, j = idx[s.a], idx[s.b]
            if i == j:
                raise _err(s, "structure constants of a generator with itself are zero")
            self.struct[(i, j)] = self._linear(s.expr, idx)
            return
        if isinstance(s, A.ConstraintsDecl):
            if self.constraint_gens is not None or self.constraints_from_level:
                raise _err(s, "constraints are already declared")
            if s.from_level:
                self.constraints_from_level = True
                self.constraints_zero_level = s.zero_level
                return
            self.constraint_gens = [self._want(g, self.eval(g), "poly") for g in s.gens]
            return
        if isinstance(s, A.MomentDecl):
            if self.moment_comps is not None or self.moment_potential is not None:
                raise _err(s, "a moment map is already declared")
            if s.potential is not None:
                if self.kinds.get(s.potential) != "form" or self.names[s.potential] is not self.potential:
                    raise _err(s, f"{s.potential!r} is not the declared potential")
                self.moment_potential = s.potential
                return
            P = self.require_plectic(s)
            comps = [self._want(c, self.eval(c), "form") for c in s.comps]
            for c, node in zip(comps, s.comps):
                if c and c.degree != P.n - 1:
                    raise _err(node, f"degree mismatch: moment components have degree {P.n - 1}")
            self.moment_comps = [FormExpr._make(c.chart, P.n - 1, c._terms) for c in comps]
            return
        if isinstance(s, A.LevelDecl):
            P = self.require_plectic(s)
            comps = [self._want(c, self.eval(c), "form") for c in s.comps]
            if len(comps) == 1 and not comps[0]:
                comps = [FormExpr.zero(chart, P.n - 1)] * max(len(self.action_fields), 1)
            for c, node in zip(comps, s.comps):
                if c and c.degree != P.n - 1:
                    raise _err(node, f"degree mismatch: level components have degree {P.n - 1}")
            self.level = [FormExpr._make(c.chart, P.n - 1, c._terms) for c in comps]
            return
        raise _err(s, "not a declaration")  # pragma: no cover

    def _set_plectic(self, s, om: FormExpr, n):
        if n is not None and om and om.degree != n + 1:
            raise _err(s, f"degree mismatch: omega has degree {om.degree}, n={n} needs {n + 1}")
        if n is None:
            n = om.degree - 1
        if n < 1:
            raise _err(s, "degree mismatch: omega must have degree at least 2")
        self.plectic = PlecticStructure(om, n)

    def _linear(self, e, idx):
        """Evaluate a linear combination of action generator names."""
        m = len(idx)
        if isinstance(e, A.Num):
            if e.value != 0:
                raise _err(e, "structure constants must be combinations of generators")
            return [Fraction(0)] * m
        if isinstance(e, A.Name):
            if e.id not in idx:
                raise _err(e, f"{e.id!r} is not an action generator")
            return [Fraction(int(k == idx[e.id])) for k in range(m)]
        if isinstance(e, A.Unary):
            return [-x for x in self._linear(e.operand, idx)]
        if isinstance(e, A.Binary) and e.op in "+-":
            a, b = self._linear(e.left, idx), self._linear(e.right, idx)
            return [x + y if e.op == "+" else x - y for x, y in zip(a, b)]
        if isinstance(e, A.Binary) and e.op in "*/":
            num, vec = (e.left, e.right) if e.op == "*" else (e.right, e.left)
            c = self._scalar(num)
            if e.op == "/":
                if c == 0:
                    raise _err(e, "division by zero")
                c = 1 / c
            return [c * x for x in self._linear(vec, idx)]
        raise _err(e, "structure constants must be rational combinations of generators")

    def _scalar(self, e) -> Fraction:
        v = self._eval(e)
        if not isinstance(v, Fraction):
            raise _err(e, "expected a number")
        return v


def elaborate(scenario: A.Scenario, order: str = "grevlex") -> Environment:
    env = Environment()
    env.order = order
    for s in scenario.declarations:
        env.declare(s)
    return env
