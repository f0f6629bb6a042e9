"""Infinitesimal Lie algebra actions, covariant moment maps and prolongation of fields."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .cartan import (FieldExpr, FormExpr, exterior_derivative, forms_basis, interior_product,
                     lie_bracket, lie_derivative)
from .errors import (ChartMismatchError, DegreeError, NoInvariantLiftError, NonPolynomialSolutionError,
                     NotAPotentialError, NotHamiltonianError, NotInvariantError, NotProjectableError,
                     UnsupportedError)
from .groebner import Ideal
from .plectic import PlecticStructure
from .polyalg import Chart


class LieAlgebraAction:
    """Fundamental fields xi_1..xi_m with [xi_i, xi_j] = sum_k c[i][j][k] xi_k."""

    def __init__(self, chart: Chart, fields: Sequence[FieldExpr], structure_constants=None,
                 names: Sequence[str] | None = None):
        for f in fields:
            if f.chart != chart:
                raise ChartMismatchError()
        m = len(fields)
        self.chart = chart
        self.fields = tuple(fields)
        self.names = tuple(names) if names else tuple(f"xi{i + 1}" for i in range(m))
        if structure_constants is None:
            c = [[[Fraction(0)] * m for _ in range(m)] for _ in range(m)]
        else:
            c = [[[Fraction(x) for x in row] for row in plane] for plane in structure_constants]
            if len(c) != m or any(len(p) != m or any(len(r) != m for r in p) for p in c):
                raise ValueError(f"structure constants must be an {m}x{m}x{m} array")
        self.structure_constants = c

    @property
    def dim(self) -> int:
        return len(self.fields)

    def bracket_combination(self, i: int, j: int) -> FieldExpr:
        out = FieldExpr.zero(self.chart)
        for k, ck in enumerate(self.structure_constants[i][j]):
            if ck:
                out = out + self.fields[k].scale(ck)
        return out

    def __repr__(self):
        return f"LieAlgebraAction({', '.join(map(str, self.fields))})"


@dataclass
class ActionReport:
    ok: bool = True
    violations: list = field(default_factory=list)

    def __bool__(self):
        return self.ok

    def as_dict(self):
        return {"ok": self.ok, "violations": [dict(v) for v in self.violations]}


def verify_action(a: LieAlgebraAction) -> ActionReport:
    rep = ActionReport()
    c = a.structure_constants
    m = a.dim
    for i in range(m):
        for j in range(m):
            if any(c[i][j][k] != -c[j][i][k] for k in range(m)):
                rep.ok = False
                rep.violations.append({"kind": "antisymmetry", "i": i, "j": j})
    # Jacobi constraint on the constants
    for i in range(m):
        for j in range(m):
            for k in range(m):
                for l in range(m):
                    s = sum(c[i][j][r] * c[r][k][l] + c[j][k][r] * c[r][i][l] + c[k][i][r] * c[r][j][l]
                            for r in range(m))
                    if s:
                        rep.ok = False
                        rep.violations.append({"kind": "jacobi", "i": i, "j": j, "k": k, "component": l})
    for i in range(m):
        for j in range(i + 1, m):
            resid = lie_bracket(a.fields[i], a.fields[j]) - a.bracket_combination(i, j)
            if resid:
                rep.ok = False
                rep.violations.append({"kind": "bracket", "i": i, "j": j,
                                       "bracket": str(lie_bracket(a.fields[i], a.fields[j])),
                                       "expected": str(a.bracket_combination(i, j)),
                                       "residual": str(resid)})
    return rep


class MomentMap:
    def __init__(self, action: LieAlgebraAction, components: Sequence[FormExpr],
                 level: Sequence[FormExpr] | None = None):
        if len(components) != action.dim:
            raise ValueError(f"moment map needs {action.dim} components, got {len(components)}")
        for f in components:
            if f.chart != action.chart:
                raise ChartMismatchError()
        self.action = action
        self.components = tuple(components)
        if level is None:
            level = [FormExpr.zero(action.chart, f.degree) for f in components]
        if len(level) != action.dim:
            raise ValueError("level needs one component per basis element")
        for phi in level:
            if exterior_derivative(phi):
                raise ValueError(f"level component {phi} is not closed")
        self.level = tuple(level)

    def with_level(self, level: Sequence[FormExpr]) -> "MomentMap":
        return MomentMap(self.action, self.components, level)

    def __repr__(self):
        return f"MomentMap({', '.join(map(str, self.components))})"


@dataclass
class MomentReport:
    identity_i: list = field(default_factory=list)
    identity_ii: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.ok_i and self.ok_ii

    @property
    def ok_i(self) -> bool:
        return all(r["holds"] for r in self.identity_i)

    @property
    def ok_ii(self) -> bool:
        return all(r["holds"] for r in self.identity_ii)

    def __bool__(self):
        return self.ok

    def as_dict(self):
        return {"ok": self.ok, "identity_i": self.identity_i, "identity_ii": self.identity_ii}


def check_covariant_moment_map(P: PlecticStructure, m: MomentMap) -> MomentReport:
    """Check d mu_i = -iota_{xi_i} omega and L_{xi_i} mu_j = mu_{[xi_i, xi_j]}."""
    a = m.action
    if a.chart != P.chart:
        raise ChartMismatchError()
    rep = MomentReport()
    for i, (xi, mu) in enumerate(zip(a.fields, m.components)):
        if mu and mu.degree != P.n - 1:
            raise DegreeError(f"moment component has degree {mu.degree}, expected {P.n - 1}")
        r = exterior_derivative(mu) + interior_product(xi, P.omega)
        rep.identity_i.append({"index": i, "holds": r.is_zero(), "residual": str(r)})
    for i, xi in enumerate(a.fields):
        for j, mu in enumerate(m.components):
            target = FormExpr.zero(P.chart, P.n - 1)
            for k, ck in enumerate(a.structure_constants[i][j]):
                if ck:
                    target = target + m.components[k].scale(ck)
            r = lie_derivative(xi, mu) - target
            rep.identity_ii.append({"i": i, "j": j, "holds": r.is_zero(), "residual": str(r)})
    return rep


def moment_from_potential(P: PlecticStructure, a: LieAlgebraAction, theta: FormExpr) -> MomentMap:
    if theta.chart != P.chart:
        raise ChartMismatchError()
    if exterior_derivative(theta) != P.omega:
        raise NotAPotentialError("d theta differs from omega")
    comps = []
    for i, xi in enumerate(a.fields):
        r = lie_derivative(xi, theta)
        if r:
            raise NotInvariantError(f"theta is not invariant under {a.names[i]}: L theta = {r}",
                                    index=i, residual=r)
        comps.append(interior_product(xi, theta))
    return MomentMap(a, comps)


def level_set_ideal(m: MomentMap) -> Ideal:
    """Ideal generated by every coefficient of every mu_i - phi_i."""
    gens = []
    for mu, phi in zip(m.components, m.level):
        gens.extend((mu - phi).coefficients())
    return Ideal(m.action.chart, gens)


def prolong_field(base_chart: Chart, total_chart: Chart, theta: FormExpr, v: FieldExpr,
                  sigma_vars: Sequence[str] | None = None) -> FieldExpr:
    """Lift ``v`` from the base to the total chart so that L theta = 0.

    Fiber components are found by a linear solve; this needs iota_{d_f} theta = 0
    for every fiber coordinate f, as for canonical forms.  With ``sigma_vars``
    the field must also project onto those coordinates.
    """
    if v.chart != base_chart:
        raise ChartMismatchError("field is not on the base chart")
    if theta.chart != total_chart:
        raise ChartMismatchError("theta is not on the total chart")
    for b in base_chart.variables:
        total_chart.index(b)
    fiber = [x for x in total_chart.variables if x not in base_chart.variables]
    for f in fiber:
        if interior_product(FieldExpr.coordinate(total_chart, f), theta):
            raise UnsupportedError(f"theta has a d({f}) component; not a canonical form")
    if sigma_vars:
        for s in sigma_vars:
            base_chart.index(s)
        sig = set(sigma_vars)
        for s in sigma_vars:
            extra = v.component(s).variables_used() - sig
            if extra:
                raise NotProjectableError(
                    f"component along {s} depends on {', '.join(sorted(extra))}; not projectable")
    vt = v.to_chart(total_chart)
    omega = exterior_derivative(theta)
    resid = lie_derivative(vt, theta)
    rows = forms_basis(total_chart, theta.degree)
    cols = [interior_product(FieldExpr.coordinate(total_chart, f), omega) for f in fiber]
    mat = [[c.coefficient(idx) for c in cols] for idx in rows]
    rhs = [-resid.coefficient(idx) for idx in rows]
    try:
        sol, _ = linalg.poly_solve(mat, rhs, total_chart)
    except (NotHamiltonianError, NonPolynomialSolutionError) as exc:
        raise NoInvariantLiftError(f"no invariant lift of {v}: {exc}") from None
    lift = vt
    for f, a in zip(fiber, sol):
        if a:
            lift = lift + FieldExpr.coordinate(total_chart, f, a)
    if lie_derivative(lift, theta):  # pragma: no cover - guarded by the solve
        raise NoInvariantLiftError(f"lift of {v} does not preserve theta")
    return lift
