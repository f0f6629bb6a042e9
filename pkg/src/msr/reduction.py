"""Reduction of observables by a constraint set and a symmetry.

Every predicate here is decided on generators: tangency on the ideal
generators, form vanishing by contracting with generators of the tangent
module, and field conditions by submodule membership.  All of these are
Q-linear in the tested object once the Groebner bases are fixed, which is
what ``reduced_basis_upto_degree`` exploits.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import kernels, linalg
from .cartan import (FieldExpr, FormExpr, apply_field, contract, exterior_derivative, forms_basis,
                     interior_product, lie_bracket, lie_derivative)
from .errors import ActionError, ChartMismatchError, DegreeError, ReductionError, UnsupportedError
from .groebner import DEFAULT_ORDER, Ideal, SubmoduleBasis, minimize_generators, submodule_preimage
from .plectic import Observable, PlecticStructure, hamiltonian_field_for, multibracket
from .polyalg import Poly, monomials_upto
from .symmetry import LieAlgebraAction, MomentMap, check_covariant_moment_map, level_set_ideal


@dataclass
class Certified:
    """A boolean verdict with the data that justifies it."""

    value: bool
    certificate: dict = field(default_factory=dict)
    proven: bool = True

    def __bool__(self):
        return self.value

    def as_dict(self):
        return {"value": self.value, "proven": self.proven, "certificate": self.certificate}


@dataclass
class ReductionVerdict:
    subject: str
    reducible: bool
    in_vanishing_ideal: bool | None = None
    certificates: list = field(default_factory=list)

    def __bool__(self):
        return self.reducible

    def as_dict(self):
        return {"subject": self.subject, "reducible": self.reducible,
                "in_vanishing_ideal": self.in_vanishing_ideal, "certificates": self.certificates}


def _field_vec(v: FieldExpr):
    return tuple(v.components)


def _fmt_vec(chart, vec) -> str:
    return str(FieldExpr(chart, vec))


class ConstraintAction:
    """Plectic structure, constraint ideal and symmetry bundled with cached modules."""

    def __init__(self, plectic: PlecticStructure, constraint_ideal: Ideal, action: LieAlgebraAction,
                 moment: MomentMap | None = None, order: str = DEFAULT_ORDER, verify: bool = True):
        chart = plectic.chart
        if constraint_ideal.chart != chart or action.chart != chart:
            raise ChartMismatchError()
        self.plectic = plectic
        self.chart = chart
        self.ideal = constraint_ideal
        self.action = action
        self.moment = moment
        self.order = order
        m = chart.dim
        zero = chart.zero()
        unit = [tuple(chart.one() if k == i else zero for k in range(m)) for i in range(m)]
        gens = list(constraint_ideal.generators)
        if gens:
            jac = [[g.partial(i) for i in range(m)] for g in gens]
            pre = submodule_preimage(chart, jac, gens, order)
            vanish = [tuple(g if k == i else zero for k in range(m)) for g in gens for i in range(m)]
            tangent = minimize_generators(chart, m, list(pre) + vanish, order)
        else:
            vanish = []
            tangent = unit
        self._vanishing_fields = vanish
        self.tangent_module = SubmoduleBasis(chart, m, tangent)
        self.fundamental_plus_vanishing = SubmoduleBasis(
            chart, m, [_field_vec(f) for f in action.fields] + vanish)
        if verify:
            for i, xi in enumerate(action.fields):
                t = self.is_tangent(xi)
                if not t:
                    raise ReductionError(f"fundamental field {action.names[i]} = {xi} is not tangent "
                                         f"to the constraint set: {t.certificate}")
            om = self.is_reducible_form(plectic.omega)
            if not om.reducible:
                raise ReductionError(f"omega is not reducible: {om.certificates}")

    # -- basic modules ----------------------------------------------------

    def tangent_generators(self) -> list[FieldExpr]:
        return [FieldExpr(self.chart, g) for g in self.tangent_module.generators]

    def _same(self, obj):
        if obj.chart != self.chart:
            raise ChartMismatchError()

    def is_tangent(self, v: FieldExpr) -> Certified:
        self._same(v)
        cert = []
        for g in self.ideal.generators:
            vg = apply_field(v, g)
            w = self.ideal.witness(vg, self.order)
            if w is None:
                return Certified(False, {"generator": str(g), "derivative": str(vg),
                                         "normal_form": str(self.ideal.normal_form(vg, self.order))})
            cert.append({"generator": str(g), "derivative": str(vg), "cofactors": [str(c) for c in w]})
        return Certified(True, {"memberships": cert})

    def in_vanishing_field_ideal(self, v: FieldExpr) -> Certified:
        self._same(v)
        for name, c in zip(self.chart.variables, v.components):
            if not self.ideal.contains(c, self.order):
                return Certified(False, {"component": name, "value": str(c)})
        return Certified(True)

    def in_fundamental_plus_vanishing(self, v: FieldExpr) -> Certified:
        self._same(v)
        w = self.fundamental_plus_vanishing.witness(_field_vec(v), self.order)
        if w is None:
            nf = self.fundamental_plus_vanishing.normal_form(_field_vec(v), self.order)
            return Certified(False, {"normal_form": _fmt_vec(self.chart, nf)})
        k = self.action.dim
        cert = {"action": {self.action.names[i]: str(w[i]) for i in range(k) if w[i]},
                "vanishing": [str(c) for c in w[k:] if c]}
        return Certified(True, cert)

    def _contractions(self, alpha: FormExpr):
        gens = self.tangent_generators()
        for idx in itertools.combinations(range(len(gens)), alpha.degree):
            yield idx, contract([gens[i] for i in idx], alpha).as_function()

    def in_vanishing_form_ideal(self, alpha: FormExpr, search_points: bool = True) -> Certified:
        """Contract with all tuples of tangent generators and test membership in the ideal.

        A false verdict is only proven when a rational point of the constraint
        set is found where the offending contraction does not vanish.
        """
        self._same(alpha)
        for idx, val in self._contractions(alpha):
            if not self.ideal.contains(val, self.order):
                cert = {"fields": [str(FieldExpr(self.chart, self.tangent_module.generators[i])) for i in idx],
                        "value": str(val)}
                pt = _point_counterexample(self.ideal, val) if search_points else None
                if pt is not None:
                    cert["point"] = [str(x) for x in pt]
                return Certified(False, cert, proven=pt is not None)
        return Certified(True)

    # -- reducibility -----------------------------------------------------

    def is_reducible_form(self, alpha: FormExpr) -> ReductionVerdict:
        self._same(alpha)
        certs = []
        for name, xi in zip(self.action.names, self.action.fields):
            for label, val in (("lie", lie_derivative(xi, alpha)), ("iota", interior_product(xi, alpha))):
                if val.degree < 0:
                    continue
                c = self.in_vanishing_form_ideal(val)
                if not c:
                    certs.append({"condition": label, "generator": name, "value": str(val), **c.certificate})
        return ReductionVerdict(str(alpha), not certs, None, certs)

    def is_reducible_field(self, v: FieldExpr) -> ReductionVerdict:
        self._same(v)
        certs = []
        t = self.is_tangent(v)
        if not t:
            certs.append({"condition": "tangent", **t.certificate})
        for name, xi in zip(self.action.names, self.action.fields):
            br = lie_bracket(xi, v)
            c = self.in_fundamental_plus_vanishing(br)
            if not c:
                certs.append({"condition": "bracket", "generator": name, "bracket": str(br), **c.certificate})
        return ReductionVerdict(str(v), not certs, None, certs)

    def _check_obs(self, o: Observable):
        if o.chart != self.chart:
            raise ChartMismatchError()
        if o.n != self.plectic.n or not 1 - o.n <= o.degree <= 0:
            raise DegreeError(f"observable degree {o.degree} out of range for n = {self.plectic.n}")

    def is_reducible_observable(self, o: Observable) -> ReductionVerdict:
        self._check_obs(o)
        certs = []
        if o.degree == 0:
            certs.extend(self.is_reducible_field(o.field).certificates)
        certs.extend(self.is_reducible_form(o.form).certificates)
        return ReductionVerdict(repr(o), not certs, None, certs)

    def in_vanishing_observable_ideal(self, o: Observable, require_reducible: bool = True) -> ReductionVerdict:
        self._check_obs(o)
        if require_reducible:
            red = self.is_reducible_observable(o)
            if not red.reducible:
                raise ReductionError(f"observable is not reducible: {red.certificates}")
        certs = []
        if o.degree == 0:
            c = self.in_fundamental_plus_vanishing(o.field)
            if not c:
                certs.append({"condition": "field", **c.certificate})
        c = self.in_vanishing_form_ideal(o.form)
        if not c:
            certs.append({"condition": "form", **c.certificate})
        return ReductionVerdict(repr(o), True, not certs, certs)

    def reduced_equal(self, a: Observable, b: Observable) -> bool:
        for o in (a, b):
            red = self.is_reducible_observable(o)
            if not red.reducible:
                raise ReductionError(f"observable {o!r} is not reducible")
        diff = a - b
        if diff.is_zero():
            return True
        return bool(self.in_vanishing_observable_ideal(diff, require_reducible=False).in_vanishing_ideal)

    # -- linear-algebra enumeration ---------------------------------------

    def _nf_terms(self, key, p: Poly, out: dict):
        for k, c in self.ideal.normal_form(p, self.order).terms.items():
            out[(key, k)] = c

    def _vec_nf_terms(self, key, mod: SubmoduleBasis, v: FieldExpr, out: dict):
        for pos, comp in enumerate(mod.normal_form(_field_vec(v), self.order)):
            for k, c in comp.terms.items():
                out[(key, pos, k)] = c

    def _form_terms(self, key, alpha: FormExpr, out: dict):
        for idx, val in self._contractions(alpha):
            self._nf_terms((key, idx), val, out)

    def _candidate_data(self, alpha: FormExpr, mat, rows):
        """Linear images of a candidate form: (hamiltonian residual, field, reducible, vanishing)."""
        rhs_form = -exterior_derivative(alpha)
        rhs = [rhs_form.coefficient(idx) for idx in rows]
        a, b, pivots, _ = linalg.echelon(mat, rhs, self.chart)
        ham = {}
        for i in range(len(pivots), len(b)):
            for k, c in b[i].terms.items():
                ham[("ham", i, k)] = c
        x = [self.chart.zero()] * self.chart.dim
        for r in range(len(pivots) - 1, -1, -1):
            col = pivots[r]
            num = b[r]
            for j in range(col + 1, self.chart.dim):
                if a[r][j] and x[j]:
                    num = num - a[r][j] * x[j]
            x[col] = num / a[r][col].constant_value()
        v = FieldExpr(self.chart, x)
        red = dict(ham)
        for g_i, g in enumerate(self.ideal.generators):
            self._nf_terms(("tan", g_i), apply_field(v, g), red)
        for i, xi in enumerate(self.action.fields):
            self._vec_nf_terms(("br", i), self.fundamental_plus_vanishing, lie_bracket(xi, v), red)
            self._form_terms(("lie", i), lie_derivative(xi, alpha), red)
            iota = interior_product(xi, alpha)
            if iota.degree >= 0:
                self._form_terms(("iota", i), iota, red)
        van = {}
        self._vec_nf_terms("vf", self.fundamental_plus_vanishing, v, van)
        self._form_terms("va", alpha, van)
        return v, red, van

    def reduced_basis_upto_degree(self, d: int, ansatz: Sequence[FormExpr] | None = None):
        """Representatives of the reduced algebra among polynomial observables of degree <= d.

        Candidates are ``m * a`` for monomials ``m`` of degree <= d and ansatz
        forms ``a`` (just the constant function when n = 1).  Returns a
        ``ReducedBasis`` record with the representatives and the dimensions of
        the reducible and vanishing subspaces.
        """
        P = self.plectic
        if ansatz is None:
            if P.n != 1:
                raise UnsupportedError("reduced bases for n > 1 need an ansatz space of forms")
            ansatz = [FormExpr.function(self.chart.one())]
        for a in ansatz:
            if a.degree != P.n - 1:
                raise DegreeError(f"ansatz form {a} must have degree {P.n - 1}")
        if P.nondegenerate.status != "yes":
            raise UnsupportedError("reduced bases need a certified nondegenerate form")
        mat = P.flat_matrix()
        rows = forms_basis(self.chart, P.n)
        monos = monomials_upto(self.chart, d)
        cands = [a.scale(m) for a in ansatz for m in monos]
        # order candidates from largest to smallest so echelon pivots prefer big monomials
        cands = _sort_forms_desc(cands)
        data = [self._candidate_data(c, mat, rows) for c in cands]
        red_keys = sorted({k for _, r, _ in data for k in r}, key=repr)
        van_keys = sorted({k for _, _, v in data for k in v}, key=repr)
        ncols = len(cands)
        red_rows = [[data[j][1].get(k, 0) for j in range(ncols)] for k in red_keys]
        van_rows = [[data[j][2].get(k, 0) for j in range(ncols)] for k in van_keys]
        red_space = linalg.nullspace(red_rows, ncols)
        van_space = linalg.nullspace(red_rows + van_rows, ncols)
        red_basis, red_piv = linalg.rref(red_space, ncols) if red_space else ([], [])
        red_basis = red_basis[:len(red_piv)]
        van_basis = [r for r in (linalg.rref(van_space, ncols)[0] if van_space else [])
                     if any(r)]
        # smallest leading candidate first
        order = sorted(range(len(red_basis)), key=lambda i: -red_piv[i])
        span = list(van_basis)
        reps = []
        r0 = linalg.rank(span, ncols)
        for i in order:
            trial = span + [red_basis[i]]
            rk = linalg.rank(trial, ncols)
            if rk > r0:
                span, r0 = trial, rk
                reps.append(self._combine(cands, data, red_basis[i]))
        return ReducedBasis(reps, len(red_basis), len(van_basis))

    def _combine(self, cands, data, coeffs) -> Observable:
        form = FormExpr.zero(self.chart, self.plectic.n - 1)
        fld = FieldExpr.zero(self.chart)
        for c, (v, _, _), a in zip(cands, data, coeffs):
            if a:
                form = form + c.scale(a)
                fld = fld + v.scale(a)
        return Observable(self.plectic.n, 0, form, fld)


@dataclass
class ReducedBasis:
    representatives: list
    reducible_dim: int
    vanishing_dim: int

    @property
    def dimension(self) -> int:
        return len(self.representatives)

    def labels(self) -> list[str]:
        return [str(o.form) for o in self.representatives]


def _form_sort_key(a: FormExpr):
    best = None
    for idx, c in a.terms.items():
        for k in c.terms:
            key = (kernels.sort_key(k, kernels.GREVLEX, 0), tuple(-i for i in idx))
            if best is None or key > best:
                best = key
    return best


def _sort_forms_desc(forms):
    return sorted(forms, key=_form_sort_key, reverse=True)


def _point_counterexample(ideal: Ideal, p: Poly, values=(0, 1, -1, 2)):
    """A small rational point where all generators vanish but ``p`` does not."""
    n = ideal.chart.dim
    if len(values) ** n > 50000:
        values = (0, 1, -1)
    for pt in itertools.product(values, repeat=n):
        if all(g.evaluate(pt) == 0 for g in ideal.generators) and p.evaluate(pt) != 0:
            return tuple(Fraction(x) for x in pt)
    return None


# -- symplectic comparison ----------------------------------------------

def _require_symplectic(ca: ConstraintAction):
    P = ca.plectic
    if P.n != 1 or P.nondegenerate.status != "yes":
        raise ReductionError("not symplectic")


def poisson_bracket(P: PlecticStructure, f: Poly, h: Poly) -> Poly:
    """{f, h} = omega(v_f, v_h)."""
    vf = hamiltonian_field_for(P, FormExpr.function(f))
    vh = hamiltonian_field_for(P, FormExpr.function(h))
    return contract([vf, vh], P.omega).as_function()


@dataclass
class SymplecticPredicates:
    first_class: bool
    in_momentum_ideal: bool | None
    casimir_along_N: bool
    reducible: bool
    vanishing: bool | None
    certificates: dict = field(default_factory=dict)

    def as_dict(self):
        return {"first_class": self.first_class, "in_momentum_ideal": self.in_momentum_ideal,
                "casimir_along_N": self.casimir_along_N, "reducible": self.reducible,
                "vanishing": self.vanishing, "certificates": self.certificates}


def symplectic_predicates(ca: ConstraintAction, f: Poly) -> SymplecticPredicates:
    _require_symplectic(ca)
    P = ca.plectic
    certs = {}
    first = True
    for g in ca.ideal.generators:
        br = poisson_bracket(P, f, g)
        if not ca.ideal.contains(br, ca.order):
            first = False
            certs["first_class"] = {"generator": str(g), "bracket": str(br)}
            break
    mom = None
    if ca.moment is not None:
        gens = []
        for mu in ca.moment.components:
            gens.extend(mu.coefficients())
        mom = Ideal(ca.chart, gens).contains(f, ca.order)
    obs = Observable.hamiltonian(P, FormExpr.function(f))
    casimir = ca.in_vanishing_field_ideal(obs.field).value
    red = ca.is_reducible_observable(obs)
    van = None
    if red.reducible:
        van = bool(ca.in_vanishing_observable_ideal(obs, require_reducible=False).in_vanishing_ideal)
    return SymplecticPredicates(first, mom, casimir, red.reducible, van, certs)


@dataclass
class DescentReport:
    ok: bool = True
    checked: int = 0
    skipped: list = field(default_factory=list)
    violations: list = field(default_factory=list)

    def __bool__(self):
        return self.ok

    def as_dict(self):
        return {"ok": self.ok, "checked": self.checked, "skipped": self.skipped, "violations": self.violations}


def check_poisson_descent(ca: ConstraintAction, sample: Sequence[Poly]) -> DescentReport:
    """Products and brackets of reducible functions stay reducible; vanishing ones form an ideal."""
    _require_symplectic(ca)
    P = ca.plectic
    rep = DescentReport()

    def status(f):
        o = Observable.hamiltonian(P, FormExpr.function(f))
        red = ca.is_reducible_observable(o).reducible
        van = red and bool(ca.in_vanishing_observable_ideal(o, require_reducible=False).in_vanishing_ideal)
        return red, van

    info = {f: status(f) for f in sample}
    for f in sample:
        if not info[f][0]:
            rep.skipped.append(str(f))
    for f, g in itertools.product(sample, repeat=2):
        (rf, vf), (rg, vg) = info[f], info[g]
        if not (rf and rg):
            continue
        rep.checked += 1
        for label, h in (("product", f * g), ("bracket", poisson_bracket(P, f, g))):
            rh, vh = status(h)
            if not rh:
                rep.ok = False
                rep.violations.append({"f": str(f), "g": str(g), "op": label, "result": str(h),
                                       "problem": "not reducible"})
            elif vg and not vh:
                rep.ok = False
                rep.violations.append({"f": str(f), "g": str(g), "op": label, "result": str(h),
                                       "problem": "left the vanishing ideal"})
    return rep


# -- level sets ------------------------------------------------------------

def isotropy_subalgebra(P: PlecticStructure, m: MomentMap) -> LieAlgebraAction:
    """Sub-action fixing the level: L_xi phi_zeta = phi_[xi, zeta]."""
    a = m.action
    k = a.dim
    cols = []
    for i in range(k):
        entries = {}
        for j in range(k):
            r = lie_derivative(a.fields[i], m.level[j])
            for kk, ck in enumerate(a.structure_constants[i][j]):
                if ck:
                    r = r - m.level[kk].scale(ck)
            for idx, c in r.terms.items():
                for mono, val in c.terms.items():
                    entries[(j, idx, mono)] = val
        cols.append(entries)
    keys = sorted({key for e in cols for key in e}, key=repr)
    rows = [[cols[i].get(key, 0) for i in range(k)] for key in keys]
    basis = linalg.nullspace(rows, k) if rows else [[Fraction(int(i == j)) for i in range(k)] for j in range(k)]
    if len(basis) == k:
        return a
    fields = []
    for b in basis:
        f = FieldExpr.zero(a.chart)
        for i, c in enumerate(b):
            if c:
                f = f + a.fields[i].scale(c)
        fields.append(f)
    # structure constants in the new basis
    kk = len(basis)
    consts = [[[Fraction(0)] * kk for _ in range(kk)] for _ in range(kk)]
    bt = [list(col) for col in zip(*basis)]  # k x kk
    for s in range(kk):
        for t in range(kk):
            target = [sum(basis[s][i] * basis[t][j] * a.structure_constants[i][j][l]
                          for i in range(k) for j in range(k)) for l in range(k)]
            sol = linalg.solve(bt, target)
            if sol is None:  # pragma: no cover - isotropy algebras are subalgebras
                raise ActionError("isotropy subspace is not closed under the bracket")
            consts[s][t] = sol
    names = [f"g{s + 1}" for s in range(kk)]
    return LieAlgebraAction(a.chart, fields, consts, names)


def check_level_set_reduction_inputs(P: PlecticStructure, m: MomentMap, order: str = DEFAULT_ORDER) -> ConstraintAction:
    rep = check_covariant_moment_map(P, m)
    if not rep.ok:
        raise ActionError(f"not a covariant moment map: {rep.as_dict()}")
    sub = isotropy_subalgebra(P, m)
    ideal = level_set_ideal(m)
    moment = m if sub is m.action else None
    return ConstraintAction(P, ideal, sub, moment=moment, order=order, verify=True)


@dataclass
class ClosureReport:
    ok: bool = True
    checked: int = 0
    violations: list = field(default_factory=list)

    def __bool__(self):
        return self.ok

    def as_dict(self):
        return {"ok": self.ok, "checked": self.checked, "violations": self.violations}


def check_closure(ca: ConstraintAction, sample: Sequence[Observable]) -> ClosureReport:
    """Brackets of reducible observables are reducible; with a vanishing argument they vanish."""
    P = ca.plectic
    rep = ClosureReport()
    info = []
    for o in sample:
        red = ca.is_reducible_observable(o).reducible
        van = red and bool(ca.in_vanishing_observable_ideal(o, require_reducible=False).in_vanishing_ideal)
        info.append((red, van))
    usable = [i for i, (r, _) in enumerate(info) if r]
    for k in range(1, P.n + 2):
        for tup in itertools.product(usable, repeat=k):
            res = multibracket(P, [sample[i] for i in tup])
            rep.checked += 1
            if res.is_zero() or not 1 - P.n <= res.degree <= 0:
                continue
            red = ca.is_reducible_observable(res).reducible
            if not red:
                rep.ok = False
                rep.violations.append({"arity": k, "args": list(tup), "problem": "not reducible",
                                       "result": repr(res)})
                continue
            if any(info[i][1] for i in tup):
                van = ca.in_vanishing_observable_ideal(res, require_reducible=False).in_vanishing_ideal
                if not van:
                    rep.ok = False
                    rep.violations.append({"arity": k, "args": list(tup), "problem": "left the vanishing ideal",
                                           "result": repr(res)})
    return rep
