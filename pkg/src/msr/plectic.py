"""Pre-n-plectic structures, Hamiltonian pairs and the observable multibrackets."""

from __future__ import annotations

import random
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from typing import Sequence

from . import linalg
from .cartan import (FieldExpr, FormExpr, contract, exterior_derivative, forms_basis,
                     interior_product, lie_bracket, lie_derivative)
from .errors import (ChartMismatchError, DegenerateError, DegreeError, NotHamiltonianError,
                     PlecticError)
from .polyalg import Poly


@dataclass(frozen=True)
class NondegeneracyReport:
    status: str  # "yes", "no" or "unknown"
    witness: FieldExpr | None = None
    detail: str = ""

    def __bool__(self):
        return self.status == "yes"


class PlecticStructure:
    """A chart with a closed (n+1)-form; nondegeneracy is decided lazily and cached."""

    def __init__(self, omega: FormExpr, n: int | None = None):
        if n is None:
            n = omega.degree - 1
        if n < 1:
            raise DegreeError(f"a pre-n-plectic form needs n >= 1, got degree {omega.degree}")
        if omega.degree != n + 1 and omega:
            raise DegreeError(f"degree mismatch: omega has degree {omega.degree}, expected {n + 1}")
        if exterior_derivative(omega):
            raise PlecticError("omega is not closed")
        self.chart = omega.chart
        self.omega = FormExpr._make(omega.chart, n + 1, omega._terms)
        self.n = n
        self._lock = threading.Lock()
        self._nondeg: NondegeneracyReport | None = None

    def __repr__(self):
        return f"PlecticStructure(n={self.n}, omega={self.omega})"

    def flat_matrix(self) -> list[list[Poly]]:
        """Rows indexed by n-element coframe tuples, columns by coordinates: (iota_{d_j} omega)_I."""
        cols = [interior_product(FieldExpr.coordinate(self.chart, v), self.omega)
                for v in self.chart.variables]
        rows = forms_basis(self.chart, self.n)
        return [[c.coefficient(idx) for c in cols] for idx in rows]

    @property
    def nondegenerate(self) -> NondegeneracyReport:
        with self._lock:
            if self._nondeg is None:
                self._nondeg = _decide_nondegenerate(self)
            return self._nondeg


def _decide_nondegenerate(P: PlecticStructure) -> NondegeneracyReport:
    chart = P.chart
    mat = P.flat_matrix()
    ker = linalg.poly_kernel_vector(mat, chart)
    if ker is not None:
        w = FieldExpr(chart, ker)
        return NondegeneracyReport("no", w, f"iota_v omega = 0 for v = {w}")
    _, _, pivots, all_const = linalg.echelon(mat, None, chart)
    if all_const:
        return NondegeneracyReport("yes", None, "elimination with constant pivots only")
    return NondegeneracyReport("unknown", None, "injective generically; pointwise rank not certified")


def check_nondegenerate(P: PlecticStructure) -> NondegeneracyReport:
    return P.nondegenerate


def koszul_sign(k: int) -> int:
    if k < 1:
        raise ValueError("k must be positive")
    return -1 if (k * (k + 1) // 2) % 2 == 0 else 1


def hamiltonian_field_for(P: PlecticStructure, alpha: FormExpr) -> FieldExpr:
    """The unique v with iota_v omega = -d alpha."""
    if alpha.chart != P.chart:
        raise ChartMismatchError()
    if alpha.degree != P.n - 1:
        raise DegreeError(f"expected an ({P.n - 1})-form, got degree {alpha.degree}")
    rep = P.nondegenerate
    if rep.status != "yes":
        raise DegenerateError(f"omega is not certified nondegenerate ({rep.status})")
    rhs_form = -exterior_derivative(alpha)
    rhs = [rhs_form.coefficient(idx) for idx in forms_basis(P.chart, P.n)]
    try:
        sol, _ = linalg.poly_solve(P.flat_matrix(), rhs, P.chart)
    except NotHamiltonianError:
        raise NotHamiltonianError(f"{alpha} is not Hamiltonian") from None
    return FieldExpr(P.chart, sol)


def is_hamiltonian_pair(P: PlecticStructure, v: FieldExpr, alpha: FormExpr) -> bool:
    if alpha.degree != P.n - 1 and alpha:
        raise DegreeError(f"expected an ({P.n - 1})-form, got degree {alpha.degree}")
    if v.chart != P.chart or alpha.chart != P.chart:
        raise ChartMismatchError()
    return (exterior_derivative(alpha) + interior_product(v, P.omega)).is_zero()


class Observable:
    """Graded observable: degree 0 carries (field, form), negative degrees a form only."""

    __slots__ = ("n", "degree", "form", "field")

    def __init__(self, n: int, degree: int, form: FormExpr, field: FieldExpr | None = None):
        self.n = n
        self.degree = degree
        if form.degree != n - 1 + degree and form:
            raise DegreeError(
                f"degree mismatch: observable of degree {degree} needs a form of degree {n - 1 + degree}")
        self.form = FormExpr._make(form.chart, n - 1 + degree, form._terms)
        if degree == 0 and field is None:
            field = FieldExpr.zero(form.chart)
        if degree != 0 and field is not None and field:
            raise DegreeError("only degree-0 observables carry a vector field")
        self.field = field if degree == 0 else None

    # constructors

    @classmethod
    def pair(cls, P: PlecticStructure, v: FieldExpr, alpha: FormExpr) -> "Observable":
        if not is_hamiltonian_pair(P, v, alpha):
            raise NotHamiltonianError(f"({v}, {alpha}) does not satisfy d alpha = -iota_v omega")
        return cls(P.n, 0, alpha, v)

    @classmethod
    def hamiltonian(cls, P: PlecticStructure, alpha: FormExpr) -> "Observable":
        return cls(P.n, 0, alpha, hamiltonian_field_for(P, alpha))

    @classmethod
    def low(cls, P: PlecticStructure, degree: int, alpha: FormExpr) -> "Observable":
        if not 1 - P.n <= degree < 0:
            raise DegreeError(f"degree {degree} outside [{1 - P.n}, -1]")
        return cls(P.n, degree, alpha)

    @classmethod
    def zero(cls, P_or_chart, n: int | None = None, degree: int = 0) -> "Observable":
        if isinstance(P_or_chart, PlecticStructure):
            chart, n = P_or_chart.chart, P_or_chart.n
        else:
            chart = P_or_chart
        return cls(n, degree, FormExpr.zero(chart, max(n - 1 + degree, 0)))

    @property
    def chart(self):
        return self.form.chart

    def is_zero(self) -> bool:
        return self.form.is_zero() and (self.field is None or self.field.is_zero())

    def __bool__(self):
        return not self.is_zero()

    def __add__(self, other):
        if not isinstance(other, Observable):
            return NotImplemented
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if other.degree != self.degree:
            raise DegreeError(f"cannot add observables of degree {self.degree} and {other.degree}")
        fld = None if self.degree else self.field + other.field
        return Observable(self.n, self.degree, self.form + other.form, fld)

    def __neg__(self):
        return Observable(self.n, self.degree, -self.form, None if self.field is None else -self.field)

    def __sub__(self, other):
        if not isinstance(other, Observable):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "Observable":
        c = Fraction(c)
        return Observable(self.n, self.degree, self.form.scale(c),
                          None if self.field is None else self.field.scale(c))

    def __mul__(self, c):
        if isinstance(c, (int, Fraction)) and not isinstance(c, bool):
            return self.scale(c)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Observable):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return (self.degree == other.degree and self.form == other.form
                and (self.field or 0) == (other.field or 0))

    def __hash__(self):
        return hash((self.degree, self.form, self.field))

    def __repr__(self):
        if self.degree == 0:
            return f"Observable(0: ({self.field}, {self.form}))"
        return f"Observable({self.degree}: {self.form})"


def multibracket(P: PlecticStructure, args: Sequence[Observable]) -> Observable:
    """The k-ary bracket of the observable algebra, k = len(args)."""
    k = len(args)
    if k == 0:
        raise ValueError("multibracket needs at least one argument")
    for a in args:
        if a.chart != P.chart:
            raise ChartMismatchError()
    out_deg = sum(a.degree for a in args) + 2 - k
    if k == 1:
        a = args[0]
        if a.degree == 0:
            return Observable.zero(P, degree=1)
        da = exterior_derivative(a.form)
        if a.degree == -1:
            return Observable(P.n, 0, da, FieldExpr.zero(P.chart))
        return Observable(P.n, a.degree + 1, da)
    if any(a.degree != 0 for a in args) or k > P.n + 1:
        return Observable.zero(P, degree=out_deg)
    fields = [a.field for a in args]
    form = contract(fields, P.omega).scale(koszul_sign(k))
    if k == 2:
        return Observable(P.n, 0, form, lie_bracket(fields[0], fields[1]))
    return Observable(P.n, out_deg, form)


def leibniz_bracket(P: PlecticStructure, a: Observable, b: Observable) -> Observable:
    if a.degree != 0 or b.degree != 0:
        raise DegreeError("the Leibniz bracket takes two degree-0 observables")
    return Observable(P.n, 0, lie_derivative(a.field, b.form), lie_bracket(a.field, b.field))


# -- higher Jacobi relations ---------------------------------------------

def _perm_sign(perm) -> int:
    inv = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return -1 if inv & 1 else 1


def _koszul(perm, degrees) -> int:
    s = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j] and degrees[perm[i]] * degrees[perm[j]] % 2:
                s = -s
    return s


def unshuffles(ell: int, i: int):
    for head in combinations(range(ell), i):
        tail = tuple(x for x in range(ell) if x not in head)
        yield head + tail


def jacobi_residual(P: PlecticStructure, xs: Sequence[Observable]) -> Observable:
    """Signed sum of nested brackets for arity len(xs); zero when the relation holds."""
    ell = len(xs)
    degrees = [x.degree for x in xs]
    total = None
    for i in range(1, ell + 1):
        j = ell + 1 - i
        outer = -1 if (i * (j - 1)) % 2 else 1
        for perm in unshuffles(ell, i):
            chi = _perm_sign(perm) * _koszul(perm, degrees)
            inner = multibracket(P, [xs[p] for p in perm[:i]])
            term = multibracket(P, [inner] + [xs[p] for p in perm[i:]])
            if term.is_zero():
                continue
            term = term.scale(outer * chi)
            total = term if total is None else total + term
    return total if total is not None else Observable.zero(P, degree=sum(degrees) + 3 - ell)


@dataclass
class JacobiReport:
    holds: bool = True
    checked: int = 0
    violations: list = field(default_factory=list)

    def as_dict(self):
        return {"holds": self.holds, "checked": self.checked,
                "violations": [{"arity": a, "args": [repr(x) for x in args], "residual": repr(r)}
                               for a, args, r in self.violations]}


def check_higher_jacobi(P: PlecticStructure, sample: Sequence[Observable], max_arity: int,
                        trials: int = 20, seed: int = 0) -> JacobiReport:
    """Spot-check the higher Jacobi relations on random combinations of ``sample``.

    For every arity up to ``max_arity`` and every multiset of degrees present
    in the sample, ``trials`` tuples of random rational combinations of the
    sample elements of those degrees are tested.
    """
    if max_arity > P.n + 2:
        raise ValueError(f"max_arity must be at most n + 2 = {P.n + 2}")
    report = JacobiReport()
    if not sample:
        return report
    rng = random.Random(seed)
    by_deg: dict[int, list[Observable]] = {}
    for x in sample:
        by_deg.setdefault(x.degree, []).append(x)
    degs = sorted(by_deg)

    def combo(d):
        acc = None
        for x in by_deg[d]:
            c = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
            if c:
                t = x.scale(c)
                acc = t if acc is None else acc + t
        return acc if acc is not None else by_deg[d][0]

    for ell in range(1, max_arity + 1):
        for pattern in combinations_with_replacement(degs, ell):
            for _ in range(trials):
                xs = [combo(d) for d in pattern]
                res = jacobi_residual(P, xs)
                report.checked += 1
                if not res.is_zero():
                    report.holds = False
                    report.violations.append((ell, xs, res))
    return report


def graded_antisymmetry_sign(degrees: Sequence[int], perm: Sequence[int]) -> int:
    """Sign s with l(x_perm) = s * l(x) for a graded antisymmetric bracket."""
    return _perm_sign(perm) * _koszul(perm, degrees)


__all__ = [
    "NondegeneracyReport", "PlecticStructure", "check_nondegenerate", "koszul_sign",
    "hamiltonian_field_for", "is_hamiltonian_pair", "Observable", "multibracket",
    "leibniz_bracket", "jacobi_residual", "JacobiReport", "check_higher_jacobi",
    "graded_antisymmetry_sign", "unshuffles",
]
