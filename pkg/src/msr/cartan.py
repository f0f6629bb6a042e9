"""Differential forms and vector fields with polynomial coefficients.

Forms are stored as maps from strictly increasing coframe index tuples to
nonzero coefficients, so equality is structural.  Contraction inserts a
field into the first slot: ``interior_product(v, dx^dy) = v^x dy - v^y dx``.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .errors import ChartMismatchError, DegreeError, UnsupportedError
from .polyalg import Chart, Poly


def _same_chart(a, b):
    if a.chart != b.chart:
        raise ChartMismatchError()


def _as_poly(chart, c) -> Poly:
    if isinstance(c, Poly):
        if c.chart != chart:
            raise ChartMismatchError()
        return c
    return Poly.const(chart, c)


def _merge_sign(a: tuple, b: tuple) -> int:
    """Sign of the shuffle sorting ``a + b``; 0 when they share an index."""
    inv = 0
    for x in a:
        for y in b:
            if x == y:
                return 0
            if x > y:
                inv += 1
    return -1 if inv & 1 else 1


class FormExpr:
    __slots__ = ("chart", "degree", "_terms")

    def __init__(self, chart: Chart, degree: int, terms: Mapping[tuple[int, ...], Poly] | None = None):
        self.chart = chart
        self.degree = int(degree)
        clean: dict[tuple[int, ...], Poly] = {}
        for idx, c in (terms or {}).items():
            idx = tuple(idx)
            if len(idx) != self.degree:
                raise DegreeError(f"index {idx} does not match degree {self.degree}")
            if any(not 0 <= i < chart.dim for i in idx):
                raise ValueError(f"coframe index out of range in {idx}")
            if list(idx) != sorted(set(idx)):
                raise ValueError(f"index tuple {idx} is not strictly increasing")
            c = _as_poly(chart, c)
            if c:
                clean[idx] = clean[idx] + c if idx in clean else c
                if not clean[idx]:
                    del clean[idx]
        if clean and self.degree > chart.dim:
            raise DegreeError("nonzero form of degree above the chart dimension")
        self._terms = clean

    @classmethod
    def _make(cls, chart, degree, terms):
        f = cls.__new__(cls)
        f.chart = chart
        f.degree = degree
        f._terms = terms
        return f

    # constructors

    @classmethod
    def zero(cls, chart: Chart, degree: int = 0) -> "FormExpr":
        return cls._make(chart, degree, {})

    @classmethod
    def function(cls, p: Poly) -> "FormExpr":
        return cls._make(p.chart, 0, {(): p} if p else {})

    @classmethod
    def differential(cls, chart: Chart, var: str) -> "FormExpr":
        return cls._make(chart, 1, {(chart.index(var),): chart.one()})

    @classmethod
    def basis(cls, chart: Chart, idx: Sequence[int], coeff=1) -> "FormExpr":
        """The monomial form ``coeff * dx_i1 ^ ... ^ dx_ik`` for any index order."""
        idx = tuple(idx)
        if len(set(idx)) != len(idx):
            return cls.zero(chart, len(idx))
        srt = tuple(sorted(idx))
        inv = sum(1 for a in range(len(idx)) for b in range(a + 1, len(idx)) if idx[a] > idx[b])
        c = _as_poly(chart, coeff)
        return cls(chart, len(idx), {srt: -c if inv & 1 else c})

    @property
    def terms(self) -> Mapping[tuple[int, ...], Poly]:
        return dict(self._terms)

    def coefficients(self) -> list[Poly]:
        return [self._terms[k] for k in sorted(self._terms)]

    def coefficient(self, idx: Sequence[int]) -> Poly:
        return self._terms.get(tuple(idx), self.chart.zero())

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def as_function(self) -> Poly:
        if self.degree != 0:
            raise DegreeError(f"expected a 0-form, got degree {self.degree}")
        return self._terms.get((), self.chart.zero())

    def map_coefficients(self, fn) -> "FormExpr":
        out = {}
        for k, c in self._terms.items():
            c = fn(c)
            if c:
                out[k] = c
        return FormExpr._make(self.chart, self.degree, out)

    # linear structure

    def _check(self, other: "FormExpr"):
        _same_chart(self, other)
        if other.degree != self.degree and self._terms and other._terms:
            raise DegreeError(f"cannot add forms of degree {self.degree} and {other.degree}")

    def __add__(self, other):
        if not isinstance(other, FormExpr):
            return NotImplemented
        self._check(other)
        deg = self.degree if self._terms else other.degree
        out = dict(self._terms)
        for k, c in other._terms.items():
            s = out[k] + c if k in out else c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return FormExpr._make(self.chart, deg, out)

    def __neg__(self):
        return FormExpr._make(self.chart, self.degree, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, FormExpr):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "FormExpr":
        c = _as_poly(self.chart, c)
        if not c:
            return FormExpr.zero(self.chart, self.degree)
        return self.map_coefficients(lambda a: a * c)

    def __mul__(self, other):
        if isinstance(other, (Poly, int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(1 / Fraction(other))
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, FormExpr):
            if self.chart != other.chart:
                return False
            if not self._terms and not other._terms:
                return True
            return self.degree == other.degree and self._terms == other._terms
        if isinstance(other, (int, Fraction)) and other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self):
        return hash((self.chart, self.degree if self._terms else None, frozenset(self._terms.items())))

    def to_chart(self, chart: Chart) -> "FormExpr":
        """Re-express on a chart that contains every coframe direction used."""
        out = {}
        for idx, c in self._terms.items():
            names = [self.chart.variables[i] for i in idx]
            out_idx = tuple(chart.index(v) for v in names)
            f = FormExpr.basis(chart, out_idx, c.to_chart(chart))
            for k, v in f._terms.items():
                out[k] = out[k] + v if k in out else v
        return FormExpr(chart, self.degree, out)

    def __str__(self):
        return format_form(self)

    def __repr__(self):
        return f"FormExpr(deg={self.degree}, {self})"


class FieldExpr:
    __slots__ = ("chart", "components")

    def __init__(self, chart: Chart, components: Sequence[Poly]):
        comps = tuple(_as_poly(chart, c) for c in components)
        if len(comps) != chart.dim:
            raise ValueError(f"field needs {chart.dim} components, got {len(comps)}")
        self.chart = chart
        self.components = comps

    @classmethod
    def zero(cls, chart: Chart) -> "FieldExpr":
        return cls(chart, [chart.zero()] * chart.dim)

    @classmethod
    def coordinate(cls, chart: Chart, var: str, coeff=1) -> "FieldExpr":
        i = chart.index(var)
        c = _as_poly(chart, coeff)
        return cls(chart, [c if j == i else chart.zero() for j in range(chart.dim)])

    @classmethod
    def from_map(cls, chart: Chart, comps: Mapping[str, Poly]) -> "FieldExpr":
        out = [chart.zero()] * chart.dim
        for v, c in comps.items():
            out[chart.index(v)] = _as_poly(chart, c)
        return cls(chart, out)

    def component(self, var: str) -> Poly:
        return self.components[self.chart.index(var)]

    def is_zero(self) -> bool:
        return not any(self.components)

    def __bool__(self):
        return not self.is_zero()

    def __call__(self, f: Poly) -> Poly:
        return apply_field(self, f)

    def __add__(self, other):
        if not isinstance(other, FieldExpr):
            return NotImplemented
        _same_chart(self, other)
        return FieldExpr(self.chart, [a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other):
        if not isinstance(other, FieldExpr):
            return NotImplemented
        _same_chart(self, other)
        return FieldExpr(self.chart, [a - b for a, b in zip(self.components, other.components)])

    def __neg__(self):
        return FieldExpr(self.chart, [-a for a in self.components])

    def scale(self, c) -> "FieldExpr":
        c = _as_poly(self.chart, c)
        return FieldExpr(self.chart, [a * c for a in self.components])

    def __mul__(self, other):
        if isinstance(other, (Poly, int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(1 / Fraction(other))
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, FieldExpr):
            return self.chart == other.chart and self.components == other.components
        if isinstance(other, (int, Fraction)) and other == 0:
            return self.is_zero()
        return NotImplemented

    def __hash__(self):
        return hash((self.chart, self.components))

    def to_chart(self, chart: Chart) -> "FieldExpr":
        """Push a field to a chart containing all its variables (new components are zero)."""
        out = [chart.zero()] * chart.dim
        for v, c in zip(self.chart.variables, self.components):
            if c:
                out[chart.index(v)] = c.to_chart(chart)
        return FieldExpr(chart, out)

    def __str__(self):
        return format_field(self)

    def __repr__(self):
        return f"FieldExpr({self})"


# -- printing -------------------------------------------------------------

def _coeff_prefix(c: Poly) -> str:
    s = str(c)
    if len(c.terms) > 1:
        return f"({s})*"
    if s == "1":
        return ""
    if s == "-1":
        return "-"
    return s + "*"


def _join(parts: list[str]) -> str:
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def format_form(a: FormExpr) -> str:
    if a.degree == 0:
        return str(a.as_function())
    parts = []
    for idx in sorted(a._terms):
        basis = "^".join(f"d({a.chart.variables[i]})" for i in idx)
        parts.append(_coeff_prefix(a._terms[idx]) + basis)
    return _join(parts)


def format_field(v: FieldExpr) -> str:
    parts = []
    for name, c in zip(v.chart.variables, v.components):
        if c:
            parts.append(_coeff_prefix(c) + f"e({name})")
    return _join(parts)


# -- calculus -------------------------------------------------------------

def apply_field(v: FieldExpr, f: Poly) -> Poly:
    """Directional derivative v(f)."""
    _same_chart(v, f)
    out = v.chart.zero()
    for i, c in enumerate(v.components):
        if c:
            df = f.partial(i)
            if df:
                out = out + c * df
    return out


def wedge(a: FormExpr, b: FormExpr) -> FormExpr:
    _same_chart(a, b)
    deg = a.degree + b.degree
    out: dict[tuple[int, ...], Poly] = {}
    for ia, ca in a._terms.items():
        for ib, cb in b._terms.items():
            s = _merge_sign(ia, ib)
            if not s:
                continue
            k = tuple(sorted(ia + ib))
            c = ca * cb
            if s < 0:
                c = -c
            c = out[k] + c if k in out else c
            if c:
                out[k] = c
            else:
                out.pop(k, None)
    return FormExpr._make(a.chart, deg, out)


def exterior_derivative(a: FormExpr) -> FormExpr:
    chart = a.chart
    out: dict[tuple[int, ...], Poly] = {}
    for idx, c in a._terms.items():
        for j in range(chart.dim):
            if j in idx:
                continue
            dc = c.partial(j)
            if not dc:
                continue
            pos = sum(1 for i in idx if i < j)
            k = idx[:pos] + (j,) + idx[pos:]
            if pos & 1:
                dc = -dc
            s = out[k] + dc if k in out else dc
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return FormExpr._make(chart, a.degree + 1, out)


def interior_product(v: FieldExpr, a: FormExpr) -> FormExpr:
    """Contract ``v`` into the first slot of ``a``; zero on functions."""
    _same_chart(v, a)
    if a.degree <= 0:
        return FormExpr.zero(a.chart, a.degree - 1)
    out: dict[tuple[int, ...], Poly] = {}
    for idx, c in a._terms.items():
        for pos, i in enumerate(idx):
            vi = v.components[i]
            if not vi:
                continue
            k = idx[:pos] + idx[pos + 1:]
            t = c * vi
            if pos & 1:
                t = -t
            s = out[k] + t if k in out else t
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return FormExpr._make(a.chart, a.degree - 1, out)


def contract(fields: Sequence[FieldExpr], a: FormExpr) -> FormExpr:
    """iota(v1 ^ ... ^ vk) a, i.e. a(v1, ..., vk, -)."""
    for v in fields:
        a = interior_product(v, a)
    return a


def evaluate_form(a: FormExpr, fields: Sequence[FieldExpr]) -> Poly:
    if len(fields) != a.degree:
        raise DegreeError(f"{a.degree}-form evaluated on {len(fields)} fields")
    return contract(fields, a).as_function() if fields else a.as_function()


def lie_bracket(u: FieldExpr, v: FieldExpr) -> FieldExpr:
    _same_chart(u, v)
    return FieldExpr(u.chart, [apply_field(u, b) - apply_field(v, a)
                               for a, b in zip(u.components, v.components)])


def lie_derivative(v: FieldExpr, a: FormExpr) -> FormExpr:
    # Cartan's formula; on functions the second term vanishes
    _same_chart(v, a)
    if a.degree == 0:
        return FormExpr.function(apply_field(v, a.as_function()))
    return interior_product(v, exterior_derivative(a)) + exterior_derivative(interior_product(v, a))


def restrict(a: FormExpr, substitution: Mapping[str, Poly], chart: Chart | None = None) -> FormExpr:
    """Pull back along the graph embedding defined by ``substitution``.

    Each key is a coordinate eliminated on the subspace; its value must be a
    polynomial in the remaining coordinates.  The result lives on the chart
    of the remaining coordinates (or ``chart`` when given).
    """
    src = a.chart
    for v in substitution:
        src.index(v)
    keep = [v for v in src.variables if v not in substitution]
    sub = chart or src.subchart(keep)
    if set(sub.variables) != set(keep):
        raise UnsupportedError("target chart must consist of the coordinates that are not substituted")
    images = {}
    for v, val in substitution.items():
        if not isinstance(val, Poly):
            val = Poly.const(src, val)
        try:
            images[v] = val.to_chart(sub)
        except ChartMismatchError:
            raise UnsupportedError(
                f"substitution for {v!r} depends on eliminated coordinates; only graphs over the "
                "remaining coordinates are supported") from None
    pulled_d = []
    for v in src.variables:
        if v in images:
            pulled_d.append(exterior_derivative(FormExpr.function(images[v])))
        else:
            pulled_d.append(FormExpr.differential(sub, v))
    out = FormExpr.zero(sub, a.degree)
    for idx, c in a._terms.items():
        term = FormExpr.function(c.substitute(images, chart=sub))
        if not term:
            continue
        for i in idx:
            term = wedge(term, pulled_d[i])
            if not term:
                break
        if term:
            out = out + FormExpr._make(sub, a.degree, term._terms)
    return FormExpr._make(sub, a.degree, out._terms)


def forms_basis(chart: Chart, degree: int) -> list[tuple[int, ...]]:
    return list(combinations(range(chart.dim), degree))
