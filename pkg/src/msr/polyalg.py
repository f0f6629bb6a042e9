"""Exact multivariate polynomials over the rationals on a named chart."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Mapping, Sequence

from . import kernels
from .errors import ChartMismatchError, UnknownVariableError

Rational = Fraction


def to_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact coefficient")


@dataclass(frozen=True)
class Chart:
    """A coordinate chart: a name plus an ordered tuple of variable names."""

    name: str
    variables: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"duplicate variable names in chart {self.name!r}")

    @property
    def dim(self) -> int:
        return len(self.variables)

    def index(self, var: str) -> int:
        try:
            return self.variables.index(var)
        except ValueError:
            raise UnknownVariableError(f"unknown variable {var!r} on chart {self.name!r}") from None

    def var(self, name: str) -> "Poly":
        return Poly.var(self, name)

    def gens(self) -> tuple["Poly", ...]:
        return tuple(Poly.var(self, v) for v in self.variables)

    def zero(self) -> "Poly":
        return Poly(self)

    def one(self) -> "Poly":
        return Poly.const(self, 1)

    def subchart(self, variables: Sequence[str], name: str | None = None) -> "Chart":
        for v in variables:
            self.index(v)
        return Chart(name or f"{self.name}|{','.join(variables)}", tuple(variables))


class Poly:
    """Immutable polynomial; ``terms`` maps exponent tuples to nonzero rationals."""

    __slots__ = ("chart", "_terms", "_hash")

    def __init__(self, chart: Chart, terms: Mapping[tuple[int, ...], object] | None = None):
        self.chart = chart
        clean = {}
        if terms:
            n = chart.dim
            for exps, c in terms.items():
                exps = tuple(int(e) for e in exps)
                if len(exps) != n or any(e < 0 for e in exps):
                    raise ValueError(f"bad exponent vector {exps} for chart of dimension {n}")
                c = to_rational(c)
                if c:
                    clean[exps] = clean.get(exps, 0) + c
            clean = {k: v for k, v in clean.items() if v}
        self._terms = clean
        self._hash = None

    @classmethod
    def _make(cls, chart: Chart, terms: dict) -> "Poly":
        p = cls.__new__(cls)
        p.chart = chart
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, chart: Chart, c) -> "Poly":
        c = to_rational(c)
        return cls._make(chart, {(0,) * chart.dim: c} if c else {})

    @classmethod
    def var(cls, chart: Chart, name: str) -> "Poly":
        i = chart.index(name)
        exps = tuple(1 if j == i else 0 for j in range(chart.dim))
        return cls._make(chart, {exps: Fraction(1)})

    @classmethod
    def monomial(cls, chart: Chart, exps: Sequence[int], c=1) -> "Poly":
        return cls(chart, {tuple(exps): c})

    @property
    def terms(self) -> Mapping[tuple[int, ...], Fraction]:
        return MappingProxyType(self._terms)

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and not any(next(iter(self._terms))))

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return next(iter(self._terms.values()), Fraction(0))

    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def variables_used(self) -> set[str]:
        used = set()
        for exps in self._terms:
            used.update(v for v, e in zip(self.chart.variables, exps) if e)
        return used

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.chart != self.chart:
                raise ChartMismatchError()
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Poly.const(self.chart, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Poly._make(self.chart, kernels.add(self._terms, o._terms))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Poly._make(self.chart, kernels.sub(self._terms, o._terms))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        return Poly._make(self.chart, {k: -v for k, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Poly._make(self.chart, kernels.scale(self._terms, Fraction(other)))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Poly._make(self.chart, kernels.mul(self._terms, o._terms))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if not other:
                raise ZeroDivisionError("division by zero")
            return self * (1 / Fraction(other))
        if isinstance(other, Poly) and other.is_constant() and other:
            return self * (1 / other.constant_value())
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Poly.const(self.chart, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def arith(self, other: "Poly", op: str) -> "Poly":
        """Dispatch ``add``/``sub``/``mul``; charts must agree."""
        if not isinstance(other, Poly) or other.chart != self.chart:
            raise ChartMismatchError()
        try:
            return {"add": Poly.__add__, "sub": Poly.__sub__, "mul": Poly.__mul__}[op](self, other)
        except KeyError:
            raise ValueError(f"unknown operation {op!r}") from None

    def shifted(self, exps: Sequence[int], c=1) -> "Poly":
        return Poly._make(self.chart, kernels.shift_scale(self._terms, to_rational(c), tuple(exps)))

    # -- calculus and evaluation ----------------------------------------

    def partial(self, var: str | int) -> "Poly":
        i = var if isinstance(var, int) else self.chart.index(var)
        if not 0 <= i < self.chart.dim:
            raise UnknownVariableError(f"unknown variable index {i}")
        out = {}
        for exps, c in self._terms.items():
            e = exps[i]
            if e:
                k = exps[:i] + (e - 1,) + exps[i + 1:]
                out[k] = c * e
        return Poly._make(self.chart, out)

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.chart.dim:
            raise ValueError(f"point has length {len(point)}, chart dimension is {self.chart.dim}")
        pt = [to_rational(x) for x in point]
        total = Fraction(0)
        for exps, c in self._terms.items():
            t = c
            for x, e in zip(pt, exps):
                if e:
                    t *= x ** e
            total += t
        return total

    def substitute(self, assignments: Mapping[str, "Poly"], chart: Chart | None = None) -> "Poly":
        """Simultaneously substitute polynomials for variables.

        Values may live on this chart or on a common sub-chart; unassigned
        variables are carried over by name to the target chart.
        """
        for v in assignments:
            self.chart.index(v)
        targets = {p.chart for p in assignments.values() if isinstance(p, Poly)}
        if chart is None:
            if len(targets) > 1:
                raise ChartMismatchError()
            chart = targets.pop() if targets else self.chart
        images = []
        for v in self.chart.variables:
            if v in assignments:
                val = assignments[v]
                if not isinstance(val, Poly):
                    val = Poly.const(chart, val)
                elif val.chart != chart:
                    raise ChartMismatchError()
                images.append(val)
            else:
                images.append(Poly.var(chart, v))
        powers: dict[tuple[int, int], Poly] = {}

        def power(i, e):
            key = (i, e)
            if key not in powers:
                powers[key] = images[i] ** e
            return powers[key]

        out = {}
        for exps, c in self._terms.items():
            t = {(0,) * chart.dim: c}
            for i, e in enumerate(exps):
                if e:
                    t = kernels.mul(t, power(i, e)._terms)
            out = kernels.add(out, t)
        return Poly._make(chart, out)

    def to_chart(self, chart: Chart) -> "Poly":
        """Re-express on another chart by variable name."""
        if chart == self.chart:
            return self
        idx = []
        for j, v in enumerate(self.chart.variables):
            idx.append(chart.variables.index(v) if v in chart.variables else None)
        out = {}
        for exps, c in self._terms.items():
            k = [0] * chart.dim
            for j, e in enumerate(exps):
                if e:
                    if idx[j] is None:
                        raise ChartMismatchError(
                            f"variable {self.chart.variables[j]!r} does not exist on chart {chart.name!r}")
                    k[idx[j]] = e
            out[tuple(k)] = c
        return Poly._make(chart, out)

    def exact_div(self, other: "Poly") -> "Poly | None":
        """Quotient when ``other`` divides ``self`` exactly, else ``None``."""
        if other.chart != self.chart:
            raise ChartMismatchError()
        if not other:
            raise ZeroDivisionError("division by the zero polynomial")
        lead = kernels.leading_key(other._terms, kernels.GREVLEX, 0)
        rem, quots = kernels.normal_form(self._terms, [other._terms], [lead], kernels.GREVLEX, 0, True)
        if rem:
            return None
        return Poly._make(self.chart, quots[0])

    # -- comparison and display ------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.chart == other.chart and self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.chart, frozenset(self._terms.items())))
        return self._hash

    def sorted_terms(self, order: int = kernels.GREVLEX):
        return sorted(self._terms.items(), key=lambda kv: kernels.sort_key(kv[0], order, 0), reverse=True)

    def monomial_str(self, exps) -> str:
        parts = []
        for v, e in zip(self.chart.variables, exps):
            if e == 1:
                parts.append(v)
            elif e:
                parts.append(f"{v}^{e}")
        return "*".join(parts)

    def __str__(self):
        if not self._terms:
            return "0"
        out = []
        for i, (exps, c) in enumerate(self.sorted_terms()):
            mono = self.monomial_str(exps)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if i == 0:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append((" - " if c < 0 else " + ") + body)
        return "".join(out)

    def __repr__(self):
        return f"Poly({self.chart.name}: {self})"


def arith(p: Poly, q: Poly, op: str) -> Poly:
    return p.arith(q, op)


def partial_derivative(p: Poly, var: str) -> Poly:
    return p.partial(var)


def evaluate(p: Poly, point: Sequence) -> Fraction:
    return p.evaluate(point)


def substitute(p: Poly, assignments: Mapping[str, Poly]) -> Poly:
    return p.substitute(assignments)


def monomials_upto(chart: Chart, degree: int) -> list[Poly]:
    """All monomials of total degree <= ``degree``, in ascending grevlex order."""
    out = []
    n = chart.dim

    def rec(prefix, left):
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for e in range(left + 1):
            rec(prefix + [e], left - e)

    if n == 0:
        return [Poly.const(chart, 1)]
    rec([], degree)
    out.sort(key=lambda k: kernels.sort_key(k, kernels.GREVLEX, 0))
    return [Poly.monomial(chart, k) for k in out]

