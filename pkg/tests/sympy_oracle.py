"""Conversions to sympy, used only as an independent oracle in tests."""

from fractions import Fraction

import sympy

from msr.polyalg import Poly


def symbols_for(chart):
    return sympy.symbols(chart.variables)


def to_sympy(p: Poly, syms):
    expr = sympy.Integer(0)
    for exps, c in p.terms.items():
        t = sympy.Rational(c.numerator, c.denominator)
        for s, e in zip(syms, exps):
            t *= s ** e
        expr += t
    return expr


def from_sympy(expr, chart):
    syms = symbols_for(chart)
    sp = sympy.Poly(sympy.expand(expr), *syms, domain="QQ")
    return Poly(chart, {tuple(m): Fraction(int(c.p), int(c.q)) for m, c in zip(sp.monoms(), sp.coeffs())
                        if c})
