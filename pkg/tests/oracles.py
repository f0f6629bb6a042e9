"""Coordinate formulas written independently of the engine's Cartan calculus."""

from itertools import permutations

from msr.cartan import FormExpr
from msr.polyalg import Poly


def _sign(perm):
    inv = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return -1 if inv % 2 else 1


def _one_form_of(p: Poly):
    ch = p.chart
    out = FormExpr.zero(ch, 1)
    for v in ch.variables:
        out = out + FormExpr.differential(ch, v) * p.partial(v)
    return out


def lie_derivative_oracle(v, a: FormExpr) -> FormExpr:
    """L_v(f dx^I) = v(f) dx^I + f * sum_j dx^i1 ^ .. ^ d(v^ij) ^ .. ^ dx^ik."""
    ch = a.chart
    out = FormExpr.zero(ch, a.degree)
    for idx, f in a.terms.items():
        vf = Poly(ch)
        for k, var in enumerate(ch.variables):
            vf = vf + v.components[k] * f.partial(var)
        out = out + FormExpr.basis(ch, idx, vf)
        for j in range(len(idx)):
            piece = FormExpr.function(f)
            for m, i in enumerate(idx):
                if m == j:
                    factor = _one_form_of(v.components[i])
                else:
                    factor = FormExpr.differential(ch, ch.variables[i])
                piece = _wedge_naive(piece, factor)
            out = out + piece
    return out


def _wedge_naive(a: FormExpr, b: FormExpr) -> FormExpr:
    ch = a.chart
    out = FormExpr.zero(ch, a.degree + b.degree)
    for ia, fa in a.terms.items():
        for ib, fb in b.terms.items():
            idx = ia + ib
            if len(set(idx)) < len(idx):
                continue
            order = sorted(range(len(idx)), key=lambda t: idx[t])
            s = _sign(order)
            out = out + FormExpr.basis(ch, tuple(sorted(idx)), fa * fb * s)
    return out


def evaluate_oracle(a: FormExpr, fields) -> Poly:
    """a(v1, .., vk) by the determinant formula."""
    ch = a.chart
    k = len(fields)
    assert k == a.degree
    total = Poly(ch)
    for idx, f in a.terms.items():
        det = Poly(ch)
        for perm in permutations(range(k)):
            t = Poly.const(ch, _sign(perm))
            for row, col in enumerate(perm):
                t = t * fields[col].components[idx[row]]
            det = det + t
        total = total + f * det
    return total
