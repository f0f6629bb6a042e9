"""Exact linear algebra over Q and over Q[x] (fraction-free)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import NonPolynomialSolutionError, NotHamiltonianError
from .polyalg import Chart, Poly


def rref(rows: Sequence[Sequence], ncols: int | None = None):
    """Reduced row echelon form over Q.  Returns (matrix, pivot columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of {x : rows . x = 0}, one vector per free column."""
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    m, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -m[r][f]
        out.append(vec)
    return out


def rank(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    if not rows:
        return 0
    return len(rref(rows, ncols)[1])


def solve(rows: Sequence[Sequence], rhs: Sequence) -> list[Fraction] | None:
    """One solution of rows . x = rhs (free variables zero), or None."""
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    m, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = m[r][ncols]
    return x


def _exact(num: Poly, den: Poly) -> Poly | None:
    if den.is_constant():
        return num / den.constant_value()
    return num.exact_div(den)


def bareiss_det(mat: Sequence[Sequence[Poly]], chart: Chart) -> Poly:
    n = len(mat)
    if n == 0:
        return chart.one()
    a = [list(r) for r in mat]
    sign = 1
    prev = chart.one()
    for k in range(n - 1):
        if not a[k][k]:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return chart.zero()
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                q = _exact(a[i][j] * a[k][k] - a[i][k] * a[k][j], prev)
                if q is None:  # pragma: no cover - Bareiss divisions are exact
                    raise ArithmeticError("inexact Bareiss step")
                a[i][j] = q
        prev = a[k][k]
    d = a[n - 1][n - 1]
    return -d if sign < 0 else d


def echelon(mat: Sequence[Sequence[Poly]], rhs: Sequence[Poly] | None, chart: Chart):
    """Fraction-free row echelon form over Q[x].

    Constant pivots are preferred; rows are combined by cross multiplication
    so no division happens.  Returns (rows, rhs, pivots, const_pivots) where
    ``const_pivots`` tells whether every pivot used was a nonzero constant.
    """
    a = [list(r) for r in mat]
    b = list(rhs) if rhs is not None else [chart.zero()] * len(a)
    ncols = len(a[0]) if a else 0
    pivots = []
    all_const = True
    r = 0
    for c in range(ncols):
        cands = [i for i in range(r, len(a)) if a[i][c]]
        if not cands:
            continue
        const = [i for i in cands if a[i][c].is_constant()]
        if const:
            piv = const[0]
        else:
            all_const = False
            piv = min(cands, key=lambda i: (a[i][c].total_degree(), len(a[i][c].terms)))
        a[r], a[piv] = a[piv], a[r]
        b[r], b[piv] = b[piv], b[r]
        p = a[r][c]
        for i in range(r + 1, len(a)):
            f = a[i][c]
            if not f:
                continue
            if p.is_constant():
                s = f / p.constant_value()
                a[i] = [x - s * y for x, y in zip(a[i], a[r])]
                b[i] = b[i] - s * b[r]
            else:
                a[i] = [p * x - f * y for x, y in zip(a[i], a[r])]
                b[i] = p * b[i] - f * b[r]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a, b, pivots, all_const


def poly_solve(mat: Sequence[Sequence[Poly]], rhs: Sequence[Poly], chart: Chart):
    """Solve mat . x = rhs for polynomial x.

    Free columns are set to zero.  Returns (solution, free columns).
    Raises NotHamiltonianError when inconsistent and
    NonPolynomialSolutionError when the solution needs a non-unit denominator.
    """
    ncols = len(mat[0]) if mat else 0
    a, b, pivots, _ = echelon(mat, rhs, chart)
    for i in range(len(pivots), len(a)):
        if b[i]:
            raise NotHamiltonianError(f"inconsistent linear system (residual {b[i]})")
    x = [chart.zero()] * ncols
    for r in range(len(pivots) - 1, -1, -1):
        c = pivots[r]
        num = b[r]
        for j in range(c + 1, ncols):
            if a[r][j] and x[j]:
                num = num - a[r][j] * x[j]
        q = _exact(num, a[r][c])
        if q is None:
            raise NonPolynomialSolutionError(
                f"component {chart.variables[c] if ncols == chart.dim else c} needs division by {a[r][c]}")
        x[c] = q
    free = [c for c in range(ncols) if c not in pivots]
    return x, free


def poly_kernel_vector(mat: Sequence[Sequence[Poly]], chart: Chart) -> list[Poly] | None:
    """A nonzero polynomial vector in the kernel over Q(x), or None if injective."""
    ncols = len(mat[0]) if mat else 0
    a, _, pivots, _ = echelon(mat, None, chart)
    free = [c for c in range(ncols) if c not in pivots]
    if not free:
        return None
    f = free[0]
    # clear denominators with Cramer's rule on the pivot block
    rows = a[:len(pivots)]
    block = [[row[c] for c in pivots] for row in rows]
    det = bareiss_det(block, chart)
    vec = [chart.zero()] * ncols
    vec[f] = det
    for k, pc in enumerate(pivots):
        repl = [list(r) for r in block]
        for i, row in enumerate(rows):
            repl[i][k] = -row[f]
        vec[pc] = bareiss_det(repl, chart)
    return vec
