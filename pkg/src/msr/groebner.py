"""Buchberger bases for ideals and submodules of free modules over Q[x].

Ideal elements are plain term dicts (exponent tuple keys).  Module elements
are term dicts whose keys carry the component index in front of the
exponents; the module order is position-over-term with lower positions
ranking higher.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import kernels
from .errors import ChartMismatchError
from .polyalg import Chart, Poly

ORDERS = {"grevlex": kernels.GREVLEX, "lex": kernels.LEX}
DEFAULT_ORDER = "grevlex"


def order_code(order: str | int) -> int:
    if isinstance(order, int):
        return order
    try:
        return ORDERS[order]
    except KeyError:
        raise ValueError(f"unknown monomial order {order!r}; expected one of {sorted(ORDERS)}") from None


@dataclass
class GBResult:
    basis: list[dict]
    leads: list[tuple]
    cofactors: list[list[dict]] | None  # per basis element, one poly per input generator


def _lcm(a: tuple, b: tuple) -> tuple:
    return tuple(max(x, y) for x, y in zip(a, b))


def _comb(cofs_a, ca, sa, cofs_b, cb, sb):
    """``ca*x^sa*cofs_a - cb*x^sb*cofs_b`` component-wise (plain polys)."""
    return [kernels.sub(kernels.shift_scale(x, ca, sa), kernels.shift_scale(y, cb, sb))
            for x, y in zip(cofs_a, cofs_b)]


def _subtract_quotients(cofs, quots, basis_cofs):
    out = list(cofs)
    for q, bc in zip(quots, basis_cofs):
        if q:
            out = [kernels.sub(o, kernels.mul(q, c)) for o, c in zip(out, bc)]
    return out


def buchberger(gens: Sequence[dict], order: int, npos: int, nvars: int, track: bool = False) -> GBResult:
    """Reduced Gröbner basis of the span of ``gens``.

    Uses the coprime-leading-term criterion (rank one only) and the chain
    criterion.  With ``track`` every basis element carries cofactors over the
    original generators.
    """
    zero_mono = (0,) * nvars
    G: list[dict] = []
    leads: list[tuple] = []
    cofs: list[list[dict]] = []
    ngens = len(gens)
    for i, g in enumerate(gens):
        if not g:
            continue
        G.append(dict(g))
        leads.append(kernels.leading_key(g, order, npos))
        if track:
            cofs.append([{zero_mono: Fraction(1)} if j == i else {} for j in range(ngens)])

    def same_pos(i, j):
        return leads[i][:npos] == leads[j][:npos]

    pairs = {(i, j) for j in range(len(G)) for i in range(j) if same_pos(i, j)}
    done = set()

    def pair_lcm(pr):
        return _lcm(leads[pr[0]], leads[pr[1]])

    while pairs:
        pr = min(pairs, key=lambda p: (kernels.sort_key(pair_lcm(p), order, npos), p))
        pairs.discard(pr)
        i, j = pr
        L = pair_lcm(pr)
        a, b = leads[i], leads[j]
        skip = False
        if npos == 0 and all(x == 0 or y == 0 for x, y in zip(a, b)):
            skip = True
        else:
            for k in range(len(G)):
                if k in (i, j):
                    continue
                if kernels.divides(leads[k], L, npos):
                    ik = (min(i, k), max(i, k))
                    jk = (min(j, k), max(j, k))
                    if ik not in pairs and jk not in pairs:
                        skip = True
                        break
        done.add(pr)
        if skip:
            continue
        ca = 1 / G[i][a]
        cb = 1 / G[j][b]
        sa = (0,) * npos + tuple(x - y for x, y in zip(L[npos:], a[npos:]))
        sb = (0,) * npos + tuple(x - y for x, y in zip(L[npos:], b[npos:]))
        s = kernels.sub(kernels.shift_scale(G[i], ca, sa), kernels.shift_scale(G[j], cb, sb))
        rem, quots = kernels.normal_form(s, G, leads, order, npos, track)
        if not rem:
            continue
        if track:
            scof = _comb(cofs[i], ca, sa[npos:], cofs[j], cb, sb[npos:])
            cofs.append(_subtract_quotients(scof, quots, cofs))
        G.append(rem)
        leads.append(kernels.leading_key(rem, order, npos))
        new = len(G) - 1
        for k in range(new):
            if same_pos(k, new):
                pairs.add((k, new))

    # minimal basis: drop elements whose leading term another leading term divides
    keep = []
    for i in range(len(G)):
        redundant = False
        for j in range(len(G)):
            if j != i and kernels.divides(leads[j], leads[i], npos) and (leads[j] != leads[i] or j < i):
                redundant = True
                break
        if not redundant:
            keep.append(i)
    G = [G[i] for i in keep]
    leads = [leads[i] for i in keep]
    if track:
        cofs = [cofs[i] for i in keep]

    # interreduce tails and normalise to monic
    outG, outL, outC = [], [], []
    for i in range(len(G)):
        others = [G[j] for j in range(len(G)) if j != i]
        oleads = [leads[j] for j in range(len(G)) if j != i]
        rem, quots = kernels.normal_form(G[i], others, oleads, order, npos, track)
        lc = rem[leads[i]]
        inv = 1 / lc
        outG.append(kernels.scale(rem, inv))
        outL.append(leads[i])
        if track:
            ocofs = [cofs[j] for j in range(len(G)) if j != i]
            c = _subtract_quotients(cofs[i], quots, ocofs)
            outC.append([kernels.scale(x, inv) for x in c])
    idx = sorted(range(len(outG)), key=lambda k: kernels.sort_key(outL[k], order, npos))
    return GBResult([outG[k] for k in idx], [outL[k] for k in idx],
                    [outC[k] for k in idx] if track else None)


class Ideal:
    """An ideal of Q[chart] given by generators, with cached bases per order."""

    def __init__(self, chart: Chart, generators: Sequence[Poly]):
        gens = []
        for g in generators:
            if not isinstance(g, Poly):
                g = Poly.const(chart, g)
            if g.chart != chart:
                raise ChartMismatchError()
            if g:
                gens.append(g)
        self.chart = chart
        self.generators: tuple[Poly, ...] = tuple(gens)
        self._cache: dict[tuple[int, bool], GBResult] = {}
        self._lock = threading.Lock()

    def __repr__(self):
        return f"Ideal<{', '.join(map(str, self.generators))}>"

    def is_zero(self) -> bool:
        return not self.generators

    def _gb(self, order, track=False) -> GBResult:
        code = order_code(order)
        key = (code, track)
        res = self._cache.get(key)
        if res is None:
            with self._lock:
                res = self._cache.get(key)
                if res is None:
                    res = buchberger([g._terms for g in self.generators], code, 0, self.chart.dim, track)
                    self._cache[key] = res
                    if track and (code, False) not in self._cache:
                        self._cache[(code, False)] = GBResult(res.basis, res.leads, None)
        return res

    def groebner_basis(self, order: str = DEFAULT_ORDER) -> list[Poly]:
        return [Poly._make(self.chart, g) for g in self._gb(order).basis]

    def normal_form(self, p: Poly, order: str = DEFAULT_ORDER) -> Poly:
        if p.chart != self.chart:
            raise ChartMismatchError()
        res = self._gb(order)
        rem, _ = kernels.normal_form(p._terms, res.basis, res.leads, order_code(order), 0, False)
        return Poly._make(self.chart, rem)

    def contains(self, p: Poly, order: str = DEFAULT_ORDER) -> bool:
        if not isinstance(p, Poly):
            p = Poly.const(self.chart, p)
        return self.normal_form(p, order).is_zero()

    def witness(self, p: Poly, order: str = DEFAULT_ORDER) -> list[Poly] | None:
        """Cofactors ``c`` with ``sum(c_i * g_i) == p`` or ``None`` if not a member."""
        if p.chart != self.chart:
            raise ChartMismatchError()
        res = self._gb(order, track=True)
        rem, quots = kernels.normal_form(p._terms, res.basis, res.leads, order_code(order), 0, True)
        if rem:
            return None
        out = [{} for _ in self.generators]
        for q, bc in zip(quots, res.cofactors):
            if q:
                out = [kernels.add(o, kernels.mul(q, c)) for o, c in zip(out, bc)]
        return [Poly._make(self.chart, o) for o in out]

    def is_monomial(self) -> bool:
        return all(len(g._terms) == 1 for g in self.generators)


def groebner_basis(ideal: Ideal, order: str = DEFAULT_ORDER) -> list[Poly]:
    return ideal.groebner_basis(order)


def ideal_contains(ideal: Ideal, p: Poly, order: str = DEFAULT_ORDER) -> bool:
    if p.chart != ideal.chart:
        raise ChartMismatchError()
    return ideal.contains(p, order)


def vector_terms(vec: Sequence[Poly]) -> dict:
    out = {}
    for pos, p in enumerate(vec):
        for exps, c in p._terms.items():
            out[(pos,) + exps] = c
    return out


def vector_from_terms(chart: Chart, rank: int, terms: dict) -> tuple[Poly, ...]:
    comps = [{} for _ in range(rank)]
    for key, c in terms.items():
        comps[key[0]][key[1:]] = c
    return tuple(Poly._make(chart, t) for t in comps)


class SubmoduleBasis:
    """A submodule of Q[chart]^rank given by generating vectors."""

    def __init__(self, chart: Chart, rank: int, generators: Sequence[Sequence[Poly]]):
        if rank < 1:
            raise ValueError("module rank must be positive")
        gens = []
        for g in generators:
            g = tuple(g)
            if len(g) != rank:
                raise ValueError(f"generator has length {len(g)}, module rank is {rank}")
            for p in g:
                if p.chart != chart:
                    raise ChartMismatchError()
            if any(g):
                gens.append(g)
        self.chart = chart
        self.rank = rank
        self.generators: tuple[tuple[Poly, ...], ...] = tuple(gens)
        self._cache: dict[tuple[int, bool], GBResult] = {}
        self._lock = threading.Lock()

    def _gb(self, order, track=False) -> GBResult:
        code = order_code(order)
        key = (code, track)
        res = self._cache.get(key)
        if res is None:
            with self._lock:
                res = self._cache.get(key)
                if res is None:
                    res = buchberger([vector_terms(g) for g in self.generators], code, 1, self.chart.dim, track)
                    self._cache[key] = res
        return res

    def basis(self, order: str = DEFAULT_ORDER) -> list[tuple[Poly, ...]]:
        return [vector_from_terms(self.chart, self.rank, g) for g in self._gb(order).basis]

    def _check(self, vec):
        vec = tuple(vec)
        if len(vec) != self.rank:
            raise ValueError(f"vector has length {len(vec)}, module rank is {self.rank}")
        for p in vec:
            if p.chart != self.chart:
                raise ChartMismatchError()
        return vec

    def normal_form(self, vec: Sequence[Poly], order: str = DEFAULT_ORDER) -> tuple[Poly, ...]:
        vec = self._check(vec)
        res = self._gb(order)
        rem, _ = kernels.normal_form(vector_terms(vec), res.basis, res.leads, order_code(order), 1, False)
        return vector_from_terms(self.chart, self.rank, rem)

    def contains(self, vec: Sequence[Poly], order: str = DEFAULT_ORDER) -> bool:
        return not any(self.normal_form(vec, order))

    def witness(self, vec: Sequence[Poly], order: str = DEFAULT_ORDER) -> list[Poly] | None:
        """Ring coefficients ``c`` with ``sum(c_i * generator_i) == vec``."""
        vec = self._check(vec)
        res = self._gb(order, track=True)
        rem, quots = kernels.normal_form(vector_terms(vec), res.basis, res.leads, order_code(order), 1, True)
        if rem:
            return None
        out = [{} for _ in self.generators]
        for q, bc in zip(quots, res.cofactors):
            if q:
                out = [kernels.add(o, kernels.mul(q, c)) for o, c in zip(out, bc)]
        return [Poly._make(self.chart, o) for o in out]

    def contains_module(self, other: "SubmoduleBasis", order: str = DEFAULT_ORDER) -> bool:
        return all(self.contains(g, order) for g in other.generators)

    def equals(self, other: "SubmoduleBasis", order: str = DEFAULT_ORDER) -> bool:
        return self.contains_module(other, order) and other.contains_module(self, order)


def module_basis(mod: SubmoduleBasis, order: str = DEFAULT_ORDER) -> list[tuple[Poly, ...]]:
    return mod.basis(order)


def module_contains(mod: SubmoduleBasis, vec: Sequence[Poly], order: str = DEFAULT_ORDER) -> bool:
    return mod.contains(vec, order)


def submodule_preimage(chart: Chart, matrix: Sequence[Sequence[Poly]], ideal_gens: Sequence[Poly],
                       order: str = DEFAULT_ORDER) -> list[tuple[Poly, ...]]:
    """Generators of ``{a in R^m : matrix * a in I^s}`` by POT elimination.

    ``matrix`` has ``s`` rows and ``m`` columns.  The extended module in
    ``R^(s+m)`` is spanned by ``(column_i, e_i)`` and ``(g*e_j, 0)``; the
    basis elements with vanishing first ``s`` components generate the answer.
    """
    s = len(matrix)
    m = len(matrix[0]) if s else 0
    zero = Poly(chart)
    gens = []
    for i in range(m):
        gens.append(tuple(matrix[r][i] for r in range(s)) + tuple(Poly.const(chart, 1) if k == i else zero
                                                                  for k in range(m)))
    for r in range(s):
        for g in ideal_gens:
            if g:
                gens.append(tuple(g if k == r else zero for k in range(s + m)))
    mod = SubmoduleBasis(chart, s + m, gens)
    out = []
    for vec in mod.basis(order):
        if not any(vec[:s]):
            out.append(vec[s:])
    return out


def minimize_generators(chart: Chart, rank: int, gens: Sequence[Sequence[Poly]],
                        order: str = DEFAULT_ORDER) -> list[tuple[Poly, ...]]:
    """Drop generators already in the span of the others; keeps input order."""
    gens = [tuple(g) for g in gens if any(g)]
    # cheap pass: drop exact duplicates up to a nonzero scalar
    unique = []
    for g in gens:
        if not any(_scalar_multiple(g, h) for h in unique):
            unique.append(g)
    kept = list(unique)
    i = len(kept) - 1
    while i >= 0:
        others = kept[:i] + kept[i + 1:]
        if others and SubmoduleBasis(chart, rank, others).contains(kept[i], order):
            kept = others
        i -= 1
    return kept


def _scalar_multiple(a, b) -> bool:
    ratio = None
    for p, q in zip(a, b):
        if bool(p) != bool(q):
            return False
        if not p:
            continue
        if set(p._terms) != set(q._terms):
            return False
        for k, c in p._terms.items():
            r = c / q._terms[k]
            if ratio is None:
                ratio = r
            elif r != ratio:
                return False
    return ratio is not None
