"""Pure-Python term-dictionary kernels.

A term dictionary maps an exponent key (tuple of ints) to a nonzero
``Fraction``.  Module elements carry ``npos`` leading position slots in the
key; for plain polynomials ``npos`` is 0.  Order codes: 0 = graded reverse
lexicographic, 1 = lexicographic.  With a position slot the order is
position-over-term and smaller positions rank higher.

``_ckernels.pyx`` implements the same functions; both must agree exactly.
"""

from fractions import Fraction

GREVLEX = 0
LEX = 1


def sort_key(key, order, npos):
    exps = key[npos:]
    if order == GREVLEX:
        mono = (sum(exps), tuple(-e for e in reversed(exps)))
    else:
        mono = exps
    if npos:
        return (-key[0], mono)
    return mono


def compare(a, b, order, npos):
    ka = sort_key(a, order, npos)
    kb = sort_key(b, order, npos)
    return (ka > kb) - (ka < kb)


def leading_key(terms, order, npos):
    return max(terms, key=lambda k: sort_key(k, order, npos))


def add(a, b):
    out = dict(a)
    for k, c in b.items():
        v = out.get(k, 0) + c
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def sub(a, b):
    out = dict(a)
    for k, c in b.items():
        v = out.get(k, 0) - c
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def scale(a, c):
    if not c:
        return {}
    return {k: v * c for k, v in a.items()}


def mul(a, b):
    out = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            v = out.get(k, 0) + ca * cb
            if v:
                out[k] = v
            else:
                out.pop(k, None)
    return out


def shift_scale(a, c, shift):
    """Return ``c * x^shift * a``; ``shift`` has the full key length."""
    if not c:
        return {}
    return {tuple(x + y for x, y in zip(k, shift)): v * c for k, v in a.items()}


def divides(a, b, npos):
    """True when key ``a`` divides key ``b`` (same position, exponents <=)."""
    for i in range(npos):
        if a[i] != b[i]:
            return False
    for i in range(npos, len(a)):
        if a[i] > b[i]:
            return False
    return True


def normal_form(p, basis, lead_keys, order, npos, track):
    """Fully reduce ``p`` by ``basis``.

    Returns ``(remainder, quotients)`` with ``p = remainder + sum q_i*basis_i``;
    quotients are plain polynomial term dicts (no position slot) or ``None``
    when ``track`` is false.
    """
    p = dict(p)
    rem = {}
    quots = [{} for _ in basis] if track else None
    lead_coeffs = [g[k] for g, k in zip(basis, lead_keys)]
    zero_pos = (0,) * npos
    while p:
        lk = leading_key(p, order, npos)
        lc = p[lk]
        for i, gk in enumerate(lead_keys):
            if divides(gk, lk, npos):
                c = lc / lead_coeffs[i]
                shift = zero_pos + tuple(x - y for x, y in zip(lk[npos:], gk[npos:]))
                for k, v in basis[i].items():
                    kk = tuple(x + y for x, y in zip(k, shift))
                    nv = p.get(kk, 0) - c * v
                    if nv:
                        p[kk] = nv
                    else:
                        p.pop(kk, None)
                if track:
                    q = quots[i]
                    qk = shift[npos:]
                    nv = q.get(qk, 0) + c
                    if nv:
                        q[qk] = nv
                    else:
                        q.pop(qk, None)
                break
        else:
            rem[lk] = lc
            del p[lk]
    return rem, quots


def as_fraction(x):
    return x if isinstance(x, Fraction) else Fraction(x)
