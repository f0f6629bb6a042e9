# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of ``_pykernels``; same signatures, same results."""

from fractions import Fraction

DEF C_GREVLEX = 0

GREVLEX = 0
LEX = 1


cdef inline int _cmp(tuple a, tuple b, int order, int npos):
    cdef Py_ssize_t n = len(a)
    cdef Py_ssize_t i
    cdef long x, y, da = 0, db = 0
    for i in range(npos):
        x = a[i]
        y = b[i]
        if x != y:
            return 1 if x < y else -1
    if order == C_GREVLEX:
        for i in range(npos, n):
            da += <long>a[i]
            db += <long>b[i]
        if da != db:
            return 1 if da > db else -1
        for i in range(n - 1, npos - 1, -1):
            x = a[i]
            y = b[i]
            if x != y:
                return 1 if x < y else -1
        return 0
    for i in range(npos, n):
        x = a[i]
        y = b[i]
        if x != y:
            return 1 if x > y else -1
    return 0


def compare(tuple a, tuple b, int order, int npos):
    return _cmp(a, b, order, npos)


cdef tuple _leading(dict terms, int order, int npos):
    cdef tuple best = None
    cdef tuple k
    for k in terms:
        if best is None or _cmp(k, best, order, npos) > 0:
            best = k
    return best


def leading_key(dict terms, int order, int npos):
    return _leading(terms, order, npos)


cdef inline tuple _tadd(tuple a, tuple b):
    cdef Py_ssize_t n = len(a)
    cdef Py_ssize_t i
    cdef list out = [0] * n
    for i in range(n):
        out[i] = <long>a[i] + <long>b[i]
    return tuple(out)


cdef inline bint _divides(tuple a, tuple b, int npos):
    cdef Py_ssize_t n = len(a)
    cdef Py_ssize_t i
    for i in range(npos):
        if <long>a[i] != <long>b[i]:
            return False
    for i in range(npos, n):
        if <long>a[i] > <long>b[i]:
            return False
    return True


def divides(tuple a, tuple b, int npos):
    return _divides(a, b, npos)


def add(dict a, dict b):
    cdef dict out = dict(a)
    for k, c in b.items():
        v = out.get(k, 0) + c
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def sub(dict a, dict b):
    cdef dict out = dict(a)
    for k, c in b.items():
        v = out.get(k, 0) - c
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def scale(dict a, c):
    if not c:
        return {}
    return {k: v * c for k, v in a.items()}


def mul(dict a, dict b):
    cdef dict out = {}
    cdef tuple ka, kb, k
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = _tadd(ka, kb)
            v = out.get(k, 0) + ca * cb
            if v:
                out[k] = v
            else:
                out.pop(k, None)
    return out


def shift_scale(dict a, c, tuple shift):
    if not c:
        return {}
    cdef tuple k
    return {_tadd(k, shift): v * c for k, v in a.items()}


def normal_form(dict p, list basis, list lead_keys, int order, int npos, bint track):
    cdef dict work = dict(p)
    cdef dict rem = {}
    cdef list quots = [{} for _ in basis] if track else None
    cdef list lead_coeffs = [(<dict>g)[k] for g, k in zip(basis, lead_keys)]
    cdef Py_ssize_t nb = len(basis)
    cdef Py_ssize_t i, j, n
    cdef tuple lk, gk, shift, kk, qk, k
    cdef dict g, q
    cdef list sh
    cdef bint found
    while work:
        lk = _leading(work, order, npos)
        lc = work[lk]
        found = False
        for i in range(nb):
            gk = <tuple>lead_keys[i]
            if _divides(gk, lk, npos):
                c = lc / lead_coeffs[i]
                n = len(lk)
                sh = [0] * n
                for j in range(npos, n):
                    sh[j] = <long>lk[j] - <long>gk[j]
                shift = tuple(sh)
                g = <dict>basis[i]
                for k, v in g.items():
                    kk = _tadd(k, shift)
                    nv = work.get(kk, 0) - c * v
                    if nv:
                        work[kk] = nv
                    else:
                        work.pop(kk, None)
                if track:
                    q = <dict>quots[i]
                    qk = shift[npos:]
                    nv = q.get(qk, 0) + c
                    if nv:
                        q[qk] = nv
                    else:
                        q.pop(qk, None)
                found = True
                break
        if not found:
            rem[lk] = lc
            del work[lk]
    return rem, quots


def sort_key(tuple key, int order, int npos):
    exps = key[npos:]
    if order == C_GREVLEX:
        mono = (sum(exps), tuple(-e for e in reversed(exps)))
    else:
        mono = exps
    if npos:
        return (-key[0], mono)
    return mono


def as_fraction(x):
    return x if isinstance(x, Fraction) else Fraction(x)
