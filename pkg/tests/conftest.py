import random
from fractions import Fraction

import pytest

from msr import kernels
from msr.cartan import FieldExpr, FormExpr, forms_basis
from msr.polyalg import Chart, Poly

# criterion number -> [(part, passed, detail)]; filled by test_acceptance
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        parts = sorted(ACCEPTANCE[k])
        ok = all(p[1] for p in parts)
        detail = "; ".join(f"{name} {'pass' if good else 'FAIL'}: {d}".strip() if name else d
                           for name, good, d in parts)
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'} - {detail}")


@pytest.fixture(params=sorted(kernels.backends()))
def backend(request):
    with kernels.use_backend(request.param):
        yield request.param


@pytest.fixture
def R2():
    return Chart("R2", ("x", "y"))


@pytest.fixture
def R3():
    return Chart("R3", ("x", "y", "z"))


def rand_poly(chart, rng, nterms=3, deg=2, cmax=5):
    terms = {}
    for _ in range(rng.randint(0, nterms)):
        e = [0] * chart.dim
        for _ in range(rng.randint(0, deg)):
            e[rng.randrange(chart.dim)] += 1
        terms[tuple(e)] = terms.get(tuple(e), 0) + Fraction(rng.randint(-cmax, cmax), rng.randint(1, 3))
    return Poly(chart, terms)


def rand_form(chart, rng, degree, nterms=2, **kw):
    idxs = forms_basis(chart, degree)
    out = FormExpr.zero(chart, degree)
    if not idxs:
        return out
    for _ in range(rng.randint(1, nterms)):
        out = out + FormExpr.basis(chart, rng.choice(idxs), rand_poly(chart, rng, **kw))
    return out


def rand_field(chart, rng, **kw):
    return FieldExpr(chart, [rand_poly(chart, rng, **kw) if rng.random() < 0.6 else Poly(chart)
                             for _ in range(chart.dim)])


@pytest.fixture
def rng():
    return random.Random(12345)
