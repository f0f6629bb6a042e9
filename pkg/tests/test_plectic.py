from fractions import Fraction

import pytest

from msr import plectic
from msr.cartan import FieldExpr, FormExpr, exterior_derivative, interior_product, wedge
from msr.errors import DegenerateError, DegreeError, NotHamiltonianError, PlecticError
from msr.plectic import (Observable, PlecticStructure, check_higher_jacobi, graded_antisymmetry_sign,
                         hamiltonian_field_for, is_hamiltonian_pair, jacobi_residual, koszul_sign,
                         leibniz_bracket, multibracket, unshuffles)
from msr.polyalg import Chart, Poly

R2 = Chart("R2", ("x", "y"))
R3 = Chart("R3", ("x", "y", "z"))
x, y = R2.gens()
dx, dy = FormExpr.differential(R2, "x"), FormExpr.differential(R2, "y")
ex, ey = FieldExpr.coordinate(R2, "x"), FieldExpr.coordinate(R2, "y")
SYMP = PlecticStructure(wedge(dx, dy))


def vol3():
    d = [FormExpr.differential(R3, v) for v in R3.variables]
    return PlecticStructure(wedge(wedge(d[0], d[1]), d[2]))


def fn(p):
    return FormExpr.function(p)


def test_nondegeneracy_tristate():
    assert SYMP.nondegenerate.status == "yes"
    assert SYMP.n == 1
    zero = PlecticStructure(FormExpr.zero(R2, 2), n=1)
    rep = zero.nondegenerate
    assert rep.status == "no" and rep.witness is not None
    # x dx^dy degenerates along x = 0 but has no kernel over Q(x, y)
    assert PlecticStructure(wedge(dx, dy) * x).nondegenerate.status == "unknown"


def test_closedness_and_degree_checked():
    X, Y, Z = R3.gens()
    d = [FormExpr.differential(R3, v) for v in R3.variables]
    with pytest.raises(PlecticError):
        PlecticStructure(wedge(d[1], d[2]) * X)
    with pytest.raises(DegreeError):
        PlecticStructure(dx * y)
    with pytest.raises(DegreeError):
        PlecticStructure(wedge(dx, dy), n=2)


def test_degenerate_kernel_witness_in_r3():
    d = [FormExpr.differential(R3, v) for v in R3.variables]
    P = PlecticStructure(wedge(d[0], d[1]))
    rep = P.nondegenerate
    assert rep.status == "no"
    assert interior_product(rep.witness, P.omega).is_zero()


def test_hamiltonian_fields():
    assert hamiltonian_field_for(SYMP, fn(x)) == ey
    assert hamiltonian_field_for(SYMP, fn(y)) == -ex
    v = hamiltonian_field_for(SYMP, fn((x**2 + y**2) / 2))
    assert v == ey * x - ex * y
    assert is_hamiltonian_pair(SYMP, v, fn((x**2 + y**2) / 2))
    assert not is_hamiltonian_pair(SYMP, -v, fn((x**2 + y**2) / 2))


def test_hamiltonian_field_on_volume_form():
    P = vol3()
    X, Y, Z = R3.gens()
    alpha = FormExpr.differential(R3, "y") * (Y * Z)
    v = hamiltonian_field_for(P, alpha)
    assert v == FieldExpr.coordinate(R3, "x", Y)
    assert exterior_derivative(alpha) == -interior_product(v, P.omega)


def test_hamiltonian_field_errors():
    with pytest.raises(DegreeError):
        hamiltonian_field_for(SYMP, dx)
    bad = PlecticStructure(wedge(dx, dy) * x)
    with pytest.raises(DegenerateError):
        hamiltonian_field_for(bad, fn(x))
    P = PlecticStructure(wedge(dx, dy) * 2)
    assert hamiltonian_field_for(P, fn(x)) == ey * Fraction(1, 2)


def test_non_hamiltonian_form_on_multiphase_space():
    M = Chart("M", ("s1", "s2", "q", "p", "p1", "p2"))
    d = {v: FormExpr.differential(M, v) for v in M.variables}
    s1, s2, q, p, p1, p2 = M.gens()
    theta = wedge(d["s1"], d["s2"]) * p + wedge(d["s1"], d["q"]) * p1 + wedge(d["s2"], d["q"]) * p2
    P = PlecticStructure(exterior_derivative(theta))
    assert P.n == 2 and P.nondegenerate.status == "yes"
    with pytest.raises(NotHamiltonianError):
        hamiltonian_field_for(P, d["q"] * p)
    assert hamiltonian_field_for(P, d["q"] * s1) == FieldExpr.coordinate(M, "p1", -1)


def test_koszul_signs():
    assert [koszul_sign(k) for k in range(1, 6)] == [1, 1, -1, -1, 1]
    with pytest.raises(ValueError):
        koszul_sign(0)


def test_unary_and_binary_brackets():
    ox, oy = Observable.hamiltonian(SYMP, fn(x)), Observable.hamiltonian(SYMP, fn(y))
    assert multibracket(SYMP, [ox]).is_zero()
    assert multibracket(SYMP, [ox]).degree == 1
    b = multibracket(SYMP, [ox, oy])
    assert b.degree == 0 and b.field.is_zero()
    assert b.form.as_function() == 1
    assert multibracket(SYMP, [oy, ox]) == b.scale(-1)


def test_low_degree_differential():
    P = vol3()
    X, Y, Z = R3.gens()
    f = Observable.low(P, -1, fn(X * Y))
    out = multibracket(P, [f])
    assert out.degree == 0 and out.field.is_zero()
    assert out.form == exterior_derivative(fn(X * Y))


def test_ternary_bracket_on_volume_form():
    P = vol3()
    X, Y, Z = R3.gens()
    d = {v: FormExpr.differential(R3, v) for v in R3.variables}
    obs = [Observable.hamiltonian(P, a) for a in (d["z"] * -Y, d["z"] * X, d["y"] * -X)]
    assert [o.field for o in obs] == [FieldExpr.coordinate(R3, v) for v in R3.variables]
    t = multibracket(P, obs)
    assert t.degree == -1
    assert t.form.as_function() == koszul_sign(3)


def test_brackets_beyond_n_plus_one_vanish():
    ox = Observable.hamiltonian(SYMP, fn(x))
    assert multibracket(SYMP, [ox, ox, ox]).is_zero()


def test_leibniz_bracket_differs_by_exact_term():
    ox, oy = Observable.hamiltonian(SYMP, fn(x * y)), Observable.hamiltonian(SYMP, fn(y**2))
    lb = leibniz_bracket(SYMP, ox, oy)
    b = multibracket(SYMP, [ox, oy])
    assert lb.field == b.field
    diff = lb.form - b.form
    # L_u beta - iota_v iota_u omega = d(iota_u beta) for n = 1 forms of degree 0
    assert diff == exterior_derivative(interior_product(ox.field, oy.form))


def test_observable_degree_checks():
    with pytest.raises(DegreeError):
        Observable(1, 0, dx)
    with pytest.raises(DegreeError):
        Observable(2, -1, FormExpr.function(x), ex)


def test_unshuffles_count():
    assert len(list(unshuffles(4, 2))) == 6
    assert all(p[:2] == tuple(sorted(p[:2])) and p[2:] == tuple(sorted(p[2:])) for p in unshuffles(4, 2))


def test_graded_antisymmetry_sign():
    assert graded_antisymmetry_sign([0, 0], [1, 0]) == -1
    assert graded_antisymmetry_sign([-1, -1], [1, 0]) == 1


def test_jacobi_holds_in_plane():
    sample = [Observable.hamiltonian(SYMP, fn(p)) for p in (x, y, x * y, x**2, x**2 * y)]
    rep = check_higher_jacobi(SYMP, sample, 3)
    assert rep.holds and rep.checked == 3 * 20


def test_jacobi_holds_on_volume_form():
    P = vol3()
    X, Y, Z = R3.gens()
    d = {v: FormExpr.differential(R3, v) for v in R3.variables}
    sample = [Observable.hamiltonian(P, d["y"] * (Y * Z)), Observable.hamiltonian(P, d["x"] * Z),
              Observable.hamiltonian(P, d["z"] * (X**2)), Observable.low(P, -1, fn(X * Y))]
    rep = check_higher_jacobi(P, sample, 4, trials=5)
    assert rep.holds
    with pytest.raises(ValueError):
        check_higher_jacobi(P, sample, 5)


def test_jacobi_detects_wrong_sign(monkeypatch):
    P = vol3()
    X, Y, Z = R3.gens()
    d = {v: FormExpr.differential(R3, v) for v in R3.variables}
    sample = [Observable.hamiltonian(P, d["y"] * (Y * Z)), Observable.hamiltonian(P, d["x"] * Z),
              Observable.hamiltonian(P, d["y"] * X**2)]
    orig = plectic.koszul_sign
    monkeypatch.setattr(plectic, "koszul_sign", lambda k: -orig(k) if k == 3 else orig(k))
    assert not check_higher_jacobi(P, sample, 3, trials=5).holds


def test_residual_zero_for_arity_one():
    ox = Observable.hamiltonian(SYMP, fn(x))
    assert jacobi_residual(SYMP, [ox]).is_zero()
