import pytest

from msr.cartan import FieldExpr, FormExpr, exterior_derivative, interior_product, lie_derivative, wedge
from msr.errors import NotAPotentialError, NotInvariantError, NotProjectableError, UnsupportedError
from msr.plectic import PlecticStructure
from msr.polyalg import Chart
from msr.symmetry import (LieAlgebraAction, MomentMap, check_covariant_moment_map, level_set_ideal,
                          moment_from_potential, prolong_field, verify_action)

R3 = Chart("R3", ("x", "y", "z"))
X, Y, Z = R3.gens()
E = {v: FieldExpr.coordinate(R3, v) for v in R3.variables}
ROT = [E["z"] * Y - E["y"] * Z, E["x"] * Z - E["z"] * X, E["y"] * X - E["x"] * Y]

M = Chart("M", ("s1", "s2", "q", "p", "p1", "p2"))
BASE = M.subchart(("s1", "s2", "q"), "E")
s1, s2, q, p, p1, p2 = M.gens()
D = {v: FormExpr.differential(M, v) for v in M.variables}
THETA = wedge(D["s1"], D["s2"]) * p + wedge(D["s1"], D["q"]) * p1 + wedge(D["s2"], D["q"]) * p2
P45 = PlecticStructure(exterior_derivative(THETA))


def base_field(var, coeff):
    return FieldExpr.coordinate(BASE, var, coeff)


def test_rotation_algebra():
    c = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        c[i][j][k] = -1
        c[j][i][k] = 1
    assert verify_action(LieAlgebraAction(R3, ROT, c)).ok


def test_wrong_structure_constants_reported():
    rep = verify_action(LieAlgebraAction(R3, ROT))
    assert not rep.ok
    kinds = {v["kind"] for v in rep.violations}
    assert kinds == {"bracket"}
    a = LieAlgebraAction(R3, [E["x"], E["x"] * X])
    bad = verify_action(a).violations[0]
    assert bad["bracket"] == "e(x)" and bad["residual"] == "e(x)"


def test_non_antisymmetric_constants():
    c = [[[0, 0], [1, 0]], [[0, 0], [0, 0]]]
    rep = verify_action(LieAlgebraAction(R3, [E["x"], E["y"]], c))
    assert any(v["kind"] == "antisymmetry" for v in rep.violations)


def test_structure_constant_shape_checked():
    with pytest.raises(ValueError):
        LieAlgebraAction(R3, [E["x"]], [[[0, 0]]])


def test_prolongations():
    qq = BASE.var("q")
    V = prolong_field(BASE, M, THETA, base_field("q", qq**2))
    e = {v: FieldExpr.coordinate(M, v) for v in M.variables}
    assert V == e["q"] * q**2 - (e["p1"] * p1 + e["p2"] * p2) * (2 * q)
    assert prolong_field(BASE, M, THETA, base_field("s1", 1)) == e["s1"]
    assert prolong_field(BASE, M, THETA, base_field("q", qq)) == e["q"] * q - e["p1"] * p1 - e["p2"] * p2
    for w in (base_field("q", qq**3), base_field("s1", qq), base_field("q", BASE.var("s1"))):
        assert lie_derivative(prolong_field(BASE, M, THETA, w), THETA).is_zero()


def test_projectability_and_canonical_form_checks():
    with pytest.raises(NotProjectableError):
        prolong_field(BASE, M, THETA, base_field("s1", BASE.var("q")), sigma_vars=("s1", "s2"))
    with pytest.raises(UnsupportedError):
        prolong_field(BASE, M, THETA + wedge(D["p"], D["q"]), base_field("q", 1))


def test_moment_from_potential():
    V = prolong_field(BASE, M, THETA, base_field("q", BASE.var("q") ** 2))
    act = LieAlgebraAction(M, [V])
    mom = moment_from_potential(P45, act, THETA)
    assert mom.components[0] == -(D["s1"] * p1 + D["s2"] * p2) * q**2
    rep = check_covariant_moment_map(P45, mom)
    assert rep.ok_i and rep.ok_ii and rep.ok
    gb = level_set_ideal(mom).groebner_basis()
    assert set(gb) == {q**2 * p1, q**2 * p2}


def test_moment_from_potential_errors():
    V = prolong_field(BASE, M, THETA, base_field("q", 1))
    act = LieAlgebraAction(M, [V])
    with pytest.raises(NotAPotentialError):
        moment_from_potential(P45, act, THETA * 2)
    dil = LieAlgebraAction(M, [FieldExpr.coordinate(M, "p", p)])
    with pytest.raises(NotInvariantError) as ei:
        moment_from_potential(P45, dil, THETA)
    assert ei.value.index == 0


def test_moment_map_identities_in_the_plane():
    R2 = Chart("R2", ("x", "y"))
    x, y = R2.gens()
    dx, dy = FormExpr.differential(R2, "x"), FormExpr.differential(R2, "y")
    P = PlecticStructure(wedge(dx, dy))
    rot = FieldExpr.coordinate(R2, "y", x) - FieldExpr.coordinate(R2, "x", y)
    act = LieAlgebraAction(R2, [rot])
    assert check_covariant_moment_map(P, MomentMap(act, [FormExpr.function((x**2 + y**2) / 2)])).ok
    wrong = check_covariant_moment_map(P, MomentMap(act, [FormExpr.function(-(x**2 + y**2) / 2)]))
    assert not wrong.ok_i
    # the radial field scales omega, so no moment map exists for it
    rad = LieAlgebraAction(R2, [FieldExpr.coordinate(R2, "x", x) + FieldExpr.coordinate(R2, "y", y)])
    theta = dy * x
    rep = check_covariant_moment_map(P, MomentMap(rad, [interior_product(rad.fields[0], theta)]))
    assert not rep.ok_i


def test_level_must_be_closed():
    act = LieAlgebraAction(R3, [E["x"]])
    with pytest.raises(ValueError):
        MomentMap(act, [FormExpr.differential(R3, "y")], level=[FormExpr.differential(R3, "y") * X])
    with pytest.raises(ValueError):
        MomentMap(act, [])
