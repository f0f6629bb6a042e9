"""Engine-level constructions of the worked examples, without the DSL."""

from msr.cartan import FieldExpr, FormExpr, exterior_derivative, interior_product, wedge
from msr.groebner import Ideal
from msr.plectic import Observable, PlecticStructure
from msr.polyalg import Chart
from msr.reduction import ConstraintAction
from msr.symmetry import LieAlgebraAction, MomentMap, level_set_ideal, moment_from_potential, prolong_field


def cross2d():
    R2 = Chart("R2", ("x", "y"))
    x, y = R2.gens()
    dx, dy = FormExpr.differential(R2, "x"), FormExpr.differential(R2, "y")
    P = PlecticStructure(wedge(dx, dy))
    xi = FieldExpr.coordinate(R2, "x", x) + FieldExpr.coordinate(R2, "y", y)
    act = LieAlgebraAction(R2, [xi])
    mom = MomentMap(act, [interior_product(xi, dy * x)])
    return ConstraintAction(P, Ideal(R2, [x * y]), act, mom)


def volume_r3():
    R3 = Chart("R3", ("x", "y", "z"))
    d = [FormExpr.differential(R3, v) for v in R3.variables]
    P = PlecticStructure(wedge(wedge(d[0], d[1]), d[2]))
    act = LieAlgebraAction(R3, [FieldExpr.coordinate(R3, "y")])
    return ConstraintAction(P, Ideal(R3, [R3.var("z")]), act)


class Scalar2d:
    def __init__(self, override=False):
        M = Chart("M", ("s1", "s2", "q", "p", "p1", "p2"))
        self.M = M
        self.base = M.subchart(("s1", "s2", "q"), "E")
        s1, s2, q, p, p1, p2 = M.gens()
        D = {v: FormExpr.differential(M, v) for v in M.variables}
        self.theta = wedge(D["s1"], D["s2"]) * p + wedge(D["s1"], D["q"]) * p1 + wedge(D["s2"], D["q"]) * p2
        self.P = PlecticStructure(exterior_derivative(self.theta))
        self.V = self.prolong("q", self.base.var("q") ** 2)
        act = LieAlgebraAction(M, [self.V])
        mom = moment_from_potential(self.P, act, self.theta)
        ideal = Ideal(M, [q * p1, q * p2]) if override else level_set_ideal(mom)
        self.ca = ConstraintAction(self.P, ideal, act, mom)

    def prolong(self, var, coeff):
        return prolong_field(self.base, self.M, self.theta, FieldExpr.coordinate(self.base, var, coeff))

    def observable(self, var, coeff):
        v = self.prolong(var, coeff)
        return Observable.pair(self.P, v, interior_product(v, self.theta))
