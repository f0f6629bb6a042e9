"""Exact reduction of multisymplectic observables over polynomial charts.

Coefficients live in Q[x1..xm]; forms and vector fields are finite sums
with polynomial coefficients, and every membership verdict comes with a
certificate that the engine can replay.
"""

from .cartan import (FieldExpr, FormExpr, contract, exterior_derivative, interior_product, lie_bracket,
                     lie_derivative, restrict, wedge)
from .errors import MsrError
from .groebner import Ideal, SubmoduleBasis, groebner_basis, ideal_contains, module_contains
from .kernels import BACKEND
from .plectic import Observable, PlecticStructure, check_higher_jacobi, multibracket
from .polyalg import Chart, Poly
from .reduction import ConstraintAction, check_closure, check_poisson_descent
from .symmetry import LieAlgebraAction, MomentMap, check_covariant_moment_map, prolong_field

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Chart", "ConstraintAction", "FieldExpr", "FormExpr", "Ideal", "LieAlgebraAction",
    "MomentMap", "MsrError", "Observable", "PlecticStructure", "Poly", "SubmoduleBasis",
    "check_closure", "check_covariant_moment_map", "check_higher_jacobi", "check_poisson_descent",
    "contract", "exterior_derivative", "groebner_basis", "ideal_contains", "interior_product",
    "lie_bracket", "lie_derivative", "module_contains", "multibracket", "prolong_field", "restrict",
    "wedge",
]
