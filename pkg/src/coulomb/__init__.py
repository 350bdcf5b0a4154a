"""Coulomb branches of gauge theories as surviving subrings, computed exactly."""

from .commutative import (
    abelianization_check,
    graded_dimension,
    graded_generator,
    su2_presentation,
    su2_zero_membership,
    survives,
    translate,
    weyl_symmetrize,
)
from .euler import euler_pair
from .graded import GradedElement, RationalGraded
from .groups import GroupData, reduce_by_roots, su2, torus, u1, weyl_act
from .poly import FactoredClass, ParseError, Poly, parse_poly, poly_divide
from .quantum import (
    QTorusElement,
    ShiftElement,
    gamma_conjugate,
    nc_power_identity_check,
    nc_survives,
    q_gamma_conjugate,
    q_survives,
)

__version__ = "0.1.0"

__all__ = [
    "FactoredClass",
    "GradedElement",
    "GroupData",
    "ParseError",
    "Poly",
    "QTorusElement",
    "RationalGraded",
    "ShiftElement",
    "abelianization_check",
    "euler_pair",
    "gamma_conjugate",
    "graded_dimension",
    "graded_generator",
    "nc_power_identity_check",
    "nc_survives",
    "parse_poly",
    "poly_divide",
    "q_gamma_conjugate",
    "q_survives",
    "reduce_by_roots",
    "su2",
    "su2_presentation",
    "su2_zero_membership",
    "survives",
    "torus",
    "translate",
    "u1",
    "weyl_act",
    "weyl_symmetrize",
]
