"""Noncommutative Coulomb branches: shift algebras and the q-torus.

Elements are normal ordered, ``sum z^eta p_eta`` with winding monomials on
the left.  In the shift algebra ``z tau = (tau + h) z``, so a coefficient
moved right past ``z^beta`` becomes ``p(tau - beta h)``.  In the q-torus
``x^nu z^beta = z^beta q^-<nu|beta> x^nu``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .commutative import SurvivalResult, check_divisibility
from .euler import H, euler_pair, left_placed, q_shift
from .graded import ADDITIVE, MULTIPLICATIVE, GradedElement, RationalGraded
from .groups import GroupData, GroupError
from .poly import FactoredClass, Poly, tau

MASSLESS_MU = H * Fraction(1, 2)


def _tau_shift(eta) -> dict:
    return {tau(i): Poly.var(tau(i)) - H * b for i, b in enumerate(eta) if b}


class ShiftElement(GradedElement):
    """Normal-ordered element of the shift algebra ``C[mu, h]<z^+-1, tau>``."""

    __slots__ = ()

    def __init__(self, coeffs=None, rank: int = 1, den=None, flavor: str = ADDITIVE):
        super().__init__(coeffs, rank, den, ADDITIVE)
        if self.has_den():
            raise ValueError("shift-algebra elements have no tau denominators")

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            return super().__mul__(other)
        if not isinstance(other, ShiftElement):
            return NotImplemented
        self._check(other)
        out: dict = {}
        for b, q in other.coeffs.items():
            shift = _tau_shift(b)
            for a, p in self.coeffs.items():
                eta = tuple(x + y for x, y in zip(a, b))
                out[eta] = out.get(eta, Poly()) + (p.subs(shift) if shift else p) * q
        return self._new(out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            return ShiftElement.scalar(Poly.coerce(other), self.rank) * self
        return NotImplemented

    def at_h_zero(self) -> GradedElement:
        return GradedElement({eta: p.subs({"h": 0}) for eta, p in self.coeffs.items()}, rank=self.rank)


class QTorusElement(GradedElement):
    """Normal-ordered element of the q-torus ``C[q^+-1, m^+-1]<x^+-1, z^+-1>``."""

    __slots__ = ()

    def __init__(self, coeffs=None, rank: int = 1, den=None, flavor: str = MULTIPLICATIVE):
        super().__init__(coeffs, rank, den, MULTIPLICATIVE)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            return super().__mul__(other)
        if not isinstance(other, QTorusElement):
            return NotImplemented
        self._check(other)
        out: dict = {}
        for b, q in other.coeffs.items():
            for a, p in self.coeffs.items():
                eta = tuple(x + y for x, y in zip(a, b))
                out[eta] = out.get(eta, Poly()) + q_shift(p, b, -1) * q
        return self._new(out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            return QTorusElement.scalar(Poly.coerce(other), self.rank) * self
        return NotImplemented


def nc_multiply(a: ShiftElement, b: ShiftElement) -> ShiftElement:
    return a * b


def q_multiply(a: QTorusElement, b: QTorusElement) -> QTorusElement:
    return a * b


def _check(a: GradedElement, G: GroupData) -> None:
    if a.rank != G.rank:
        raise GroupError(f"element has rank {a.rank} but the group has rank {G.rank}")


def _conjugate(a: GradedElement, G: GroupData, flavor: str, mu) -> RationalGraded:
    _check(a, G)
    parts = {}
    for eta, p in a.coeffs.items():
        pair = euler_pair(G, eta, flavor, mu)
        parts[eta] = (p * pair.eplus.expand(), pair.eminus)
    return RationalGraded(parts, a.rank)


def gamma_conjugate(a: ShiftElement, G: GroupData, mu=None) -> RationalGraded:
    """Conjugate by the inverse Gamma class: ``z^eta p -> z^eta e+(eta) p / e-(eta)``."""
    return _conjugate(a, G, "h", mu)


def nc_survives(a: ShiftElement, G: GroupData, mu=None) -> SurvivalResult:
    _check(a, G)
    return check_divisibility(a, lambda eta: euler_pair(G, eta, "h", mu).eminus)


def q_gamma_conjugate(a: QTorusElement, G: GroupData) -> RationalGraded:
    """Conjugate by the inverse Jackson Gamma class, with q-deformed Euler factors."""
    return _conjugate(a, G, "q", None)


def q_survives(a: QTorusElement, G: GroupData) -> SurvivalResult:
    _check(a, G)
    return check_divisibility(a, lambda eta: euler_pair(G, eta, "q").eminus)


# ----------------------------------------------------------------------
# products of conjugated (rational) elements
# ----------------------------------------------------------------------


def _shift_parts(num: Poly, den: FactoredClass, eta, flavor: str):
    if flavor == "q":
        return q_shift(num, eta, -1), FactoredClass(((q_shift(f, eta, -1), e) for f, e in den.factors), q_shift(den.unit, eta, -1))
    shift = _tau_shift(eta)
    if not shift:
        return num, den
    return num.subs(shift), den.subs(shift)


def rational_add(a: RationalGraded, b: RationalGraded) -> RationalGraded:
    parts = dict(a.parts)
    for eta, (n2, d2) in b.parts.items():
        if eta in parts:
            n1, d1 = parts[eta]
            parts[eta] = (n1 * d2.expand() + n2 * d1.expand(), d1 * d2)
        else:
            parts[eta] = (n2, d2)
    return RationalGraded(parts, a.rank)


def rational_product(a: RationalGraded, b: RationalGraded, flavor: str = "h") -> RationalGraded:
    """Normal-ordered product of rational graded elements in the shift algebra or q-torus."""
    out = RationalGraded({}, a.rank)
    for beta, (n2, d2) in b.parts.items():
        for alpha, (n1, d1) in a.parts.items():
            n1s, d1s = _shift_parts(n1, d1, beta, flavor)
            eta = tuple(x + y for x, y in zip(alpha, beta))
            out = rational_add(out, RationalGraded({eta: (n1s * n2, d1s * d2)}, a.rank))
    return out


# ----------------------------------------------------------------------
# identities
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class PowerIdentity:
    n: int
    minus_holds: bool
    plus_holds: bool

    @property
    def holds(self) -> bool:
        return self.minus_holds and self.plus_holds


def nc_power_identity_check(G: GroupData, n: int, mu=None) -> PowerIdentity:
    """Check ``[z e-(1)]^n = z^n e-(n)`` and ``[e+(1) z]^n = e+(n) z^n``.

    The second identity places ``e+`` to the left of the winding monomial;
    its normal-ordered value is ``left_placed`` applied to the factor.
    """
    if G.rank != 1:
        raise GroupError("power identities are stated in rank one")
    if n < 1:
        raise ValueError("n must be positive")
    one = euler_pair(G, (1,), "h", mu)
    big = euler_pair(G, (n,), "h", mu)
    z = ShiftElement.monomial((1,))
    zn = ShiftElement.monomial((n,))
    lhs_minus = (z * one.eminus.expand()) ** n
    rhs_minus = zn * big.eminus.expand()
    lhs_plus = (left_placed(one.eplus, (1,)).expand() * z) ** n
    rhs_plus = left_placed(big.eplus, (n,)).expand() * zn
    return PowerIdentity(n, lhs_minus == rhs_minus, lhs_plus == rhs_plus)


def nc_generators(G: GroupData, mu=None) -> tuple[ShiftElement, ShiftElement]:
    """``z e-(1)`` and ``z^-1 e+(1)``.

    In the second generator ``e+(1)`` is the factor in the form that sits to
    the left of ``z``; with it ``z^-1 e+(1)`` equals ``z^-1 e-(-1)``.
    """
    if G.rank != 1:
        raise GroupError("rank-one generators")
    one = euler_pair(G, (1,), "h", mu)
    up = ShiftElement.monomial((1,), one.eminus.expand())
    down = ShiftElement.monomial((-1,), left_placed(one.eplus, (1,)).expand())
    return up, down


def massless_report(G: GroupData) -> dict:
    """Conjugation of each winding generator at ``mu = h/2`` (informational)."""
    out = {}
    for i in range(G.rank):
        eta = tuple(int(i == j) for j in range(G.rank))
        conj = gamma_conjugate(ShiftElement.monomial(eta), G, mu=MASSLESS_MU)
        num, den = conj.parts.get(eta, (Poly(), FactoredClass()))
        ratio = num if den.is_trivial() else None
        out[eta] = {
            "conjugate": str(conj),
            "sign_type": ratio is not None and ratio.is_constant() and ratio.constant_value() == -1,
        }
    return out
