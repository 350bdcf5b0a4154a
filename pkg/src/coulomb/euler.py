"""Factored index Euler classes e+(eta), e-(eta) in four flavors.

``comm``  additive, commutative:   (mu + <nu|tau>)^|k|
``h``     additive, h-deformed:    prod_j (mu + <nu|tau> -+ j h)
``k``     multiplicative:          (1 - (m x^nu)^-1)^|k|
``q``     multiplicative, q-deformed: prod_j (1 - q^(+-j) (m x^nu)^-1)

Here ``k = <nu|eta>``.  The deformed factors are normal ordered with the
winding monomial on the left, so that conjugation sends ``z^eta p`` to
``z^eta * e+(eta)/e-(eta) * p``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .groups import GroupData, GroupError, pairing
from .poly import FactoredClass, Poly, tau, xvar

FLAVORS = ("comm", "h", "k", "q")
_ALIASES = {"commutative": "comm", "add": "comm", "h-deformed": "h", "q-deformed": "q", "mult": "k"}

MU = Poly.var("mu")
H = Poly.var("h")
M = Poly.var("m")
Q = Poly.var("q")


def canonical_flavor(flavor: str) -> str:
    flavor = _ALIASES.get(flavor, flavor)
    if flavor not in FLAVORS:
        raise ValueError(f"unknown flavor {flavor!r}; expected one of {FLAVORS}")
    return flavor


def weight_form(nu, mu=None) -> Poly:
    """The affine form ``mu + <nu|tau>``; ``mu`` may be replaced by a value."""
    out = MU if mu is None else Poly.coerce(mu)
    for i, c in enumerate(nu):
        if c:
            out = out + Poly.monomial({tau(i): 1}, c)
    return out


def weight_character(nu) -> Poly:
    """The monomial ``m x^nu``."""
    exps = {"m": 1}
    exps.update({xvar(i): c for i, c in enumerate(nu) if c})
    return Poly.monomial(exps)


@dataclass(frozen=True)
class EulerPair:
    eplus: FactoredClass
    eminus: FactoredClass
    eta: tuple
    flavor: str

    def ratio_parts(self) -> tuple[Poly, FactoredClass]:
        return self.eplus.expand(), self.eminus


def euler_pair(G: GroupData, eta, flavor: str = "comm", mu=None) -> EulerPair:
    """Factored Euler classes of the index bundle at winding ``eta``.

    ``mu`` optionally specializes the mass (e.g. 0, or ``h/2`` for the
    massless quantized branch); it is ignored by the multiplicative flavors.
    """
    flavor = canonical_flavor(flavor)
    eta = tuple(int(e) for e in eta)
    if len(eta) != G.rank:
        raise GroupError(f"cocharacter {eta} does not have rank {G.rank}")
    if flavor == "q" and G.pi1_torsion != 1:
        raise GroupError("q-flavor requires torsion-free pi_1")
    plus: list = []
    minus: list = []
    for nu in G.weights:
        k = pairing(nu, eta)
        if k == 0:
            continue
        if flavor == "comm":
            (plus if k > 0 else minus).append((weight_form(nu, mu), abs(k)))
        elif flavor == "h":
            w = weight_form(nu, mu)
            if k > 0:
                plus.extend((w - H * j, 1) for j in range(1, k + 1))
            else:
                minus.extend((w + H * j, 1) for j in range(0, -k))
        elif flavor == "k":
            inv = weight_character(nu).inverse_monomial()
            (plus if k > 0 else minus).append((1 - inv, abs(k)))
        else:
            inv = weight_character(nu).inverse_monomial()
            if k > 0:
                plus.extend((1 - Q**j * inv, 1) for j in range(1, k + 1))
            else:
                minus.extend((1 - Q ** (-j) * inv, 1) for j in range(0, -k))
    return EulerPair(FactoredClass(plus), FactoredClass(minus), eta, flavor)


def left_placed(factor: FactoredClass, eta, flavor: str = "h") -> FactoredClass:
    """Rewrite a normal-ordered factor ``z^eta c`` as ``c' z^eta``.

    In the shift algebra ``c(tau) z^eta = z^eta c(tau - eta h)``, so
    ``c'(tau) = c(tau + eta h)``; in the q-torus ``x^nu z^eta = z^eta q^-<nu|eta> x^nu``.
    """
    flavor = canonical_flavor(flavor)
    eta = tuple(eta)
    if flavor == "h":
        return factor.subs({tau(i): Poly.var(tau(i)) + H * e for i, e in enumerate(eta) if e})
    if flavor == "q":
        return FactoredClass(((q_shift(f, eta, +1), e) for f, e in factor.factors), q_shift(factor.unit, eta, +1))
    return factor


def q_shift(p: Poly, eta, sign: int = -1) -> Poly:
    """Multiply each ``x^nu`` by ``q^(sign <nu|eta>)``."""
    eta = tuple(eta)
    xs = {xvar(i): e for i, e in enumerate(eta)}

    def fn(mono, c):
        s = sum(xs.get(v, 0) * e for v, e in mono)
        if not s:
            return mono, c
        d = dict(mono)
        d["q"] = d.get("q", 0) + sign * s
        return Poly.monomial(d).leading_monomial(), c

    return p.map_monomials(fn)
