"""Commutative Coulomb branches as surviving subrings.

An element ``f = sum z^eta p_eta`` of the pure-gauge ring survives when its
translate ``sum z^eta p_eta e+(eta)/e-(eta)`` is again regular, i.e. when
``e-(eta)`` divides ``p_eta`` for every winding in the support.

For SU(2) the pure-gauge ring is the Weyl cover ring
``B = C[mu, tau, u, (1 + tau u)^-1]`` with ``u = (z - 1)/tau``; elements of
``B`` carry a monomial ``tau`` denominator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb
from typing import Sequence

from . import linalg
from .euler import MU, euler_pair
from .graded import ADDITIVE, MULTIPLICATIVE, GradedElement, RationalGraded
from .groups import (
    DEFAULT_GROUP_BOUND,
    GroupData,
    GroupError,
    act_on_weight,
    identity,
    inverse,
    pairing,
    reduce_by_roots,
    su2,
    weyl_act,
)
from .poly import ONE, FactoredClass, Poly, failing_factor, factored_divides, poly_divide, tau

TAU = Poly.var("t1")
U = Poly.var("u")

HOMOLOGICAL_NOTE = "total degree in (mu, tau); homological degree is twice this (deg mu = deg tau = 2)"


class PresentationError(ValueError):
    pass


def _flavor_for(f: GradedElement, flavor: str | None) -> str:
    if flavor is not None:
        return flavor
    return "k" if f.flavor == MULTIPLICATIVE else "comm"


def _check_rank(f: GradedElement, G: GroupData) -> None:
    if f.rank != G.rank:
        raise GroupError(f"element has rank {f.rank} but the group has rank {G.rank}")


# ----------------------------------------------------------------------
# translation and survival
# ----------------------------------------------------------------------


def translate(f: GradedElement, G: GroupData, flavor: str | None = None, mu=None) -> RationalGraded:
    """Multiply the coefficient at each ``eta`` by ``e+(eta)/e-(eta)``."""
    _check_rank(f, G)
    flavor = _flavor_for(f, flavor)
    den_tau = FactoredClass([(Poly.var(tau(i)), d) for i, d in enumerate(f.den) if d])
    parts = {}
    for eta, p in f.coeffs.items():
        pair = euler_pair(G, eta, flavor, mu)
        parts[eta] = (p * pair.eplus.expand(), pair.eminus * den_tau)
    return RationalGraded(parts, f.rank)


@dataclass(frozen=True)
class Witness:
    """Per-winding survival evidence: the quotient, or the first failing form."""

    eta: tuple
    divisor: FactoredClass
    quotient: Poly | None = None
    failing: tuple | None = None

    @property
    def ok(self) -> bool:
        return self.quotient is not None


@dataclass(frozen=True)
class SurvivalResult:
    ok: bool
    witnesses: tuple = ()

    def __bool__(self) -> bool:
        return self.ok

    def failures(self) -> list:
        return [w for w in self.witnesses if not w.ok]


def check_divisibility(f: GradedElement, divisors) -> SurvivalResult:
    """Survival test given ``eta -> e-(eta)``; shared by every flavor."""
    witnesses = []
    for eta in f.support():
        d = divisors(eta)
        p = f.coeffs[eta]
        q = factored_divides(d, p)
        if q is None:
            witnesses.append(Witness(eta, d, None, failing_factor(d, p)))
        else:
            witnesses.append(Witness(eta, d, q))
    return SurvivalResult(all(w.ok for w in witnesses), tuple(witnesses))


def survives(f: GradedElement, G: GroupData, flavor: str | None = None, mu=None) -> SurvivalResult:
    """True iff ``e-(eta)`` divides ``p_eta`` for every ``eta`` in the support.

    The multiplicative flavor tests divisibility up to monomial units.
    """
    _check_rank(f, G)
    flavor = _flavor_for(f, flavor)
    return check_divisibility(f, lambda eta: euler_pair(G, eta, flavor, mu).eminus)


def graded_generator(eta, G: GroupData, flavor: str = "comm", mu=None) -> GradedElement:
    """``z^eta e-(eta)``, the generator of the winding-``eta`` piece over the torus."""
    eta = tuple(int(e) for e in ((eta,) if isinstance(eta, int) else eta))
    pair = euler_pair(G, eta, flavor, mu)
    kind = MULTIPLICATIVE if pair.flavor in ("k", "q") else ADDITIVE
    return GradedElement({eta: pair.eminus.expand()}, rank=G.rank, flavor=kind)


def weyl_symmetrize(f: GradedElement, G: GroupData, bound: int = DEFAULT_GROUP_BOUND) -> GradedElement:
    """Unnormalized orbit sum of ``f`` over the Weyl group."""
    if not G.weyl:
        raise GroupError("group has no Weyl generators")
    _check_rank(f, G)
    out = None
    for g in G.elements(bound):
        term = weyl_act(g, f)
        out = term if out is None else out + term
    return out


# ----------------------------------------------------------------------
# rank one: the Weyl cover ring
# ----------------------------------------------------------------------


def _cover_numerator(f: GradedElement) -> Poly:
    """``z^n N(z)`` with ``z = 1 + tau u`` substituted, as a polynomial in mu, t1, u."""
    lo = min(eta[0] for eta in f.coeffs)
    shift = -lo
    base = ONE + TAU * U
    powers = {}
    out = Poly()
    for (e,), p in f.coeffs.items():
        k = e + shift
        if k not in powers:
            powers[k] = base**k
        out = out + p * powers[k]
    return out


def su2_zero_membership(f: GradedElement, max_den: int | None = None) -> bool:
    """Membership of a rank-one element with ``tau`` denominator in the cover ring.

    After ``z = 1 + tau u`` the element is a polynomial in mu, tau, u divided
    by ``tau^K`` times a power of the unit ``1 + tau u``; it is a member iff
    ``tau^K`` divides that polynomial.
    """
    if f.rank != 1:
        raise ValueError("membership in the Weyl cover ring is implemented in rank one")
    if f.flavor != ADDITIVE:
        raise ValueError("membership test needs the additive flavor")
    k = f.den[0]
    if max_den is not None and k > max_den:
        raise ValueError(f"element has tau-denominator power {k}, above the declared {max_den}")
    if f.is_zero() or k == 0:
        return True
    num = _cover_numerator(f)
    return num.is_zero() or num.min_degree("t1") >= k


def survives_cover(f: GradedElement, G: GroupData) -> bool:
    """Survival in the rank-one cover ring: ``f`` and its translate both lie in ``B``."""
    if G.rank != 1:
        raise GroupError("cover-ring survival is implemented in rank one")
    if not su2_zero_membership(f):
        return False
    parts = {}
    for eta, p in f.coeffs.items():
        pair = euler_pair(G, eta)
        q = factored_divides(pair.eminus, p)
        if q is None:
            return False
        parts[eta] = q * pair.eplus.expand()
    return su2_zero_membership(GradedElement(parts, rank=1, den=f.den))


def divide_by_tau(f: GradedElement, k: int = 1) -> GradedElement:
    den = (f.den[0] + k,) + tuple(f.den[1:])
    return type(f)(f.coeffs, rank=f.rank, den=den, flavor=f.flavor)


@dataclass(frozen=True)
class Rank1Presentation:
    N: int
    phi_plus: FactoredClass
    phi_minus: FactoredClass
    x: GradedElement
    y: GradedElement
    w: GradedElement
    constant: Poly  # (mu^2N - phi+ phi-) / tau^2
    residues: tuple  # (x - y - tau w, xy - constant - mu^N w) as polynomials

    @property
    def holds(self) -> bool:
        return all(r.is_zero() for r in self.residues)

    def relations(self) -> list[str]:
        return ["x - y = t1*w", f"x*y = {self.constant} + {MU ** self.N}*w"]


def su2_presentation(G: GroupData) -> Rank1Presentation:
    """Generators ``x, y, w`` and relations for SU(2) with weights ``V``."""
    if G.rank != 1:
        raise PresentationError("SU(2) presentation needs rank one")
    weights = sorted(nu[0] for nu in G.weights)
    if weights != sorted(-w for w in weights):
        raise PresentationError("weight multiset is not symmetric under negation")
    positive = [w for w in weights if w > 0]
    N = sum(positive)
    if N == 0:
        raise PresentationError("N = 0: the zero representation has no such presentation; use su2_zero_membership")
    phi_p = FactoredClass([(MU + TAU * w, w) for w in positive])
    phi_m = FactoredClass([(MU - TAU * w, w) for w in positive])
    mu_n = MU**N
    x = GradedElement({(1,): phi_m.expand(), (0,): -mu_n}, rank=1, den=(1,))
    y = GradedElement({(0,): mu_n, (-1,): -phi_p.expand()}, rank=1, den=(1,))
    w = divide_by_tau(x - y)
    constant = poly_divide(TAU**2, MU ** (2 * N) - phi_p.expand() * phi_m.expand())
    if constant is None:
        raise PresentationError("mu^2N - phi+ phi- is not divisible by tau^2")
    for name, g in (("x", x), ("y", y), ("w", w)):
        if not su2_zero_membership(g):
            raise PresentationError(f"generator {name} is not in the Weyl cover ring")
    r1 = x - y - w * TAU
    r2 = x * y - constant - w * mu_n
    return Rank1Presentation(N, phi_p, phi_m, x, y, w, constant, (r1.to_poly(), r2.to_poly()))


def massless_generators(N: int) -> list[GradedElement]:
    """The massless generators ``tau^(N-1)(z - (-1)^N/z)`` and ``tau^(N-2)(z + (-1)^N/z)``."""
    s = -1 if N % 2 else 1
    out = []
    for k, sign in ((N - 1, -s), (N - 2, s)):
        coeffs = {(1,): Poly.monomial({"t1": max(k, 0)}), (-1,): Poly.monomial({"t1": max(k, 0)}, sign)}
        out.append(GradedElement(coeffs, rank=1, den=(max(-k, 0),)))
    return out


def _homogeneous_degree(g: GradedElement) -> int:
    degs = {sum(e for _, e in mono) - g.den[0] for p in g.coeffs.values() for mono, _ in p.items()}
    if len(degs) != 1:
        raise ValueError(f"{g} is not homogeneous")
    return degs.pop()


def _tau_vector(g: GradedElement) -> dict:
    # homogeneous massless elements: one coefficient per winding
    return {eta[0]: p.leading_coefficient() for eta, p in g.coeffs.items()}


def _dim_in_filtration(vectors: list, index: dict, n: int) -> int:
    """``dim(span(vectors) & F_n)`` where ``F_n`` is support in ``[-n, n]``."""
    if not vectors:
        return 0
    rows = linalg.sparse_rows(vectors, index)
    outside = [i for k, i in index.items() if abs(k) > n]
    full = linalg.rank(rows, len(index))
    proj = linalg.rank([[r[i] for i in outside] for r in rows], len(outside)) if outside else 0
    return full - proj


@dataclass(frozen=True)
class SpanComparison:
    winding: int
    degree: int
    rank_a: int
    rank_b: int
    rank_union: int

    @property
    def equal(self) -> bool:
        return self.rank_a == self.rank_b == self.rank_union


def massless_span_check(pres: Rank1Presentation, max_degree: int = 6, winding_bound: int = 3, slack: int = 2) -> list:
    """Compare the massless spans of ``C[tau][x, y, w]`` and ``C[tau][a, b]``.

    For each winding filtration level ``n`` and degree ``d`` the ranks of
    both spans intersected with ``F_n`` are compared, together with their sum.
    """
    a = [g.subs({"mu": 0}) for g in (pres.x, pres.y, pres.w)]
    b = massless_generators(pres.N)
    t = GradedElement.scalar(TAU)
    out = []
    for n in range(winding_bound + 1):
        for d in range(max_degree + 1):
            va = _exact(a + [t], d, n + slack)
            vb = _exact(b + [t], d, n + slack)
            index = {k: i for i, k in enumerate(sorted({k for v in va + vb for k in v}))}
            out.append(
                SpanComparison(
                    n,
                    d,
                    _dim_in_filtration(va, index, n),
                    _dim_in_filtration(vb, index, n),
                    _dim_in_filtration(va + vb, index, n),
                )
            )
    return out


def _exact(gens: Sequence[GradedElement], degree: int, length: int) -> list:
    """Vectors of all words of length <= ``length`` times a power of tau, of exact degree."""
    tau_elt = gens[-1]
    core = gens[:-1]
    degs = [_homogeneous_degree(g) for g in core]
    out = []
    seen = {(): (GradedElement.scalar(ONE), 0)}
    frontier = dict(seen)
    for _ in range(length):
        nxt = {}
        for word, (elt, deg) in frontier.items():
            start = word[-1] if word else 0
            for i in range(start, len(core)):
                key = word + (i,)
                if key not in seen and key not in nxt:
                    nxt[key] = (elt * core[i], deg + degs[i])
        seen.update(nxt)
        frontier = nxt
    for elt, deg in seen.values():
        if deg <= degree and not elt.is_zero():
            out.append(_tau_vector(elt * tau_elt ** (degree - deg)))
    return out


# ----------------------------------------------------------------------
# graded dimensions
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class GradedDimension:
    """Dimensions of the winding-``eta`` piece by total degree in (mu, tau).

    ``exact[i]`` counts elements of degree exactly ``degrees[i]`` and
    ``cumulative[i]`` those of degree at most ``degrees[i]``.  For SU(2) the
    piece is the associated graded of the winding filtration, whose degrees
    may be negative because of ``tau`` denominators.
    """

    eta: tuple
    orbit: tuple
    degrees: tuple
    exact: tuple
    cumulative: tuple
    side: str
    mu_zero: bool = False
    note: str = HOMOLOGICAL_NOTE

    def at(self, d: int) -> int:
        return dict(zip(self.degrees, self.exact)).get(d, 0)

    def to_json(self) -> dict:
        return {
            "eta": list(self.eta),
            "orbit": [list(o) for o in self.orbit],
            "degrees": list(self.degrees),
            "exact": list(self.exact),
            "cumulative": list(self.cumulative),
            "side": self.side,
            "mu_zero": self.mu_zero,
            "note": self.note,
        }


def _monomials(nvars: int, degree: int):
    for combo in combinations_with_replacement(range(nvars), degree):
        exps = [0] * nvars
        for i in combo:
            exps[i] += 1
        yield tuple(exps)


def _invariant_count(stab: list, rank: int, degree: int) -> int:
    """Dimension of the stabilizer invariants in ``C[mu, tau]`` of exact degree."""
    if degree < 0:
        return 0
    if len(stab) <= 1:
        return comb(degree + rank, rank)
    names = ["mu"] + [tau(i) for i in range(rank)]
    images = []
    for g in stab:
        ginv = inverse(g)
        images.append(
            {
                tau(i): sum((Poly.monomial({tau(j): 1}, ginv[i][j]) for j in range(rank) if ginv[i][j]), Poly())
                for i in range(rank)
            }
        )
    vectors = []
    for exps in _monomials(rank + 1, degree):
        m = Poly.monomial(dict(zip(names, exps)))
        total = Poly()
        for img in images:
            total = total + m.subs(img)
        vectors.append({mono: c for mono, c in total.items()})
    index = {k: i for i, k in enumerate(sorted({k for v in vectors for k in v}, key=str))}
    return linalg.rank(linalg.sparse_rows(vectors, index), len(index))


def _torus_exact(G: GroupData, eta: tuple, d: int, invariant: bool) -> int:
    k = euler_pair(G, eta).eminus.degree()
    stab = G.stabilizer(eta) if invariant and G.weyl else [identity(G.rank)]
    return _invariant_count(stab, G.rank, d - k)


def _is_su2_like(G: GroupData) -> bool:
    return G.rank == 1 and G.roots is not None and sorted(G.roots) == [(-2,), (2,)] and ((-1,),) in G.weyl


def _as_list(p: Poly) -> list:
    """Univariate coefficients of a polynomial in t1 (mu already specialized)."""
    deg = max(p.degree("t1"), 0)
    out = [Fraction(0)] * (deg + 1)
    for mono, c in p.items():
        out[dict(mono).get("t1", 0)] += c
    return out


def _lin_mul(lin: list, fixed: list) -> list:
    if not lin:
        return []
    out = [dict() for _ in range(len(lin) + len(fixed) - 1)]
    for i, vec in enumerate(lin):
        for j, c in enumerate(fixed):
            if not c:
                continue
            slot = out[i + j]
            for key, v in vec.items():
                slot[key] = slot.get(key, 0) + v * c
    return out


def _lin_reflect(lin: list, sign: int) -> list:
    return [{k: v * sign * (-1) ** j for k, v in vec.items()} for j, vec in enumerate(lin)]


def _lin_add(acc: list, lin: list, scale) -> None:
    while len(acc) < len(lin):
        acc.append({})
    for j, vec in enumerate(lin):
        slot = acc[j]
        for k, v in vec.items():
            slot[k] = slot.get(k, 0) + v * scale


def _cover_equations(parts: dict, n: int, K: int) -> list:
    """Linear conditions for ``sum z^eta a_eta / tau^K`` to lie in the cover ring."""
    eqs = []
    for k in range(K):
        acc: list = []
        for eta, lin in parts.items():
            c = comb(eta + n, k)
            if c:
                _lin_add(acc, lin, c)
        eqs.extend(vec for vec in acc[: K - k] if vec)
    return eqs


def _su2_filtered(G: GroupData, n: int, d: int) -> int:
    """Weyl-invariant surviving elements supported in ``[-n, n]`` of degree ``d``."""
    K = 2 * n
    sign = (-1) ** K
    counter = 0
    s: dict = {}
    ep: dict = {}
    em: dict = {}
    for eta in range(-n, n + 1):
        pair = euler_pair(G, (eta,), mu=1)
        ep[eta] = _as_list(pair.eplus.expand())
        em[eta] = _as_list(pair.eminus.expand())
    for eta in range(0, n + 1):
        deg = d + K - euler_pair(G, (eta,)).eminus.degree()
        lin = []
        for _ in range(deg + 1):
            lin.append({counter: Fraction(1)})
            counter += 1
        s[eta] = lin
    for eta in range(1, n + 1):
        s[-eta] = _lin_reflect(s[eta], sign)
    if counter == 0:
        return 0
    eqs = []
    # invariance of the winding-zero coefficient
    acc: list = []
    _lin_add(acc, s[0], 1)
    _lin_add(acc, _lin_reflect(s[0], sign), -1)
    eqs.extend(v for v in acc if v)
    eqs += _cover_equations({eta: _lin_mul(s[eta], em[eta]) for eta in s}, n, K)
    eqs += _cover_equations({eta: _lin_mul(s[eta], ep[eta]) for eta in s}, n, K)
    index = {i: i for i in range(counter)}
    return linalg.nullity(linalg.sparse_rows(eqs, index), counter)


def _finish(eta, orbit, lo: int, exact: list, side: str, mu_zero: bool) -> GradedDimension:
    if mu_zero:
        exact = [e - (exact[i - 1] if i else 0) for i, e in enumerate(exact)]
    cumulative = []
    total = 0
    for e in exact:
        total += e
        cumulative.append(total)
    degrees = tuple(range(lo, lo + len(exact)))
    return GradedDimension(tuple(eta), tuple(orbit), degrees, tuple(exact), tuple(cumulative), side, mu_zero)


def graded_dimension(
    G: GroupData,
    eta,
    max_degree: int,
    invariant: bool = True,
    mu_zero: bool = False,
    side: str = "auto",
) -> GradedDimension:
    """Dimensions of the surviving ring at winding ``eta`` up to ``max_degree``.

    For a torus (optionally with Weyl group) the piece is ``e-(eta)`` times the
    stabilizer invariants of ``C[mu, tau]``.  For SU(2) (``side="group"``) the
    Weyl-invariant surviving elements of the cover ring are counted by exact
    linear algebra on the winding filtration.  ``mu_zero`` reports the
    dimensions of the massless specialization.
    """
    eta = tuple(int(e) for e in ((eta,) if isinstance(eta, int) else eta))
    if len(eta) != G.rank:
        raise GroupError(f"cocharacter {eta} does not have rank {G.rank}")
    if side == "auto":
        side = "group" if _is_su2_like(G) else "torus"
    if side == "group":
        if not _is_su2_like(G):
            raise GroupError("the group side is implemented for SU(2) only")
        n = abs(eta[0])
        lo = -2 * n
        exact = []
        for d in range(lo, max_degree + 1):
            here = _su2_filtered(G, n, d)
            below = _su2_filtered(G, n - 1, d) if n else 0
            exact.append(here - below)
        orbit = sorted({(n,), (-n,)})
        return _finish(eta, orbit, lo, exact, side, mu_zero)
    if side != "torus":
        raise ValueError(f"unknown side {side!r}")
    orbit = G.orbit(eta) if invariant and G.weyl else [eta]
    exact = [_torus_exact(G, eta, d, invariant) for d in range(max_degree + 1)]
    return _finish(eta, orbit, 0, exact, side, mu_zero)


# ----------------------------------------------------------------------
# abelianization
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class DimensionEntry:
    winding: tuple
    degree: int
    lhs: int | None
    rhs: int

    @property
    def equal(self) -> bool | None:
        return None if self.lhs is None else self.lhs == self.rhs

    def to_json(self) -> dict:
        return {"winding": list(self.winding), "degree": self.degree, "lhs": self.lhs, "rhs": self.rhs, "equal": self.equal}


@dataclass(frozen=True)
class AbelianizationReport:
    group: GroupData
    reduced: GroupData
    entries: tuple
    slices: tuple = field(default=())  # (root, coroot, slice report)
    mode: str = "su2"

    @property
    def compared(self) -> list:
        return [e for e in self.entries if e.lhs is not None]

    @property
    def all_equal(self) -> bool:
        own = all(e.equal for e in self.compared)
        return own and all(rep.all_equal for _, _, rep in self.slices)

    def mismatches(self) -> list:
        return [e for e in self.compared if not e.equal]


def winding_representatives(G: GroupData, bound: int) -> list:
    """Orbit representatives of cocharacters with all entries in ``[-bound, bound]``."""
    from itertools import product

    seen = set()
    reps = []
    for eta in product(range(-bound, bound + 1), repeat=G.rank):
        if eta in seen:
            continue
        orbit = G.orbit(eta) if G.weyl else [eta]
        seen.update(orbit)
        reps.append(max(orbit))
    return sorted(reps)


def _coroot(G: GroupData, alpha: tuple):
    r = G.rank
    one = identity(r)
    for s in G.elements():
        if act_on_weight(s, alpha) != tuple(-a for a in alpha):
            continue
        diff = tuple(tuple(one[i][j] - s[i][j] for j in range(r)) for i in range(r))
        if linalg.rank(diff, r) != 1:
            continue
        i = next(k for k, a in enumerate(alpha) if a)
        col = [diff[row][i] for row in range(r)]
        if any(c % alpha[i] for c in col):
            continue
        coroot = tuple(c // alpha[i] for c in col)
        if pairing(alpha, coroot) == 2:
            return coroot
    return None


def abelianization_check(G: GroupData, max_degree: int = 4, winding_bound: int = 3) -> AbelianizationReport:
    """Compare the Weyl-invariant surviving ring of ``G`` with the reduced torus mod W."""
    if G.roots is None:
        raise GroupError("abelianization needs root data")
    reduced = reduce_by_roots(G)
    if _is_su2_like(G):
        entries = []
        for n in range(winding_bound + 1):
            left = graded_dimension(G, (n,), max_degree, side="group")
            right = graded_dimension(reduced, (n,), max_degree, side="torus")
            for d in left.degrees:
                entries.append(DimensionEntry((n,), d, left.at(d), right.at(d)))
        return AbelianizationReport(G, reduced, tuple(entries), (), "su2")
    entries = []
    trivial = not G.roots and not G.weyl
    for eta in winding_representatives(reduced, winding_bound):
        right = graded_dimension(reduced, eta, max_degree, side="torus")
        left = graded_dimension(G, eta, max_degree, side="torus") if trivial else None
        for d in right.degrees:
            entries.append(DimensionEntry(eta, d, left.at(d) if left else None, right.at(d)))
    slices = []
    done = set()
    for alpha in G.roots:
        if tuple(-a for a in alpha) in done or alpha in done:
            continue
        done.add(alpha)
        coroot = _coroot(G, alpha)
        if coroot is None:
            raise GroupError(f"no Weyl reflection found for root {alpha}")
        weights = [pairing(nu, coroot) for nu in G.weights]
        slices.append((alpha, coroot, abelianization_check(su2(weights), max_degree, winding_bound)))
    return AbelianizationReport(G, reduced, tuple(entries), tuple(slices), "general")
