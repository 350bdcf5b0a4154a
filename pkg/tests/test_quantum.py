from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from coulomb.commutative import translate
from coulomb.euler import euler_pair
from coulomb.graded import RationalGraded
from coulomb.groups import GroupError, torus, u1
from coulomb.poly import FactoredClass, parse_poly
from coulomb.quantum import (
    MASSLESS_MU,
    QTorusElement,
    ShiftElement,
    gamma_conjugate,
    massless_report,
    nc_generators,
    nc_multiply,
    nc_power_identity_check,
    nc_survives,
    q_gamma_conjugate,
    q_multiply,
    q_survives,
    rational_product,
)
from strategies import graded, weight_multisets

P = parse_poly
TAU = P("t")


def S(text, rank=1):
    return ShiftElement.parse(text, rank)


def Q(text, rank=1):
    return QTorusElement.parse(text, rank, "mult")


z = ShiftElement.monomial((1,))
zinv = ShiftElement.monomial((-1,))
tau = ShiftElement.scalar(TAU)


# --- shift algebra -----------------------------------------------------


def test_commutator_z_tau():
    assert z * tau == S("z*t")
    assert tau * z == S("z*(t - h)")
    assert z * tau - tau * z == S("h*z")


def test_weyl_algebra_commutator():
    y = zinv * tau
    assert z * y - y * z == S("h")


def test_unit_law():
    a = S("z^2*(mu + t) + z^-1*h")
    one = ShiftElement.scalar(1)
    assert a * one == a and one * a == a
    assert nc_multiply(a, one) == a


def test_scalars_multiply_on_either_side():
    assert 2 * z == z * 2 == S("2*z")


def test_shift_element_rejects_denominators():
    with pytest.raises(ValueError):
        ShiftElement({(1,): 1}, rank=1, den=(1,))


# --- conjugation -------------------------------------------------------


def test_conjugation_anchor():
    conj = gamma_conjugate(z, u1((1,)), mu=0)
    assert conj == RationalGraded({(1,): (P("t - h"), FactoredClass())}, 1)
    assert conj.to_graded() == (tau * z)


def test_conjugation_of_lemma_generator():
    conj = gamma_conjugate(zinv * tau, u1((1,)), mu=0)
    assert conj.is_regular()
    assert conj.to_graded() == S("z^-1")


def test_conjugation_fixes_winding_zero():
    a = S("mu*t + h^2")
    assert gamma_conjugate(a, u1((1, -1, 3))).to_graded() == a


def test_rank_mismatch():
    with pytest.raises(GroupError):
        nc_survives(S("z1*z2", 2), u1((1,)))


# --- survival ----------------------------------------------------------


def test_generators_survive_for_several_weights():
    for ws in ((1,), (1, -1), (2, -1), (3, 1, -2), ()):
        grp = u1(ws)
        up, down = nc_generators(grp)
        assert nc_survives(up, grp) and nc_survives(down, grp)
        assert down.coefficient((-1,)) == euler_pair(grp, (-1,), "h").eminus.expand()


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_mixed_monomials_fail(n):
    y = zinv * tau
    for a in range(n):
        word = y**a * ShiftElement.monomial((a - n,))
        assert not nc_survives(word, u1((1,)), mu=0)
    assert nc_survives(y**n, u1((1,)), mu=0)


def test_scalars_survive():
    assert nc_survives(S("mu + h*t"), u1((1, 2)))


@pytest.mark.parametrize("n", range(0, 5))
def test_monomials_match_gamma_oracle(n):
    for k in range(7):
        a = ShiftElement.monomial((-n,), TAU**k)
        expected = oracles.h_survives([1], {-n: oracles.t**k}, mass=0)
        assert bool(nc_survives(a, u1((1,)), mu=0)) == expected
        # the classification: divisible by t (t + h) ... (t + (n - 1) h)
        assert expected == (n == 0 or (n == 1 and k >= 1))


def test_rising_products_match_gamma_oracle():
    h = oracles.h
    for n in range(1, 5):
        rising = oracles.sympy.Integer(1)
        for j in range(n):
            rising *= oracles.t + j * h
        a = ShiftElement.monomial((-n,), P(str(oracles.sympy.expand(rising)).replace("**", "^")))
        assert nc_survives(a, u1((1,)), mu=0)
        assert oracles.h_survives([1], {-n: rising}, mass=0)


@given(weight_multisets(1, size=3, bound=2), st.integers(-3, 3), st.integers(-1, 1))
@settings(max_examples=30)
def test_survival_matches_gamma_oracle(ws, eta, shift):
    ws = [w[0] for w in ws]
    grp = u1(ws)
    coeff = euler_pair(grp, (eta + shift,), "h").eminus.expand()
    a = ShiftElement.monomial((eta,), coeff)
    sym = oracles.sympy.sympify(str(coeff).replace("^", "**"), locals={"t1": oracles.t, "mu": oracles.mu, "h": oracles.h})
    assert bool(nc_survives(a, grp)) == oracles.h_survives(ws, {eta: sym})


# --- power identities --------------------------------------------------


def test_power_identity_examples():
    assert nc_power_identity_check(u1((1,)), 3).holds
    assert nc_power_identity_check(u1((1,)), 1).holds
    assert nc_power_identity_check(u1((2, -1)), 2).holds
    with pytest.raises(ValueError):
        nc_power_identity_check(u1((1,)), 0)
    with pytest.raises(GroupError):
        nc_power_identity_check(torus(2, ()), 2)


@given(weight_multisets(1, size=4, bound=2), st.integers(1, 4))
@settings(max_examples=20)
def test_power_identities(ws, n):
    assert nc_power_identity_check(u1(ws), n).holds


# --- massless ----------------------------------------------------------


def test_massless_anticentral_sign():
    report = massless_report(u1((1, -1)))
    assert report[(1,)]["sign_type"]
    conj = gamma_conjugate(z, u1((1, -1)), mu=MASSLESS_MU)
    assert conj.to_graded() == S("-z")


def test_massless_single_weight_is_not_sign_type():
    assert not massless_report(u1((1,)))[(1,)]["sign_type"]


# --- q-torus -----------------------------------------------------------


def test_q_relation():
    zq = QTorusElement.monomial((1,), flavor="mult")
    t = QTorusElement.scalar(P("m*x"), flavor="mult")
    assert zq * t == (t * zq) * P("q")
    assert q_multiply(zq * t, QTorusElement.monomial((-1,), P("m*x"))) == QTorusElement.scalar(P("q*m^2*x^2"))


def test_q_unit_law():
    a = Q("z*m*x + z^-2*q")
    one = QTorusElement.scalar(1)
    assert a * one == a == one * a


def test_q_conjugation_anchor():
    zq = QTorusElement.monomial((1,))
    conj = q_gamma_conjugate(zq, u1((1,)))
    expected = QTorusElement.scalar(P("1 - m^-1*x^-1")) * zq
    assert conj.to_graded("mult") == expected


def test_q_survival():
    grp = u1((1,))
    assert q_survives(Q("z^-1*(1 - m^-1*x^-1)"), grp)
    assert q_survives(Q("z^-1*(m*x - 1)"), grp)
    assert not q_survives(Q("z^-1"), grp)
    assert q_survives(Q("m*x + q"), grp)


def test_q_torsion_rejected():
    from coulomb.groups import GroupData

    grp = GroupData(1, ((1,),), pi1_torsion=3)
    with pytest.raises(GroupError):
        q_survives(Q("z"), grp)


# --- properties --------------------------------------------------------

shift_elems = graded(1, ("mu", "t1", "h"), max_winding=3, max_exp=2, cls=ShiftElement)
shift_elems2 = graded(2, ("t1", "t2", "h"), max_winding=2, max_exp=2, cls=ShiftElement, max_terms=2)
q_elems = graded(1, ("m", "x1", "q"), max_winding=3, max_exp=2, cls=QTorusElement)


@given(shift_elems, shift_elems, shift_elems)
def test_shift_associativity(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(shift_elems2, shift_elems2, shift_elems2)
@settings(max_examples=30)
def test_shift_associativity_rank_two(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(q_elems, q_elems, q_elems)
def test_q_associativity(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(shift_elems, shift_elems)
def test_h_zero_degenerates_to_commutative(a, b):
    assert (a * b).at_h_zero() == a.at_h_zero() * b.at_h_zero()


@given(weight_multisets(1, size=3, bound=2), graded(1, ("mu", "t1"), max_winding=3))
@settings(max_examples=30)
def test_conjugation_degenerates_to_translation(ws, f):
    grp = u1(ws)
    a = ShiftElement(f.coeffs, rank=1)
    conj = gamma_conjugate(a, grp)
    trans = translate(f, grp)
    assert set(conj.parts) == set(trans.parts)
    for eta, (n1, d1) in conj.parts.items():
        n2, d2 = trans.parts[eta]
        assert n1.subs({"h": 0}) * d2.expand() == n2 * d1.expand().subs({"h": 0})


def _survivor(grp, coeffs):
    return ShiftElement(
        {eta: euler_pair(grp, eta, "h").eminus.expand() * p for eta, p in coeffs.items()}, rank=grp.rank
    )


@given(weight_multisets(1, size=3, bound=2), shift_elems, shift_elems)
@settings(max_examples=30)
def test_survivors_form_a_subring(ws, a, b):
    grp = u1(ws)
    sa, sb = _survivor(grp, a.coeffs), _survivor(grp, b.coeffs)
    assert nc_survives(sa, grp) and nc_survives(sb, grp)
    assert nc_survives(sa * sb, grp)
    assert nc_survives(sa + sb, grp)


@given(weight_multisets(1, size=3, bound=2), shift_elems, shift_elems)
@settings(max_examples=30)
def test_conjugation_is_an_algebra_map(ws, a, b):
    grp = u1(ws)
    lhs = gamma_conjugate(a * b, grp)
    rhs = rational_product(gamma_conjugate(a, grp), gamma_conjugate(b, grp))
    assert lhs == rhs


@given(st.integers(1, 3), q_elems, q_elems)
@settings(max_examples=30)
def test_q_conjugation_is_an_algebra_map(w, a, b):
    grp = u1((w,))
    lhs = q_gamma_conjugate(a * b, grp)
    rhs = rational_product(q_gamma_conjugate(a, grp), q_gamma_conjugate(b, grp), flavor="q")
    assert lhs == rhs


@given(weight_multisets(1, size=3, bound=2), shift_elems)
@settings(max_examples=30)
def test_generators_span_unit_winding(ws, c):
    """Survivors at winding +-1 are exactly the generators times coefficients."""
    grp = u1(ws)
    up, down = nc_generators(grp)
    coeff = c.coefficient((0,))
    for gen, eta in ((up, (1,)), (down, (-1,))):
        survivor = _survivor(grp, {eta: coeff})
        assert survivor == gen * ShiftElement.scalar(coeff)
