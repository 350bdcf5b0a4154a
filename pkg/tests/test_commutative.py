from __future__ import annotations

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from coulomb.commutative import (
    PresentationError,
    abelianization_check,
    graded_dimension,
    graded_generator,
    massless_span_check,
    massless_generators,
    su2_presentation,
    su2_zero_membership,
    survives,
    survives_cover,
    translate,
    weyl_symmetrize,
)
from coulomb.graded import GradedElement, RationalGraded
from coulomb.groups import GroupData, GroupError, su2, torus, u1, weyl_act
from coulomb.poly import FactoredClass, Poly, parse_poly
from strategies import graded, symmetric_weights, weight_multisets

P = parse_poly


def G(text, rank=1, flavor=None):
    return GradedElement.parse(text, rank, flavor)


# --- translate ---------------------------------------------------------


def test_translate_single_weight():
    assert translate(G("z"), u1((1,))) == RationalGraded({(1,): (P("mu + t"), FactoredClass())}, 1)


def test_translate_quadric_cone():
    out = translate(G("z"), u1((1, -1)))
    num, den = out.parts[(1,)]
    assert num == P("mu + t")
    assert den.expand() == P("mu - t")
    assert not out.is_regular()


def test_translate_winding_zero_unchanged():
    f = G("mu^2 + 3*t")
    assert translate(f, u1((1, -1, 2))).to_graded() == f


def test_translate_keeps_tau_denominator():
    out = translate(G("(z - 1)*t^-1"), u1((1, -1)))
    assert out.poles()


# --- survives ----------------------------------------------------------


def test_quadric_cone_survivors():
    grp = u1((1, -1))
    x, y = G("(mu - t)*z"), G("(mu + t)*z^-1")
    assert survives(x, grp) and survives(y, grp)
    assert not survives(G("z"), grp)
    assert not survives(G("z^-1"), grp)
    assert (x * y) == G("mu^2 - t^2")


def test_failing_witness_names_the_factor():
    res = survives(G("z^2*(mu - t)"), u1((1, -1)))
    assert not res
    (bad,) = res.failures()
    assert bad.eta == (2,)
    assert bad.failing[0] == P("mu - t")


def test_constants_always_survive():
    for f in ("1", "mu", "t^3 - mu*t"):
        assert survives(G(f), u1((3, -2, 1)))


def test_empty_weights_accept_everything():
    assert survives(G("z^5 + z^-2*t"), u1(()))


def test_multiplicative_unit_normalized_generator():
    grp = u1((1,))
    assert survives(G("z^-1*(1 - m^-1*x^-1)", flavor="mult"), grp)
    assert survives(G("z^-1*(m*x - 1)", flavor="mult"), grp)
    assert not survives(G("z^-1", flavor="mult"), grp)


def test_graded_generator_examples():
    assert graded_generator(0, u1((1, -1))) == G("1")
    assert graded_generator(-3, u1((1,))) == G("z^-3*(mu + t)^3")
    assert graded_generator(-3, u1((1,)), mu=0) == G("t^3*z^-3")
    assert graded_generator(1, u1((2, -1))) == G("z*(mu - t)")
    assert graded_generator(-1, u1((2, -1))) == G("z^-1*(mu + 2*t)^2")


@given(weight_multisets(1, size=4, bound=3), st.integers(-4, 4), st.integers(-2, 2), st.integers(0, 2))
def test_additive_survival_matches_brute_force(ws, eta, shift, power):
    ws = [w[0] for w in ws]
    # a candidate coefficient that sometimes carries the right factors
    p = oracles.euler_minus(ws, eta + shift) * oracles.t**power + oracles.mu**power
    f = GradedElement({(eta,): P(str(sympy.expand(p)).replace("**", "^"))})
    assert bool(survives(f, u1(ws))) == oracles.additive_survives(ws, {eta: p})


@given(weight_multisets(1, size=3, bound=2), st.integers(-3, 3), st.integers(-1, 1))
def test_multiplicative_survival_matches_brute_force(ws, eta, shift):
    ws = [w[0] for w in ws]
    d = sympy.Integer(1)
    for nu in ws:
        k = nu * (eta + shift)
        if k < 0:
            d *= (1 - 1 / (oracles.m * oracles.x**nu)) ** (-k)
    p = sympy.expand(d * oracles.m**2 * oracles.x)
    f = GradedElement({(eta,): P(str(p).replace("**", "^").replace("x", "x1"))}, flavor="mult")
    assert bool(survives(f, u1(ws))) == oracles.multiplicative_survives(ws, {eta: p})


# --- Weyl symmetrization -----------------------------------------------


def test_symmetrize_examples():
    grp = su2()
    assert weyl_symmetrize(G("z + mu + t^2 + t"), grp) == G("z + z^-1 + 2*mu + 2*t^2")
    assert weyl_symmetrize(G("t*z"), grp) == G("t*z - t*z^-1")
    inv = G("z + z^-1")
    assert weyl_symmetrize(inv, grp) == inv * 2


def test_symmetrize_needs_weyl():
    with pytest.raises(GroupError):
        weyl_symmetrize(G("z"), u1((1,)))


# --- cover ring --------------------------------------------------------


def test_cover_membership_examples():
    assert su2_zero_membership(G("(z - 1)*t^-1"))
    assert not su2_zero_membership(G("(z - 1)*t^-2"))
    assert su2_zero_membership(G("z"))
    assert su2_zero_membership(G("z^-1"))
    assert su2_zero_membership(G("(z - 2 + z^-1)*t^-2"))
    with pytest.raises(ValueError):
        su2_zero_membership(G("(z - 1)*t^-1"), max_den=0)


def test_u_minus_v_relation():
    u = G("(z - 1)*t^-1")
    v = G("(1 - z^-1)*t^-1")
    assert u - v == u * v * P("t")
    assert su2_zero_membership(u * v)


def test_cover_survival():
    grp = su2((1, -1))
    pres = su2_presentation(grp)
    for g in (pres.x, pres.y, pres.w):
        assert survives_cover(g, grp)
    assert not survives_cover(G("(z - 1)*t^-1"), grp)


# --- presentations -----------------------------------------------------


def test_standard_presentation():
    pres = su2_presentation(su2((1, -1)))
    assert pres.N == 1
    assert pres.constant == Poly.const(1)
    assert pres.holds
    assert pres.relations() == ["x - y = t1*w", "x*y = 1 + mu*w"]


@pytest.mark.parametrize("ws,N", [((2, 0, -2), 2), ((1, -1), 1), ((3, 1, -1, -3), 4), ((2, -2, 1, -1), 3)])
def test_presentations_hold(ws, N):
    pres = su2_presentation(su2(ws))
    assert pres.N == N
    assert pres.holds
    assert pres.constant * P("t^2") == P("mu^" + str(2 * N)) - pres.phi_plus.expand() * pres.phi_minus.expand()


def test_presentation_errors():
    with pytest.raises(PresentationError, match="symmetric"):
        su2_presentation(u1((1, 2)))
    with pytest.raises(PresentationError, match="N = 0"):
        su2_presentation(su2((0,)))


@given(symmetric_weights(3, 3))
@settings(max_examples=25)
def test_presentation_residues_vanish(ws):
    pres = su2_presentation(su2(ws))
    assert pres.holds


def test_massless_generators_adjoint():
    a, b = massless_generators(2)
    assert a == G("t*(z - z^-1)")
    assert b == G("z + z^-1")


@pytest.mark.parametrize("ws", [(2, 0, -2), (1, -1), (2, -2, 1, -1)])
def test_massless_span_check(ws):
    rows = massless_span_check(su2_presentation(su2(ws)), max_degree=4, winding_bound=2)
    assert rows and all(r.equal for r in rows)


# --- graded dimensions -------------------------------------------------


def test_torus_dimensions():
    dims = graded_dimension(u1((1, -1)), 1, 3)
    assert dims.cumulative == (0, 1, 3, 6)
    dims = graded_dimension(u1((1, -1)), 0, 3)
    assert dims.cumulative == (1, 3, 6, 10)


def test_reduced_adjoint_side_by_enumeration():
    red = GroupData(1, ((0,),), weyl=(((-1,),),))
    for n in range(3):
        dims = graded_dimension(red, n, 5, side="torus")
        for d in range(6):
            monos = [(a, d - a) for a in range(d + 1)]
            if n == 0:
                expected = sum(1 for _, b in monos if b % 2 == 0)
            else:
                expected = len(monos)
            assert dims.at(d) == expected


@pytest.mark.parametrize("ws", [(2, 0, -2), (1, -1), (2, -2, 1, -1)])
@pytest.mark.parametrize("n", [0, 1])
def test_su2_group_side_matches_oracle(ws, n):
    dims = graded_dimension(su2(ws), n, 2, side="group")
    for d in dims.degrees:
        assert dims.at(d) == oracles.su2_graded_dimension(ws, n, d)


def test_mu_zero_specialization():
    full = graded_dimension(su2((2, 0, -2)), 1, 4)
    flat = graded_dimension(su2((2, 0, -2)), 1, 4, mu_zero=True)
    for i, d in enumerate(flat.degrees):
        assert flat.exact[i] == full.exact[i] - (full.exact[i - 1] if i else 0)
    assert graded_dimension(su2((2, 0, -2)), 1, 3, mu_zero=True).exact[-4:] == (1, 1, 1, 1)


def test_group_side_needs_su2():
    with pytest.raises(GroupError):
        graded_dimension(u1((1,)), 1, 2, side="group")


# --- abelianization ----------------------------------------------------


def test_abelianization_adjoint():
    rep = abelianization_check(su2((2, 0, -2)), max_degree=3, winding_bound=2)
    assert rep.all_equal
    assert rep.reduced.weights == ((0,),)


def test_abelianization_is_discriminating():
    grp = su2((2, 0, -2))
    left = graded_dimension(grp, 1, 3, side="group")
    unreduced = graded_dimension(grp, 1, 3, side="torus")
    assert left.exact[-4:] != unreduced.exact


def test_abelianization_trivial():
    grp = GroupData(1, ((1,), (-1,)), roots=())
    rep = abelianization_check(grp, max_degree=3, winding_bound=2)
    assert rep.compared and rep.all_equal


def test_abelianization_rank_two():
    swap = ((0, 1), (1, 0))
    grp = GroupData(2, ((1, -1), (-1, 1), (1, 0), (0, 1)), weyl=(swap,), roots=((1, -1), (-1, 1)))
    rep = abelianization_check(grp, max_degree=2, winding_bound=1)
    assert rep.mode == "general"
    assert rep.entries and not rep.compared
    ((alpha, coroot, sl),) = rep.slices
    assert coroot == (1, -1)
    assert sorted(w[0] for w in sl.group.weights) == [-2, -1, 1, 2]
    assert rep.all_equal


def test_abelianization_needs_roots():
    with pytest.raises(GroupError):
        abelianization_check(u1((1,)))


# --- properties --------------------------------------------------------


@given(weight_multisets(3, size=6, bound=2), st.tuples(*[st.integers(-5, 5)] * 3))
@settings(max_examples=30)
def test_graded_generators_survive(ws, eta):
    grp = torus(3, ws)
    assert survives(graded_generator(eta, grp), grp)


@given(weight_multisets(1), graded(), graded())
def test_products_of_survivors_survive(ws, a, b):
    grp = u1(ws)
    fa = GradedElement({eta: p * graded_generator(eta, grp).coefficient(eta) for eta, p in a.coeffs.items()})
    fb = GradedElement({eta: p * graded_generator(eta, grp).coefficient(eta) for eta, p in b.coeffs.items()})
    assert survives(fa, grp) and survives(fb, grp)
    assert survives(fa * fb, grp)
    assert survives(fa + fb, grp)


@given(symmetric_weights(), graded(max_winding=3))
def test_survival_is_weyl_equivariant(ws, f):
    grp = su2(ws)
    assert bool(survives(weyl_act(((-1,),), f), grp)) == bool(survives(f, grp))
