from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fpcone.cone import (InvalidMorphismError, cdga_check, cone_d, cone_element, cone_m2, cone_space, gauge_check,
                         gauge_equivalence, gauge_map, identity_morphism, model_morphism, pullback_check,
                         pullback_cone, quotient_check, quotient_q, scaling_check, scaling_iso, theta)
from fpcone.exterior import Form, d, e, power, wedge
from fpcone.homology import cohomology, cone_complex
import oracle
from conftest import MODELS, oracle_of

ONE = Form.scalar(1)


def test_cone_d_examples(kt4):
    assert cone_d(theta(kt4, 0)) == cone_element(kt4, 0, eta=kt4.omega, k=2)
    assert cone_d(cone_element(kt4, 0, e(4))) == cone_element(kt4, 0, e(2, 3))


def test_cone_m2_examples(kt4):
    th = theta(kt4, 0)
    assert cone_m2(th, th).is_zero()
    x = cone_m2(cone_element(kt4, 0, e(1)), th)
    assert x == cone_element(kt4, 0, xi=-e(1), k=2)
    unit = cone_element(kt4, 0, ONE)
    cs = cone_space(kt4, 0)
    for i in range(len(cs)):
        y = cs.element(i)
        assert cone_m2(unit, y) == y


def test_element_degree_checks(kt4):
    with pytest.raises(ValueError):
        cone_element(kt4, 0, e(1), e(1, 2))
    assert cone_element(kt4, 1, xi=ONE).k == 3


def test_quotient_examples(kt4):
    q = quotient_q(theta(kt4, 1))
    assert q == cone_element(kt4, 0, xi=kt4.omega, k=3)
    a = cone_element(kt4, 1, e(1, 4))
    assert quotient_q(a).eta == e(1, 4) and quotient_q(a).p == 0
    with pytest.raises(ValueError):
        quotient_q(theta(kt4, 0))


@pytest.mark.parametrize("name", ["kt4", "t4", "nil6"])
@pytest.mark.parametrize("p", [0, 1])
def test_cdga_axioms(name, p):
    rep = cdga_check(MODELS[name], p)
    assert rep.passed, rep.lines()


@pytest.mark.parametrize("name", ["kt4", "t4"])
@pytest.mark.parametrize("p", [1, 2])
def test_quotient_is_cdga_map(name, p):
    rep = quotient_check(MODELS[name], p)
    assert rep.passed, rep.lines()


def _oracle_cone_d(o, p, eta, xi):
    return oracle.add(o.d(eta), o.L(xi, p + 1)), oracle.scale(-1, o.d(xi))


@pytest.mark.parametrize("p", [0, 1])
def test_cone_d_matches_oracle(nil6, p):
    o = oracle_of(nil6)
    cs = cone_space(nil6, p)
    for i in range(len(cs)):
        x = cs.element(i)
        y = cone_d(x)
        assert (dict(y.eta.terms), dict(y.xi.terms)) == _oracle_cone_d(o, p, dict(x.eta.terms), dict(x.xi.terms))


def swap_t4(t4):
    return model_morphism(t4, t4, [e(3), e(4), e(1), e(2)])


def shear_t4(t4):
    return model_morphism(t4, t4, [e(1), e(2) - e(4), e(3) + e(1), e(4)])


def test_swap_pullback_example(t4):
    phi = swap_t4(t4)
    assert phi.pullback(t4.omega) == t4.omega
    x = cone_element(t4, 0, xi=e(1), k=2)
    assert pullback_cone(phi, x) == cone_element(t4, 0, xi=e(3), k=2)


def test_identity_pullback(kt4):
    ident = identity_morphism(kt4)
    cs = cone_space(kt4, 1)
    for i in range(len(cs)):
        assert pullback_cone(ident, cs.element(i)) == cs.element(i)


@pytest.mark.parametrize("p", [0, 1, 2])
def test_pullback_functorial_on_t4(t4, p):
    rep = pullback_check(swap_t4(t4), p, second=shear_t4(t4))
    assert rep.passed, rep.lines()
    assert "composition" in rep.summary()


def test_pullback_t6_to_t4(t4, t6):
    phi = model_morphism(t4, t6, [e(1), e(2), e(3), e(4), Form(), Form()])
    rep = pullback_check(phi, 1, second=swap_t4(t4))
    assert rep.passed, rep.lines()


def test_invalid_morphisms_are_rejected(kt4, t4):
    with pytest.raises(InvalidMorphismError, match="commute"):
        model_morphism(kt4, kt4, [e(2), e(1), e(3), e(4)])
    with pytest.raises(InvalidMorphismError, match="omega"):
        model_morphism(t4, t4, [e(1), e(2), e(4), e(3)])
    with pytest.raises(InvalidMorphismError, match="generator images"):
        model_morphism(t4, t4, [e(1)])


def test_gauge_trivial_eta_is_identity(t4):
    cs = cone_space(t4, 0)
    for i in range(len(cs)):
        x = cs.element(i)
        y = gauge_equivalence(Form(), x)
        assert (y.eta, y.xi) == (x.eta, x.xi)


@pytest.mark.parametrize("eta", [e(1) + e(3) * 2, e(2) - e(4)])
def test_gauge_closed_eta_on_t4(t4, eta):
    g = gauge_map(t4, t4.omega, eta, 0)
    rep = gauge_check(g)
    assert rep.passed, rep.lines()
    x = cone_element(t4, 0, e(1, 2), e(3), k=2)
    assert g(x).eta == e(1, 2) - wedge(eta, e(3))


def test_gauge_nontrivial_on_kt4(kt4):
    # d e4 = e23, so omega' = omega + e23 is cohomologous to omega
    g = gauge_map(kt4, kt4.omega + e(2, 3), e(4), 0)
    assert gauge_check(g).passed
    before = cohomology(cone_complex(kt4, 0)).dims
    after = cohomology(cone_complex(g.target, 0)).dims
    assert before == after


def test_gauge_rejects_wrong_eta(t4, kt4):
    with pytest.raises(ValueError):
        gauge_map(kt4, kt4.omega, e(4), 0)
    with pytest.raises(ValueError):
        gauge_equivalence(e(1), theta(t4, 1))


def test_gauge_general_p(kt4):
    # level p = 1 with zeta = omega^2 and zeta' = omega'^2:  omega'^2 - omega^2 = 0 here, eta any closed 3-form
    g = gauge_map(kt4, kt4.omega + e(2, 3), Form(), 1)
    assert power(kt4.omega + e(2, 3), 2) == power(kt4.omega, 2)
    assert gauge_check(g).passed


@pytest.mark.parametrize("k,p", [(1, 0), (2, 0), (-1, 1), (Fraction(1, 3), 1)])
def test_scaling(kt4, k, p):
    assert scaling_check(kt4, p, k).passed
    x = scaling_iso(k, theta(kt4, p))
    assert x.xi == ONE / Fraction(k) ** (p + 1)


def test_scaling_zero_rejected(kt4):
    with pytest.raises(ValueError):
        scaling_iso(0, theta(kt4, 0))


@given(data=st.data())
def test_leibniz_random(data):
    m = MODELS["nil6"]
    p = data.draw(st.integers(0, 2))
    cs = cone_space(m, p)
    x = cs.element(data.draw(st.integers(0, len(cs) - 1)))
    y = cs.element(data.draw(st.integers(0, len(cs) - 1)))
    lhs = cone_d(cone_m2(x, y))
    rhs = cone_m2(cone_d(x), y) + cone_m2(x, cone_d(y)) * (-1) ** x.k
    assert lhs == rhs
    sign = (-1) ** (x.k * y.k)
    assert cone_m2(x, y) == cone_m2(y, x) * sign
