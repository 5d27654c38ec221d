from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fpcone import faults
from fpcone.cone import cone_d, cone_element, cone_space, theta
from fpcone.equivalence import (G2MismatchError, ModifiedComplex, ainfty_map_check, ainfty_map_sign, g2,
                                g2_closed, g2_definitional, homotopy_G, map_f, map_f_projected, map_g,
                                modified_complex_check, sdr_check, tilde_lift)
from fpcone.exterior import Form, e
from fpcone.filtered import BARRED, PLAIN, filtered_element, fp_algebra, m1
import oracle
from conftest import MODELS, as_triple, oracle_of

ONE = Form.scalar(1)
half = Fraction(1, 2)


def el(m, p, form, side=PLAIN):
    return filtered_element(m, p, form, side)


def test_f_examples(kt4):
    x = map_f(cone_element(kt4, 0, e(1, 4)))
    assert (x.side, x.k, x.form) == (PLAIN, 2, e(1, 4))
    assert map_f(cone_element(kt4, 0, kt4.omega)).is_zero()


def test_g_examples(kt4):
    assert map_g(el(kt4, 0, e(1, 4))) == cone_element(kt4, 0, e(1, 4), e(3))
    assert map_g(el(kt4, 0, e(2, 3), BARRED)) == cone_element(kt4, 0, xi=-e(2, 3), k=3)
    assert map_g(el(kt4, 0, ONE)) == cone_element(kt4, 0, ONE)


def test_G_examples(kt4):
    assert homotopy_G(theta(kt4, 0)) == cone_element(kt4, 0, ONE)
    assert homotopy_G(cone_element(kt4, 0, e(1))).is_zero()
    assert homotopy_G(cone_element(kt4, 0, kt4.omega)) == cone_element(kt4, 0, xi=ONE, k=1)


def test_g2_examples(kt4):
    assert g2(el(kt4, 0, e(1)), el(kt4, 0, e(2))) == cone_element(kt4, 0, xi=-ONE * half, k=1)
    # |x| = n+p is still multiplied on the plain side
    assert g2(el(kt4, 0, e(2, 3)), el(kt4, 0, e(1))) == cone_element(kt4, 0, xi=-e(3), k=2)
    assert g2(el(kt4, 0, ONE), el(kt4, 0, e(1))).is_zero()
    assert g2(el(kt4, 0, e(1)), el(kt4, 0, e(2, 3), BARRED)).is_zero()


@pytest.mark.parametrize("name", sorted(MODELS))
@given(data=st.data())
def test_g2_routes_agree(name, data):
    m = MODELS[name]
    p = data.draw(st.integers(0, m.n))
    alg = fp_algebra(m, p)
    x = alg.element(data.draw(st.integers(0, len(alg) - 1)))
    y = alg.element(data.draw(st.integers(0, len(alg) - 1)))
    assert g2_definitional(x, y) == g2_closed(x, y)


def test_g2_mismatch_is_loud(kt4, monkeypatch):
    import fpcone.equivalence as eq
    monkeypatch.setattr(eq, "g2_closed", lambda x, y: eq.ConeElement(x.model, x.p, 1, Form(), ONE))
    with pytest.raises(G2MismatchError):
        eq.g2(el(kt4, 0, e(1)), el(kt4, 0, e(2)))


@pytest.mark.parametrize("name", ["kt4", "nil6"])
def test_g_and_G_match_oracle(name):
    m = MODELS[name]
    o = oracle_of(m)
    for p in range(m.n + 1):
        alg = fp_algebra(m, p)
        for i in range(len(alg)):
            x = alg.element(i)
            side, k, f = as_triple(x)
            gx = map_g(x)
            if side == PLAIN:
                want = (f, oracle.scale(-1, o.L_neg(p + 1, o.d(f))))
            else:
                want = ({}, oracle.scale(-1, o.star_r(f)))
            assert (dict(gx.eta.terms), dict(gx.xi.terms)) == want
        cs = cone_space(m, p)
        for i in range(len(cs)):
            c = cs.element(i)
            gc = homotopy_G(c)
            want = (o.L(dict(c.xi.terms), p), o.L_neg(p + 1, dict(c.eta.terms)))
            assert (dict(gc.eta.terms), dict(gc.xi.terms)) == want


@pytest.mark.parametrize("name", sorted(MODELS))
def test_sdr_every_p(name):
    m = MODELS[name]
    for p in range(m.n + 1):
        rep = sdr_check(p, m)
        assert rep.passed, rep.lines()


def test_f_projected_differs_only_where_recorded(nil6):
    cs = cone_space(nil6, 0)
    diffs = [str(cs.element(i)) for i in range(len(cs)) if map_f(cs.element(i)) != map_f_projected(cs.element(i))]
    assert diffs == ["e12346", "e12456", "e13456"]
    # the projected formula is not a chain map: x = e2456 has d x in the span of those
    x = cone_element(nil6, 0, e(2, 4, 5, 6))
    assert m1(map_f_projected(x)) != map_f_projected(cone_d(x))
    assert m1(map_f(x)) == map_f(cone_d(x))
    for name in ("kt4", "t4", "t6"):
        m = MODELS[name]
        for p in range(m.n + 1):
            c = cone_space(m, p)
            assert all(map_f(c.element(i)) == map_f_projected(c.element(i)) for i in range(len(c)))


def test_G_theta_sign_fault_breaks_sdr(kt4):
    with faults.inject(faults.G_THETA_SIGN):
        rep = sdr_check(0, kt4)
    assert "homotopy" in [r.name for r in rep.failed()]
    assert rep.first_counterexample().inputs == ("theta*1",)


@pytest.mark.parametrize("name,p", [("kt4", 0), ("kt4", 1), ("kt4", 2), ("t4", 0), ("t4", 1), ("t4", 2)])
def test_ainfty_map_exhaustive_small(name, p):
    rep = ainfty_map_check(p, MODELS[name])
    assert rep.passed, rep.lines()
    assert all(not r.sampled for r in rep.results)


@pytest.mark.parametrize("p", [0, 1])
def test_ainfty_map_nil6_up_to_triples(p):
    rep = ainfty_map_check(p, MODELS["nil6"], arities=range(1, 4))
    assert rep.passed, rep.lines()


def test_m2_no_projection_fault_breaks_ainfty_map(kt4):
    with faults.inject(faults.M2_NO_PROJECTION):
        rep = ainfty_map_check(0, kt4, arities=(1, 2))
    assert "ainfty_map_n2" in [r.name for r in rep.failed()]


def test_ainfty_sign():
    # u = sum_k (q - k)(i_k - 1)
    assert ainfty_map_sign((1, 1)) == 1
    assert ainfty_map_sign((2, 1)) == -1
    assert ainfty_map_sign((1, 2)) == 1
    assert ainfty_map_sign((2, 2, 1)) == -1
    assert ainfty_map_sign((2, 1, 2)) == 1


def test_tilde_lift_examples(kt4):
    assert tilde_lift(el(kt4, 0, e(1, 4))) == cone_element(kt4, 0, e(1, 4), e(3))
    beta = e(1, 3)
    x = filtered_element(kt4, 0, beta, BARRED)
    assert tilde_lift(x) == cone_element(kt4, 0, xi=-beta, k=3)
    with pytest.raises(ValueError):
        tilde_lift(el(kt4, 1, e(1)))


@pytest.mark.parametrize("name", sorted(MODELS))
def test_modified_complex(name):
    rep = modified_complex_check(MODELS[name])
    assert rep.passed, rep.lines()
    mc = ModifiedComplex(MODELS[name])
    assert len(mc.entries) == 2 * sum(len(MODELS[name].basis(k)) - len(MODELS[name].basis(k - 2))
                                      for k in range(MODELS[name].n + 1))


@given(data=st.data())
def test_g_is_a_chain_map(data):
    m = MODELS["nil6"]
    p = data.draw(st.integers(0, 3))
    alg = fp_algebra(m, p)
    x = alg.element(data.draw(st.integers(0, len(alg) - 1)))
    assert cone_d(map_g(x)) == map_g(m1(x))
    assert map_f(map_g(x)) == x
