import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seminormal import GF, QQ, ZZ, PolynomialRing
from seminormal.gcd import (
    base_gcd,
    content,
    factor_over_zdr,
    factor_rank1_gcd,
    gauss_content,
    poly_divides,
    poly_gcd,
    primitive_decompose,
    unit_ratio,
)
from seminormal.matrix import Matrix, certify_rank1, schanuel_factorization
from seminormal.rings import ProductRing, ann_idempotent_payload, reduced_quotient

from strategies import QQ_t, QQ_x, QQxGF5, ZZ_x, elements, unimodular_pair

ZZ_X = PolynomialRing(ZZ, ("X",))
GCD_RINGS = [ZZ, QQ, GF(7), QQ_t, QQxGF5, ProductRing((ZZ, GF(3))), reduced_quotient(ZZ, ZZ(30))]


def associates(R, a, b):
    return unit_ratio(R, a, b) is not None


def divides(R, a, b):
    if R.is_zero(a):
        return R.is_zero(b)
    q = R.exact_div(b, a)
    return q is not None and R.eq(R.mul(a, q), b)


def test_base_gcd_examples():
    assert base_gcd(ZZ(12), ZZ(18)) == ZZ(6)
    Q2 = ProductRing((QQ, QQ))
    assert base_gcd(Q2("(2, 0)"), Q2("(0, 3)")) == Q2(1)
    assert base_gcd(QQ_t("t^2 + t"), QQ_t("t")) == QQ_t("t")
    assert base_gcd(ZZ(-4), ZZ(0)) == ZZ(4)


@pytest.mark.parametrize("R", GCD_RINGS, ids=[str(R) for R in GCD_RINGS])
@settings(max_examples=150, deadline=None)
@given(data=st.data())
def test_gcd_laws(R, data):
    a, b, c = (data.draw(elements(R)) for _ in range(3))
    g = R.gcd
    # the gcd divides both arguments
    assert divides(R, g(a, b), a) and divides(R, g(a, b), b)
    assert associates(R, g(g(a, b), c), g(a, g(b, c)))
    assert associates(R, R.mul(c, g(a, b)), g(R.mul(c, a), R.mul(c, b)))
    x = g(a, b)
    assert associates(R, g(a, R.mul(b, c)), g(a, R.mul(x, c)))


@pytest.mark.parametrize("R", GCD_RINGS, ids=[str(R) for R in GCD_RINGS])
@settings(max_examples=150, deadline=None)
@given(data=st.data())
def test_gcd_coprime_cancellation(R, data):
    a, b, c = (data.draw(elements(R)) for _ in range(3))
    eb = ann_idempotent_payload(R, b)
    if divides(R, a, R.mul(b, c)) and associates(R, R.gcd(a, b), eb):
        assert divides(R, a, R.mul(eb, c))


def test_content_and_primitive_examples():
    d = primitive_decompose(ZZ_X.parse("2*X + 4"))
    assert d.c == ZZ(2) and d.g == ZZ_X.parse("X + 2")
    QQ_X = PolynomialRing(QQ, ("X",))
    d = primitive_decompose(QQ_X.parse("3/2*X + 3"), base=ZZ)
    assert d.c == QQ("3/2") and d.g == ZZ_X.parse("X + 2")
    d = primitive_decompose(ZZ_X.parse("0"))
    assert d.c == ZZ(0) and d.g == ZZ_X.parse("1")
    assert content(ZZ_X.parse("6*X^2 + 12*X + 6")) == ZZ(6)


def test_gauss_examples():
    assert gauss_content(ZZ_X.parse("2*X + 2"), ZZ_X.parse("3*X + 3")) == ZZ(1)
    assert gauss_content(ZZ_X.parse("1"), ZZ_X.parse("5*X")) == ZZ(1)
    R = PolynomialRing(ProductRing((QQ, QQ)), ("X",))
    f = R.parse("(2, 0)*X + (0, 3)")
    assert gauss_content(f, f).ring == R.base


GAUSS_RINGS = [ZZ_X, PolynomialRing(QQ_t, ("X",)), PolynomialRing(QQxGF5, ("X",)), PolynomialRing(reduced_quotient(ZZ, ZZ(6)), ("X",))]


@pytest.mark.parametrize("R", GAUSS_RINGS, ids=[str(R) for R in GAUSS_RINGS])
def test_gauss_content_on_random_pairs(R):
    rng = random.Random(hash(str(R)) & 0xFFFF)
    for _ in range(500):
        f, g = R.random(rng, degree=3), R.random(rng, degree=3)
        u = gauss_content(f, g)
        D = R.base
        assert D.is_unit(u.payload)


@pytest.mark.parametrize("R", GAUSS_RINGS[:3], ids=[str(R) for R in GAUSS_RINGS[:3]])
@settings(max_examples=100, deadline=None)
@given(data=st.data())
def test_primitive_polynomials_are_regular(R, data):
    f, h = data.draw(elements(R)), data.draw(elements(R))
    if f.is_zero() or h.is_zero():
        return
    g = primitive_decompose(f).g
    assert not (g * h).is_zero()


def test_poly_divides_examples():
    assert poly_divides(ZZ_X.parse("2*X + 2"), ZZ_X.parse("2*X^2 - 2")) == ZZ_X.parse("X - 1")
    assert poly_divides(ZZ_X.parse("X"), ZZ_X.parse("X^2")) == ZZ_X.parse("X")
    assert poly_divides(ZZ_X.parse("2"), ZZ_X.parse("X + 1")) is None


def test_poly_gcd_examples():
    assert str(poly_gcd(ZZ_X.parse("2*X^2 - 2"), ZZ_X.parse("4*X + 4"))) == "2*X + 2"
    f = ZZ_X.parse("-3*X + 6")
    assert associates(ZZ_X, poly_gcd(f, ZZ_X.zero()), f)
    R = PolynomialRing(QQxGF5, ("X",))
    a = R.parse("(1, 1)*X^2 - (1, 1)")
    b = R.parse("(1, 0)*X + (1, 2)")
    g = poly_gcd(a, b)
    # QQ component: gcd(X^2 - 1, X + 1) = X + 1; GF(5) component: gcd(X^2 - 1, 2) = 1
    assert str(g) == "(1, 0)*X + (1, 1)"


GCD_POLY_RINGS = [ZZ_X, PolynomialRing(ZZ, ("x", "y")), PolynomialRing(QQxGF5, ("X",))]


@pytest.mark.parametrize("R", GCD_POLY_RINGS, ids=[str(R) for R in GCD_POLY_RINGS])
@settings(max_examples=80, deadline=None)
@given(data=st.data())
def test_poly_gcd_divides_both_and_is_greatest(R, data):
    a, b, c = (data.draw(elements(R)) for _ in range(3))
    g = poly_gcd(a * c, b * c)
    if not g.is_zero():
        assert poly_divides(g, a * c) is not None
        assert poly_divides(g, b * c) is not None
    if not c.is_zero():
        assert poly_divides(c, g) is not None


def test_factor_rank1_gcd_examples():
    P = Matrix(QQ_x, [[QQ_x.parse("1 - x^2"), QQ_x.parse("x")], [QQ_x.parse("x - x^3"), QQ_x.parse("x^2")]])
    fac = factor_rank1_gcd(P)
    assert fac.outer() == P and QQ_x.is_one(fac.inner())
    assert associates(QQ_x, fac.f[1], QQ_x.parse("x"))
    I = Matrix.standard_projection(ZZ_X, 3)
    fac = factor_rank1_gcd(I)
    assert fac.f_strings() == ["1", "0", "0"] and fac.g_strings() == ["1", "0", "0"]
    t = QQ_t("t")
    sch = schanuel_factorization(t, t**3, t**2)
    fac = factor_rank1_gcd(certify_rank1(sch.outer()))
    assert fac.f_strings() == sch.f_strings() and fac.g_strings() == sch.g_strings()


FACTOR_RINGS = [QQ_x, ZZ_x, PolynomialRing(QQxGF5, ("x",)), PolynomialRing(ZZ, ("x", "y"))]


@pytest.mark.parametrize("R", FACTOR_RINGS, ids=[str(R) for R in FACTOR_RINGS])
@settings(max_examples=60, deadline=None)
@given(rng=st.randoms(use_true_random=False), n=st.integers(1, 4))
def test_factor_round_trip(R, rng, n):
    fac = unimodular_pair(R, n, rng)
    P = fac.outer()
    out = factor_rank1_gcd(P)
    assert out.outer() == P
    assert R.is_one(out.inner())


def test_factor_over_zdr_examples():
    R = PolynomialRing(QQxGF5, ("X",))
    e, e_ = QQxGF5((1, 0)).payload, QQxGF5((0, 1)).payload
    c = lambda x: R.const(x)
    P = Matrix(R, [[c(e), R.zero()], [R.zero(), c(e_)]])
    out = factor_over_zdr(P, details=True)
    assert out.factorization.outer() == P
    assert len(out.components) == 2
    P = schanuel_factorization(QQ(2), QQ(8), QQ(4)).outer()
    assert factor_over_zdr(P).outer() == P


@settings(max_examples=40, deadline=None)
@given(rng=st.randoms(use_true_random=False), n=st.integers(2, 3))
def test_factor_over_split_quotient(rng, n):
    # ZZ/<30> is a product of three fields without an explicit product structure
    R = PolynomialRing(reduced_quotient(ZZ, ZZ(30)), ("X",))
    P = unimodular_pair(R, n, rng).outer()
    out = factor_rank1_gcd(P)
    assert out.outer() == P and R.is_one(out.inner())
