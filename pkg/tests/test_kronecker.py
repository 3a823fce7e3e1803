import random
from math import comb

import pytest

from seminormal import QQ, PolynomialRing
from seminormal.errors import ResourceLimitError
from seminormal.kronecker import (
    ambient_certificate,
    generic_certificate,
    kronecker_check,
    specialize,
)
from seminormal.matrix import schanuel_factorization
from seminormal.poly import MultiPoly

from strategies import QQ_t, S23, S345

QQ_uv = PolynomialRing(QQ, ("u", "v"))


def over(R, vars, texts):
    RX = PolynomialRing(R, vars)
    return [RX.parse(s) for s in texts]


def test_sum_and_product_relation():
    f, g = over(QQ_uv, ("X",), ["X + u", "X + v"])
    report = kronecker_check(f, g)
    cert = next(c for c in report.certificates if (c.i, c.j) == (0, 1))
    assert cert.degree == 2
    assert cert.element == QQ_uv.parse("u")
    assert [str(p) for p in cert.coefficients] == ["-u - v", "u*v"]
    assert cert.verify()
    assert report.max_degree <= report.bound == 2


def test_constant_polynomials_give_linear_certificates():
    f, g = over(QQ_uv, ("X",), ["u", "v + 1"])
    report = kronecker_check(f, g)
    assert [c.degree for c in report.certificates] == [1]
    assert report.certificates[0].coefficients == (QQ_uv.parse("-u*v - u"),)


def test_schanuel_coefficients_over_the_cusp():
    t = QQ_t("t")
    fac = schanuel_factorization(t, t**3, t**2)
    report = kronecker_check(fac.f[0], fac.g[0], subring=S23)
    t_cert = next(c for c in report.certificates if c.element == QQ_t.parse("t"))
    assert t_cert.method == "ambient"
    assert t_cert.to_str() == "T^2 + (-t^2)"
    assert all(c.verify() for c in report.certificates)


def test_ambient_relation_over_a_wider_gap():
    x = QQ_t.parse("t")
    coeffs = ambient_certificate(x, S345)
    assert coeffs is not None and len(coeffs) == 3
    # t^3 - t^3 = 0 is the short relation
    assert str(coeffs[-1]) == "-t^3" and all(p.is_zero() for p in coeffs[:-1])
    assert ambient_certificate(QQ_t.parse("t^4 + t^3"), S345) == (QQ_t.parse("-t^4 - t^3"),)


def test_generic_certificates_are_cached_and_capped():
    assert generic_certificate(1, 1, 0, 1) is generic_certificate(1, 1, 0, 1)
    with pytest.raises(ResourceLimitError):
        generic_certificate(3, 3, 1, 1)


@pytest.mark.parametrize("shape", [(1, 1), (1, 2), (2, 1), (2, 2), (1, 4)])
def test_generic_relations_specialize_over_integers(shape):
    n, m = shape
    rng = random.Random(sum(shape))
    for _ in range(10):
        a = [rng.randint(-9, 9) for _ in range(n + 1)]
        b = [rng.randint(-9, 9) for _ in range(m + 1)]
        c = [sum(a[i] * b[k - i] for i in range(n + 1) if 0 <= k - i <= m) for k in range(n + m + 1)]
        for i in range(n + 1):
            for j in range(m + 1):
                gen = generic_certificate(n, m, i, j)
                assert gen.degree <= comb(n + m, n)
                coeffs = specialize(gen, QQ, c)
                x = QQ.from_int(a[i] * b[j])
                acc = QQ.one()
                for p in coeffs:
                    acc = acc * x + p
                assert acc == 0


def test_multivariate_inputs_are_collapsed():
    R = PolynomialRing(QQ_uv, ("X1", "X2"))
    f, g = R.parse("X1 + u"), R.parse("v*X2 + 1")
    report = kronecker_check(f, g)
    assert report.kronecker_base is not None
    assert all(c.verify() for c in report.certificates)
    # the substituted degrees still obey the observed bound
    assert report.max_degree <= report.bound


def test_mismatched_inputs_are_rejected():
    f = PolynomialRing(QQ_uv, ("X",)).parse("X")
    g = PolynomialRing(QQ_uv, ("Y",)).parse("Y")
    with pytest.raises(ValueError):
        kronecker_check(f, g)


def test_generic_coefficients_in_six_variables():
    U = PolynomialRing(QQ, tuple(f"u{k}" for k in range(1, 7)))
    rng = random.Random(8)
    for _ in range(5):
        f = MultiPoly(U, ("X",), {(k,): U.random(rng, degree=1) for k in range(3)})
        g = MultiPoly(U, ("X",), {(k,): U.random(rng, degree=1) for k in range(3)})
        if f.degree() < 0 or g.degree() < 0:
            continue
        report = kronecker_check(f, g)
        assert all(c.verify() for c in report.certificates)
        assert len(report.certificates) == (f.degree() + 1) * (g.degree() + 1)
