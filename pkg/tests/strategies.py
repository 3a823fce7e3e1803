"""Shared generators: rings of the family, random elements, unimodular pairs."""

from __future__ import annotations

import random

from hypothesis import strategies as st

from seminormal import GF, QQ, ZZ, PolynomialRing
from seminormal.matrix import Matrix, Rank1Factorization
from seminormal.poly import MultiPoly
from seminormal.rings import (
    DualNumbers,
    Localization,
    ProductRing,
    SemigroupRing,
    reduced_quotient,
)

QQ_t = PolynomialRing(QQ, ("t",))
QQ_x = PolynomialRing(QQ, ("x",))
ZZ_x = PolynomialRing(ZZ, ("x",))
QQxGF5 = ProductRing((QQ, GF(5)))
QQxQQ = ProductRing((QQ, QQ))
S23 = SemigroupRing(QQ, (2, 3))
S345 = SemigroupRing(QQ, (3, 4, 5))

# every reduced constructor, used by the axiom and canonical-form laws
REDUCED_RINGS = [
    ZZ,
    QQ,
    GF(7),
    QQ_t,
    PolynomialRing(ZZ, ("x", "y")),
    QQxGF5,
    ProductRing((QQ, QQ, GF(3))),
    S23,
    S345,
    Localization(ZZ_x, ZZ_x.parse("x")),
    reduced_quotient(ZZ, ZZ(12)),
    reduced_quotient(QQ_x, QQ_x.parse("x^3 - x")),
]
DUAL = [DualNumbers(QQ, 2), DualNumbers(GF(5), 4)]
ALL_RINGS = REDUCED_RINGS + DUAL


def elements(R, **kw):
    """Strategy drawing payloads of ``R`` through its own sampler."""
    return st.randoms(use_true_random=False).map(lambda rng: R.random(rng, **kw))


def fields_product(k):
    """Products of ``k`` small fields (mixed characteristics)."""
    pool = [QQ, GF(2), GF(3), GF(5), GF(7)]
    return ProductRing(tuple(pool[i % len(pool)] for i in range(k)))


def _poly(R: PolynomialRing, rng, degree, constant):
    base = R.base
    n = len(R.vars)
    terms = {}
    for _ in range(rng.randint(1, 2)):
        d = rng.randint(0 if constant else 1, degree)
        exp = [0] * n
        for _ in range(d):
            exp[rng.randrange(n)] += 1
        terms[tuple(exp)] = base.random(rng, size=3)
    return MultiPoly(base, R.vars, terms)


def unimodular_pair(R: PolynomialRing, n: int, rng: random.Random, max_degree=3, steps=6, fix_zero=False):
    """Random ``(f, g)`` over ``R`` with ``g.f = 1`` and total degrees at most ``max_degree``.

    Starts from ``f = e_1``, ``g = e_1^T`` and applies elementary moves
    ``f_i += l f_j``, ``g_j -= l g_i`` (each preserves ``g.f``).  With
    ``fix_zero`` the multipliers have no constant term, so ``f(0) = e_1`` and
    ``g(0) = e_1^T`` survive.
    """
    one, zero = R.one(), R.zero()
    f = [one] + [zero] * (n - 1)
    g = [one] + [zero] * (n - 1)
    if n == 1:
        return Rank1Factorization(R, f, g)
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        lam = _poly(R, rng, 2, constant=not fix_zero)
        fi = f[i] + lam * f[j]
        gj = g[j] - lam * g[i]
        if fi.degree() <= max_degree and gj.degree() <= max_degree:
            f[i], g[j] = fi, gj
    if not fix_zero and rng.random() < 0.5:
        k = rng.randrange(n)
        u = R.base.from_int(rng.choice([-1, 1]))
        f[k], g[k] = f[k].scale(u), g[k].scale(u)
    fac = Rank1Factorization(R, f, g)
    assert R.is_one(fac.inner())
    return fac


def standard_projection(R, n):
    return Matrix.standard_projection(R, n)
