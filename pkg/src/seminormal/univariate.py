"""Euclidean toolkit for univariate polynomials over a field."""

from __future__ import annotations

from .poly import MultiPoly


def monic(p: MultiPoly) -> MultiPoly:
    if p.is_zero():
        return p
    _, lc = p.leading_term()
    return p.scale(p.ring.inverse(lc))


def udivmod(a: MultiPoly, b: MultiPoly):
    """Quotient and remainder of ``a`` by nonzero ``b`` (one variable, field coefficients)."""
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    R = a.ring
    (db,), lb = b.leading_term()
    inv = R.inverse(lb)
    q = {}
    r = a
    while r.terms:
        (dr,), lr = r.leading_term()
        if dr < db:
            break
        c = R.mul(lr, inv)
        q[(dr - db,)] = c
        r = r - b.mul_monomial((dr - db,), c)
    return MultiPoly(R, a.vars, q), r


def urem(a, b):
    return udivmod(a, b)[1]


def ugcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Monic gcd (zero when both inputs vanish)."""
    while not b.is_zero():
        a, b = b, urem(a, b)
    return monic(a)


def uxgcd(a: MultiPoly, b: MultiPoly):
    """Return ``(g, s, t)`` with ``g = s*a + t*b`` monic."""
    one = a.const_like(a.ring.one())
    r0, r1 = a, b
    s0, s1 = one, a.zero_like()
    t0, t1 = a.zero_like(), one
    while not r1.is_zero():
        q, r = udivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    _, lc = r0.leading_term()
    inv = a.ring.inverse(lc)
    return r0.scale(inv), s0.scale(inv), t0.scale(inv)


def uinverse_mod(a: MultiPoly, m: MultiPoly):
    """Inverse of ``a`` modulo ``m`` or ``None``."""
    g, s, _ = uxgcd(urem(a, m), m)
    if g.degree() != 0:
        return None
    return urem(s, m)


def _characteristic(R):
    return getattr(R, "p", 0)


def squarefree_part(f: MultiPoly) -> MultiPoly:
    """Monic radical generator of ``<f>`` (product of distinct irreducible factors)."""
    if f.is_zero():
        return f
    f = monic(f)
    if f.degree() <= 0:
        return f
    p = _characteristic(f.ring)
    df = f.derivative(0)
    if df.is_zero():
        # f = h(x^p) = h(x)^p over a prime field
        root = MultiPoly(f.ring, f.vars, {(e // p,): c for (e,), c in f.terms.items()})
        return squarefree_part(root)
    g = ugcd(f, df)
    r = udivmod(f, g)[0]
    if not p:
        return monic(r)
    # factors whose multiplicity is divisible by p survive only in g
    w = g
    while True:
        h = ugcd(w, r)
        if h.degree() <= 0:
            break
        w = udivmod(w, h)[0]
    if w.degree() <= 0:
        return monic(r)
    return monic(r * squarefree_part(w))
