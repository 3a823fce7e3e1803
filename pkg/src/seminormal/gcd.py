"""Gcd algebra over gcd pp-rings and the rank-1 factorization algorithm.

Supported coefficient rings: ZZ, prime fields, QQ, polynomial rings over
these, localizations of them, finite products of supported rings, and
zero-dimensional reduced rings (handled by dynamic splitting).

Multivariate gcds are recursive: a polynomial in ``(x_1, .., x_k)`` is read
as univariate in ``x_k`` with coefficients in ``D[x_1, .., x_{k-1}]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .core import QQ, ZZ, Integers, Rationals, Ring, RingValue
from .errors import (
    FactorizationError,
    InvariantViolation,
    UnsupportedRingError,
)
from .idempotents import DEFAULT_MAX_LEAVES, conjugate_regular_corner, run_dynamic
from .matrix import Matrix, Rank1Certificate, Rank1Factorization, certify_rank1
from .poly import MultiPoly, PolynomialRing, poly_exact_div, product_component, product_merge
from .rings import (
    ProductRing,
    is_zero_dimensional,
    quasi_inverse_payload,
)


# ---------------------------------------------------------------------------
# classification of coefficient rings


def _is_split_zdr(D: Ring) -> bool:
    """Zero-dimensional, not a domain, and not an explicit product: needs dynamic splitting."""
    return is_zero_dimensional(D) and not D.is_domain and not isinstance(D, ProductRing) and not D.is_trivial


def _canon(R: Ring, x):
    return R.associate(x)[0]


def base_gcd(a: RingValue, b: RingValue) -> RingValue:
    """Canonical gcd of two elements of a gcd pp-ring."""
    if a.ring != b.ring:
        from .errors import RingMismatchError

        raise RingMismatchError(f"{a.ring} vs {b.ring}")
    R = a.ring
    return RingValue(R, _canon(R, R.gcd(a.payload, b.payload)))


# ---------------------------------------------------------------------------
# dense univariate views


def _split_outer(p: MultiPoly):
    """``(E, coeffs)``: ``p`` as a dense list in its last variable over ``E``."""
    D, vars = p.ring, p.vars
    if len(vars) == 1:
        E = D
        deg = p.degree()
        coeffs = [D.zero()] * (deg + 1)
        for (k,), c in p.terms.items():
            coeffs[k] = c
        return E, coeffs
    E = PolynomialRing(D, vars[:-1])
    parts = {}
    for e, c in p.terms.items():
        parts.setdefault(e[-1], {})[e[:-1]] = c
    deg = max(parts) if parts else -1
    coeffs = [MultiPoly(D, vars[:-1], parts.get(k, {}), _clean=True) for k in range(deg + 1)]
    return E, coeffs


def _join_outer(D, vars, coeffs):
    terms = {}
    if len(vars) == 1:
        for k, c in enumerate(coeffs):
            if not D.is_zero(c):
                terms[(k,)] = c
        return MultiPoly(D, vars, terms, _clean=True)
    for k, c in enumerate(coeffs):
        for e, x in c.terms.items():
            terms[e + (k,)] = x
    return MultiPoly(D, vars, terms, _clean=True)


def _trim(E, a):
    a = list(a)
    while a and E.is_zero(a[-1]):
        a.pop()
    return a


def _field_gcd(E, a, b):
    a, b = _trim(E, a), _trim(E, b)
    while b:
        inv = E.inverse(b[-1])
        r = list(a)
        while len(r) >= len(b):
            c = E.mul(r[-1], inv)
            shift = len(r) - len(b)
            for i, y in enumerate(b):
                r[shift + i] = E.sub(r[shift + i], E.mul(c, y))
            r = _trim(E, r[:-1])
        a, b = b, r
    if not a:
        return a
    inv = E.inverse(a[-1])
    return [E.mul(inv, x) for x in a]


def _content_list(E, a):
    g = E.zero()
    for c in a:
        g = E.gcd(g, c)
        if E.is_one(g):
            break
    return g


def _divide_list(E, a, c):
    out = []
    for x in a:
        q = E.exact_div(x, c)
        if q is None:
            raise InvariantViolation("content does not divide a coefficient")
        out.append(q)
    return out


def _prem(E, a, b):
    """Pseudo-remainder of ``a`` by ``b`` (dense lists, ``b`` nonzero)."""
    lc = b[-1]
    r = list(a)
    while len(r) >= len(b):
        c = r[-1]
        shift = len(r) - len(b)
        r = [E.mul(lc, x) for x in r]
        for i, y in enumerate(b):
            r[shift + i] = E.sub(r[shift + i], E.mul(c, y))
        r = _trim(E, r)
    return r


def _domain_gcd(E, a, b):
    a, b = _trim(E, a), _trim(E, b)
    if not a:
        return b
    if not b:
        return a
    ca, cb = _content_list(E, a), _content_list(E, b)
    c = E.gcd(ca, cb)
    a, b = _divide_list(E, a, ca), _divide_list(E, b, cb)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _prem(E, a, b)
        a = b
        if not r:
            break
        b = _divide_list(E, r, _content_list(E, r))
    if len(a) == 1:
        return [c]
    return [E.mul(c, x) for x in a]


# ---------------------------------------------------------------------------
# gcd and associates in D[vars]


def _leafwise(D: Ring, vars, polys, op, max_leaves=DEFAULT_MAX_LEAVES):
    """Run ``op`` on the images of ``polys`` in every component of a split ring ``D``."""

    def task(K):
        mapped = [MultiPoly(K, vars, {e: D.mul(K.e, c) for e, c in p.terms.items()}) for p in polys]
        return op(*mapped)

    return run_dynamic(D, task, max_leaves=max_leaves)


def _lift(D, vars, p: MultiPoly):
    return MultiPoly(D, vars, dict(p.terms))


def poly_gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Canonical gcd in ``D[vars]``."""
    if a.ring != b.ring or a.vars != b.vars:
        from .errors import RingMismatchError

        raise RingMismatchError("gcd of polynomials over different rings")
    D, vars = a.ring, a.vars
    if isinstance(D, ProductRing):
        parts = [poly_gcd(product_component(a, k), product_component(b, k)) for k in range(len(D.factors))]
        return product_merge(parts, D, vars)
    if D.is_trivial:
        return a.zero_like()
    if _is_split_zdr(D):
        leaves = _leafwise(D, vars, [a, b], poly_gcd)
        out = a.zero_like()
        for leaf in leaves:
            out = out + _lift(D, vars, leaf.result)
        return out
    if not D.is_domain:
        raise UnsupportedRingError(f"no gcd algorithm over {D}")
    if a.is_zero():
        return poly_associate(b)[0]
    if b.is_zero():
        return poly_associate(a)[0]
    E, ca = _split_outer(a)
    _, cb = _split_outer(b)
    g = _field_gcd(E, ca, cb) if E.is_field else _domain_gcd(E, ca, cb)
    return poly_associate(_join_outer(D, vars, g))[0]


def poly_associate(p: MultiPoly):
    """``(canon, unit)`` with ``p = unit * canon``.

    Canonical means: positive leading coefficient over ZZ, monic over a
    field, recursively canonical leading coefficient over polynomial
    coefficient rings, componentwise over products.
    """
    D, vars = p.ring, p.vars
    R = PolynomialRing(D, vars)
    if isinstance(D, ProductRing):
        pairs = [poly_associate(product_component(p, k)) for k in range(len(D.factors))]
        return (
            product_merge([c for c, _ in pairs], D, vars),
            product_merge([u for _, u in pairs], D, vars),
        )
    if p.is_zero():
        return p, R.one()
    if _is_split_zdr(D):

        def op(q):
            canon, unit = poly_associate(q)
            return canon, unit

        canon, unit = p.zero_like(), p.zero_like()
        for leaf in run_dynamic(D, lambda K: op(MultiPoly(K, vars, {e: D.mul(K.e, c) for e, c in p.terms.items()}))):
            canon = canon + _lift(D, vars, leaf.result[0])
            unit = unit + _lift(D, vars, leaf.result[1])
        return canon, unit
    _, lc = p.leading_term()
    _, u = D.associate(lc)
    inv = D.inverse(u)
    if inv is None:
        raise InvariantViolation(f"associate returned a non-unit {D.to_str(u)}")
    return p.scale(inv), R.const(u)


# ---------------------------------------------------------------------------
# content, primitive decomposition, Gauss, divisibility


def content(f: MultiPoly) -> RingValue:
    """``G(f)``: canonical gcd of the coefficients (0 for ``f = 0``)."""
    D = f.ring
    g = D.zero()
    for c in f.terms.values():
        g = D.gcd(g, c)
    return RingValue(D, _canon(D, g))


@dataclass(frozen=True, eq=False)
class PrimitiveDecomposition:
    """``f = c g`` with ``g`` primitive; ``c`` may live in a fraction ring."""

    c: RingValue
    g: MultiPoly


def primitive_decompose(f: MultiPoly, base: Ring | None = None) -> PrimitiveDecomposition:
    """Split ``f = c g`` with ``g`` primitive over ``base``.

    ``f`` may be over QQ with ``base = ZZ``: denominators are cleared first and
    ``c`` is a rational.  Otherwise ``f`` is over the base itself.  For
    ``f = 0`` the result is ``c = 0, g = 1``.
    """
    D = f.ring
    if base is None:
        base = D
    if isinstance(D, Rationals) and isinstance(base, Integers):
        if f.is_zero():
            return PrimitiveDecomposition(QQ(0), MultiPoly.constant(ZZ, f.vars, 1))
        d = 1
        for c in f.terms.values():
            d = lcm(d, c.denominator)
        ints = {e: int(c * d) for e, c in f.terms.items()}
        F = MultiPoly(ZZ, f.vars, ints)
        c = content(F).payload
        g = MultiPoly(ZZ, f.vars, {e: x // c for e, x in ints.items()})
        _, lc = g.leading_term()
        if lc < 0:
            g, c = -g, -c
        return PrimitiveDecomposition(QQ(Fraction(c, d)), g)
    if base != D:
        raise UnsupportedRingError(f"primitive decomposition of a polynomial over {D} relative to {base}")
    if isinstance(D, ProductRing):
        parts = [primitive_decompose(product_component(f, k)) for k in range(len(D.factors))]
        c = tuple(p.c.payload for p in parts)
        g = product_merge([p.g for p in parts], D, f.vars)
        return PrimitiveDecomposition(RingValue(D, c), g)
    if f.is_zero():
        return PrimitiveDecomposition(RingValue(D, D.zero()), MultiPoly.constant(D, f.vars, D.one()))
    c = content(f)
    if is_zero_dimensional(D) and not D.is_domain:
        # f = e g with g = f + (1 - e), whose coefficients generate <1>
        e = c.payload
        g = f + f.const_like(D.sub(D.one(), e))
        return PrimitiveDecomposition(c, g)
    g = MultiPoly(D, f.vars, {e: D.exact_div(x, c.payload) for e, x in f.terms.items()})
    return PrimitiveDecomposition(c, g)


def unit_ratio(D: Ring, a, b):
    """A unit ``u`` of ``D`` with ``a = u b``, or ``None`` when ``a`` and ``b`` are not associates."""
    if isinstance(D, ProductRing):
        parts = [unit_ratio(F, x, y) for F, x, y in zip(D.factors, a, b)]
        return None if any(p is None for p in parts) else tuple(parts)
    if D.is_zero(a) and D.is_zero(b):
        return D.one()
    if is_zero_dimensional(D) and not D.is_domain:
        b_bullet, eb = quasi_inverse_payload(D, b)
        _, ea = quasi_inverse_payload(D, a)
        if not D.eq(ea, eb):
            return None
        u = D.add(D.mul(a, b_bullet), D.sub(D.one(), eb))
        return u if D.eq(D.mul(u, b), a) else None
    q = D.exact_div(a, b)
    if q is None or not D.is_unit(q):
        return None
    return q


def gauss_content(f: MultiPoly, g: MultiPoly) -> RingValue:
    """The unit ``u`` with ``G(f) G(g) = u G(fg)``."""
    D = f.ring
    lhs = D.mul(content(f).payload, content(g).payload)
    rhs = content(f * g).payload
    u = unit_ratio(D, lhs, rhs)
    if u is None:
        raise InvariantViolation(f"Gauss relation failed: {D.to_str(lhs)} vs {D.to_str(rhs)}")
    return RingValue(D, u)


def poly_divides(f: MultiPoly, g: MultiPoly):
    """Quotient ``q`` with ``g = f q`` in ``D[vars]``, or ``None``."""
    D, vars = f.ring, f.vars
    if _is_split_zdr(D):
        leaves = _leafwise(D, vars, [f, g], lambda a, b: poly_exact_div(b, a))
        if any(leaf.result is None for leaf in leaves):
            return None
        out = f.zero_like()
        for leaf in leaves:
            out = out + _lift(D, vars, leaf.result)
        return out
    return poly_exact_div(g, f)


# ---------------------------------------------------------------------------
# rank-1 factorization


def _ring_gcd(R: Ring, items):
    g = R.zero()
    for x in items:
        g = R.gcd(g, x)
    return g


def _divide(R, a, b, what):
    q = R.exact_div(a, b)
    if q is None:
        raise InvariantViolation(f"{what}: {R.to_str(b)} does not divide {R.to_str(a)}")
    return q


def _is_standard_at_zero(P: Matrix) -> bool:
    R = P.ring
    if not isinstance(R, PolynomialRing):
        return False
    base = R.base
    n = P.n
    for i in range(n):
        for j in range(n):
            c = P.rows[i][j].constant_term()
            want = base.one() if i == j == 0 else base.zero()
            if not base.eq(c, want):
                return False
    return True


def normalize_at_zero(fac: Rank1Factorization) -> Rank1Factorization:
    """Rescale by the unit ``f_1(0)`` so that ``f_1(0) = g_1(0) = 1``."""
    R = fac.ring
    base = R.base
    u = fac.f[0].constant_term()
    inv = base.inverse(u)
    if inv is None:
        raise FactorizationError("f_1(0) is not a unit")
    return fac.scaled(R.const(inv), R.const(u))


def _factor_core(P: Matrix) -> Rank1Factorization:
    R = P.ring
    n = P.n
    J, Pc = conjugate_regular_corner(P)
    m = Pc.rows
    f0 = _ring_gcd(R, m[0])
    g = [_divide(R, m[0][j], f0, "first-row gcd") for j in range(n)]
    f = [_divide(R, m[i][0], g[0], "first column") for i in range(n)]
    fac = Rank1Factorization(R, f, g)
    if not fac.outer() == Pc:
        raise InvariantViolation("f g differs from the conjugated matrix")
    Jm = J.rows
    f_out = [R.sum(R.mul(Jm[i][k], f[k]) for k in range(n)) for i in range(n)]
    g_out = [R.sum(R.mul(g[k], Jm[k][j]) for k in range(n)) for j in range(n)]
    fac = Rank1Factorization(R, f_out, g_out)
    if _is_standard_at_zero(P):
        fac = normalize_at_zero(fac)
    return fac


def factor_rank1_gcd(P, max_leaves: int = DEFAULT_MAX_LEAVES) -> Rank1Factorization:
    """Factor a certified rank-1 idempotent ``P = f g`` over a gcd pp-ring.

    Conjugates so that the corner entry is regular, takes ``f`` as the gcd of
    the first row, ``g_j = m_1j / f`` and ``f_i = m_i1 / g_1``, then undoes the
    conjugation.  Zero-dimensional coefficient rings that are not explicit
    products go through :func:`factor_over_zdr`.
    """
    if isinstance(P, Rank1Certificate):
        P = P.matrix
    else:
        certify_rank1(P)
    R = P.ring
    base = R.base if isinstance(R, PolynomialRing) else R
    if _is_split_zdr(base):
        return factor_over_zdr(P, max_leaves=max_leaves)
    fac = _factor_core(P)
    if not fac.outer() == P or not R.is_one(fac.inner()):
        raise InvariantViolation("factorization does not reproduce P")
    return fac


@dataclass(frozen=True, eq=False)
class ZdrFactorization:
    """A merged factorization and the components it was computed on."""

    factorization: Rank1Factorization
    components: tuple  # idempotent payloads of the coefficient ring
    log: tuple


def factor_over_zdr(P, max_leaves: int = DEFAULT_MAX_LEAVES, details=False):
    """Factor over ``C[vars]`` with ``C`` zero-dimensional reduced, splitting on demand.

    Each component ``eC`` runs the field algorithm; a zero test without a
    uniform answer splits the component.  Leaf factorizations (already
    normalized at 0 when ``P(0) = I_{n,1}``) are summed.
    """
    if isinstance(P, Rank1Certificate):
        P = P.matrix
    else:
        certify_rank1(P)
    R = P.ring
    if isinstance(R, PolynomialRing):
        C, vars = R.base, R.vars
    else:
        C, vars = R, ()
    if not is_zero_dimensional(C):
        raise UnsupportedRingError(f"{C} is not zero-dimensional reduced")

    def to_leaf(K, x):
        if vars:
            return MultiPoly(K, vars, {e: C.mul(K.e, c) for e, c in x.terms.items()})
        return C.mul(K.e, x)

    def task(K):
        RK = PolynomialRing(K, vars) if vars else K
        PK = Matrix(RK, [[to_leaf(K, x) for x in row] for row in P.rows])
        return _factor_core(PK)

    log = []
    leaves = run_dynamic(C, task, max_leaves=max_leaves, log=log)
    n = P.n
    f = [R.zero()] * n
    g = [R.zero()] * n
    for leaf in leaves:
        lf = leaf.result
        for i in range(n):
            fi, gi = lf.f[i], lf.g[i]
            if vars:
                fi, gi = MultiPoly(C, vars, dict(fi.terms)), MultiPoly(C, vars, dict(gi.terms))
            f[i] = R.add(f[i], fi)
            g[i] = R.add(g[i], gi)
    fac = Rank1Factorization(R, f, g)
    if not fac.outer() == P or not R.is_one(fac.inner()):
        raise InvariantViolation("merged factorization does not reproduce P")
    if details:
        return ZdrFactorization(fac, tuple(leaf.e for leaf in leaves), tuple(log))
    return fac


__all__ = [
    "base_gcd",
    "poly_gcd",
    "poly_associate",
    "content",
    "PrimitiveDecomposition",
    "primitive_decompose",
    "unit_ratio",
    "gauss_content",
    "poly_divides",
    "normalize_at_zero",
    "factor_rank1_gcd",
    "factor_over_zdr",
    "ZdrFactorization",
]
