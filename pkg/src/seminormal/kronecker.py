"""Integrality certificates for products of coefficients.

If ``h = f g`` then each product ``a_i b_j`` of a coefficient of ``f`` and a
coefficient of ``g`` is integral over the ring generated by the coefficients
``c_0, .., c_{n+m}`` of ``h``.  Two routes produce explicit monic relations:

* the generic route solves, once per shape ``(n, m, i, j)``, for a monic
  polynomial whose lower coefficients are weighted-homogeneous polynomials in
  the ``c_k``, checks it symbolically on generic coefficients, and then
  specializes it to the instance;
* the ambient route searches directly for a short relation with coefficients
  in a subring of ``k[t]`` by linear algebra on ``t``-degrees.

Every certificate is verified on the instance by exact substitution.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .core import QQ, Ring
from .errors import InvariantViolation, ResourceLimitError
from .linalg import solve, solve_mod
from .poly import MultiPoly, PolynomialRing, kronecker_base, kronecker_substitute
from .rings import FiniteSubalgebra, SemigroupRing, membership

log = logging.getLogger(__name__)

#: largest number of conjugates the generic route will solve for; the
#: symbolic check grows quickly (shape (2, 3) already takes minutes)
MAX_GENERIC_DEGREE = 6
_PRIME = 2**61 - 1


def _weighted_monomials(nvars, degree, weight):
    """Exponent vectors of total ``degree`` whose index-weighted sum is ``weight``."""
    out = []

    def rec(k, left, wleft, acc):
        if k == nvars - 1:
            if left * k == wleft:
                out.append(tuple(acc + [left]))
            return
        for e in range(left + 1):
            w = e * k
            if w > wleft:
                break
            # the remaining variables carry weight at most (nvars - 1) each
            if wleft - w > (left - e) * (nvars - 1):
                continue
            rec(k + 1, left - e, wleft - w, acc + [e])

    rec(0, degree, weight, [])
    return out


def _generic_c(a, b):
    c = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            c[i + j] += x * y
    return c


def _mono_value(exp, c):
    v = 1
    for e, x in zip(exp, c):
        if e:
            v *= x**e
    return v


@dataclass(frozen=True)
class GenericCertificate:
    """``T^d + sum_k p_k(c) T^(d-k)`` annihilating ``a_i b_j`` for generic coefficients."""

    n: int
    m: int
    i: int
    j: int
    coefficients: tuple  # per k = 1..d: tuple of (exponent, Fraction)

    @property
    def degree(self):
        return len(self.coefficients)


def _symbolic_check(cert: GenericCertificate) -> bool:
    n, m = cert.n, cert.m
    names = tuple(f"a{k}" for k in range(n + 1)) + tuple(f"b{k}" for k in range(m + 1))
    R = PolynomialRing(QQ, names)
    a = [R.var(f"a{k}") for k in range(n + 1)]
    b = [R.var(f"b{k}") for k in range(m + 1)]
    c = [R.zero() for _ in range(n + m + 1)]
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            c[i + j] = c[i + j] + x * y
    x = a[cert.i] * b[cert.j]
    powers = {}

    def cpow(k, e):
        if (k, e) not in powers:
            powers[(k, e)] = c[k] ** e
        return powers[(k, e)]

    acc = R.one()
    for terms in cert.coefficients:
        p = R.zero()
        for exp, lam in terms:
            mono = R.const(Fraction(lam))
            for k, e in enumerate(exp):
                if e:
                    mono = mono * cpow(k, e)
            p = p + mono
        acc = acc * x + p
    return acc.is_zero()


def _assemble(n, m, i, j, d, unknowns, sol):
    coeffs = []
    for k in range(1, d + 1):
        coeffs.append(tuple((e, Fraction(lam)) for (kk, e), lam in zip(unknowns, sol) if kk == k and lam != 0))
    return GenericCertificate(n, m, i, j, tuple(coeffs))


@lru_cache(maxsize=None)
def generic_certificate(n: int, m: int, i: int, j: int) -> GenericCertificate:
    """Lowest-degree weighted-homogeneous monic relation for ``a_i b_j`` over ``ZZ[c]``."""
    bound = comb(n + m, n)
    if bound > MAX_GENERIC_DEGREE:
        raise ResourceLimitError(f"generic certificate would need up to {bound} conjugates")
    rng = random.Random(1000 * n + 100 * m + 10 * i + j)
    w = i + j
    nc = n + m + 1
    for d in range(1, bound + 1):
        monos = [_weighted_monomials(nc, k, k * w) for k in range(1, d + 1)]
        unknowns = [(k, e) for k, ms in enumerate(monos, start=1) for e in ms]
        rows, rhs = [], []
        for _ in range(len(unknowns) + 16):
            a = [rng.randint(-60, 60) for _ in range(n + 1)]
            b = [rng.randint(-60, 60) for _ in range(m + 1)]
            c = _generic_c(a, b)
            x = a[i] * b[j]
            rows.append([_mono_value(e, c) * x ** (d - k) for k, e in unknowns])
            rhs.append(-(x**d))
        sol = solve_mod(rows, rhs, _PRIME)
        if sol is None:
            continue
        # the relation has integer coefficients; try the symmetric lift first
        lifted = [v - _PRIME if v > _PRIME // 2 else v for v in sol]
        cert = _assemble(n, m, i, j, d, unknowns, lifted)
        if _symbolic_check(cert):
            return cert
        exact = solve([[Fraction(v) for v in row] for row in rows], [Fraction(v) for v in rhs])
        if exact is not None:
            cert = _assemble(n, m, i, j, d, unknowns, exact)
            if _symbolic_check(cert):
                return cert
        raise InvariantViolation(f"generic relation for a_{i} b_{j} failed symbolic verification")
    raise InvariantViolation("no generic relation up to the conjugate bound")


# ---------------------------------------------------------------------------
# instances


@dataclass(frozen=True, eq=False)
class IntegralityCertificate:
    """Monic ``T^d + p_1 T^(d-1) + .. + p_d`` with ``p_k`` in the subring, vanishing at ``element``."""

    i: int
    j: int
    ring: Ring
    element: object
    coefficients: tuple
    method: str

    @property
    def degree(self):
        return len(self.coefficients)

    def residual(self):
        R = self.ring
        acc = R.one()
        for p in self.coefficients:
            acc = R.add(R.mul(acc, self.element), p)
        return acc

    def verify(self) -> bool:
        return self.ring.is_zero(self.residual())

    def to_str(self, var="T"):
        R = self.ring
        parts = [f"{var}^{self.degree}" if self.degree > 1 else var]
        for k, p in enumerate(self.coefficients, start=1):
            if R.is_zero(p):
                continue
            power = self.degree - k
            mon = "" if power == 0 else (f"*{var}" if power == 1 else f"*{var}^{power}")
            parts.append(f"({R.to_str(p)}){mon}")
        return " + ".join(parts)


@dataclass(frozen=True, eq=False)
class IntegralityReport:
    certificates: tuple
    degrees: tuple  # (deg f, deg g) after substitution
    bound: int
    kronecker_base: int | None

    @property
    def max_degree(self):
        return max((c.degree for c in self.certificates), default=0)


def specialize(cert: GenericCertificate, K: Ring, c_values):
    """Evaluate the coefficient polynomials of a generic relation at ``c_values`` in ``K``."""
    cache = {}

    def cpow(k, e):
        if (k, e) not in cache:
            cache[(k, e)] = K.pow(c_values[k], e)
        return cache[(k, e)]

    out = []
    for terms in cert.coefficients:
        p = K.zero()
        for exp, lam in terms:
            mono = K.from_fraction(Fraction(lam))
            for k, e in enumerate(exp):
                if e:
                    mono = K.mul(mono, cpow(k, e))
            p = K.add(p, mono)
        out.append(p)
    return tuple(out)


def _subring_basis(sub, bound):
    """Vector-space basis of the elements of ``sub`` of degree at most ``bound``."""
    F, var = sub.field, sub.var
    if isinstance(sub, SemigroupRing):
        return [MultiPoly.monomial(F, (var,), (s,)) for s in range(bound + 1) if sub.contains_exponent(s)]
    if isinstance(sub, FiniteSubalgebra):
        out = [v for v in sub.basis if v.degree() <= bound]
        out += [MultiPoly.monomial(F, (var,), (s,)) for s in range(sub.cutoff, bound + 1)]
        return out
    if isinstance(sub, PolynomialRing) and len(sub.vars) == 1 and sub.base.is_field:
        return [MultiPoly.monomial(sub.base, sub.vars, (s,)) for s in range(bound + 1)]
    return None


def _contains(sub, x):
    return isinstance(sub, PolynomialRing) or membership(x, sub)


def ambient_certificate(x: MultiPoly, sub, max_degree=4, max_unknowns=200):
    """Short monic relation for ``x`` in ``k[t]`` with coefficients in the subring ``sub``.

    Returns the coefficient tuple, or ``None`` when nothing is found within
    the degree and unknown-count caps.
    """
    F = x.ring
    if _contains(sub, x):
        return (-x,)
    D = max(x.degree(), 1)
    for d in range(2, max_degree + 1):
        bases = [_subring_basis(sub, k * D) for k in range(1, d + 1)]
        unknowns = [(k, b) for k, basis in enumerate(bases, start=1) for b in basis]
        if len(unknowns) > max_unknowns:
            return None
        powers = [x.const_like(F.one())]
        for _ in range(d):
            powers.append(powers[-1] * x)
        cols = [b * powers[d - k] for k, b in unknowns]
        top = d * D
        rows = [[col.terms.get((e,), F.zero()) for col in cols] for e in range(top + 1)]
        rhs = [F.neg(powers[d].terms.get((e,), F.zero())) for e in range(top + 1)]
        sol = solve(rows, rhs, field=F)
        if sol is None:
            continue
        coeffs = []
        for k in range(1, d + 1):
            p = x.zero_like()
            for (kk, b), lam in zip(unknowns, sol):
                if kk == k and not F.is_zero(lam):
                    p = p + b.scale(lam)
            coeffs.append(p)
        return tuple(coeffs)
    return None


def _collapse(p, base):
    # every exponent of the substitution is a multiple of the base; drop that factor
    q = kronecker_substitute(p, base)
    return MultiPoly(q.ring, q.vars, {(d // base,): c for (d,), c in q.terms.items()})


def kronecker_check(f: MultiPoly, g: MultiPoly, subring=None, minimal=True) -> IntegralityReport:
    """Certify every ``a_i b_j`` integral over the ring generated by the coefficients of ``f g``.

    Several variables are first collapsed with :func:`kronecker_substitute`.
    When ``subring`` is a subring of ``k[t]`` and ``minimal`` is set, a short
    relation with coefficients in ``subring`` is searched for first.
    """
    if f.vars != g.vars or f.ring != g.ring:
        raise ValueError("f and g must share ring and variables")
    base = None
    if len(f.vars) > 1:
        base = kronecker_base(f, g, f * g)
        f, g = _collapse(f, base), _collapse(g, base)
    K = f.ring
    n, m = max(f.degree(), 0), max(g.degree(), 0)
    h = f * g
    c_values = [h.coeff((k,)) for k in range(n + m + 1)]
    ambient_ok = minimal and subring is not None and _subring_basis(subring, 0) is not None
    certs = []
    for i in range(n + 1):
        a = f.coeff((i,))
        for j in range(m + 1):
            b = g.coeff((j,))
            x = K.mul(a, b)
            coeffs, method = None, "generic"
            if ambient_ok and isinstance(x, MultiPoly):
                coeffs = ambient_certificate(x, subring)
                method = "ambient"
            if coeffs is None:
                gen = generic_certificate(n, m, i, j)
                coeffs, method = specialize(gen, K, c_values), "generic"
            cert = IntegralityCertificate(i, j, K, x, coeffs, method)
            if not cert.verify():
                raise InvariantViolation(f"certificate for a_{i} b_{j} does not vanish")
            if ambient_ok and not all(_contains(subring, p) for p in coeffs):
                raise InvariantViolation("certificate coefficient escapes the subring")
            certs.append(cert)
    report = IntegralityReport(tuple(certs), (n, m), comb(n + m, n), base)
    log.info("integrality: degrees %s, max certificate degree %d, bound %d", (n, m), report.max_degree, report.bound)
    return report


__all__ = [
    "GenericCertificate",
    "generic_certificate",
    "IntegralityCertificate",
    "IntegralityReport",
    "specialize",
    "ambient_certificate",
    "kronecker_check",
]
