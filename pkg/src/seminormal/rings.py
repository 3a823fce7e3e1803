"""The closed family of ring constructors beyond ZZ, QQ, GF(p) and polynomial rings.

Every constructor is a frozen dataclass, so two descriptors are equal exactly
when they are structurally equal.  All of them are reduced except
:class:`DualNumbers`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

from .core import QQ, ZZ, Integers, PrimeField, Ring, RingValue, TrivialRing
from .errors import (
    MembershipError,
    NotIdempotentError,
    NotZeroDimensionalError,
    ParseError,
    UnsupportedRingError,
)
from .poly import MultiPoly, PolynomialRing, format_terms, poly_exact_div
from . import univariate as U


# ---------------------------------------------------------------------------
# finite products


@dataclass(frozen=True)
class ProductRing(Ring):
    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise ValueError("a product needs at least one factor")

    @property
    def is_reduced(self):
        return all(F.is_reduced for F in self.factors)

    @property
    def is_trivial(self):
        return all(F.is_trivial for F in self.factors)

    def zero(self):
        return tuple(F.zero() for F in self.factors)

    def one(self):
        return tuple(F.one() for F in self.factors)

    def from_int(self, n):
        return tuple(F.from_int(n) for F in self.factors)

    def from_fraction(self, q):
        return tuple(F.from_fraction(q) for F in self.factors)

    def from_components(self, parts):
        return tuple(parts)

    def eval_tuple(self, items, evaluate):
        if len(items) != len(self.factors):
            raise ParseError(f"tuple of length {len(items)} for a product of {len(self.factors)} rings")
        return tuple(evaluate(node, F) for node, F in zip(items, self.factors))

    def add(self, a, b):
        return tuple(F.add(x, y) for F, x, y in zip(self.factors, a, b))

    def neg(self, a):
        return tuple(F.neg(x) for F, x in zip(self.factors, a))

    def sub(self, a, b):
        return tuple(F.sub(x, y) for F, x, y in zip(self.factors, a, b))

    def mul(self, a, b):
        return tuple(F.mul(x, y) for F, x, y in zip(self.factors, a, b))

    def is_zero(self, a):
        return all(F.is_zero(x) for F, x in zip(self.factors, a))

    def eq(self, a, b):
        return all(F.eq(x, y) for F, x, y in zip(self.factors, a, b))

    def inverse(self, a):
        parts = []
        for F, x in zip(self.factors, a):
            inv = F.inverse(x)
            if inv is None:
                return None
            parts.append(inv)
        return tuple(parts)

    def exact_div(self, a, b):
        parts = []
        for F, x, y in zip(self.factors, a, b):
            q = F.exact_div(x, y)
            if q is None:
                return None
            parts.append(q)
        return tuple(parts)

    def gcd(self, a, b):
        return tuple(F.gcd(x, y) for F, x, y in zip(self.factors, a, b))

    def associate(self, a):
        pairs = [F.associate(x) for F, x in zip(self.factors, a)]
        return tuple(p[0] for p in pairs), tuple(p[1] for p in pairs)

    def ambient(self):
        amb = tuple(F.ambient() for F in self.factors)
        if all(x is F for x, F in zip(amb, self.factors)):
            return self
        return ProductRing(amb)

    def from_ambient(self, x):
        return tuple(F.from_ambient(c) for F, c in zip(self.factors, x))

    def to_ambient(self, x):
        return tuple(F.to_ambient(c) for F, c in zip(self.factors, x))

    def to_str(self, a):
        return "(" + ", ".join(F.to_str(x) for F, x in zip(self.factors, a)) + ")"

    def random(self, rng, **kw):
        return tuple(F.random(rng, **kw) for F in self.factors)

    def descriptor(self):
        return {"type": "product", "factors": [F.descriptor() for F in self.factors]}

    def __str__(self):
        return " x ".join(str(F) for F in self.factors)


# ---------------------------------------------------------------------------
# subrings of k[t] of finite codimension


def _semigroup_closure(gens, limit):
    reach = [False] * limit
    reach[0] = True
    for n in range(1, limit):
        reach[n] = any(n >= g and reach[n - g] for g in gens)
    return reach


def semigroup_conductor(gens) -> int:
    """Smallest ``c`` such that every integer ``>= c`` lies in the semigroup."""
    m = min(gens)
    limit = 2 * m * max(gens) + 2
    reach = _semigroup_closure(gens, limit)
    run = 0
    for n in range(limit):
        run = run + 1 if reach[n] else 0
        if run == m:
            return n - m + 1
    raise ValueError("generators do not span a numerical semigroup")


def minimal_generators(members: set, conductor: int):
    """Minimal generators of the numerical semigroup ``members`` (given below ``conductor``)."""

    def inside(n):
        return n >= conductor or n in members

    top = conductor + max(1, min(x for x in range(1, conductor + 2) if inside(x)))
    gens = []
    for n in range(1, top + 1):
        if not inside(n):
            continue
        if not any(inside(k) and inside(n - k) for k in range(1, n)):
            gens.append(n)
    return tuple(gens)


class _AmbientSubring(Ring):
    """Shared machinery for subrings of ``field[var]`` whose payloads are ambient polynomials."""

    is_domain = True

    @cached_property
    def _amb(self):
        return PolynomialRing(self.field, (self.var,))

    def ambient(self):
        return self._amb

    def contains(self, p: MultiPoly) -> bool:
        raise NotImplementedError

    def from_ambient(self, x):
        if not self.contains(x):
            raise MembershipError(f"{self._amb.to_str(x)} is not in {self}")
        return x

    def zero(self):
        return self._amb.zero()

    def one(self):
        return self._amb.one()

    def from_int(self, n):
        return self._amb.from_int(n)

    def from_fraction(self, q):
        return self._amb.from_fraction(q)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def is_zero(self, a):
        return not a.terms

    def eq(self, a, b):
        return a == b

    def inverse(self, a):
        if a.is_constant() and a.terms:
            return a.const_like(self.field.inverse(a.constant_term()))
        return None

    def exact_div(self, a, b):
        q = poly_exact_div(a, b)
        return q if q is not None and self.contains(q) else None

    def flat_vars(self):
        return (self.var,)

    def flat_terms(self, a):
        return self.field, dict(a.terms)

    def to_str(self, a):
        return format_terms(self.field, (self.var,), a.terms)


@dataclass(frozen=True)
class SemigroupRing(_AmbientSubring):
    """``field[t^s : s in S]`` for a numerical semigroup ``S`` (finite complement)."""

    field: Ring
    generators: tuple
    var: str = "t"

    def __post_init__(self):
        gens = sorted(set(int(g) for g in self.generators))
        if not gens or gens[0] <= 0:
            raise ValueError("semigroup generators must be positive integers")
        if math.gcd(*gens) != 1:
            raise ValueError(f"gcd of generators {gens} is not 1")
        if not self.field.is_field:
            raise ValueError("base of a semigroup ring must be a field")
        conductor = semigroup_conductor(gens)
        reach = _semigroup_closure(gens, conductor + 1)
        members = {n for n in range(conductor) if reach[n]}
        object.__setattr__(self, "generators", minimal_generators(members, conductor))

    @cached_property
    def conductor(self) -> int:
        return semigroup_conductor(self.generators)

    @cached_property
    def members(self) -> frozenset:
        reach = _semigroup_closure(self.generators, self.conductor + 1)
        return frozenset(n for n in range(self.conductor) if reach[n])

    @property
    def gaps(self):
        return sorted(set(range(self.conductor)) - self.members)

    def contains_exponent(self, n: int) -> bool:
        return n >= self.conductor or n in self.members

    def contains(self, p):
        return all(self.contains_exponent(e[0]) for e in p.terms)

    def monomial(self, n, c=None):
        if not self.contains_exponent(n):
            raise MembershipError(f"{self.var}^{n} is not in {self}")
        return MultiPoly.monomial(self.field, (self.var,), (n,), c)

    def as_subalgebra(self) -> "FiniteSubalgebra":
        basis = [self.monomial(n) for n in sorted(self.members)]
        return FiniteSubalgebra(self.field, self.var, self.conductor, tuple(basis))

    def random(self, rng, degree=6, terms=3, **kw):
        out = {}
        for _ in range(terms):
            n = rng.randint(0, degree)
            if self.contains_exponent(n):
                out[(n,)] = self.field.random(rng, **kw)
        return MultiPoly(self.field, (self.var,), out)

    def descriptor(self):
        return {
            "type": "semigroup",
            "field": self.field.descriptor(),
            "generators": list(self.generators),
            "var": self.var,
        }

    def __str__(self):
        return f"{self.field}[" + ",".join(f"{self.var}^{g}" for g in self.generators) + "]"


@dataclass(frozen=True)
class FiniteSubalgebra(_AmbientSubring):
    """``V + t^N field[t]`` with ``V`` a subspace of polynomials of degree ``< N``.

    ``basis`` is the reduced echelon basis of ``V`` (each vector monic at its
    leading exponent, the pivots; no vector has a term at another pivot).
    These rings are the stages of an adjunction tower inside ``field[t]``.
    """

    field: Ring
    var: str
    cutoff: int
    basis: tuple

    @classmethod
    def build(cls, field, var, cutoff, vectors):
        """Echelonize ``vectors`` (truncated below ``cutoff``) and shrink the cutoff."""
        basis = _echelon([v.truncate(0, cutoff) for v in vectors])
        pivots = {v.leading_term()[0][0]: v for v in basis}
        while cutoff > 0 and cutoff - 1 in pivots and len(pivots[cutoff - 1].terms) == 1:
            del pivots[cutoff - 1]
            cutoff -= 1
        return cls(field, var, cutoff, tuple(pivots[d] for d in sorted(pivots)))

    @classmethod
    def generated(cls, field, var, cutoff, generators, start=()):
        """Smallest subalgebra containing ``start``, ``generators`` and ``t^cutoff field[t]``."""
        one = MultiPoly.constant(field, (var,), field.one())
        vectors = [one] + [g.truncate(0, cutoff) for g in start] + [g.truncate(0, cutoff) for g in generators]
        basis = _echelon(vectors)
        while True:
            products = [
                (a * b).truncate(0, cutoff) for i, a in enumerate(basis) for b in basis[i:]
            ]
            new = _echelon(basis + products)
            if len(new) == len(basis):
                break
            basis = new
        return cls.build(field, var, cutoff, basis)

    @cached_property
    def _pivots(self):
        return {v.leading_term()[0][0]: v for v in self.basis}

    def reduce(self, p: MultiPoly) -> MultiPoly:
        """Residue of ``p`` modulo the subalgebra (zero iff ``p`` belongs)."""
        r = p.truncate(0, self.cutoff)
        for d, v in self._pivots.items():
            c = r.terms.get((d,))
            if c is not None:
                r = r - v.scale(c)
        return r

    def contains(self, p):
        return self.reduce(p).is_zero()

    def dimension_below_cutoff(self):
        return len(self.basis)

    def includes(self, other: "FiniteSubalgebra") -> bool:
        top = max(self.cutoff, other.cutoff)
        vecs = list(other.basis) + [
            MultiPoly.monomial(self.field, (self.var,), (n,)) for n in range(other.cutoff, top)
        ]
        return all(self.contains(v) for v in vecs)

    def simplify(self) -> Ring:
        """Return the plainest equal descriptor (``field[t]``, a semigroup ring, or self)."""
        if self.cutoff == 0:
            return PolynomialRing(self.field, (self.var,))
        if all(len(v.terms) == 1 for v in self.basis):
            members = {v.leading_term()[0][0] for v in self.basis}
            gens = minimal_generators(members, self.cutoff)
            return SemigroupRing(self.field, gens, self.var)
        return self

    def random(self, rng, terms=3, **kw):
        out = self.zero()
        for _ in range(terms):
            if rng.random() < 0.5 and self.basis:
                v = rng.choice(self.basis)
            else:
                v = MultiPoly.monomial(self.field, (self.var,), (self.cutoff + rng.randint(0, 3),))
            out = out + v.scale(self.field.random(rng))
        return out

    def descriptor(self):
        return {
            "type": "subalgebra",
            "field": self.field.descriptor(),
            "var": self.var,
            "cutoff": self.cutoff,
            "basis": [self._amb.to_str(v) for v in self.basis],
        }

    def __str__(self):
        inner = ", ".join(self._amb.to_str(v) for v in self.basis)
        return f"{self.field}<{inner}; {self.var}^{self.cutoff}*{self.field}[{self.var}]>"


def _echelon(vectors):
    """Reduced echelon basis (pivot = leading exponent) of univariate polynomials."""
    basis = {}
    for v in vectors:
        r = v
        for d, b in basis.items():
            c = r.terms.get((d,))
            if c is not None:
                r = r - b.scale(c)
        while not r.is_zero():
            (d,), lc = r.leading_term()
            if d in basis:
                r = r - basis[d].scale(lc)
                continue
            r = r.scale(r.ring.inverse(lc))
            for k in list(basis):
                c = basis[k].terms.get((d,))
                if c is not None:
                    basis[k] = basis[k] - r.scale(c)
            basis[d] = r
            break
    return [basis[d] for d in sorted(basis)]


# ---------------------------------------------------------------------------
# dual numbers base[e]/<e^k>


@dataclass(frozen=True)
class DualNumbers(Ring):
    base: Ring
    order: int = 2
    var: str = "e"

    is_reduced = False

    def __post_init__(self):
        if self.order < 2:
            raise ValueError("nilpotency order must be at least 2")

    def zero(self):
        return (self.base.zero(),) * self.order

    def one(self):
        return (self.base.one(),) + (self.base.zero(),) * (self.order - 1)

    def from_int(self, n):
        return (self.base.from_int(n),) + (self.base.zero(),) * (self.order - 1)

    def from_fraction(self, q):
        return (self.base.from_fraction(q),) + (self.base.zero(),) * (self.order - 1)

    def embed(self, c):
        return (c,) + (self.base.zero(),) * (self.order - 1)

    def gen(self, name):
        if name == self.var:
            z = self.base.zero()
            return (z, self.base.one()) + (z,) * (self.order - 2)
        return self.embed(self.base.gen(name))

    def add(self, a, b):
        return tuple(self.base.add(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.base.neg(x) for x in a)

    def sub(self, a, b):
        return tuple(self.base.sub(x, y) for x, y in zip(a, b))

    def mul(self, a, b):
        B = self.base
        out = [B.zero()] * self.order
        for i, x in enumerate(a):
            if B.is_zero(x):
                continue
            for j in range(self.order - i):
                y = b[j]
                if not B.is_zero(y):
                    out[i + j] = B.add(out[i + j], B.mul(x, y))
        return tuple(out)

    def is_zero(self, a):
        return all(self.base.is_zero(x) for x in a)

    def eq(self, a, b):
        return all(self.base.eq(x, y) for x, y in zip(a, b))

    def is_nilpotent(self, a):
        return self.base.is_zero(a[0])

    def nilpotency_index(self):
        return self.order

    def valuation(self, a):
        """Smallest ``i`` with a nonzero ``e^i`` coefficient (``order`` for zero)."""
        for i, x in enumerate(a):
            if not self.base.is_zero(x):
                return i
        return self.order

    def inverse(self, a):
        u = self.base.inverse(a[0])
        if u is None:
            return None
        one = self.one()
        step = self.neg(self.mul(self.embed(u), self.sub(a, self.embed(a[0]))))
        total, term = one, one
        for _ in range(self.order):
            term = self.mul(term, step)
            total = self.add(total, term)
        return self.mul(total, self.embed(u))

    def reduce_residue(self, a):
        """Image in the reduced quotient ``base`` (the ``e^0`` coefficient)."""
        return a[0]

    @cached_property
    def _amb(self):
        return PolynomialRing(self.base, (self.var,))

    def ambient(self):
        return self._amb

    def from_ambient(self, x):
        B = self.base
        out = [B.zero()] * self.order
        for (k,), c in x.terms.items():
            if k < self.order:
                out[k] = c
        return tuple(out)

    def to_ambient(self, a):
        return MultiPoly(self.base, (self.var,), {(k,): c for k, c in enumerate(a)})

    def flat_vars(self):
        return self.base.flat_vars() + (self.var,)

    def flat_terms(self, a):
        return self._amb.flat_terms(self.to_ambient(a))

    def to_str(self, a):
        return self._amb.to_str(self.to_ambient(a))

    def random(self, rng, **kw):
        return tuple(self.base.random(rng, **kw) for _ in range(self.order))

    def descriptor(self):
        return {"type": "dual", "base": self.base.descriptor(), "order": self.order, "var": self.var}

    def __str__(self):
        return f"{self.base}[{self.var}]/<{self.var}^{self.order}>"


# ---------------------------------------------------------------------------
# localization at one element of an integral gcd ring


@dataclass(frozen=True)
class Localization(Ring):
    """``base[1/element]`` for an integral base with gcds; payload ``(num, k)`` = ``num/element^k``.

    ``k`` is minimal, which makes the payload canonical.
    """

    base: Ring
    element: object

    is_domain = True

    def __post_init__(self):
        if not self.base.is_domain:
            raise UnsupportedRingError(f"localization is implemented for integral bases, not {self.base}")

    def _norm(self, num, k):
        B, s = self.base, self.element
        while k > 0:
            q = B.exact_div(num, s)
            if q is None:
                break
            num, k = q, k - 1
        return (num, k)

    def zero(self):
        return (self.base.zero(), 0)

    def one(self):
        return (self.base.one(), 0)

    def from_int(self, n):
        return (self.base.from_int(n), 0)

    def from_fraction(self, q):
        if q.denominator == 1:
            return self.from_int(q.numerator)
        d = self.inverse(self.from_int(q.denominator))
        if d is None:
            raise ParseError(f"{q} is not an element of {self}")
        return self.mul(self.from_int(q.numerator), d)

    def from_base(self, x):
        return (x, 0)

    def gen(self, name):
        return (self.base.gen(name), 0)

    def add(self, a, b):
        B, s = self.base, self.element
        (x, k), (y, l) = a, b
        m = max(k, l)
        num = B.add(B.mul(x, B.pow(s, m - k)), B.mul(y, B.pow(s, m - l)))
        return self._norm(num, m)

    def neg(self, a):
        return (self.base.neg(a[0]), a[1])

    def mul(self, a, b):
        return self._norm(self.base.mul(a[0], b[0]), a[1] + b[1])

    def is_zero(self, a):
        return self.base.is_zero(a[0])

    def eq(self, a, b):
        return a[1] == b[1] and self.base.eq(a[0], b[0])

    def _strip(self, x):
        """Remove from ``x`` every factor it shares with the inverted element."""
        B = self.base
        n = 0
        while True:
            g = B.gcd(x, self.element)
            if B.is_unit(g):
                return x, n
            x = B.exact_div(x, g)
            n += 1

    def inverse(self, a):
        B, s = self.base, self.element
        num, k = a
        if B.is_zero(num):
            return None
        rest, n = self._strip(num)
        if not B.is_unit(rest):
            return None
        # num divides s^N for N large enough
        N = max(n, 1)
        while True:
            q = B.exact_div(B.pow(s, N), num)
            if q is not None:
                return self._norm(B.mul(q, B.pow(s, k)), N)
            N += 1

    def exact_div(self, a, b):
        inv = self.inverse(b)
        if inv is not None:
            return self.mul(a, inv)
        B, s = self.base, self.element
        if B.is_zero(b[0]):
            return self.zero() if B.is_zero(a[0]) else None
        for N in range(0, 64):
            q = B.exact_div(B.mul(a[0], B.pow(s, N)), b[0])
            if q is not None:
                return self._norm(q, a[1] + N - b[1]) if a[1] + N >= b[1] else self._norm(
                    B.mul(q, B.pow(s, b[1] - a[1] - N)), 0
                )
        return None

    def gcd(self, a, b):
        B = self.base
        g = B.gcd(a[0], b[0])
        if B.is_zero(g):
            return self.zero()
        g, _ = self._strip(g)
        return (B.associate(g)[0], 0)

    def associate(self, a):
        B = self.base
        if B.is_zero(a[0]):
            return a, self.one()
        canon, _ = self._strip(B.associate(a[0])[0])
        unit = self.exact_div(a, (canon, 0))
        return (canon, 0), unit

    def image_of(self, src: Ring, x):
        if src == self:
            return x
        if src == self.base:
            return self._norm(x, 0)
        if isinstance(src, Localization) and src.base == self.base:
            B = self.base
            ratio = B.exact_div(self.element, src.element)
            if ratio is not None:
                num, k = x
                return self._norm(B.mul(num, B.pow(ratio, k)), k)
        raise UnsupportedRingError(f"no canonical map {src} -> {self}")

    def to_str(self, a):
        num, k = a
        s = self.base.to_str(num)
        if k == 0:
            return s
        den = self.base.to_str(self.element)
        power = "" if k == 1 else f"^{k}"
        return f"({s})/({den}){power}"

    def random(self, rng, **kw):
        return self._norm(self.base.random(rng, **kw), rng.randint(0, 2))

    def descriptor(self):
        return {
            "type": "localization",
            "base": self.base.descriptor(),
            "element": self.base.to_str(self.element),
        }

    def __str__(self):
        return f"{self.base}[1/({self.base.to_str(self.element)})]"


# ---------------------------------------------------------------------------
# reduced quotients ZZ/r and k[x]/<m> with r, m squarefree


def radical_int(n: int) -> int:
    """Product of the distinct primes dividing ``n`` (trial division)."""
    n = abs(n)
    if n == 0:
        return 0
    r, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            r *= p
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    return r * n if n > 1 else r


def _is_univariate_over_field(R):
    return isinstance(R, PolynomialRing) and len(R.vars) == 1 and R.base.is_field


@dataclass(frozen=True)
class ReducedQuotient(Ring):
    """``base/<modulus>`` with a squarefree modulus, a finite product of fields."""

    base: Ring
    modulus: object

    def __post_init__(self):
        B = self.base
        if isinstance(B, Integers):
            if self.modulus <= 1 or radical_int(self.modulus) != self.modulus:
                raise ValueError(f"modulus {self.modulus} must be squarefree and > 1")
        elif _is_univariate_over_field(B):
            m = self.modulus
            if m.degree() < 1 or U.monic(m) != m or U.squarefree_part(m) != m:
                raise ValueError("modulus must be monic, squarefree, of positive degree")
        else:
            raise UnsupportedRingError(f"reduced quotients of {B} are not supported")

    @property
    def _int(self):
        return isinstance(self.base, Integers)

    @property
    def is_numeric(self):
        return self._int

    @property
    def is_field(self):
        if self._int:
            return all(self.modulus % d for d in range(2, math.isqrt(self.modulus) + 1))
        return False

    def reduce(self, x):
        return x % self.modulus if self._int else U.urem(x, self.modulus)

    def zero(self):
        return self.base.zero()

    def one(self):
        return self.reduce(self.base.one())

    def from_int(self, n):
        return self.reduce(self.base.from_int(n))

    def from_fraction(self, q):
        if self._int:
            d = q.denominator
            if math.gcd(d, self.modulus) != 1:
                raise ParseError(f"{q} has no image in {self}")
            return q.numerator * pow(d, -1, self.modulus) % self.modulus
        return self.base.from_fraction(q)

    def gen(self, name):
        return self.reduce(self.base.gen(name))

    def add(self, a, b):
        return self.reduce(self.base.add(a, b))

    def neg(self, a):
        return self.reduce(self.base.neg(a))

    def sub(self, a, b):
        return self.reduce(self.base.sub(a, b))

    def mul(self, a, b):
        return self.reduce(self.base.mul(a, b))

    def is_zero(self, a):
        return self.base.is_zero(a)

    def eq(self, a, b):
        return a == b

    def inverse(self, a):
        if self._int:
            return pow(a, -1, self.modulus) if math.gcd(a, self.modulus) == 1 else None
        return U.uinverse_mod(a, self.modulus)

    def quasi_inverse(self, a):
        """Return ``(a_bullet, e_a)`` via the splitting ``m = gcd(a, m) * m2``."""
        if self._int:
            m = self.modulus
            g = math.gcd(a, m)
            m2 = m // g
            if m2 == 1:
                return 0, 0
            e = g * pow(g, -1, m2) % m if g != m else 0
            ainv = pow(a % m2, -1, m2)
            return e * ainv % m, e
        m = self.modulus
        g = U.ugcd(a, m)
        m2 = U.udivmod(m, g)[0]
        if m2.degree() == 0:
            return self.zero(), self.zero()
        if g.degree() == 0:
            inv = self.inverse(a)
            return inv, self.one()
        e = self.reduce(g * U.uinverse_mod(g, m2))
        ainv = U.uinverse_mod(a, m2)
        return self.reduce(e * ainv), e

    def exact_div(self, a, b):
        # b divides a iff e_b a = a, and then a b_bullet is a quotient
        b_bullet, eb = self.quasi_inverse(b)
        if not self.eq(self.mul(eb, a), a):
            return None
        return self.mul(a, b_bullet)

    def gcd(self, a, b):
        ea = self.quasi_inverse(a)[1]
        eb = self.quasi_inverse(b)[1]
        return self.sub(self.add(ea, eb), self.mul(ea, eb))

    def associate(self, a):
        ainv, e = self.quasi_inverse(a)
        # a = (a + 1 - e) * e with a + 1 - e a unit
        unit = self.add(a, self.sub(self.one(), e))
        return e, unit

    def image_of(self, src: Ring, x):
        if src == self:
            return x
        if src == self.base:
            return self.reduce(x)
        if isinstance(src, ReducedQuotient) and src.base == self.base:
            return self.reduce(x)
        if isinstance(src, Localization) and src.base == self.base:
            num, k = x
            s_inv = self.inverse(self.reduce(src.element))
            if s_inv is None:
                raise UnsupportedRingError(f"{src.element} is not invertible in {self}")
            return self.mul(self.reduce(num), self.pow(s_inv, k))
        raise UnsupportedRingError(f"no canonical map {src} -> {self}")

    def to_str(self, a):
        return self.base.to_str(a)

    def random(self, rng, **kw):
        return self.reduce(self.base.random(rng, **kw))

    def descriptor(self):
        return {
            "type": "reduced_quotient",
            "base": self.base.descriptor(),
            "modulus": self.base.to_str(self.modulus),
        }

    def __str__(self):
        return f"{self.base}/<{self.base.to_str(self.modulus)}>"


# ---------------------------------------------------------------------------
# an idempotent component eC, answering zero-or-unit questions by splitting


class ComponentSplit(Exception):
    """Raised inside a component when an element is neither zero nor a unit there.

    ``idempotent`` is a base-ring idempotent ``e1`` with ``0 != e1 != e``
    splitting the current component ``eC`` into ``e1 C`` and ``(e - e1) C``.
    """

    def __init__(self, idempotent):
        self.idempotent = idempotent
        super().__init__("component split required")


@dataclass(frozen=True)
class IdempotentComponent(Ring):
    """The ring ``eC`` (unit ``e``) of a zero-dimensional reduced ring ``C``.

    Code written for discrete fields runs unchanged over this ring: each
    zero test either answers or raises :class:`ComponentSplit`.
    """

    base: Ring
    e: object

    is_field = True
    is_domain = True

    def zero(self):
        return self.base.zero()

    def one(self):
        return self.e

    def from_int(self, n):
        return self.base.mul(self.e, self.base.from_int(n))

    def from_fraction(self, q):
        return self.base.mul(self.e, self.base.from_fraction(q))

    def project(self, x):
        return self.base.mul(self.e, x)

    def add(self, a, b):
        return self.base.add(a, b)

    def neg(self, a):
        return self.base.neg(a)

    def sub(self, a, b):
        return self.base.sub(a, b)

    def mul(self, a, b):
        return self.base.mul(a, b)

    def _idem(self, a):
        B = self.base
        return B.mul(self.e, quasi_inverse_payload(B, a)[1])

    def is_zero(self, a):
        B = self.base
        if B.is_zero(a):
            return True
        ea = self._idem(a)
        if B.eq(ea, self.e):
            return False
        raise ComponentSplit(ea)

    def eq(self, a, b):
        return self.is_zero(self.sub(a, b))

    def inverse(self, a):
        if self.is_zero(a):
            return None
        return self.base.mul(self.e, quasi_inverse_payload(self.base, a)[0])

    def gcd(self, a, b):
        return self.zero() if self.is_zero(a) and self.is_zero(b) else self.one()

    def associate(self, a):
        if self.is_zero(a):
            return a, self.one()
        return self.one(), a

    def to_str(self, a):
        return self.base.to_str(a)

    @property
    def is_numeric(self):
        return self.base.is_numeric

    def flat_terms(self, a):
        return self.base.flat_terms(a)

    def flat_vars(self):
        return self.base.flat_vars()

    def descriptor(self):
        return {"type": "component", "base": self.base.descriptor(), "e": self.base.to_str(self.e)}

    def __str__(self):
        return f"({self.base.to_str(self.e)})*{self.base}"


# ---------------------------------------------------------------------------
# quasi-inverses and annihilator idempotents at payload level


def quasi_inverse_payload(R: Ring, a):
    """Return ``(a_bullet, e_a)`` in a zero-dimensional reduced ring."""
    if R.is_trivial:
        return R.zero(), R.zero()
    if isinstance(R, ProductRing):
        parts = [quasi_inverse_payload(F, x) for F, x in zip(R.factors, a)]
        return tuple(p[0] for p in parts), tuple(p[1] for p in parts)
    if isinstance(R, ReducedQuotient):
        return R.quasi_inverse(a)
    if isinstance(R, IdempotentComponent):
        b, e = quasi_inverse_payload(R.base, a)
        return R.base.mul(R.e, b), R.base.mul(R.e, e)
    if R.is_zero(a):
        return R.zero(), R.zero()
    inv = R.inverse(a)
    if inv is not None:
        return inv, R.one()
    raise NotZeroDimensionalError(f"{R.to_str(a)} is neither zero nor a unit in {R}")


def is_zero_dimensional(R: Ring) -> bool:
    if R.is_trivial or R.is_field:
        return True
    if isinstance(R, ProductRing):
        return all(is_zero_dimensional(F) for F in R.factors)
    return isinstance(R, (ReducedQuotient, IdempotentComponent))


def ann_idempotent_payload(R: Ring, a):
    """``e_a`` with ``Ann(a) = <1 - e_a>`` in a pp-ring of the family."""
    if R.is_trivial:
        return R.zero()
    if isinstance(R, ProductRing):
        return tuple(ann_idempotent_payload(F, x) for F, x in zip(R.factors, a))
    if is_zero_dimensional(R) and not R.is_domain:
        return quasi_inverse_payload(R, a)[1]
    if isinstance(R, PolynomialRing) and not R.base.is_domain:
        B = R.base
        if not B.is_reduced:
            raise UnsupportedRingError(f"{R} is not a pp-ring")
        comp = B.one()
        for c in a.terms.values():
            comp = B.mul(comp, B.sub(B.one(), ann_idempotent_payload(B, c)))
        return R.const(B.sub(B.one(), comp))
    if R.is_domain:
        return R.zero() if R.is_zero(a) else R.one()
    raise UnsupportedRingError(f"{R} is not in the pp-ring family")


# ---------------------------------------------------------------------------
# public ring-core operations


@dataclass(frozen=True, eq=False)
class Idempotent:
    """A ring value with ``value**2 == value`` (checked)."""

    value: RingValue

    def __post_init__(self):
        v = self.value
        if not (v * v == v):
            raise NotIdempotentError(f"{v} is not idempotent")

    @property
    def ring(self):
        return self.value.ring

    def complement(self) -> "Idempotent":
        return Idempotent(1 - self.value)

    def __eq__(self, other):
        if isinstance(other, Idempotent):
            return self.value == other.value
        return self.value == other

    def __hash__(self):
        return hash(self.value)

    def __str__(self):
        return str(self.value)

    def __repr__(self):
        return f"Idempotent({self.value})"


def annihilator_idempotent(a: RingValue) -> Idempotent:
    """``e_a`` with ``Ann(a) = <1 - e_a>`` and ``a * e_a = a``."""
    R = a.ring
    return Idempotent(RingValue(R, ann_idempotent_payload(R, a.payload)))


def is_regular(a: RingValue) -> bool:
    R = a.ring
    return R.is_one(ann_idempotent_payload(R, a.payload))


def membership(x, sub: Ring) -> bool:
    """Decide whether ``x`` (a value of an ambient ring) lies in the subring ``sub``."""
    payload = x.payload if isinstance(x, RingValue) else x
    if isinstance(x, RingValue) and x.ring == sub:
        return True
    if isinstance(sub, _AmbientSubring):
        if isinstance(x, RingValue) and x.ring != sub.ambient() and not isinstance(x.ring, _AmbientSubring):
            raise UnsupportedRingError(f"{x.ring} is not the ambient ring of {sub}")
        if not isinstance(payload, MultiPoly) or payload.vars != (sub.var,):
            raise UnsupportedRingError(f"cannot test membership of {payload!r} in {sub}")
        return sub.contains(payload)
    if isinstance(sub, PolynomialRing) and isinstance(sub.base, _AmbientSubring):
        if not isinstance(payload, MultiPoly):
            raise UnsupportedRingError("expected a polynomial")
        return all(sub.base.contains(c) for c in payload.terms.values())
    raise UnsupportedRingError(f"membership in {sub} is not supported")


def reduced_quotient(base: Ring, a) -> Ring:
    """Descriptor of ``(base/<a>)_red``."""
    if isinstance(a, RingValue):
        a = a.payload
    if not base.is_reduced:
        raise UnsupportedRingError("reduced quotients need a reduced base")
    if base.is_trivial:
        return base
    if isinstance(base, ProductRing):
        return ProductRing(tuple(reduced_quotient(F, x) for F, x in zip(base.factors, a)))
    if base.is_zero(a):
        return base
    if base.is_field:
        return TrivialRing()
    if isinstance(base, Integers):
        r = radical_int(a)
        return TrivialRing() if r == 1 else ReducedQuotient(ZZ, r)
    if _is_univariate_over_field(base):
        m = U.squarefree_part(a)
        return TrivialRing() if m.degree() == 0 else ReducedQuotient(base, m)
    if isinstance(base, ReducedQuotient):
        if base._int:
            g = math.gcd(a, base.modulus)
            return TrivialRing() if g == 1 else ReducedQuotient(base.base, g)
        g = U.ugcd(a, base.modulus)
        return TrivialRing() if g.degree() == 0 else ReducedQuotient(base.base, g)
    if isinstance(base, Localization) and (
        isinstance(base.base, Integers) or _is_univariate_over_field(base.base)
    ):
        B = base.base
        num = a[0]
        m = radical_int(num) if isinstance(B, Integers) else U.squarefree_part(num)
        while True:
            g = B.gcd(m, base.element)
            if B.is_unit(g):
                break
            m = B.exact_div(m, g)
        if isinstance(B, Integers):
            m = abs(m)
            return TrivialRing() if m == 1 else ReducedQuotient(B, m)
        m = U.monic(m)
        return TrivialRing() if m.degree() == 0 else ReducedQuotient(B, m)
    raise UnsupportedRingError(f"no radical-generator algorithm for {base}")


def localize(base: Ring, s) -> Ring:
    """Descriptor of ``base[1/s]`` in the family."""
    if isinstance(s, RingValue):
        s = s.payload
    if base.is_trivial:
        return base
    if isinstance(base, ProductRing):
        return ProductRing(tuple(localize(F, x) for F, x in zip(base.factors, s)))
    if base.is_zero(s):
        return TrivialRing()
    if base.is_unit(s):
        return base
    if isinstance(base, ReducedQuotient):
        if base._int:
            m = base.modulus // math.gcd(s, base.modulus)
            return TrivialRing() if m == 1 else ReducedQuotient(base.base, m)
        m = U.udivmod(base.modulus, U.ugcd(s, base.modulus))[0]
        return TrivialRing() if m.degree() == 0 else ReducedQuotient(base.base, U.monic(m))
    if isinstance(base, Localization):
        B = base.base
        num, _ = s
        return Localization(B, B.associate(B.mul(base.element, num))[0])
    if base.is_domain:
        return Localization(base, base.associate(s)[0])
    raise UnsupportedRingError(f"localization of {base} is not supported")


def canonical_image(target: Ring, src: Ring, x):
    """Image of ``x`` under the canonical map ``src -> target`` (quotients, localizations)."""
    if target == src:
        return x
    if target.is_trivial:
        return target.zero()
    if isinstance(target, ProductRing) and isinstance(src, ProductRing):
        return tuple(canonical_image(T, S, c) for T, S, c in zip(target.factors, src.factors, x))
    if isinstance(target, (Localization, ReducedQuotient)):
        return target.image_of(src, x)
    raise UnsupportedRingError(f"no canonical map {src} -> {target}")


# ---------------------------------------------------------------------------
# descriptors


def ring_from_descriptor(doc) -> Ring:
    """Build a ring from its JSON descriptor (``dict``) or a short name string."""
    if isinstance(doc, str):
        doc = {"type": doc}
    if not isinstance(doc, dict) or "type" not in doc:
        raise ParseError(f"ring descriptor must be an object with a 'type', got {doc!r}")
    kind = doc["type"]
    try:
        if kind == "ZZ":
            return ZZ
        if kind == "QQ":
            return QQ
        if kind == "GF":
            return PrimeField(int(doc["p"]))
        if kind == "trivial":
            return TrivialRing()
        if kind == "poly":
            return PolynomialRing(ring_from_descriptor(doc["base"]), tuple(doc["vars"]))
        if kind == "product":
            return ProductRing(tuple(ring_from_descriptor(f) for f in doc["factors"]))
        if kind == "semigroup":
            return SemigroupRing(
                ring_from_descriptor(doc.get("field", "QQ")), tuple(doc["generators"]), doc.get("var", "t")
            )
        if kind == "subalgebra":
            field = ring_from_descriptor(doc["field"])
            amb = PolynomialRing(field, (doc["var"],))
            vecs = [amb.parse(s) for s in doc["basis"]]
            return FiniteSubalgebra.build(field, doc["var"], int(doc["cutoff"]), vecs)
        if kind == "dual":
            return DualNumbers(ring_from_descriptor(doc["base"]), int(doc.get("order", 2)), doc.get("var", "e"))
        if kind == "localization":
            base = ring_from_descriptor(doc["base"])
            return localize(base, base.parse(str(doc["element"])))
        if kind == "reduced_quotient":
            base = ring_from_descriptor(doc["base"])
            return reduced_quotient(base, base.parse(str(doc["modulus"])))
    except KeyError as exc:
        raise ParseError(f"ring descriptor of type {kind!r} lacks field {exc}") from exc
    except (ValueError, TypeError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"invalid {kind!r} descriptor: {exc}") from exc
    raise ParseError(f"unknown ring type {kind!r}")


__all__ = [
    "ProductRing",
    "SemigroupRing",
    "FiniteSubalgebra",
    "DualNumbers",
    "Localization",
    "ReducedQuotient",
    "IdempotentComponent",
    "ComponentSplit",
    "Idempotent",
    "annihilator_idempotent",
    "is_regular",
    "membership",
    "reduced_quotient",
    "localize",
    "canonical_image",
    "quasi_inverse_payload",
    "ann_idempotent_payload",
    "is_zero_dimensional",
    "ring_from_descriptor",
    "radical_int",
]
