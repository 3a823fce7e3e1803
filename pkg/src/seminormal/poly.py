"""Sparse multivariate polynomials over any ring of the family.

A :class:`MultiPoly` maps exponent tuples to nonzero coefficient payloads of
its coefficient ring.  :class:`PolynomialRing` is the ring descriptor whose
payloads are ``MultiPoly`` objects, so polynomial rings nest freely
(``QQ[t][X]`` is ``PolynomialRing(PolynomialRing(QQ, ('t',)), ('X',))``).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .core import Ring
from .errors import RingMismatchError


def grlex_key(exp):
    return (sum(exp), exp)


class MultiPoly:
    """Immutable sparse polynomial.

    Args:
        ring: coefficient ring.
        vars: ordered tuple of variable names.
        terms: mapping ``exponent tuple -> coefficient payload``; zero
            coefficients are dropped.
    """

    __slots__ = ("ring", "vars", "terms", "_hash")

    def __init__(self, ring: Ring, vars, terms=None, _clean=False):
        self.ring = ring
        self.vars = tuple(vars)
        if terms is None:
            terms = {}
        elif not _clean:
            n = len(self.vars)
            clean = {}
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != n:
                    raise ValueError(f"exponent {e} does not match variables {self.vars}")
                if not ring.is_zero(c):
                    clean[e] = c
            terms = clean
        self.terms = terms
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def constant(cls, ring, vars, c):
        return cls(ring, vars, {(0,) * len(vars): c})

    @classmethod
    def monomial(cls, ring, vars, exp, c=None):
        return cls(ring, vars, {tuple(exp): ring.one() if c is None else c})

    @classmethod
    def variable(cls, ring, vars, name):
        vars = tuple(vars)
        exp = tuple(1 if v == name else 0 for v in vars)
        return cls(ring, vars, {exp: ring.one()})

    def _new(self, terms):
        return MultiPoly(self.ring, self.vars, terms, _clean=True)

    def zero_like(self):
        return self._new({})

    def const_like(self, c):
        return MultiPoly.constant(self.ring, self.vars, c)

    # -- basic queries ------------------------------------------------
    @property
    def poly_ring(self) -> "PolynomialRing":
        return PolynomialRing(self.ring, self.vars)

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * len(self.vars), self.ring.zero())

    eval_at_zero = constant_term

    def coeff(self, exp):
        return self.terms.get(tuple(exp), self.ring.zero())

    def sorted_terms(self, reverse=True):
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=reverse)

    def leading_term(self):
        exp = max(self.terms, key=grlex_key)
        return exp, self.terms[exp]

    def _index(self, var):
        return var if isinstance(var, int) else self.vars.index(var)

    def degree(self, var=None):
        """Degree in ``var`` (total degree when ``var`` is None); -1 for zero."""
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        i = self._index(var)
        return max(e[i] for e in self.terms)

    total_degree = degree

    def degrees(self):
        return tuple(self.degree(i) for i in range(len(self.vars)))

    def coefficients(self):
        return [c for _, c in self.sorted_terms()]

    # -- arithmetic ---------------------------------------------------
    def _check(self, other):
        if not isinstance(other, MultiPoly):
            raise TypeError(f"expected MultiPoly, got {type(other).__name__}")
        if other.vars != self.vars or (other.ring is not self.ring and other.ring != self.ring):
            raise RingMismatchError(
                f"polynomials over {self.ring}[{','.join(self.vars)}] and "
                f"{other.ring}[{','.join(other.vars)}]"
            )

    def _coerce(self, other):
        if isinstance(other, int):
            return self.const_like(self.ring.from_int(other))
        self._check(other)
        return other

    def __add__(self, other):
        other = self._coerce(other)
        R = self.ring
        terms = dict(self.terms)
        for e, c in other.terms.items():
            if e in terms:
                s = R.add(terms[e], c)
                if R.is_zero(s):
                    del terms[e]
                else:
                    terms[e] = s
            else:
                terms[e] = c
        return self._new(terms)

    __radd__ = __add__

    def __neg__(self):
        R = self.ring
        return self._new({e: R.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(self.ring.from_int(other))
        self._check(other)
        R = self.ring
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = R.mul(c1, c2)
                terms[e] = R.add(terms[e], c) if e in terms else c
        return MultiPoly(R, self.vars, terms)

    __rmul__ = __mul__

    def scale(self, c):
        """Multiply by a coefficient payload."""
        R = self.ring
        return MultiPoly(R, self.vars, {e: R.mul(c, x) for e, x in self.terms.items()})

    def mul_monomial(self, exp, c=None):
        R = self.ring
        terms = {
            tuple(a + b for a, b in zip(e, exp)): (x if c is None else R.mul(c, x))
            for e, x in self.terms.items()
        }
        return MultiPoly(R, self.vars, terms, _clean=c is None)

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power")
        result = self.const_like(self.ring.one())
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            if isinstance(other, int):
                return self == self.const_like(self.ring.from_int(other))
            return NotImplemented
        if other.vars != self.vars or other.ring != self.ring:
            return False
        if self.terms.keys() != other.terms.keys():
            return False
        R = self.ring
        return all(R.eq(c, other.terms[e]) for e, c in self.terms.items())

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    # -- transformations ----------------------------------------------
    def map_coeffs(self, fn, ring=None):
        ring = self.ring if ring is None else ring
        return MultiPoly(ring, self.vars, {e: fn(c) for e, c in self.terms.items()})

    def derivative(self, var):
        i = self._index(var)
        R = self.ring
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1 :]
                terms[ne] = R.mul(R.from_int(e[i]), c)
        return MultiPoly(R, self.vars, terms)

    def substitute(self, var, value):
        """Substitute a coefficient payload or a ``MultiPoly`` for ``var``.

        The variable stays in the variable list (with exponent 0), so the
        result lives in the same polynomial ring.
        """
        i = self._index(var)
        R = self.ring
        if isinstance(value, MultiPoly):
            self._check(value)
            result = self.zero_like()
            powers = {}
            for e, c in self.terms.items():
                k = e[i]
                if k not in powers:
                    powers[k] = value ** k
                rest = e[:i] + (0,) + e[i + 1 :]
                result = result + powers[k].mul_monomial(rest, c)
            return result
        terms = {}
        for e, c in self.terms.items():
            ne = e[:i] + (0,) + e[i + 1 :]
            c = R.mul(c, R.pow(value, e[i]))
            terms[ne] = R.add(terms[ne], c) if ne in terms else c
        return MultiPoly(R, self.vars, terms)

    def evaluate(self, values):
        """Evaluate at coefficient payloads, one per variable."""
        R = self.ring
        total = R.zero()
        for e, c in self.terms.items():
            t = c
            for v, k in zip(values, e):
                if k:
                    t = R.mul(t, R.pow(v, k))
            total = R.add(total, t)
        return total

    def as_univariate(self, var):
        """Split along ``var``: ``{degree: MultiPoly in the remaining variables}``."""
        i = self._index(var)
        rest_vars = self.vars[:i] + self.vars[i + 1 :]
        parts = {}
        for e, c in self.terms.items():
            parts.setdefault(e[i], {})[e[:i] + e[i + 1 :]] = c
        return {k: MultiPoly(self.ring, rest_vars, t, _clean=True) for k, t in parts.items()}

    @classmethod
    def from_univariate(cls, parts, var_index, vars, ring):
        terms = {}
        for k, p in parts.items():
            for e, c in p.terms.items():
                terms[e[:var_index] + (k,) + e[var_index:]] = c
        return cls(ring, vars, terms, _clean=True)

    def truncate(self, var, bound):
        """Drop every term whose exponent in ``var`` is >= ``bound``."""
        i = self._index(var)
        return self._new({e: c for e, c in self.terms.items() if e[i] < bound})

    def __str__(self):
        return self.poly_ring.to_str(self)

    def __repr__(self):
        return f"MultiPoly({self.ring}[{','.join(self.vars)}], {self})"


# ---------------------------------------------------------------------------
# printing


def _balanced_parens(s):
    if not (s.startswith("(") and s.endswith(")")):
        return False
    depth = 0
    for i, ch in enumerate(s):
        depth += ch == "("
        depth -= ch == ")"
        if depth == 0 and i < len(s) - 1:
            return False
    return True


def format_terms(atom: Ring, vars, terms) -> str:
    """Render flat terms in the polynomial literal grammar, descending grlex."""
    if not terms:
        return "0"
    pieces = []
    for exp, c in sorted(terms.items(), key=lambda t: grlex_key(t[0]), reverse=True):
        mono = "*".join(
            v if k == 1 else f"{v}^{k}" for v, k in zip(vars, exp) if k
        )
        s = atom.to_str(c)
        negative = False
        if atom.is_numeric:
            if s.startswith("-"):
                negative, s = True, s[1:]
            body = mono if (mono and s == "1") else (f"{s}*{mono}" if mono else s)
        else:
            if mono and atom.is_one(c):
                body = mono
            else:
                if not _balanced_parens(s):
                    s = f"({s})"
                body = f"{s}*{mono}" if mono else s
        pieces.append((negative, body))
    out = ("-" if pieces[0][0] else "") + pieces[0][1]
    for negative, body in pieces[1:]:
        out += (" - " if negative else " + ") + body
    return out


# ---------------------------------------------------------------------------
# the polynomial ring descriptor


@dataclass(frozen=True)
class PolynomialRing(Ring):
    base: Ring
    vars: tuple

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        if len(set(self.vars)) != len(self.vars):
            raise ValueError(f"repeated variable in {self.vars}")
        clash = set(self.vars) & set(self.base.flat_vars())
        if clash:
            raise ValueError(f"variables {sorted(clash)} already used by {self.base}")

    @property
    def is_reduced(self):
        return self.base.is_reduced

    @property
    def is_domain(self):
        return self.base.is_domain

    @property
    def is_trivial(self):
        return self.base.is_trivial

    @cached_property
    def _zero(self):
        return MultiPoly(self.base, self.vars, {}, _clean=True)

    def zero(self):
        return self._zero

    def one(self):
        return MultiPoly.constant(self.base, self.vars, self.base.one())

    def from_int(self, n):
        return MultiPoly.constant(self.base, self.vars, self.base.from_int(n))

    def from_fraction(self, q):
        return MultiPoly.constant(self.base, self.vars, self.base.from_fraction(q))

    def const(self, c):
        """Embed a base payload as a constant polynomial."""
        return MultiPoly.constant(self.base, self.vars, c)

    def var(self, name):
        return MultiPoly.variable(self.base, self.vars, name)

    def gen(self, name):
        if name in self.vars:
            return self.var(name)
        return self.const(self.base.gen(name))

    def eval_tuple(self, items, evaluate):
        return self.const(self.base.eval_tuple(items, evaluate))

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
        return poly_inverse(a)

    def exact_div(self, a, b):
        return poly_exact_div(a, b)

    def gcd(self, a, b):
        from .gcd import poly_gcd

        return poly_gcd(a, b)

    def associate(self, a):
        from .gcd import poly_associate

        return poly_associate(a)

    def ambient(self):
        amb = self.base.ambient()
        return self if amb is self.base else PolynomialRing(amb, self.vars)

    def from_ambient(self, x):
        if self.base.ambient() is self.base:
            return x
        return x.map_coeffs(self.base.from_ambient, self.base)

    def to_ambient(self, x):
        amb = self.base.ambient()
        if amb is self.base:
            return x
        return x.map_coeffs(self.base.to_ambient, amb)

    def flat_vars(self):
        return self.base.flat_vars() + self.vars

    def flat_terms(self, a):
        atom = None
        flat = {}
        for e, c in a.terms.items():
            atom, inner = self.base.flat_terms(c)
            for ie, ic in inner.items():
                flat[ie + e] = ic
        if atom is None:
            atom, _ = self.base.flat_terms(self.base.zero())
        return atom, flat

    def to_str(self, a):
        atom, flat = self.flat_terms(a)
        return format_terms(atom, self.flat_vars(), flat)

    def random(self, rng, degree=2, terms=3, **kw):
        n = len(self.vars)
        out = {}
        for _ in range(terms):
            d = rng.randint(0, degree)
            exp = [0] * n
            for _ in range(d):
                exp[rng.randrange(n)] += 1
            out[tuple(exp)] = self.base.random(rng, **kw)
        return MultiPoly(self.base, self.vars, out)

    def descriptor(self):
        return {"type": "poly", "base": self.base.descriptor(), "vars": list(self.vars)}

    def __str__(self):
        return f"{self.base}[{','.join(self.vars)}]"


def UnivariatePoly(base: Ring, var: str) -> PolynomialRing:
    return PolynomialRing(base, (var,))


def MultivariatePoly(base: Ring, vars) -> PolynomialRing:
    return PolynomialRing(base, tuple(vars))


def poly_arith(op: str, p: MultiPoly, q=None):
    """``add``, ``sub``, ``mul``, ``neg``, ``scale`` (q a payload) or ``subs`` (q = (var, value))."""
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    if op == "neg":
        return -p
    if op == "scale":
        return p.scale(q)
    if op == "subs":
        var, value = q
        return p.substitute(var, value)
    raise ValueError(f"unknown operation {op!r}")


def eval_at_zero(p: MultiPoly):
    """Constant coefficient ``p(0, ..., 0)``; a ring homomorphism ``A[X] -> A``."""
    return p.constant_term()


# ---------------------------------------------------------------------------
# division and units


def poly_exact_div(a: MultiPoly, b: MultiPoly):
    """Exact quotient ``a / b`` or ``None``.

    Sound and complete when the leading coefficient of ``b`` is regular
    (integral bases, or bases answering zero-or-unit questions); products of
    rings are handled componentwise.
    """
    a_ring = a.ring
    if b.is_zero():
        return a.zero_like() if a.is_zero() else None
    from .rings import ProductRing

    if isinstance(a_ring, ProductRing):
        parts = []
        for k in range(len(a_ring.factors)):
            q = poly_exact_div(product_component(a, k), product_component(b, k))
            if q is None:
                return None
            parts.append(q)
        return product_merge(parts, a_ring, a.vars)
    R = a_ring
    eb, cb = b.leading_term()
    r = a
    qterms = {}
    while r.terms:
        er, cr = r.leading_term()
        if any(x < y for x, y in zip(er, eb)):
            return None
        c = R.exact_div(cr, cb)
        if c is None:
            return None
        shift = tuple(x - y for x, y in zip(er, eb))
        qterms[shift] = R.add(qterms[shift], c) if shift in qterms else c
        r = r - b.mul_monomial(shift, c)
    return MultiPoly(R, a.vars, qterms)


def poly_inverse(p: MultiPoly):
    """Inverse of ``p`` in ``A[X]`` or ``None``.

    Over a reduced ``A`` a unit is a constant unit of ``A``.  Over a
    non-reduced coefficient ring the higher coefficients may be nilpotent,
    and the inverse is a truncated geometric series.
    """
    R = p.ring
    if p.is_zero():
        return None
    c0 = p.constant_term()
    u = R.inverse(c0)
    if u is None:
        return None
    if p.is_constant():
        return p.const_like(u)
    if R.is_reduced:
        return None
    nil = getattr(R, "is_nilpotent", None)
    if nil is None:
        return None
    q = p - p.const_like(c0)
    if not all(nil(c) for c in q.terms.values()):
        return None
    step = -(q.scale(u))
    term = p.const_like(R.one())
    total = term
    for _ in range(R.nilpotency_index()):
        term = term * step
        if term.is_zero():
            break
        total = total + term
    inv = total.scale(u)
    if not (p * inv) == p.const_like(R.one()):
        return None
    return inv


def is_unit(p: MultiPoly):
    """Return the inverse polynomial when ``p`` is a unit, else ``None``."""
    return poly_inverse(p)


# ---------------------------------------------------------------------------
# Kronecker substitution


def kronecker_substitute(p: MultiPoly, m: int, var: str = "T") -> MultiPoly:
    """Univariate image under ``X_k -> T**(m**k)`` (``k`` counted from 1)."""
    if not isinstance(m, int) or isinstance(m, bool) or m < 1:
        raise ValueError(f"Kronecker base must be a positive integer, got {m!r}")
    weights = [m ** (k + 1) for k in range(len(p.vars))]
    R = p.ring
    terms = {}
    for e, c in p.terms.items():
        d = sum(w * x for w, x in zip(weights, e))
        terms[(d,)] = R.add(terms[(d,)], c) if (d,) in terms else c
    return MultiPoly(R, (var,), terms)


def kronecker_base(*polys) -> int:
    """Smallest base that exceeds every per-variable degree of ``polys``."""
    top = 0
    for p in polys:
        for d in p.degrees() if p.terms else ():
            top = max(top, d)
    return max(2, top + 1)


def kronecker_inverse(p: MultiPoly, m: int, vars) -> MultiPoly:
    """Invert :func:`kronecker_substitute` on polynomials with digits < m."""
    terms = {}
    for (d,), c in p.terms.items():
        digits = []
        d, r = divmod(d, m)
        if r:
            raise ValueError("exponent not in the image of the substitution")
        for _ in vars:
            d, r = divmod(d, m)
            digits.append(r)
        if d:
            raise ValueError("exponent not in the image of the substitution")
        terms[tuple(digits)] = c
    return MultiPoly(p.ring, vars, terms)


# ---------------------------------------------------------------------------
# product-ring helpers (shared by gcd and matrix code)


def product_component(p: MultiPoly, k: int) -> MultiPoly:
    R = p.ring
    F = R.factors[k]
    return MultiPoly(F, p.vars, {e: c[k] for e, c in p.terms.items()})


def product_merge(parts, ring, vars) -> MultiPoly:
    exps = set()
    for q in parts:
        exps.update(q.terms)
    terms = {
        e: tuple(q.terms.get(e, F.zero()) for q, F in zip(parts, ring.factors)) for e in exps
    }
    return MultiPoly(ring, vars, terms)
