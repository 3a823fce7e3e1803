"""Base ring protocol, ring-tagged values and the prime rings ZZ, QQ, GF(p).

Rings are immutable descriptor objects that act on *payloads*: plain
canonical Python values (``int``, ``Fraction``, tuples, :class:`MultiPoly`).
Algorithms work at payload level through the ring (``R.add(a, b)``);
:class:`RingValue` wraps a payload with its ring for user-facing code and
refuses to mix rings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError, RingMismatchError, UnsupportedRingError


class Ring:
    """Abstract effective commutative ring with decidable equality."""

    is_reduced = True
    is_field = False
    is_domain = False
    is_trivial = False
    #: payload strings are signed rational numbers (used by the printer)
    is_numeric = False

    # -- construction -------------------------------------------------
    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def from_int(self, n: int):
        raise NotImplementedError

    def from_fraction(self, q: Fraction):
        if q.denominator == 1:
            return self.from_int(q.numerator)
        den = self.inverse(self.from_int(q.denominator))
        if den is None:
            raise ParseError(f"{q} is not an element of {self}")
        return self.mul(self.from_int(q.numerator), den)

    def gen(self, name: str):
        raise ParseError(f"unknown variable {name!r} for ring {self}", token=name)

    def eval_tuple(self, items, evaluate):
        raise ParseError(f"tuple literal is not an element of {self}")

    # -- arithmetic ---------------------------------------------------
    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def pow(self, a, k: int):
        if k < 0:
            inv = self.inverse(a)
            if inv is None:
                raise ValueError("negative power of a non-unit")
            a, k = inv, -k
        result = self.one()
        while k:
            if k & 1:
                result = self.mul(result, a)
            k >>= 1
            if k:
                a = self.mul(a, a)
        return result

    def is_zero(self, a) -> bool:
        return a == self.zero()

    def is_one(self, a) -> bool:
        return self.is_zero(self.sub(a, self.one()))

    def eq(self, a, b) -> bool:
        return self.is_zero(self.sub(a, b))

    def sum(self, items):
        total = self.zero()
        for x in items:
            total = self.add(total, x)
        return total

    def prod(self, items):
        total = self.one()
        for x in items:
            total = self.mul(total, x)
        return total

    def inverse(self, a):
        """Inverse of ``a`` or ``None`` when ``a`` is not a unit."""
        return None

    def is_unit(self, a) -> bool:
        return self.inverse(a) is not None

    def exact_div(self, a, b):
        """Return ``q`` with ``b*q == a`` or ``None``."""
        inv = self.inverse(b)
        if inv is not None:
            return self.mul(a, inv)
        if self.is_zero(a):
            return self.zero()
        return None

    def gcd(self, a, b):
        raise UnsupportedRingError(f"no gcd algorithm for {self}")

    def associate(self, a):
        """Split ``a = unit * canon`` and return ``(canon, unit)``."""
        return a, self.one()

    # -- embedding into an ambient ring used for parsing ----------------
    def ambient(self) -> "Ring":
        return self

    def from_ambient(self, x):
        return x

    def to_ambient(self, x):
        return x

    # -- printing -----------------------------------------------------
    def flat_vars(self) -> tuple:
        """Variable names of the flattened printing form (innermost first)."""
        return ()

    def flat_terms(self, a):
        """Return ``(atomic_ring, {exponent tuple: atomic payload})``."""
        return self, ({(): a} if not self.is_zero(a) else {})

    def to_str(self, a) -> str:
        raise NotImplementedError

    def parse(self, text: str):
        from .literals import parse_element

        return parse_element(self, text)

    # -- misc ---------------------------------------------------------
    def random(self, rng, **kw):
        raise NotImplementedError

    def descriptor(self) -> dict:
        raise NotImplementedError

    def __call__(self, x=0) -> "RingValue":
        if isinstance(x, RingValue):
            if x.ring != self:
                raise RingMismatchError(f"cannot coerce element of {x.ring} into {self}")
            return x
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, int):
            return RingValue(self, self.from_int(x))
        if isinstance(x, Fraction):
            return RingValue(self, self.from_fraction(x))
        if isinstance(x, str):
            return RingValue(self, self.parse(x))
        return RingValue(self, x)

    def wrap(self, payload) -> "RingValue":
        return RingValue(self, payload)


@dataclass(frozen=True, eq=False)
class RingValue:
    """An element of a ring, carrying its ring descriptor."""

    ring: Ring
    payload: object

    def _other(self, other):
        if isinstance(other, RingValue):
            if other.ring is not self.ring and other.ring != self.ring:
                raise RingMismatchError(f"{self.ring} vs {other.ring}")
            return other.payload
        if isinstance(other, (int, Fraction)):
            return self.ring(other).payload
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return RingValue(self.ring, self.ring.add(self.payload, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return RingValue(self.ring, self.ring.sub(self.payload, b))

    def __rsub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return RingValue(self.ring, self.ring.sub(b, self.payload))

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return RingValue(self.ring, self.ring.mul(self.payload, b))

    __rmul__ = __mul__

    def __neg__(self):
        return RingValue(self.ring, self.ring.neg(self.payload))

    def __pow__(self, k: int):
        return RingValue(self.ring, self.ring.pow(self.payload, k))

    def __eq__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return False
        return self.ring.eq(self.payload, b)

    def __hash__(self):
        return hash((self.ring, self.payload))

    def is_zero(self) -> bool:
        return self.ring.is_zero(self.payload)

    def inverse(self):
        inv = self.ring.inverse(self.payload)
        return None if inv is None else RingValue(self.ring, inv)

    def __str__(self):
        return self.ring.to_str(self.payload)

    def __repr__(self):
        return f"RingValue({self.ring!r}, {self})"


def ring_arith(op: str, a: RingValue, b: RingValue | None = None):
    """Dispatch ``add``, ``sub``, ``mul``, ``neg``, ``eq`` or ``is_zero`` on ring values."""
    if op in ("neg", "is_zero"):
        return -a if op == "neg" else a.is_zero()
    if not isinstance(b, RingValue) or b.ring != a.ring:
        raise RingMismatchError(f"ring_arith({op!r}) needs two values of one ring")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "eq":
        return a == b
    raise ValueError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# prime rings


@dataclass(frozen=True)
class Integers(Ring):
    is_domain = True
    is_numeric = True

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, n):
        return int(n)

    def from_fraction(self, q):
        if q.denominator != 1:
            raise ParseError(f"{q} is not an integer")
        return q.numerator

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def is_zero(self, a):
        return a == 0

    def eq(self, a, b):
        return a == b

    def inverse(self, a):
        return a if a in (1, -1) else None

    def exact_div(self, a, b):
        if b == 0:
            return 0 if a == 0 else None
        q, r = divmod(a, b)
        return q if r == 0 else None

    def gcd(self, a, b):
        return math.gcd(a, b)

    def associate(self, a):
        return (abs(a), -1) if a < 0 else (a, 1)

    def to_str(self, a):
        return str(a)

    def random(self, rng, size=9, **kw):
        return rng.randint(-size, size)

    def descriptor(self):
        return {"type": "ZZ"}

    def __str__(self):
        return "ZZ"


@dataclass(frozen=True)
class Rationals(Ring):
    is_field = True
    is_domain = True
    is_numeric = True

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def from_int(self, n):
        return Fraction(n)

    def from_fraction(self, q):
        return Fraction(q)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def is_zero(self, a):
        return a == 0

    def eq(self, a, b):
        return a == b

    def inverse(self, a):
        return None if a == 0 else 1 / a

    def gcd(self, a, b):
        return Fraction(0) if a == 0 and b == 0 else Fraction(1)

    def associate(self, a):
        return (a, Fraction(1)) if a == 0 else (Fraction(1), a)

    def to_str(self, a):
        return str(a)

    def random(self, rng, size=9, **kw):
        return Fraction(rng.randint(-size, size), rng.randint(1, 3))

    def descriptor(self):
        return {"type": "QQ"}

    def __str__(self):
        return "QQ"


@dataclass(frozen=True)
class PrimeField(Ring):
    p: int

    is_field = True
    is_domain = True
    is_numeric = True

    def __post_init__(self):
        if self.p < 2 or any(self.p % d == 0 for d in range(2, math.isqrt(self.p) + 1)):
            raise ValueError(f"{self.p} is not prime")

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, n):
        return n % self.p

    def from_fraction(self, q):
        if q.denominator % self.p == 0:
            raise ParseError(f"{q} has no image in GF({self.p})")
        return q.numerator * pow(q.denominator, -1, self.p) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def neg(self, a):
        return -a % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def is_zero(self, a):
        return a == 0

    def eq(self, a, b):
        return a == b

    def inverse(self, a):
        return None if a == 0 else pow(a, -1, self.p)

    def gcd(self, a, b):
        return 0 if a == 0 and b == 0 else 1

    def associate(self, a):
        return (0, 1) if a == 0 else (1, a)

    def to_str(self, a):
        return str(a)

    def random(self, rng, **kw):
        return rng.randrange(self.p)

    def descriptor(self):
        return {"type": "GF", "p": self.p}

    def __str__(self):
        return f"GF({self.p})"


@dataclass(frozen=True)
class TrivialRing(Ring):
    """The zero ring, where ``1 = 0``."""

    is_trivial = True
    is_numeric = True

    def zero(self):
        return 0

    def one(self):
        return 0

    def from_int(self, n):
        return 0

    def from_fraction(self, q):
        return 0

    def add(self, a, b):
        return 0

    def neg(self, a):
        return 0

    def mul(self, a, b):
        return 0

    def is_zero(self, a):
        return True

    def inverse(self, a):
        return 0

    def to_str(self, a):
        return "0"

    def random(self, rng, **kw):
        return 0

    def descriptor(self):
        return {"type": "trivial"}

    def __str__(self):
        return "0-ring"


ZZ = Integers()
QQ = Rationals()


def GF(p: int) -> PrimeField:
    return PrimeField(p)
