"""Idempotent matrices over exact rings.

Rank-1 certification by trace and 2x2 minors, the rank polynomial, free-image
witnesses, uniqueness of factorizations up to a unit, Newton and conjugation
lifting modulo nilpotents, and the Schanuel generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

from .core import Ring, RingValue
from .errors import (
    InvariantViolation,
    NotIdempotentError,
    ParseError,
    Rank1Violation,
    RelationError,
    RingMismatchError,
    UnsupportedRingError,
)
from .poly import MultiPoly, PolynomialRing


@dataclass(frozen=True, eq=False)
class Matrix:
    """A dense matrix of payloads over one ring."""

    ring: Ring
    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged matrix")
        object.__setattr__(self, "rows", rows)

    # -- construction -------------------------------------------------
    @classmethod
    def from_values(cls, ring, grid):
        """Build from RingValues, ints, Fractions or literal strings."""
        rows = []
        for row in grid:
            out = []
            for x in row:
                if isinstance(x, RingValue):
                    if x.ring != ring:
                        raise RingMismatchError(f"entry in {x.ring}, matrix over {ring}")
                    out.append(x.payload)
                else:
                    out.append(ring(x).payload)
            rows.append(out)
        return cls(ring, rows)

    @classmethod
    def zeros(cls, ring, nrows, ncols=None):
        ncols = nrows if ncols is None else ncols
        z = ring.zero()
        return cls(ring, [[z] * ncols for _ in range(nrows)])

    @classmethod
    def identity(cls, ring, n):
        return cls.standard_projection(ring, n, n)

    @classmethod
    def standard_projection(cls, ring, n, r=1):
        """``I_{n,r}``: the diagonal projection onto the first ``r`` coordinates."""
        z, o = ring.zero(), ring.one()
        return cls(ring, [[o if i == j and i < r else z for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, ring, entries):
        n = len(entries)
        z = ring.zero()
        return cls(ring, [[entries[i] if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def column(cls, ring, entries):
        return cls(ring, [[x] for x in entries])

    @classmethod
    def row(cls, ring, entries):
        return cls(ring, [list(entries)])

    # -- shape and access -----------------------------------------------
    @property
    def shape(self):
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    @property
    def n(self):
        r, c = self.shape
        if r != c:
            raise ValueError(f"matrix of shape {self.shape} is not square")
        return r

    def __getitem__(self, ij):
        i, j = ij
        return RingValue(self.ring, self.rows[i][j])

    def entry(self, i, j):
        return self.rows[i][j]

    def map(self, fn, ring=None):
        return Matrix(ring or self.ring, [[fn(x) for x in r] for r in self.rows])

    def transpose(self):
        return Matrix(self.ring, list(zip(*self.rows)) if self.rows else [])

    # -- arithmetic -----------------------------------------------------
    def _check(self, other):
        if not isinstance(other, Matrix):
            raise TypeError("matrix operand expected")
        if other.ring != self.ring:
            raise RingMismatchError(f"{self.ring} vs {other.ring}")

    def __add__(self, other):
        self._check(other)
        R = self.ring
        return Matrix(R, [[R.add(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        self._check(other)
        R = self.ring
        return Matrix(R, [[R.sub(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return self.map(self.ring.neg)

    def scale(self, c):
        return self.map(lambda x: self.ring.mul(c, x))

    def __matmul__(self, other):
        self._check(other)
        R = self.ring
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            line = []
            for c in cols:
                acc = R.zero()
                for a, b in zip(r, c):
                    if not R.is_zero(a) and not R.is_zero(b):
                        acc = R.add(acc, R.mul(a, b))
                line.append(acc)
            out.append(line)
        return Matrix(R, out)

    def __eq__(self, other):
        if not isinstance(other, Matrix) or other.ring != self.ring or other.shape != self.shape:
            return False
        R = self.ring
        return all(R.eq(a, b) for r, s in zip(self.rows, other.rows) for a, b in zip(r, s))

    __hash__ = None

    def is_zero(self):
        return all(self.ring.is_zero(x) for r in self.rows for x in r)

    def trace(self):
        R = self.ring
        return R.sum(self.rows[i][i] for i in range(self.n))

    def minor(self, i, k, j, l):
        """The 2x2 minor on rows ``i < k`` and columns ``j < l``."""
        R, m = self.ring, self.rows
        return R.sub(R.mul(m[i][j], m[k][l]), R.mul(m[i][l], m[k][j]))

    def block(self, blocks):
        """Assemble a block matrix from a grid of matrices."""
        rows = []
        for brow in blocks:
            for i in range(brow[0].shape[0]):
                rows.append([x for b in brow for x in b.rows[i]])
        return Matrix(self.ring, rows)

    def to_strings(self):
        return [[self.ring.to_str(x) for x in r] for r in self.rows]

    def __str__(self):
        return "[" + ", ".join("[" + ", ".join(r) + "]" for r in self.to_strings()) + "]"

    def __repr__(self):
        return f"Matrix({self.ring}, {self})"


SquareMatrix = Matrix


# ---------------------------------------------------------------------------
# records


@dataclass(frozen=True)
class Rank1Certificate:
    """Proof record that ``matrix`` is idempotent of rank 1."""

    matrix: Matrix
    trace: RingValue
    minors_checked: tuple
    idempotent: bool = True


@dataclass(frozen=True, eq=False)
class Rank1Factorization:
    """Column ``f`` and row ``g`` (payload tuples over ``ring``) with ``g.f = 1``."""

    ring: Ring
    f: tuple
    g: tuple

    def __post_init__(self):
        object.__setattr__(self, "f", tuple(self.f))
        object.__setattr__(self, "g", tuple(self.g))

    @property
    def n(self):
        return len(self.f)

    def outer(self) -> Matrix:
        R = self.ring
        return Matrix(R, [[R.mul(a, b) for b in self.g] for a in self.f])

    def inner(self):
        R = self.ring
        return R.sum(R.mul(a, b) for a, b in zip(self.g, self.f))

    def f_strings(self):
        return [self.ring.to_str(x) for x in self.f]

    def g_strings(self):
        return [self.ring.to_str(x) for x in self.g]

    def scaled(self, u, u_inv):
        """``(u f, u^-1 g)``."""
        R = self.ring
        return Rank1Factorization(R, [R.mul(u, x) for x in self.f], [R.mul(u_inv, x) for x in self.g])

    def map(self, fn, ring):
        return Rank1Factorization(ring, [fn(x) for x in self.f], [fn(x) for x in self.g])

    def __str__(self):
        return f"f = ({', '.join(self.f_strings())}), g = ({', '.join(self.g_strings())})"


@dataclass(frozen=True)
class FreeImageWitness:
    """``X`` (n x r) and ``Y`` (r x n) with ``Y X = I_r`` and ``X Y = P``."""

    X: Matrix
    Y: Matrix

    @property
    def rank(self):
        return self.X.shape[1]

    def verify(self, P: Matrix) -> bool:
        r = self.rank
        if r == 0:
            return P.is_zero()
        return (self.Y @ self.X) == Matrix.identity(P.ring, r) and (self.X @ self.Y) == P

    @classmethod
    def from_factorization(cls, fac: Rank1Factorization):
        return cls(Matrix.column(fac.ring, fac.f), Matrix.row(fac.ring, fac.g))


# ---------------------------------------------------------------------------
# checks


def check_idempotent(P: Matrix) -> bool:
    return (P @ P) == P


def certify_rank1(P: Matrix) -> Rank1Certificate:
    """Check ``Tr P = 1`` and that every 2x2 minor vanishes.

    Raises :class:`Rank1Violation` carrying the trace or the first failing
    minor ``(rows, cols)``.
    """
    R = P.ring
    n = P.n
    tr = P.trace()
    if not R.is_one(tr):
        raise Rank1Violation(f"rank-1 certification failed: trace = {R.to_str(tr)}", trace=R.to_str(tr))
    checked = []
    for i, k in combinations(range(n), 2):
        for j, l in combinations(range(n), 2):
            if not R.is_zero(P.minor(i, k, j, l)):
                raise Rank1Violation(
                    f"rank-1 certification failed: minor rows {(i + 1, k + 1)} cols {(j + 1, l + 1)} "
                    f"= {R.to_str(P.minor(i, k, j, l))}",
                    minor=((i + 1, k + 1), (j + 1, l + 1)),
                )
            checked.append(((i, k), (j, l)))
    if not check_idempotent(P):
        raise NotIdempotentError("trace 1 with vanishing minors but P^2 != P")
    return Rank1Certificate(P, RingValue(R, tr), tuple(checked))


def _fresh_var(R: Ring, preferred=("X", "Z", "W")):
    used = set(R.flat_vars())
    for v in preferred:
        if v not in used:
            return v
    k = 1
    while f"Z{k}" in used:
        k += 1
    return f"Z{k}"


def determinant(M: Matrix):
    """Division-free determinant by expansion over column subsets."""
    R = M.ring
    n = M.n
    if n == 0:
        return R.one()
    # dp[S] = determinant of rows 0..|S|-1 restricted to the column set S
    dp = {0: R.one()}
    for i in range(n):
        nxt = {}
        for S, val in dp.items():
            if R.is_zero(val):
                continue
            sign_base = 0
            for j in range(n):
                if S >> j & 1:
                    sign_base += 1
                    continue
                x = M.rows[i][j]
                if R.is_zero(x):
                    continue
                # columns of S to the right of j set the sign
                above = bin(S >> (j + 1)).count("1")
                term = R.mul(val, x)
                if above % 2:
                    term = R.neg(term)
                T = S | (1 << j)
                nxt[T] = R.add(nxt[T], term) if T in nxt else term
        dp = nxt
    return dp.get((1 << n) - 1, R.zero())


def rank_polynomial(P: Matrix, var=None) -> MultiPoly:
    """``r(X) = det(X P + I - P)`` in a fresh variable over ``P.ring``."""
    if not check_idempotent(P):
        raise NotIdempotentError("rank polynomial needs P^2 = P")
    R = P.ring
    var = var or _fresh_var(R)
    RX = PolynomialRing(R, (var,))
    X = RX.var(var)
    n = P.n
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            p = RX.const(P.rows[i][j])
            delta = RX.one() if i == j else RX.zero()
            row.append(X * p + delta - p)
        rows.append(row)
    return determinant(Matrix(RX, rows))


def verify_factorization(P: Matrix, fac: Rank1Factorization) -> bool:
    if fac.ring != P.ring or fac.n != P.n:
        return False
    return P.ring.is_one(fac.inner()) and fac.outer() == P


def unit_between(fac1: Rank1Factorization, fac2: Rank1Factorization) -> RingValue:
    """The unit ``u`` with ``f2 = u f1`` and ``g1 = u g2``.

    ``u = g1 . f2`` needs no division; over a reduced coefficient ring it is
    a constant, returned as an element of that coefficient ring.
    """
    R = fac1.ring
    if fac2.ring != R or fac1.n != fac2.n:
        raise RingMismatchError("factorizations of different shapes or rings")
    if not R.is_reduced:
        raise UnsupportedRingError("unit_between needs a reduced ring")
    u = R.sum(R.mul(a, b) for a, b in zip(fac1.g, fac2.f))
    if not all(R.eq(b, R.mul(u, a)) for a, b in zip(fac1.f, fac2.f)) or not all(
        R.eq(a, R.mul(u, b)) for a, b in zip(fac1.g, fac2.g)
    ):
        raise InvariantViolation("factorizations do not describe the same matrix")
    if isinstance(R, PolynomialRing):
        if not u.is_constant():
            raise InvariantViolation("relating unit is not constant over a reduced ring")
        return RingValue(R.base, u.constant_term() if u.terms else R.base.zero())
    return RingValue(R, u)


# ---------------------------------------------------------------------------
# lifting modulo nilpotents


def _nilpotent(R: Ring, x) -> bool:
    if isinstance(R, PolynomialRing):
        return all(_nilpotent(R.base, c) for c in x.terms.values())
    test = getattr(R, "is_nilpotent", None)
    if test is None:
        return R.is_zero(x)
    return test(x)


def _nilpotency_index(R: Ring) -> int:
    if isinstance(R, PolynomialRing):
        return _nilpotency_index(R.base)
    idx = getattr(R, "nilpotency_index", None)
    if idx is None:
        raise UnsupportedRingError(f"{R} has no declared nilpotency order")
    return idx()


def newton_lift(P: Matrix, history=False):
    """Iterate ``P <- 3P^2 - 2P^3`` ``k`` times, where ``2**k`` reaches the nilpotency order.

    With ``history=True`` the list of all iterates (starting with ``P``) is
    returned instead of the final matrix.
    """
    R = P.ring
    defect = P @ P - P
    if not all(_nilpotent(R, x) for r in defect.rows for x in r):
        raise NotIdempotentError("P^2 - P has an entry that is not nilpotent")
    order = _nilpotency_index(R)
    k = max(0, math.ceil(math.log2(order))) if order > 1 else 0
    three, two = R.from_int(3), R.from_int(2)
    steps = [P]
    Q = P
    for _ in range(k):
        Q2 = Q @ Q
        Q = Q2.scale(three) - (Q2 @ Q).scale(two)
        steps.append(Q)
    if not check_idempotent(Q):
        raise InvariantViolation("Newton iteration did not reach an idempotent")
    return steps if history else Q


def nilpotent_inverse(M: Matrix) -> Matrix:
    """Inverse of ``M = I - N`` with ``N`` nilpotent-valued (Neumann series)."""
    R = M.ring
    n = M.n
    I = Matrix.identity(R, n)
    N = I - M
    if not all(_nilpotent(R, x) for r in N.rows for x in r):
        raise InvariantViolation("matrix is not congruent to I modulo nilpotents")
    total, term = I, I
    for _ in range(n * _nilpotency_index(R) + 1):
        term = term @ N
        if term.is_zero():
            break
        total = total + term
    if not (M @ total) == I:
        raise InvariantViolation("Neumann series did not invert the matrix")
    return total


@dataclass(frozen=True)
class ConjugationLift:
    M: Matrix
    M_inv: Matrix


def lift_conjugation(P: Matrix, Q: Matrix) -> ConjugationLift:
    """``M = QP + (I-Q)(I-P)`` with ``M P M^-1 = Q`` for idempotents equal mod nilpotents."""
    R = P.ring
    if not all(_nilpotent(R, x) for r in (P - Q).rows for x in r):
        raise InvariantViolation("P and Q differ outside the nilpotent ideal")
    if not check_idempotent(P) or not check_idempotent(Q):
        raise NotIdempotentError("lift_conjugation needs idempotent P and Q")
    I = Matrix.identity(R, P.n)
    M = Q @ P + (I - Q) @ (I - P)
    M_inv = nilpotent_inverse(M)
    if not (M @ P @ M_inv) == Q:
        raise InvariantViolation("conjugation identity failed")
    return ConjugationLift(M, M_inv)


# ---------------------------------------------------------------------------
# similarity with a standard projection


@dataclass(frozen=True)
class StandardSimilarity:
    """``V`` is an involution with ``V diag(P,0) V = diag(0, I_r)``; ``C = S V`` conjugates to ``I_{n+r,r}``."""

    V: Matrix
    C: Matrix
    C_inv: Matrix


def _block_swap(R, n, r):
    """Permutation sending the last ``r`` coordinates to the front."""
    z, o = R.zero(), R.one()
    size = n + r
    rows = [[z] * size for _ in range(size)]
    for i in range(r):
        rows[i][n + i] = o
    for i in range(n):
        rows[r + i][i] = o
    return Matrix(R, rows)


def similarity_to_standard(P: Matrix, w: FreeImageWitness) -> StandardSimilarity:
    if not w.verify(P):
        raise InvariantViolation("free-image witness does not verify against P")
    R = P.ring
    n, r = P.n, w.rank
    I = Matrix.identity(R, n)
    if r == 0:
        V = I - P
    else:
        V = P.block([[I - P, w.X], [w.Y, Matrix.zeros(R, r)]])
    S = _block_swap(R, n, r)
    C = S @ V
    C_inv = V @ S.transpose()
    if not (V @ V) == Matrix.identity(R, n + r):
        raise InvariantViolation("V is not an involution")
    return StandardSimilarity(V, C, C_inv)


def diag_pad(P: Matrix, r: int) -> Matrix:
    """``diag(P, 0_r)``."""
    R = P.ring
    n = P.n
    z = R.zero()
    rows = [list(row) + [z] * r for row in P.rows] + [[z] * (n + r) for _ in range(r)]
    return Matrix(R, rows)


# ---------------------------------------------------------------------------
# Schanuel generator


def schanuel_factorization(a: RingValue, b: RingValue, c: RingValue, var="X") -> Rank1Factorization:
    """``f = (1 + aX, cX^2)``, ``g = ((1 - aX)(1 + cX^2), cX^2)`` over ``K[X]``."""
    K = a.ring
    if b.ring != K or c.ring != K:
        raise RingMismatchError("a, b, c must share one ring")
    if not (a * a == c) or not (a * a * a == b):
        raise RelationError("Schanuel data needs a^2 = c and a^3 = b")
    KX = PolynomialRing(K, (var,))
    X = KX.var(var)
    one = KX.one()
    A, C = KX.const(a.payload), KX.const(c.payload)
    f1 = one + A * X
    f2 = C * X * X
    g1 = (one - A * X) * (one + C * X * X)
    return Rank1Factorization(KX, [f1, f2], [g1, f2])


def schanuel_matrix(a: RingValue, b: RingValue, c: RingValue, subring: Ring | None = None, var="X") -> Matrix:
    """The 2x2 matrix ``(f_i g_j)`` over ``subring[X]`` (or ``K[X]`` when no subring is named)."""
    fac = schanuel_factorization(a, b, c, var)
    M = fac.outer()
    if subring is None:
        return M
    target = PolynomialRing(subring, (var,))
    rows = []
    for r in M.rows:
        out = []
        for p in r:
            try:
                out.append(MultiPoly(subring, (var,), {e: subring.from_ambient(x) for e, x in p.terms.items()}))
            except Exception as exc:
                raise InvariantViolation(f"Schanuel entry escapes {subring}: {exc}") from exc
        rows.append(out)
    return Matrix(target, rows)


# ---------------------------------------------------------------------------
# JSON documents


def matrix_document(P: Matrix) -> dict:
    R = P.ring
    if isinstance(R, PolynomialRing):
        base, vars = R.base, list(R.vars)
    else:
        base, vars = R, []
    return {"n": P.n, "vars": vars, "ring": base.descriptor(), "entries": P.to_strings()}


def matrix_from_document(doc: dict, ring: Ring | None = None) -> Matrix:
    """Parse a matrix document; ``ring`` (a coefficient ring) overrides ``doc['ring']``."""
    from .rings import ring_from_descriptor

    for key in ("n", "entries"):
        if key not in doc:
            raise ParseError(f"matrix document lacks {key!r}")
    if ring is None:
        if "ring" not in doc:
            raise ParseError("matrix document lacks 'ring' and no ring was supplied")
        ring = ring_from_descriptor(doc["ring"])
    vars = tuple(doc.get("vars", ()))
    R = PolynomialRing(ring, vars) if vars else ring
    n = doc["n"]
    entries = doc["entries"]
    if not isinstance(n, int) or n < 0 or len(entries) != n or any(len(r) != n for r in entries):
        raise ParseError(f"entries do not form a {n}x{n} grid")
    rows = []
    for i, r in enumerate(entries):
        row = []
        for j, s in enumerate(r):
            try:
                row.append(R.parse(str(s)))
            except ParseError as exc:
                raise ParseError(f"entry ({i + 1},{j + 1}): {exc.detail}", exc.position, exc.token) from exc
        rows.append(row)
    return Matrix(R, rows)


def evaluate_matrix_at_zero(P: Matrix) -> Matrix:
    """``P(0)`` over the coefficient ring."""
    R = P.ring
    if not isinstance(R, PolynomialRing):
        return P
    return P.map(lambda p: p.constant_term(), R.base)


__all__ = [
    "Matrix",
    "SquareMatrix",
    "Rank1Certificate",
    "Rank1Factorization",
    "FreeImageWitness",
    "ConjugationLift",
    "StandardSimilarity",
    "check_idempotent",
    "certify_rank1",
    "determinant",
    "rank_polynomial",
    "verify_factorization",
    "unit_between",
    "newton_lift",
    "nilpotent_inverse",
    "lift_conjugation",
    "similarity_to_standard",
    "diag_pad",
    "schanuel_factorization",
    "schanuel_matrix",
    "matrix_document",
    "matrix_from_document",
    "evaluate_matrix_at_zero",
]
