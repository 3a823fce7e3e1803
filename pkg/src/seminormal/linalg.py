"""Exact Gaussian elimination over a field (payload lists)."""

from __future__ import annotations

from fractions import Fraction


def rref(rows, field=None):
    """Reduced row echelon form; returns ``(rows, pivot_columns)``.

    Entries are ``Fraction`` unless ``field`` (a ring descriptor with
    ``inverse``) is given.
    """
    M = [list(r) for r in rows]
    if not M:
        return M, []
    ncols = len(M[0])
    if field is None:
        zero = Fraction(0)
        is_zero = lambda x: x == 0  # noqa: E731
        inv = lambda x: 1 / Fraction(x)  # noqa: E731
        mul = lambda a, b: a * b  # noqa: E731
        sub = lambda a, b: a - b  # noqa: E731
    else:
        zero = field.zero()
        is_zero, inv, mul, sub = field.is_zero, field.inverse, field.mul, field.sub
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(M)) if not is_zero(M[i][c])), None)
        if pr is None:
            continue
        M[r], M[pr] = M[pr], M[r]
        s = inv(M[r][c])
        M[r] = [mul(s, x) for x in M[r]]
        for i in range(len(M)):
            if i != r and not is_zero(M[i][c]):
                f = M[i][c]
                M[i] = [sub(x, mul(f, y)) for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return [row for row in M[:r]] + [[zero] * ncols for _ in M[r:]], pivots


def solve(A, b, field=None):
    """One solution of ``A x = b`` (free variables set to 0), or ``None``."""
    if not A:
        return []
    n = len(A[0])
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, pivots = rref(aug, field)
    if n in pivots:
        return None
    zero = Fraction(0) if field is None else field.zero()
    x = [zero] * n
    for row, c in zip(R, pivots):
        x[c] = row[n]
    return x


def nullspace(A, ncols, field=None):
    """Basis of ``{x : A x = 0}``."""
    zero = Fraction(0) if field is None else field.zero()
    one = Fraction(1) if field is None else field.one()
    if not A:
        return [[one if i == j else zero for i in range(ncols)] for j in range(ncols)]
    R, pivots = rref(A, field)
    free = [c for c in range(ncols) if c not in pivots]
    neg = (lambda v: -v) if field is None else field.neg
    basis = []
    for fc in free:
        v = [zero] * ncols
        v[fc] = one
        for row, pc in zip(R, pivots):
            v[pc] = neg(row[fc])
        basis.append(v)
    return basis



def solve_mod(A, b, p):
    """One solution of ``A x = b`` modulo the prime ``p`` (integer entries), or ``None``."""
    n = len(A[0]) if A else 0
    M = [[x % p for x in row] + [bi % p] for row, bi in zip(A, b)]
    pivots = []
    r = 0
    for c in range(n + 1):
        pr = next((i for i in range(r, len(M)) if M[i][c]), None)
        if pr is None:
            continue
        if c == n:
            return None
        M[r], M[pr] = M[pr], M[r]
        s = pow(M[r][c], -1, p)
        M[r] = [x * s % p for x in M[r]]
        for i in range(len(M)):
            f = M[i][c]
            if i != r and f:
                M[i] = [(x - f * y) % p for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    x = [0] * n
    for row, c in zip(M, pivots):
        x[c] = row[n]
    return x
