"""Dynamic evaluation: quasi-inverses, idempotent systems, splitting trees, elimination.

A zero-dimensional reduced ring is handled as if it were a field; when a
zero test has no uniform answer the ring is split along an idempotent and the
computation restarts on both halves (:func:`run_dynamic`).  For reduced rings
that are not zero-dimensional, :class:`ComponentTree` realizes the same idea
with explicit quotient and localization children.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product

from .core import Ring, RingValue
from .errors import (
    FactorizationError,
    InvariantViolation,
    NotIdempotentError,
    NotZeroDimensionalError,
    OracleInconsistencyError,
    ResourceLimitError,
)
from .matrix import Matrix
from .rings import (
    ComponentSplit,
    Idempotent,
    IdempotentComponent,
    Localization,
    ProductRing,
    ann_idempotent_payload,
    canonical_image,
    is_zero_dimensional,
    localize,
    quasi_inverse_payload,
    reduced_quotient,
)

DEFAULT_MAX_LEAVES = 4096


# ---------------------------------------------------------------------------
# quasi-inverses


@dataclass(frozen=True, eq=False)
class QuasiInversePair:
    a: RingValue
    a_star: RingValue
    e_a: Idempotent

    def check(self) -> bool:
        a, b = self.a, self.a_star
        return a * a * b == a and a * b * b == b and self.e_a.value == a * b


def quasi_inverse(a: RingValue) -> QuasiInversePair:
    """The unique ``b`` with ``a^2 b = a`` and ``a b^2 = b``, with ``e_a = a b``."""
    R = a.ring
    if not is_zero_dimensional(R):
        raise NotZeroDimensionalError(f"{R} is not zero-dimensional reduced")
    b, e = quasi_inverse_payload(R, a.payload)
    pair = QuasiInversePair(a, RingValue(R, b), Idempotent(RingValue(R, e)))
    if not pair.check():
        raise InvariantViolation("quasi-inverse axioms failed")
    return pair


# ---------------------------------------------------------------------------
# orthogonal systems


@dataclass(frozen=True, eq=False)
class OrthogonalIdempotentSystem:
    """Idempotents ``e_1..e_n`` with ``e_i e_j = 0`` for ``i != j`` and sum 1."""

    ring: Ring
    values: tuple

    def __post_init__(self):
        R = self.ring
        vals = tuple(self.values)
        object.__setattr__(self, "values", vals)
        for v in vals:
            if not R.eq(R.mul(v, v), v):
                raise NotIdempotentError(f"{R.to_str(v)} is not idempotent")
        for i, j in combinations(range(len(vals)), 2):
            if not R.is_zero(R.mul(vals[i], vals[j])):
                raise InvariantViolation("idempotents are not orthogonal")
        if not R.is_one(R.sum(vals)):
            raise InvariantViolation("idempotents do not sum to 1")

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return (RingValue(self.ring, v) for v in self.values)

    def __getitem__(self, i):
        return RingValue(self.ring, self.values[i])


def refine_idempotents(rs, ring: Ring | None = None):
    """Atoms of the Boolean algebra generated by ``rs``.

    Returns ``(system, expressions)`` where ``expressions[i]`` lists the atom
    indices summing to ``rs[i]``.  Atoms follow sign patterns in
    lexicographic order with ``r`` before ``1 - r``; zero atoms are dropped.
    An empty list yields the one-element system ``[1]`` of ``ring``.
    """
    rs = [r if isinstance(r, Idempotent) else Idempotent(r) for r in rs]
    if not rs:
        if ring is None:
            raise ValueError("an empty list needs an explicit ring")
        return trivial_system(ring), []
    R = rs[0].ring
    vals = [r.value.payload for r in rs]
    atoms = []
    for pattern in product((True, False), repeat=len(vals)):
        e = R.one()
        for keep, r in zip(pattern, vals):
            e = R.mul(e, r if keep else R.sub(R.one(), r))
        if not R.is_zero(e):
            atoms.append(e)
    system = OrthogonalIdempotentSystem(R, atoms)
    expressions = []
    for r in vals:
        idx = [j for j, e in enumerate(atoms) if R.eq(R.mul(e, r), e)]
        if not R.eq(R.sum(atoms[j] for j in idx), r):
            raise InvariantViolation("idempotent is not a sum of atoms")
        expressions.append(idx)
    return system, expressions


def trivial_system(R: Ring) -> OrthogonalIdempotentSystem:
    return OrthogonalIdempotentSystem(R, [R.one()])


def annihilator_system(xs):
    """``t_1 = s_1, t_k = r_1..r_{k-1} s_k, t_{n+1} = r_1..r_n`` and ``x = x_1 + t_2 x_2 + ..``.

    ``r_i = 1 - e_{x_i}`` generates ``Ann(x_i)`` and ``s_i = 1 - r_i``.
    Then ``Ann(x_1..x_n) = Ann(x) = <t_{n+1}>``.
    """
    xs = list(xs)
    if not xs:
        raise ValueError("annihilator_system needs at least one element")
    R = xs[0].ring
    one = R.one()
    ts = []
    prefix = one
    x = R.zero()
    for k, v in enumerate(xs):
        s = ann_idempotent_payload(R, v.payload)
        r = R.sub(one, s)
        t = R.mul(prefix, s)
        ts.append(t)
        x = R.add(x, v.payload if k == 0 else R.mul(t, v.payload))
        prefix = R.mul(prefix, r)
    ts.append(prefix)
    system = OrthogonalIdempotentSystem(R, ts)
    ex = ann_idempotent_payload(R, x)
    if not R.eq(R.sub(one, ex), prefix):
        raise InvariantViolation("Ann(x) differs from <t_{n+1}>")
    for v in xs:
        if not R.is_zero(R.mul(prefix, v.payload)):
            raise InvariantViolation("t_{n+1} does not annihilate every x_i")
    return system, RingValue(R, x)


def _transposition(R, n, k):
    z, o = R.zero(), R.one()
    rows = [[o if i == j else z for j in range(n)] for i in range(n)]
    rows[0][0] = rows[k][k] = z
    rows[0][k] = rows[k][0] = o
    return Matrix(R, rows)


def conjugate_regular_corner(P: Matrix):
    """Return ``(J, J P J)`` with ``J^2 = I`` and a regular ``(1,1)`` entry."""
    R = P.ring
    n = P.n
    tr = P.trace()
    if not R.is_one(ann_idempotent_payload(R, tr)):
        raise FactorizationError("trace is not regular")
    diag = [RingValue(R, P.rows[i][i]) for i in range(n)]
    system, x = annihilator_system(diag)
    ts = system.values
    if not R.is_zero(ts[n]):
        raise InvariantViolation("t_{n+1} must vanish when the trace is regular")
    J = Matrix.identity(R, n).scale(ts[0])
    for k in range(1, n):
        if not R.is_zero(ts[k]):
            J = J + _transposition(R, n, k).scale(ts[k])
    Pc = J @ P @ J
    if not (J @ J) == Matrix.identity(R, n):
        raise InvariantViolation("J is not an involution")
    if not R.eq(Pc.rows[0][0], x.payload) or not R.is_one(ann_idempotent_payload(R, x.payload)):
        raise InvariantViolation("corner entry is not the regular combination")
    return J, Pc


# ---------------------------------------------------------------------------
# dynamic evaluation over zero-dimensional reduced rings


@dataclass(frozen=True, eq=False)
class Leaf:
    """One component ``eC`` of a dynamic run and the task's result there."""

    e: object
    ring: IdempotentComponent
    result: object


def run_dynamic(C: Ring, task, max_leaves: int = DEFAULT_MAX_LEAVES, log=None):
    """Run ``task(K)`` with ``K`` a component of ``C`` treated as a field.

    Whenever ``task`` raises :class:`ComponentSplit` the component is cut in
    two (the part where the tested element vanishes first) and ``task`` is
    rerun on each part.  Returns the leaves in canonical order.
    """
    if not is_zero_dimensional(C):
        raise NotZeroDimensionalError(f"{C} is not zero-dimensional reduced")
    if C.is_trivial:
        return []
    pending = [C.one()]
    done = []
    while pending:
        e = pending.pop(0)
        K = IdempotentComponent(C, e)
        try:
            result = task(K)
        except ComponentSplit as split:
            e1 = split.idempotent
            zero_part = C.sub(e, e1)
            pending[:0] = [zero_part, e1]
            if log is not None:
                log.append(f"split {C.to_str(e)} -> {C.to_str(zero_part)} + {C.to_str(e1)}")
            if len(done) + len(pending) > max_leaves:
                raise ResourceLimitError(f"more than {max_leaves} components")
            continue
        done.append(Leaf(e, K, result))
    OrthogonalIdempotentSystem(C, [leaf.e for leaf in done])
    return done


# ---------------------------------------------------------------------------
# component trees over reduced rings


@dataclass(eq=False)
class TreeNode:
    ring: Ring
    parent: "TreeNode | None" = None
    kind: str = "root"  # "root", "quotient" or "localization"
    split_on: object = None  # payload in the parent ring
    children: list = field(default_factory=list)
    pruned: list = field(default_factory=list)

    @property
    def is_leaf(self):
        return not self.children

    def path(self):
        node, out = self, []
        while node.parent is not None:
            sign = "=0" if node.kind == "quotient" else " inv"
            out.append(f"{node.parent.ring.to_str(node.split_on)}{sign}")
            node = node.parent
        return list(reversed(out))


class ComponentTree:
    """Finite decomposition of a reduced ring into quotients and localizations.

    Splitting a leaf ``A`` at ``a`` creates ``(A/<a>)_red`` (first) and
    ``A[1/a]``; a child isomorphic to the zero ring is pruned and recorded.
    """

    def __init__(self, root: Ring):
        if not root.is_reduced:
            raise NotZeroDimensionalError("component trees need a reduced root")
        self.root = TreeNode(root)

    def leaves(self):
        out = []

        def walk(node):
            if node.is_leaf:
                out.append(node)
            for c in node.children:
                walk(c)

        walk(self.root)
        return out

    def image(self, node: TreeNode, x):
        """Image at ``node`` of a payload ``x`` of the root ring."""
        chain = []
        while node is not None:
            chain.append(node)
            node = node.parent
        chain.reverse()
        for parent, child in zip(chain, chain[1:]):
            x = canonical_image(child.ring, parent.ring, x)
        return x

    def evaluate(self, x):
        """Images of a root payload at every leaf."""
        return [self.image(leaf, x) for leaf in self.leaves()]

    def split(self, leaf: TreeNode, a):
        """Split ``leaf`` at ``a`` (a payload of ``leaf.ring``); returns the live children."""
        if not leaf.is_leaf:
            raise ValueError("only leaves can be split")
        A = leaf.ring
        for kind, ring in (("quotient", reduced_quotient(A, a)), ("localization", localize(A, a))):
            node = TreeNode(ring, leaf, kind, a)
            if ring.is_trivial:
                leaf.pruned.append(node)
            else:
                leaf.children.append(node)
        return list(leaf.children)

    def split_all(self, a):
        """Split every leaf at the image of the root payload ``a``."""
        for leaf in self.leaves():
            self.split(leaf, self.image(leaf, a))


@dataclass(eq=False)
class AdjoinedQuasiInverse:
    """``C = (A/<a>)_red x A[1/a]`` with ``a^bullet = (0, 1/a)`` across the leaves."""

    tree: ComponentTree
    a: RingValue
    a_bullet: list  # payloads per leaf

    def leaves(self):
        return self.tree.leaves()

    def check(self) -> bool:
        for leaf, t in zip(self.leaves(), self.a_bullet):
            R = leaf.ring
            ai = self.tree.image(leaf, self.a.payload)
            if not R.eq(R.mul(ai, R.mul(t, t)), t) or not R.eq(R.mul(R.mul(ai, ai), t), ai):
                return False
        return True


def adjoin_quasi_inverse(A: Ring, a: RingValue) -> AdjoinedQuasiInverse:
    if a.ring != A:
        raise ValueError("element does not belong to the ring")
    tree = ComponentTree(A)
    tree.split(tree.root, a.payload)
    bullets = []
    for leaf in tree.leaves():
        R = leaf.ring
        if leaf.kind == "quotient":
            bullets.append(R.zero())
        else:
            bullets.append(R.inverse(tree.image(leaf, a.payload)))
    adj = AdjoinedQuasiInverse(tree, a, bullets)
    if not adj.check():
        raise InvariantViolation("a^bullet fails the quasi-inverse relations")
    return adj


@dataclass(eq=False)
class LocalizedComponent:
    """The component cut out by ``e_a e_b ...`` identified with ``A[1/(ab...)]``."""

    source: Ring
    e: object
    ring: Ring
    to_localization: object
    from_localization: object


def localize_component(A: Ring, elements) -> LocalizedComponent:
    """Identify ``(e_a e_b ..) A[a^bullet, b^bullet, ..]`` with ``A[1/(ab..)]``.

    For a zero-dimensional ``A`` the quasi-inverses already live in ``A`` and
    the component is ``eA`` with ``e`` the product of the ``e_a``.  For other
    reduced rings the component is the leaf of the splitting tree where every
    element was inverted.
    """
    elements = list(elements)
    s = A.prod(x.payload for x in elements)
    L = localize(A, s)
    if is_zero_dimensional(A):
        e = A.one()
        inv = A.one()
        for x in elements:
            b, ex = quasi_inverse_payload(A, x.payload)
            e = A.mul(e, ex)
            inv = A.mul(inv, b)

        def to_loc(y):
            return canonical_image(L, A, y)

        def from_loc(z):
            return A.mul(e, _lift_from_localization(A, L, z, inv))

        return LocalizedComponent(A, e, L, to_loc, from_loc)
    tree = ComponentTree(A)
    for x in elements:
        tree.split_all(x.payload)
    target = None
    for leaf in tree.leaves():
        if all(n.kind != "quotient" for n in _ancestors(leaf)):
            target = leaf
    if target is None:
        return LocalizedComponent(A, None, L, lambda y: L.zero(), lambda z: A.zero())
    if target.ring != L:
        raise InvariantViolation(f"leaf ring {target.ring} differs from {L}")
    return LocalizedComponent(A, None, L, lambda y: tree.image(target, y), None)


def _ancestors(node):
    while node.parent is not None:
        yield node
        node = node.parent


def _lift_from_localization(A, L, z, s_inv):
    """Representative in ``A`` of ``z`` in ``A[1/s]`` (zero-dimensional ``A``)."""
    if L.is_trivial:
        return A.zero()
    if L == A:
        return z
    if isinstance(L, ProductRing) and isinstance(A, ProductRing):
        return tuple(
            _lift_from_localization(F, G, c, b) for F, G, c, b in zip(A.factors, L.factors, z, s_inv)
        )
    if isinstance(L, Localization):
        num, k = z
        return A.mul(num, A.pow(s_inv, k))
    # a smaller reduced quotient of the same base: reduce the representative
    return A.reduce(z)


# ---------------------------------------------------------------------------
# elimination cascade


@dataclass(frozen=True)
class TrivialityCertificate:
    """Products proven zero, in order; ``complete`` when the last line is ``1 = 0``."""

    lines: tuple
    products: tuple

    @property
    def complete(self):
        return bool(self.lines) and self.lines[-1] == "1 = 0"

    def verify(self, R: Ring) -> bool:
        return all(R.is_zero(p) for p in self.products)

    def __str__(self):
        return "\n".join(self.lines)


@dataclass(frozen=True)
class EliminationResult:
    certificate: TrivialityCertificate
    survivors: tuple  # index subsets where the oracle refused
    blocked: tuple  # subsets never reached because a superset survived

    @property
    def trivial(self):
        return self.certificate.complete


def _factor_str(R, x):
    s = R.to_str(x)
    if any(ch in s for ch in "+-") and not (s.startswith("(") and s.endswith(")")):
        return f"({s})"
    return s


def eliminate(C: Ring, elements, oracle) -> EliminationResult:
    """Replay the cascade over the ``2^r`` sign components of ``a_1..a_r``.

    Subsets ``S`` are visited by decreasing size, lexicographically within a
    size.  Once every strict superset of ``S`` is known to vanish, the
    component where exactly the ``a_i`` with ``i`` in ``S`` are inverted
    collapses to ``C[1/prod_S a_i]``; ``oracle(ring, S)`` is asked whether the
    module is free there, and a yes records ``prod_S a_i = 0``.
    """
    vals = [x.payload if isinstance(x, RingValue) else x for x in elements]
    r = len(vals)
    zero_sets = set()
    lines, products, survivors, blocked = [], [], [], []
    for size in range(r, -1, -1):
        for S in combinations(range(r), size):
            supersets = [tuple(sorted(S + (i,))) for i in range(r) if i not in S]
            if not all(T in zero_sets for T in supersets):
                blocked.append(S)
                continue
            p = C.prod(vals[i] for i in S)
            ring = localize(C, p)
            verdict = oracle(ring, S)
            if verdict not in (True, False):
                raise OracleInconsistencyError(f"oracle returned {verdict!r}")
            if not verdict:
                survivors.append(S)
                continue
            zero_sets.add(S)
            products.append(p)
            lhs = "*".join(_factor_str(C, vals[i]) for i in S) if S else "1"
            lines.append(f"{lhs} = 0")
    return EliminationResult(TrivialityCertificate(tuple(lines), tuple(products)), tuple(survivors), tuple(blocked))


__all__ = [
    "QuasiInversePair",
    "quasi_inverse",
    "OrthogonalIdempotentSystem",
    "refine_idempotents",
    "trivial_system",
    "annihilator_system",
    "conjugate_regular_corner",
    "Leaf",
    "run_dynamic",
    "TreeNode",
    "ComponentTree",
    "AdjoinedQuasiInverse",
    "adjoin_quasi_inverse",
    "LocalizedComponent",
    "localize_component",
    "TrivialityCertificate",
    "EliminationResult",
    "eliminate",
    "DEFAULT_MAX_LEAVES",
]
