"""Seminormality witnesses, conductors, closure towers and the factorization driver.

The driver takes a certified rank-1 idempotent ``P`` over ``A[X]`` with
``P(0) = I_{n,1}`` and either returns ``P = f g`` with coefficients in ``A``
or explains why not: the tower of elements ``c_1, .., c_m`` that had to be
adjoined (each with ``c_i^2`` and ``c_i^3`` already present) before such a
factorization exists.

Subrings of ``k[t]`` (semigroup rings and finite subalgebras) are handled by
factoring in ``k[t][X]`` and saturating; gcd pp-rings and zero-dimensional
reduced rings factor directly.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field

from .core import Ring, RingValue
from .errors import (
    FactorizationError,
    RelationError,
    ResourceLimitError,
    UnsupportedRingError,
)
from .gcd import factor_over_zdr, factor_rank1_gcd, normalize_at_zero
from .idempotents import DEFAULT_MAX_LEAVES
from .linalg import nullspace, solve
from .matrix import (
    Matrix,
    Rank1Certificate,
    Rank1Factorization,
    certify_rank1,
    diag_pad,
    evaluate_matrix_at_zero,
    similarity_to_standard,
)
from .poly import MultiPoly, PolynomialRing
from .rings import (
    DualNumbers,
    FiniteSubalgebra,
    IdempotentComponent,
    ProductRing,
    SemigroupRing,
    _AmbientSubring,
    _echelon,
    is_zero_dimensional,
    quasi_inverse_payload,
)

log = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# witnesses


@dataclass(frozen=True)
class SeminormalWitnessRequest:
    """A pair ``b, c`` of one ring with ``b^2 = c^3``."""

    b: RingValue
    c: RingValue

    def __post_init__(self):
        if self.b.ring != self.c.ring:
            raise RelationError("b and c live in different rings")
        if not (self.b * self.b == self.c * self.c * self.c):
            raise RelationError(f"b^2 != c^3 for b = {self.b}, c = {self.c}")

    @property
    def ring(self):
        return self.b.ring


def _witness_payload(R: Ring, b, c):
    if R.is_trivial or R.is_zero(c):
        # reduced: c = 0 forces b = 0
        return R.zero()
    if isinstance(R, ProductRing):
        parts = []
        for F, bi, ci in zip(R.factors, b, c):
            a = _witness_payload(F, bi, ci)
            if a is None:
                return None
            parts.append(a)
        return tuple(parts)
    if R.is_field:
        return R.mul(b, R.inverse(c))
    if is_zero_dimensional(R):
        # a = b c^.  is right on the support of c and zero off it
        return R.mul(b, quasi_inverse_payload(R, c)[0])
    if isinstance(R, _AmbientSubring):
        a = R.ambient().exact_div(b, c)
        return a if a is not None and R.contains(a) else None
    if R.is_domain:
        return R.exact_div(b, c)
    raise UnsupportedRingError(f"no witness oracle for {R}")


def seminormal_witness(req: SeminormalWitnessRequest | RingValue, c: RingValue | None = None):
    """The unique ``a`` with ``a^2 = c`` and ``a^3 = b``, or ``None`` when the ring lacks it.

    Accepts a request or the pair ``(b, c)``.
    """
    if not isinstance(req, SeminormalWitnessRequest):
        req = SeminormalWitnessRequest(req, c)
    R = req.ring
    if not R.is_reduced:
        raise UnsupportedRingError(f"{R} is not reduced")
    a = _witness_payload(R, req.b.payload, req.c.payload)
    if a is None:
        return None
    if not (R.eq(R.mul(a, a), req.c.payload) and R.eq(R.pow(a, 3), req.b.payload)):
        return None
    return RingValue(R, a)


# ---------------------------------------------------------------------------
# subrings of k[t]


def as_stage(A: Ring) -> FiniteSubalgebra:
    """``A`` as a :class:`FiniteSubalgebra` (``k[t]`` itself has cutoff 0)."""
    if isinstance(A, FiniteSubalgebra):
        return A
    if isinstance(A, SemigroupRing):
        return A.as_subalgebra()
    if isinstance(A, PolynomialRing) and len(A.vars) == 1 and A.base.is_field:
        return FiniteSubalgebra(A.base, A.vars[0], 0, ())
    raise UnsupportedRingError(f"{A} is not a subring of a univariate polynomial ring over a field")


def _monomial(S: FiniteSubalgebra, k):
    return MultiPoly.monomial(S.field, (S.var,), (k,))


def _ideal_contains(S: FiniteSubalgebra, gens, x, bound):
    """Whether ``x`` lies in ``sum g_i S``, deciding degree by degree up to ``bound``."""
    if not gens:
        return x.is_zero()
    mult = list(S.basis) + [_monomial(S, k) for k in range(S.cutoff, bound + 1)]
    vectors = [(g * m).truncate(0, bound + 1) for g in gens for m in mult]
    F = S.field
    cols = vectors
    rows = [[v.terms.get((e,), F.zero()) for v in cols] for e in range(bound + 1)]
    rhs = [x.terms.get((e,), F.zero()) for e in range(bound + 1)]
    return solve(rows, rhs, field=F) is not None


@dataclass(frozen=True, eq=False)
class ConductorIdeal:
    """``{x in A : x B in A}`` for ``A`` a subring of ``k[t]`` and ``B = A[c_1, .., c_q]``.

    ``generators`` span it as an ideal of ``A``; ``exponent`` is an ``N`` with
    ``t^N k[t]`` inside the ideal.  ``bound`` is ``(d - 1) q`` when a degree
    bound ``d`` was supplied.
    """

    ring: Ring
    extension: tuple
    generators: tuple
    exponent: int
    bound: int | None = None

    @property
    def stage(self) -> FiniteSubalgebra:
        return as_stage(self.ring)

    def is_unit(self):
        return any(g.is_constant() and not g.is_zero() for g in self.generators)

    def contains(self, x: MultiPoly) -> bool:
        """Membership by ``x in A`` and ``x c_i in A`` for every extension generator."""
        S = self.stage
        return S.contains(x) and all(S.contains(x * c) for c in self.extension)

    def contains_in_span(self, x: MultiPoly) -> bool:
        """Membership in the ideal generated by :attr:`generators`."""
        return _ideal_contains(self.stage, self.generators, x, 4 * self.exponent + 4 + max(x.degree(), 0))

    def strings(self):
        amb = self.stage.ambient()
        return [amb.to_str(g) for g in self.generators]


def _extension_stage(A: FiniteSubalgebra, extension):
    if isinstance(extension, Ring):
        B = as_stage(extension)
        gens = tuple(B.basis) + tuple(_monomial(B, k) for k in range(B.cutoff, A.cutoff))
        return B, gens
    gens = tuple(c.payload if isinstance(c, RingValue) else c for c in extension)
    B = FiniteSubalgebra.generated(A.field, A.var, A.cutoff, gens, start=A.basis)
    return B, gens


def conductor(A: Ring, extension, d: int | None = None) -> ConductorIdeal:
    """Conductor of ``A`` in ``B``, where ``extension`` is ``B`` itself or generators ``c_i``.

    Elements of ``t^N k[t]`` (``N`` the cutoff of ``A``) always qualify, so
    only the finite part ``V`` of ``A`` needs testing: solve the linear system
    ``x w in A`` for ``x in V`` and ``w`` running over a spanning set of ``B``.
    """
    S = as_stage(A)
    B, gens = _extension_stage(S, extension)
    if not B.includes(S):
        raise ValueError("the extension does not contain A")
    N = S.cutoff
    F = S.field
    one = MultiPoly.constant(F, (S.var,), F.one())
    space = list(S.basis) if S.cutoff else []
    multipliers = list(B.basis) + [_monomial(S, k) for k in range(B.cutoff, N)]
    # residue coordinates: for each multiplier w, the map x -> residue of x w modulo A
    rows = []
    for w in multipliers:
        residues = [S.reduce(v * w) for v in space]
        degrees = sorted({e for r in residues for e in r.terms})
        for e in degrees:
            rows.append([r.terms.get(e, F.zero()) for r in residues])
    kernel = nullspace(rows, len(space), field=F) if space else []
    W = [sum((v.scale(lam) for v, lam in zip(space, vec) if not F.is_zero(lam)), one.zero_like()) for vec in kernel]
    candidates = sorted(_echelon(W), key=lambda p: p.degree()) + [_monomial(S, k) for k in range(N, 2 * N)]
    if N == 0:
        candidates = [one]
    bound = 4 * N + 4
    generators = []
    for x in candidates:
        if not _ideal_contains(S, generators, x, bound):
            generators.append(x)
    q = len(gens)
    ideal = ConductorIdeal(A, gens, tuple(generators), N, None if d is None else (d - 1) * q)
    log.info("conductor of %s: %s", A, ideal.strings())
    return ideal


# ---------------------------------------------------------------------------
# closure tower


@dataclass(frozen=True, eq=False)
class TowerStep:
    """``element`` adjoined to ``previous``; its square and cube already lie there."""

    element: MultiPoly
    previous: FiniteSubalgebra
    stage: FiniteSubalgebra

    @property
    def square(self):
        return self.element * self.element

    @property
    def cube(self):
        return self.element * self.element * self.element

    def verify(self) -> bool:
        P = self.previous
        return P.contains(self.square) and P.contains(self.cube) and not P.contains(self.element)


@dataclass(frozen=True, eq=False)
class AdjunctionTower:
    base: Ring
    steps: tuple = ()
    extension: FiniteSubalgebra | None = None

    @property
    def top(self) -> Ring:
        if not self.steps:
            return self.base
        return self.steps[-1].stage.simplify()

    @property
    def elements(self):
        return [s.element for s in self.steps]

    def strings(self):
        return [s.previous.ambient().to_str(s.element) for s in self.steps]

    def verify(self) -> bool:
        return all(s.verify() for s in self.steps)

    def is_minimal(self) -> bool:
        """Dropping the last step leaves a stage that misses the extension."""
        if not self.steps or self.extension is None:
            return True
        return not self.steps[-1].previous.includes(self.extension)

    def __len__(self):
        return len(self.steps)


def _lift_to_ambient(P: Matrix):
    R = P.ring
    A = R.base if isinstance(R, PolynomialRing) else R
    amb = A.ambient()
    vars = R.vars if isinstance(R, PolynomialRing) else ()
    target = PolynomialRing(amb, vars)
    rows = [[MultiPoly(amb, vars, dict(p.terms)) for p in row] for row in P.rows]
    return Matrix(target, rows)


def _coefficients(fac: Rank1Factorization):
    out = []
    for p in list(fac.f) + list(fac.g):
        out.extend(p.terms.values())
    return out


def _restrict(fac: Rank1Factorization, A: Ring):
    """Re-read a factorization over ``amb[X]`` as one over ``A[X]`` (membership checked)."""
    vars = fac.ring.vars
    RA = PolynomialRing(A, vars)

    def conv(p):
        return MultiPoly(A, vars, {e: A.from_ambient(c) for e, c in p.terms.items()})

    return fac.map(conv, RA)


def seminormal_closure(A: Ring, coeffs, max_steps=64) -> AdjunctionTower:
    """Saturate ``A`` inside ``B = A[coeffs]`` by adjoining elements whose square and cube are present.

    Candidates are spanning vectors of ``B`` reduced modulo the current
    stage, tried by increasing degree.
    """
    S0 = as_stage(A)
    B = FiniteSubalgebra.generated(S0.field, S0.var, S0.cutoff, coeffs, start=S0.basis)
    steps = []
    S = S0
    while not S.includes(B):
        if len(steps) >= max_steps:
            raise ResourceLimitError(f"closure tower exceeded {max_steps} steps")
        pool = list(B.basis) + [_monomial(S, k) for k in range(B.cutoff, S.cutoff)]
        found = None
        for x in sorted((S.reduce(v) for v in pool), key=lambda p: (p.degree(), len(p.terms))):
            if x.is_zero():
                continue
            if S.contains(x * x) and S.contains(x * x * x):
                found = x
                break
        if found is None:
            raise ResourceLimitError("no candidate with square and cube in the current stage")
        # normalize to a monic element for readable towers
        found = found.scale(S.field.inverse(found.leading_term()[1]))
        nxt = FiniteSubalgebra.generated(S.field, S.var, S.cutoff, [found], start=S.basis)
        steps.append(TowerStep(found, S, nxt))
        S = nxt
    return AdjunctionTower(A, tuple(steps), B)


def _standard_at_zero(P: Matrix) -> bool:
    R = P.ring
    base = R.base if isinstance(R, PolynomialRing) else R
    return evaluate_matrix_at_zero(P) == Matrix.standard_projection(base, P.n)


def closure_tower(A: Ring, P, max_leaves: int = DEFAULT_MAX_LEAVES):
    """Tower over ``A`` and a factorization of ``P`` over its top.

    Returns ``(tower, factorization)``; the factorization lives over
    ``top[X]`` and is normalized so that ``f_1(0) = g_1(0) = 1``.
    """
    cert = P if isinstance(P, Rank1Certificate) else certify_rank1(P)
    P = cert.matrix
    if not _standard_at_zero(P):
        raise FactorizationError("P(0) must equal I_{n,1}")
    if not isinstance(A, _AmbientSubring) and not isinstance(A, PolynomialRing):
        return AdjunctionTower(A), _direct(P, max_leaves)
    if isinstance(A, PolynomialRing):
        return AdjunctionTower(A), _direct(P, max_leaves)
    amb_fac = normalize_at_zero(factor_rank1_gcd(_lift_to_ambient(P)))
    tower = seminormal_closure(A, _coefficients(amb_fac))
    top = tower.top
    if isinstance(top, PolynomialRing):
        fac = amb_fac
    else:
        fac = _restrict(amb_fac, top)
    log.info("closure tower over %s: %s", A, tower.strings())
    return tower, fac


def _direct(P: Matrix, max_leaves):
    R = P.ring
    base = R.base if isinstance(R, PolynomialRing) else R
    if isinstance(base, (DualNumbers, IdempotentComponent)) or not base.is_reduced:
        raise UnsupportedRingError(f"the driver does not support {base}")
    if isinstance(base, ProductRing) and any(isinstance(F, _AmbientSubring) for F in base.factors):
        raise UnsupportedRingError("products with subrings of k[t] are not supported by the driver")
    if is_zero_dimensional(base) and not base.is_domain and not isinstance(base, ProductRing):
        return factor_over_zdr(P, max_leaves=max_leaves)
    return factor_rank1_gcd(P, max_leaves=max_leaves)


# ---------------------------------------------------------------------------
# driver


@dataclass(frozen=True, eq=False)
class FactorizationResult:
    """``status`` is ``"factored"`` (over ``A[X]``) or ``"obstructed"`` (over the tower top)."""

    status: str
    factorization: Rank1Factorization
    tower: AdjunctionTower
    trace: tuple = dc_field(default=())

    @property
    def factored(self):
        return self.status == "factored"

    def document(self, with_trace=False) -> dict:
        doc = {
            "status": self.status,
            "f": self.factorization.f_strings(),
            "g": self.factorization.g_strings(),
            "tower": self.tower.strings(),
        }
        if with_trace:
            doc["trace"] = list(self.trace)
        return doc


def factor_rank1_seminormal(A: Ring, P, max_leaves: int = DEFAULT_MAX_LEAVES) -> FactorizationResult:
    """Factor a rank-1 idempotent ``P`` over ``A[X]`` with ``P(0) = I_{n,1}``, or exhibit the obstruction."""
    cert = P if isinstance(P, Rank1Certificate) else certify_rank1(P)
    P = cert.matrix
    R = P.ring
    base = R.base if isinstance(R, PolynomialRing) else R
    if base != A:
        raise UnsupportedRingError(f"P lives over {base}, not {A}")
    trace = [f"certified rank 1 over {A}"]
    tower, fac = closure_tower(A, cert, max_leaves=max_leaves)
    surviving = []
    for step in tower.steps:
        amb = step.previous
        prev = amb.simplify()
        b = RingValue(prev, step.cube)
        c = RingValue(prev, step.square)
        a = seminormal_witness(b, c)
        label = step.previous.ambient().to_str(step.element)
        if a is None:
            trace.append(f"adjoined {label}: no square-cube witness in the previous stage")
            surviving.append(step)
        else:
            trace.append(f"collapsed {label}: witness {prev.to_str(a.payload)}")
    if surviving:
        tower = AdjunctionTower(A, tuple(surviving), tower.extension)
        trace.append(f"obstructed: tower of length {len(tower)}")
        return FactorizationResult("obstructed", fac, tower, tuple(trace))
    if isinstance(A, _AmbientSubring) and fac.ring.base != A:
        fac = _restrict(fac, A)
    if not fac.outer() == P or not fac.ring.is_one(fac.inner()):
        raise FactorizationError("factorization does not reproduce P")
    trace.append("factored over the base ring")
    return FactorizationResult("factored", fac, AdjunctionTower(A), tuple(trace))


def standardize_constant_term(P: Matrix, witness) -> tuple:
    """Conjugate ``P`` so that ``P(0) = I_{n,1}``, given a free-image witness of ``P(0)``.

    Returns ``(Q, C, C_inv)`` with ``Q = C P C_inv`` (constant matrices
    lifted to ``R``).  The witness has rank ``r`` and ``P`` is padded to size
    ``n + r`` as in :func:`similarity_to_standard`.
    """
    R = P.ring
    P0 = evaluate_matrix_at_zero(P)
    sim = similarity_to_standard(P0, witness)
    lift = (lambda x: R.const(x)) if isinstance(R, PolynomialRing) else (lambda x: x)
    C = sim.C.map(lift, R)
    C_inv = sim.C_inv.map(lift, R)
    Q = C @ diag_pad(P, witness.rank) @ C_inv
    return Q, C, C_inv


__all__ = [
    "SeminormalWitnessRequest",
    "seminormal_witness",
    "as_stage",
    "ConductorIdeal",
    "conductor",
    "TowerStep",
    "AdjunctionTower",
    "seminormal_closure",
    "closure_tower",
    "FactorizationResult",
    "factor_rank1_seminormal",
    "standardize_constant_term",
]
