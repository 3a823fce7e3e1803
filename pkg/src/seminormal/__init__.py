"""Exact rank-1 projective modules over polynomial rings.

Decide whether a rank-1 idempotent matrix over ``A[X]`` factors as a column
times a row with coefficients in ``A``, and when it does not, exhibit the
square-and-cube adjunctions that the base ring is missing.
"""

from .core import GF, QQ, ZZ, Integers, PrimeField, Rationals, Ring, RingValue, TrivialRing
from .engine import (
    AdjunctionTower,
    ConductorIdeal,
    FactorizationResult,
    SeminormalWitnessRequest,
    closure_tower,
    conductor,
    factor_rank1_seminormal,
    seminormal_closure,
    seminormal_witness,
)
from .errors import (
    FactorizationError,
    InvariantViolation,
    MembershipError,
    ParseError,
    Rank1Violation,
    RelationError,
    ResourceLimitError,
    RingMismatchError,
    SeminormalError,
    UnsupportedRingError,
)
from .gcd import (
    content,
    factor_over_zdr,
    factor_rank1_gcd,
    gauss_content,
    poly_associate,
    poly_gcd,
    primitive_decompose,
)
from .idempotents import (
    ComponentTree,
    OrthogonalIdempotentSystem,
    eliminate,
    quasi_inverse,
    refine_idempotents,
    run_dynamic,
)
from .kronecker import IntegralityReport, kronecker_check
from .matrix import (
    Matrix,
    Rank1Certificate,
    Rank1Factorization,
    certify_rank1,
    lift_conjugation,
    newton_lift,
    rank_polynomial,
    schanuel_matrix,
)
from .poly import MultiPoly, PolynomialRing, kronecker_substitute
from .rings import (
    DualNumbers,
    FiniteSubalgebra,
    Localization,
    ProductRing,
    ReducedQuotient,
    SemigroupRing,
    reduced_quotient,
    ring_from_descriptor,
)

__version__ = "0.1.0"
