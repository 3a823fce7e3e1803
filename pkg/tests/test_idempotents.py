import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seminormal import GF, QQ, ZZ, PolynomialRing, RingValue
from seminormal.errors import FactorizationError, NotIdempotentError, NotZeroDimensionalError
from seminormal.idempotents import (
    ComponentTree,
    OrthogonalIdempotentSystem,
    adjoin_quasi_inverse,
    annihilator_system,
    conjugate_regular_corner,
    eliminate,
    localize_component,
    quasi_inverse,
    refine_idempotents,
    run_dynamic,
)
from seminormal.matrix import Matrix
from seminormal.rings import Idempotent, ProductRing

from strategies import QQ_x, elements, fields_product

Q2 = ProductRing((QQ, QQ))
Q3 = ProductRing((QQ, QQ, QQ))
SMALL = ProductRing((GF(2), GF(3), GF(5)))


def test_quasi_inverse_examples():
    pair = quasi_inverse(Q3("(2, 0, 3)"))
    assert pair.a_star == Q3("(1/2, 0, 1/3)")
    assert pair.e_a.value == Q3("(1, 0, 1)")
    assert quasi_inverse(Q3(0)).a_star == Q3(0)
    assert quasi_inverse(Q3(1)).a_star == Q3(1)
    assert quasi_inverse(GF(7)(3)).a_star == GF(7)(5)


def test_quasi_inverse_needs_zero_dimensional_ring():
    with pytest.raises(NotZeroDimensionalError):
        quasi_inverse(ZZ(2))


@settings(max_examples=150, deadline=None)
@given(data=st.data())
def test_quasi_inverse_laws(data):
    R = fields_product(data.draw(st.integers(1, 4)))
    a, b = RingValue(R, data.draw(elements(R))), RingValue(R, data.draw(elements(R)))
    qa, qb = quasi_inverse(a), quasi_inverse(b)
    assert qa.check()
    assert qa.e_a.value * a == a
    assert qa.e_a.value * qa.a_star == qa.a_star
    assert quasi_inverse(qa.a_star).a_star == a
    assert quasi_inverse(a * b).a_star == qa.a_star * qb.a_star


def test_quasi_inverse_is_unique():
    # every solution of the two defining equations is found by brute force
    elems = [SMALL(tuple(x)) for x in product(range(2), range(3), range(5))]
    for a in elems:
        solutions = [b for b in elems if a * a * b == a and a * b * b == b]
        assert solutions == [quasi_inverse(a).a_star]


def test_refine_examples():
    system, expr = refine_idempotents([Idempotent(Q2("(1, 0)"))])
    assert list(system) == [Q2("(1, 0)"), Q2("(0, 1)")]
    assert expr == [[0]]
    system, expr = refine_idempotents([Idempotent(Q3("(1, 1, 0)")), Idempotent(Q3("(0, 1, 1)"))])
    assert list(system) == [Q3("(0, 1, 0)"), Q3("(1, 0, 0)"), Q3("(0, 0, 1)")]
    assert expr == [[0, 1], [0, 2]]
    system, expr = refine_idempotents([], ring=Q2)
    assert list(system) == [Q2(1)] and expr == []


def test_refine_rejects_non_idempotents():
    with pytest.raises(ValueError):
        refine_idempotents([Q2("(2, 0)")])


@settings(max_examples=100, deadline=None)
@given(data=st.data())
def test_refine_laws(data):
    R = fields_product(data.draw(st.integers(1, 5)))
    rng = data.draw(st.randoms(use_true_random=False))
    rs = []
    for _ in range(rng.randint(1, 4)):
        rs.append(Idempotent(RingValue(R, tuple(rng.choice([F.zero(), F.one()]) for F in R.factors))))
    system, expr = refine_idempotents(rs)
    # orthogonality and sum are checked when the system is built
    assert isinstance(system, OrthogonalIdempotentSystem)
    for r, idx in zip(rs, expr):
        assert R.eq(R.sum(system.values[j] for j in idx), r.value.payload)


def test_system_rejects_overlap():
    with pytest.raises(Exception):
        OrthogonalIdempotentSystem(Q2, [Q2.one(), Q2((1, 0))])
    with pytest.raises(NotIdempotentError):
        OrthogonalIdempotentSystem(Q2, [Q2.from_int(2)])


def test_annihilator_system_examples():
    system, x = annihilator_system([Q2("(1, 0)"), Q2("(0, 1)")])
    assert list(system) == [Q2("(1, 0)"), Q2("(0, 1)"), Q2(0)]
    assert x == Q2(1)
    system, x = annihilator_system([ZZ(0)])
    assert list(system) == [ZZ(0), ZZ(1)] and x == ZZ(0)
    system, x = annihilator_system([ZZ(5)])
    assert list(system) == [ZZ(1), ZZ(0)] and x == ZZ(5)


@settings(max_examples=150, deadline=None)
@given(data=st.data())
def test_finitely_generated_ideals_are_principal_idempotent(data):
    R = fields_product(data.draw(st.integers(1, 4)))
    xs = [RingValue(R, data.draw(elements(R))) for _ in range(data.draw(st.integers(1, 4)))]
    system, x = annihilator_system(xs)
    e = RingValue(R, R.one()) - system[len(xs)]
    # e generates the ideal: every x_i is a multiple of e, and e = x * x^bullet lies in it
    assert all(e * xi == xi for xi in xs)
    assert quasi_inverse(x).e_a.value == e


def test_conjugate_regular_corner_examples():
    P = Matrix.diagonal(Q2, [Q2("(0, 1)").payload, Q2("(1, 0)").payload])
    J, Pc = conjugate_regular_corner(P)
    swap = Matrix.from_values(Q2, [[0, 1], [1, 0]])
    assert J == Matrix.identity(Q2, 2).scale(Q2("(0, 1)").payload) + swap.scale(Q2("(1, 0)").payload)
    assert Pc[0, 0] == Q2(1)
    J, Pc = conjugate_regular_corner(Matrix.standard_projection(QQ, 2))
    assert J == Matrix.identity(QQ, 2)
    with pytest.raises(FactorizationError):
        conjugate_regular_corner(Matrix.zeros(QQ, 2))


def test_adjoin_quasi_inverse_examples():
    adj = adjoin_quasi_inverse(QQ_x, QQ_x("x"))
    leaves = adj.leaves()
    assert [str(l.ring) for l in leaves] == ["QQ[x]/<x>", "QQ[x][1/(x)]"]
    assert adj.check()
    assert leaves[1].ring.to_str(adj.a_bullet[1]) == "(1)/(x)"
    assert [l.kind for l in adjoin_quasi_inverse(QQ_x, QQ_x(1)).leaves()] == ["localization"]
    assert [l.kind for l in adjoin_quasi_inverse(QQ_x, QQ_x(0)).leaves()] == ["quotient"]


def test_component_tree_is_injective():
    rng = random.Random(3)
    tree = ComponentTree(QQ_x)
    tree.split(tree.root, QQ_x.parse("x"))
    seen = {}
    for _ in range(200):
        p = QQ_x.random(rng, degree=5, terms=3)
        key = tuple(leaf.ring.to_str(v) for leaf, v in zip(tree.leaves(), tree.evaluate(p)))
        if key in seen:
            assert seen[key] == p
        seen[key] = p
    assert len(seen) > 150


def test_localize_component_examples():
    assert str(localize_component(QQ_x, [QQ_x("x")]).ring) == "QQ[x][1/(x)]"
    assert localize_component(QQ_x, [QQ_x("0")]).ring.is_trivial
    lc = localize_component(Q2, [Q2("(1, 0)"), Q2("(0, 1)")])
    assert lc.ring.is_trivial and Q2.is_zero(lc.e)
    lc = localize_component(Q2, [Q2("(1, 0)")])
    assert lc.e == Q2("(1, 0)").payload
    y = Q2("(3, 4)").payload
    assert lc.from_localization(lc.to_localization(y)) == Q2("(3, 0)").payload


ABC = PolynomialRing(ZZ, ("a1", "a2", "a3"))


def test_eliminate_cascades():
    res = eliminate(ABC, [], lambda ring, S: True)
    assert str(res.certificate) == "1 = 0"
    res = eliminate(ABC, [ABC("a1"), ABC("a2")], lambda ring, S: True)
    assert res.certificate.lines == ("a1*a2 = 0", "a1 = 0", "a2 = 0", "1 = 0")
    res = eliminate(ABC, [ABC("a1"), ABC("a2"), ABC("a3")], lambda ring, S: True)
    assert res.certificate.lines == (
        "a1*a2*a3 = 0",
        "a1*a2 = 0",
        "a1*a3 = 0",
        "a2*a3 = 0",
        "a1 = 0",
        "a2 = 0",
        "a3 = 0",
        "1 = 0",
    )
    assert res.trivial


def test_eliminate_stops_at_a_refusal():
    res = eliminate(ABC, [ABC("a1"), ABC("a2")], lambda ring, S: S != (0,))
    assert not res.trivial
    assert res.survivors == ((0,),) and res.blocked == ((),)


def test_eliminate_is_deterministic():
    els = [ABC("a1 + a2"), ABC("a3"), ABC("2")]
    oracle = lambda ring, S: len(S) != 1 or S == (2,)
    first = eliminate(ABC, els, oracle)
    for _ in range(5):
        again = eliminate(ABC, els, oracle)
        assert again.certificate.lines == first.certificate.lines
        assert again.survivors == first.survivors
    assert first.certificate.lines[0] == "(a1 + a2)*a3*2 = 0"


def test_eliminate_on_a_genuinely_trivial_product():
    # in QQ x QQ with a = (1,0), b = (0,1) the product ab is really zero
    a, b = Q2("(1, 0)"), Q2("(0, 1)")
    res = eliminate(Q2, [a, b], lambda ring, S: ring.is_trivial or len(S) < 2)
    assert res.certificate.lines[0].endswith("= 0")
    assert Q2.is_zero(res.certificate.products[0])


def test_run_dynamic_splits_until_fields():
    R = ProductRing((QQ, GF(5), QQ))
    x = R("(0, 2, 7)").payload

    def task(K):
        return "zero" if K.is_zero(K.project(x)) else "unit"

    log = []
    leaves = run_dynamic(R, task, log=log)
    assert R.is_one(R.sum(leaf.e for leaf in leaves))
    assert [leaf.result for leaf in leaves] == ["zero", "unit"]
    assert leaves[0].e == R("(1, 0, 0)").payload
    assert len(log) == 1
    # a field never splits
    assert [leaf.result for leaf in run_dynamic(QQ, lambda K: K.is_zero(K.one()))] == [False]


def test_evaluations_factor_through_one_leaf():
    # x -> c extends to the leaf where a(c) is decided, sending a^bullet to a(c)^bullet
    a = QQ_x.parse("x^2 - x")
    adj = adjoin_quasi_inverse(QQ_x, RingValue(QQ_x, a))
    quotient, localization = adj.leaves()
    rng = random.Random(11)
    for c in [QQ.parse(s) for s in ("-2", "0", "1", "1/2", "3")]:
        ev = lambda p: p.evaluate([c])
        value = ev(a)
        if value == 0:
            leaf, bullet = quotient, adj.a_bullet[0]

            def phi(z):
                return ev(z)

            assert phi(bullet) == 0
        else:
            leaf, bullet = localization, adj.a_bullet[1]
            s = leaf.ring.element

            def phi(z):
                num, k = z
                return ev(num) / ev(s) ** k

            assert phi(bullet) == 1 / value
        for _ in range(10):
            y = QQ_x.random(rng, degree=4)
            assert phi(adj.tree.image(leaf, y)) == ev(y)
