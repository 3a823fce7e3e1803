"""
Lifting idempotents and splitting by gcds
=========================================

Two smaller tools: Newton iteration turns an idempotent modulo e into an
idempotent over QQ[e]/<e^4>, and gcds of rows factor a rank-1 projection
over a ring with gcds.
"""

from seminormal import QQ, ZZ, PolynomialRing
from seminormal.gcd import factor_rank1_gcd
from seminormal.matrix import Matrix, check_idempotent, newton_lift
from seminormal.rings import DualNumbers

D = DualNumbers(QQ, 4)
P = Matrix.from_values(D, [["1 + e", "e^2"], ["3*e", "2*e"]])
print("P^2 = P?", check_idempotent(P))
for k, Q in enumerate(newton_lift(P, history=True)):
    print(f"step {k}:", [[D.to_str(x) for x in r] for r in Q.rows])
print("final idempotent?", check_idempotent(Q))

R = PolynomialRing(ZZ, ("x",))
# built from e_1 by elementary moves, so g.f = 1
f = [R.parse("1 + x^2"), R.parse("x"), R.parse("2 + 2*x^2")]
g = [R.parse("1"), R.parse("-x"), R.zero()]
P = Matrix(R, [[a * b for b in g] for a in f])
print("\ninner product g.f =", R.to_str(sum((b * a for a, b in zip(f, g)), R.zero())))
fac = factor_rank1_gcd(P)
print("recovered f:", fac.f_strings())
print("recovered g:", fac.g_strings())
print("f g = P?", fac.outer() == P)
