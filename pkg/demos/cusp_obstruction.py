"""
The cusp and the line
=====================

The same 2x2 idempotent matrix splits as a column times a row over QQ[t],
but not over the cusp QQ[t^2, t^3].  The driver reports why.
"""

from seminormal import QQ, PolynomialRing
from seminormal.engine import factor_rank1_seminormal
from seminormal.matrix import certify_rank1, schanuel_matrix
from seminormal.rings import SemigroupRing

line = PolynomialRing(QQ, ("t",))
cusp = SemigroupRing(QQ, (2, 3))
t = line("t")

# a = t, b = t^3, c = t^2: the entries only use t^2 and t^3
P = schanuel_matrix(t, t**3, t**2, subring=cusp)
for row in P.rows:
    print("  ".join(P.ring.to_str(x) for x in row))
print("trace:", P.ring.to_str(P.trace()))
certify_rank1(P)

# over the line
res = factor_rank1_seminormal(line, schanuel_matrix(t, t**3, t**2))
print("\nover", line, "->", res.status)
print("f =", res.factorization.f_strings())
print("g =", res.factorization.g_strings())

# over the cusp the column needs t itself
res = factor_rank1_seminormal(cusp, P)
print("\nover", cusp, "->", res.status)
for line_ in res.document(with_trace=True)["trace"]:
    print("  ", line_)
step = res.tower.steps[0]
print("adjoined", step.element, "with square", step.square, "and cube", step.cube)
