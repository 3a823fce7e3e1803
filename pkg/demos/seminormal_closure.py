"""
Closing up a numerical semigroup ring
=====================================

Repeatedly adjoin elements whose square and cube already lie in the ring,
then look at the conductor of the original ring in QQ[t].
"""

from seminormal import QQ, PolynomialRing
from seminormal.engine import conductor, seminormal_closure
from seminormal.rings import SemigroupRing

QQ_t = PolynomialRing(QQ, ("t",))
t = QQ_t("t").payload

for gens in [(2, 3), (3, 4, 5), (4, 6, 9), (2, 5)]:
    A = SemigroupRing(QQ, gens)
    tower = seminormal_closure(A, [t])
    ideal = conductor(A, QQ_t)
    print(f"{str(A):<18} gaps {list(A.gaps)}")
    print(f"{'':<18} tower {tower.strings()}  minimal: {tower.is_minimal()}")
    print(f"{'':<18} conductor <{', '.join(ideal.strings())}>")
