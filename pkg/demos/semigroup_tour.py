"""
Rank-one modules over monomial curves
=====================================

k[[t^3, t^4, t^5]] has three non-free graded rank-one MCM modules.
Which of them carry a connection for the full module of derivations?
"""
from mcmconn.semigroup import (NumSemigroup, canonical_connection_theorem, canonical_lambda, classify,
                               decide_connection, delta, enumerate_lambda, is_symmetric, s_max)

sg = NumSemigroup([3, 4, 5])
print("gaps", sorted(sg.gaps), "Frobenius", sg.frobenius, "symmetric", is_symmetric(sg))
print("Delta", sorted(delta(sg)), "s =", s_max(sg))

# every Lambda with Gamma + Lambda inside Lambda, i.e. every module k[[Lambda]]
for lam in enumerate_lambda(sg):
    print(" ", lam.label, sorted(lam.extra))

# the verdict table, with the canonical module flagged
for row in classify(sg):
    print(f"{row.label:6} {row.verdict:13} canonical={row.canonical}")

# the obstruction for M1: (derivation exponent c, basis exponent l, missing exponent e)
w = decide_connection(sg, enumerate_lambda(sg)[1])
print("M1 obstruction", w.obstruction)

# canonical module k[[Gamma + Delta]] against the Gorenstein property
for gens in ([3, 4, 5], [3, 5, 7], [4, 5, 6, 7], [3, 5], [5, 6, 7, 8, 9]):
    sg = NumSemigroup(gens)
    print(gens, "canonical", canonical_lambda(sg).label, "-> (admits, gorenstein) =",
          canonical_connection_theorem(sg))
