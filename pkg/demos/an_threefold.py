"""
No connections on the A_n threefold
===================================

A = k[x, y, z, w]/(x^2 + y^(n+1) + zw), with the three trivial derivations
D1, D2, D3 and the relation 2x D1 + z D2 - w D3 = 0.  Each generator can be
lifted to the module on its own, but the relation cannot be satisfied.
"""
from mcmconn.catalog import threefold_lie, threefold_module, threefold_modules
from mcmconn.gradconn import exists_connection, exists_klinear, fix_P_check, solve_generator
from mcmconn.wpoly import format_poly

n = 4
g = threefold_lie("A", n)
print("f =", format_poly(g.ring.modulus), "weights", g.ring.weights)

for rec in threefold_modules("A", n):
    p = rec.presentation
    v = exists_connection(p, g)
    print(rec.ident, "deg_target", p.deg_target, "verdict", v.kind, "k-linear", exists_klinear(p, g))
    print("   first inconsistent equation:", v.obstruction_witness)

# one generator at a time: the solution family is P0 + (free parameters)
rec = threefold_module("A", n, "M1")
sol = solve_generator(rec.presentation, g.generators[0])
P, C, Q = sol.values()
print("D1 alone: feasible", sol.feasible, "free directions", len(sol.result.nullspace_basis))

# the printed P0 matrices, as printed and with the sign errata applied
for s, P0 in rec.p0.items():
    D = g.generators[s - 1]
    print(f"P{s}0 printed:", fix_P_check(rec.presentation, D, 0, P0),
          " corrected:", fix_P_check(rec.presentation, D, 0, rec.checked_p0()[s]))
