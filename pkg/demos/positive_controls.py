"""
Where connections do exist
==========================

Over k[x]/(x^(n+1)) every module (x^i) has an integrable connection for the
Euler field.  The cusp y^2 = x^3 with its normalization k[t] is a
one-dimensional example with two generators and a bracket [E, T] = T.
"""
from mcmconn.catalog import cusp_fixture, zero_dim_modules
from mcmconn.gradconn import curvature, exists_connection
from mcmconn.wpoly import format_poly

g, mods = zero_dim_modules(5)
for p in mods:
    v = exists_connection(p, g)
    P = v.certificates[0][0]
    print(p.name, v.kind, "P =", format_poly(P[0][0]), "integrable", curvature(p, g, v.certificates).integrable)

g, m = cusp_fixture()
v = exists_connection(m, g)
print("cusp, k[t]:", v.kind, "(relation list assumed complete:", v.relation_completeness_assumed, ")")
for name, (P, _, _) in zip(["E", "T"], v.certificates):
    print("  ", name, [[format_poly(e) for e in r] for r in P])
print("curvature zero:", curvature(m, g, v.certificates).integrable)
