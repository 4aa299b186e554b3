"""
From curves to threefolds
=========================

Setting z = w = 0 in a threefold module gives a matrix factorization of the
curve x^2 + y^(n+1).  Knoerrer's block construction adds back uv and doubles
the size.
"""
from mcmconn.catalog import threefold_module
from mcmconn.matfac import dual, knoerrer, partner, restrict, syzygy, verify
from mcmconn.wpoly import format_poly

rec = threefold_module("A", 3, "N-")
curve = partner(restrict(rec.presentation, ["z", "w"]))
print("curve f =", format_poly(curve.f), "size", curve.size, "verified", verify(curve))
for row in curve.phi:
    print("   phi:", [format_poly(e) for e in row])

lift = knoerrer(curve)
print("lift f =", format_poly(lift.f), "size", lift.size, "verified", verify(lift))

# dual is the transpose, syzygy swaps phi and psi; both are involutions
print("dual twice", dual(dual(lift)) == lift, " syzygy twice", syzygy(syzygy(lift)) == lift)
