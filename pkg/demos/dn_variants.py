"""
D_n threefolds: which relation closes the argument
==================================================

x^2 y + y^(n-1) + zw carries five trivial derivations.  For most modules the
relation 2xy D1 + z D2 - w D3 = 0 already rules out a connection; B1 and B2
need beta D1 + z D4 - w D5 = 0 instead.
"""
from mcmconn.catalog import threefold_lie, threefold_modules
from mcmconn.gradconn import exists_connection

for n in (5, 6):
    standard, exceptional = threefold_lie("D", n, "standard"), threefold_lie("D", n, "exceptional")
    print(f"D{n}:")
    for rec in threefold_modules("D", n):
        a = exists_connection(rec.presentation, standard).kind
        b = exists_connection(rec.presentation, exceptional).kind
        closed = "standard" if a == "none" else "exceptional" if b == "none" else "neither"
        print(f"  {rec.ident:3} standard={a:10} exceptional={b:10} -> {closed}")
