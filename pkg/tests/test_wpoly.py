from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mcmconn.exact import I
from mcmconn.wpoly import (ANY_DEGREE, Derivation, LinPoly, NotHomogeneous, RingMismatch, Unknowns,
                           WPoly, WPolyRing, bracket, euler_derivation, format_poly,
                           generic_homogeneous, is_homogeneous, monomials_of_degree, parse_poly)

R = WPolyRing(["x", "y", "z"], [2, 3, 1])


def P(s, ring=R):
    return parse_poly(ring, s)


def test_arithmetic_and_format():
    p = P("x + 2*y")
    assert format_poly(p * p) == format_poly(P("x^2 + 4*x*y + 4*y^2"))
    assert p - p == R.zero()
    assert P("1/3*x").terms == {(1, 0, 0): Fraction(1, 3)}
    assert P("(x - z^2)^2") == P("x^2 - 2*x*z^2 + z^4")


def test_degrees():
    assert P("x*y + z^5").degree() == 5
    assert P("x + y").degree() is None
    assert R.zero().degree() is ANY_DEGREE
    assert is_homogeneous(P("x^3 + y^2"))
    assert not is_homogeneous(P("x + 1"))


def test_monomials_of_degree():
    mons = monomials_of_degree(R, 4)
    assert all(R.mdeg(m) == 4 for m in mons)
    assert len(mons) == len(set(mons)) == 4  # x^2, x z^2, y z, z^4
    assert monomials_of_degree(R, -1) == []


def test_imaginary_unit_in_parser():
    p = P("x + i*y")
    assert p.terms[(0, 1, 0)] == I
    assert P("(x + i*y)*(x - i*y)") == P("x^2 + y^2")


def test_parser_errors():
    with pytest.raises(ValueError):
        P("x +")
    with pytest.raises(ValueError):
        P("q")
    with pytest.raises(ValueError):
        P("x $ y")


def test_division_by_f():
    f = P("x^3 + y^2")
    q, r = (P("y^2") * f + P("z^6")).divmod(f)
    assert r == P("z^6") and q == P("y^2")
    assert (P("x*z") * f).in_ideal(f)
    assert not P("x^3").in_ideal(f)


def test_ring_mismatch():
    S = WPolyRing(["x", "y"], [1, 1])
    with pytest.raises(RingMismatch):
        _ = P("x") + S.var("x")


def test_extend_rejects_collision():
    with pytest.raises(ValueError):
        R.extend(["x"], [1])


def test_set_zero_and_embed():
    assert P("x*y + z^5").set_zero(["z"]) == P("x*y")
    T = R.extend(["u"], [4])
    assert P("x").embed(T) == T.var("x")


# derivations

polys = st.lists(st.tuples(st.integers(-3, 3), st.tuples(*[st.integers(0, 3)] * 3)), max_size=5).map(
    lambda ts: WPoly(R, {e: Fraction(c) for c, e in ts if c}))


def _random_derivation(imgs):
    # homogeneous of degree 0: images of x, y, z of degrees 2, 3, 1
    return Derivation(R, imgs, 0)


D0 = _random_derivation([P("2*x + z^2"), P("x*z + y"), P("-z")])


@settings(max_examples=100, deadline=None)
@given(polys, polys)
def test_leibniz(p, q):
    for D in (D0, euler_derivation(R)):
        assert D(p * q) == D(p) * q + p * D(q)
        assert D(p + q) == D(p) + D(q)


@settings(max_examples=50, deadline=None)
@given(polys)
def test_euler_scales_by_degree(p):
    E = euler_derivation(R)
    for d in {R.mdeg(e) for e in p.terms}:
        part = WPoly(R, {e: c for e, c in p.terms.items() if R.mdeg(e) == d})
        assert E(part) == part * d


def test_bracket_is_a_derivation_commutator():
    E = euler_derivation(R)
    D = Derivation(R, [P("z^2"), P("x*z"), P("z")], 0)
    B = bracket(E, D)
    p = P("x*y*z + y^2")
    assert B(p) == E(D(p)) - D(E(p))


def test_derivation_degree_checked():
    with pytest.raises(NotHomogeneous):
        Derivation(R, [P("x"), P("y"), P("z^2")], 0)


def test_derivation_must_preserve_modulus():
    S = WPolyRing(["x", "y"], [1, 1])
    S = S.with_modulus(parse_poly(S, "x*y"))
    Derivation(S, [parse_poly(S, "x"), parse_poly(S, "-y")], 0)
    with pytest.raises(ValueError):
        Derivation(S, [parse_poly(S, "y"), parse_poly(S, "0")], 0)


def test_linpoly_template_and_evaluate():
    unk = Unknowns()
    t = generic_homogeneous(R, 3, unk, "a")
    assert len(unk) == len(monomials_of_degree(R, 3))
    vals = [Fraction(k + 1) for k in range(len(unk))]
    v = t.evaluate(vals)
    assert v.degree() == 3
    lp = LinPoly.from_poly(P("x")) + t.scale(P("z"))
    assert lp.evaluate(vals) == P("x") + v * P("z")
    assert lp.unknown_ids() == set(range(len(unk)))
