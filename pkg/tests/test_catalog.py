import pytest

from mcmconn.catalog import (LIE_VARIANTS, CatalogError, cusp_fixture, free_module,
                             module_factorization, simple_equation, threefold_derivations, threefold_lie,
                             threefold_module, threefold_modules, zero_dim_modules)
from mcmconn.matfac import check_presentation, verify
from mcmconn.wpoly import format_poly, is_homogeneous, parse_poly


@pytest.mark.parametrize("n", [1, 2, 5, 10])
def test_a_threefold_equation(n):
    e = simple_equation("A", n, 3)
    assert e.ring.weights == (n + 1, 2, n + 1, n + 1)
    assert e.f == parse_poly(e.ring, f"x^2 + y^{n + 1} + z*w")


@pytest.mark.parametrize("n", [4, 5, 9])
def test_d_threefold_equation(n):
    e = simple_equation("D", n, 3)
    assert e.ring.weights == (n - 2, 2, n - 1, n - 1)
    assert e.f == parse_poly(e.ring, f"x^2*y + y^{n - 1} + z*w")


def test_zero_dimensional_equation():
    e = simple_equation("A", 1, 0)
    assert format_poly(e.f) == "x^2"


@pytest.mark.parametrize("kind, n", [("A", 1), ("A", 4), ("D", 4), ("D", 7), ("E6", 0), ("E7", 0), ("E8", 0)])
@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_equations_are_homogeneous(kind, n, d):
    e = simple_equation(kind, n, d)
    assert is_homogeneous(e.f)
    assert e.ring.nvars == d + 1


def test_diagonal_forms():
    assert simple_equation("E8", 0, 2).f == parse_poly(simple_equation("E8", 0, 2).ring, "z0^3 + z1^5 + z2^2")
    e7 = simple_equation("E7", 0, 1)
    assert e7.f == parse_poly(e7.ring, "z0^3 + z0*z1^3")


@pytest.mark.parametrize("args", [("A", 0, 3), ("D", 3, 3), ("E9", 0, 1), ("A", 2, -1)])
def test_equation_range_errors(args):
    with pytest.raises(CatalogError):
        simple_equation(*args)


@pytest.mark.parametrize("kind, n, idents", [
    ("A", 2, ["M1"]),
    ("A", 3, ["M1", "N-", "N+"]),
    ("A", 1, ["N-", "N+"]),
    ("A", 6, ["M1", "M2", "M3"]),
    ("D", 5, ["M1", "N1", "X1", "X2", "Y1", "B1", "B2"]),
    ("D", 6, ["M1", "N1", "X1", "X2", "Y1", "Y2", "B1", "B2", "C-", "C+", "D-", "D+"]),
])
def test_module_lists(kind, n, idents):
    assert [r.ident for r in threefold_modules(kind, n)] == idents


def test_module_lookup():
    assert threefold_module("D", 5, "Y2").ident == "Y2"  # Y_(p+1), kept for its P0 data
    with pytest.raises(CatalogError):
        threefold_module("A", 2, "N+")
    with pytest.raises(CatalogError):
        threefold_modules("E6", 3)


@pytest.mark.parametrize("kind, ns", [("A", range(1, 11)), ("D", range(4, 11))])
def test_presentations_validate_and_factor(kind, ns):
    for n in ns:
        for rec in threefold_modules(kind, n):
            assert check_presentation(rec.presentation)
            assert verify(module_factorization(rec)), (n, rec.ident)


@pytest.mark.parametrize("kind, n", [("A", 3), ("D", 4), ("D", 5), ("D", 8)])
def test_relations_annihilate_variables(kind, n):
    for variant in (("standard",) if kind == "A" else LIE_VARIANTS):
        g = threefold_lie(kind, n, variant)
        for rel in g.relations:
            for v in range(g.ring.nvars):
                acc = g.ring.zero()
                for a, D in zip(rel, g.generators):
                    acc = acc + a * D.images[v]
                assert acc.in_ideal(g.ring.modulus)


def test_derivation_degrees():
    assert [D.degree for D in threefold_derivations("A", 4)] == [0, 0, 0]
    assert [D.degree for D in threefold_derivations("D", 7)] == [0, 1, 1, 4, 4]


def test_lie_shapes():
    g = threefold_lie("D", 6, "standard")
    x, y, z, w = (g.ring.var(v) for v in "xyzw")
    assert g.relations == [[x * y * 2, z, -w]]
    assert len(threefold_lie("D", 6, "exceptional").generators) == 3
    assert len(threefold_lie("A", 2).relations) == 1
    with pytest.raises(CatalogError):
        threefold_lie("D", 6, "bogus")


def test_small_fixtures():
    g, mods = zero_dim_modules(4)
    assert len(mods) == 4 and len(g.generators) == 1
    with pytest.raises(CatalogError):
        zero_dim_modules(0)
    g, m = cusp_fixture()
    assert m.rank0 == 2 and g.brackets
    assert free_module("D", 5, (0, 1)).is_free()
