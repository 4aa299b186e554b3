import pytest

from mcmconn.catalog import (cusp_fixture, free_module, lie_for_generator_indices, threefold_lie,
                             threefold_module, threefold_modules, zero_dim_modules)
from mcmconn.gradconn import (CONNECTION, NONE, GradingError, LieRinehartSpec, ResourceLimitExceeded,
                              build_generator_system, curvature, derive_brackets, exists_connection,
                              exists_klinear, fix_P_check, solve_generator, zero_in_end)
from mcmconn.matfac import GradedPresentation, direct_sum, dual_presentation, mat_mul
from mcmconn.wpoly import Derivation, NotHomogeneous, WPolyRing, euler_derivation, parse_poly


def _p0_cases(ns_a=range(1, 8), ns_d=range(4, 8)):
    out = []
    for kind, ns in (("A", ns_a), ("D", ns_d)):
        for n in ns:
            recs = list(threefold_modules(kind, n))
            if kind == "D" and n % 2 == 1:
                recs.append(threefold_module(kind, n, f"Y{(n - 3) // 2 + 1}"))
            out += [(kind, n, r) for r in recs if r.p0]
    return out


P0_CASES = _p0_cases()
P0_IDS = [f"{k}{n}-{r.ident}" for k, n, r in P0_CASES]


def _generator(kind, n, s):
    g, index = lie_for_generator_indices(kind, n, {s})
    return g.generators[index[s]]


@pytest.mark.parametrize("kind, n, rec", P0_CASES, ids=P0_IDS)
def test_sign_corrected_p0_solves_generator_equation(kind, n, rec):
    for s, P in rec.checked_p0().items():
        D = _generator(kind, n, s)
        assert fix_P_check(rec.presentation, D, D.degree, P), s


@pytest.mark.parametrize("kind, n, rec", P0_CASES, ids=P0_IDS)
def test_printed_p0_sign_errata(kind, n, rec):
    # entries listed in sign_errata fail as printed; everything else passes as printed
    for s, P in rec.p0.items():
        D = _generator(kind, n, s)
        assert fix_P_check(rec.presentation, D, D.degree, P) == (s not in rec.sign_errata), s


@pytest.mark.parametrize("kind, n, rec", [c for c in P0_CASES if c[2].directions],
                         ids=[i for i, c in zip(P0_IDS, P0_CASES) if c[2].directions])
def test_solution_directions(kind, n, rec):
    ring = rec.presentation.ring
    for s, M in rec.directions:
        D = _generator(kind, n, s)
        P = rec.checked_p0()[s]
        shifted = [[a + ring.const(3) * b for a, b in zip(ra, rb)] for ra, rb in zip(P, M)]
        assert fix_P_check(rec.presentation, D, D.degree, shifted)


def test_p0_outside_degree_pattern_is_rejected():
    rec = threefold_module("A", 2, "M1")
    ring = rec.presentation.ring
    P = [list(r) for r in rec.p0[1]]
    P[0][1] = ring.one()  # target degrees differ there, so a constant is the wrong degree
    D = _generator("A", 2, 1)
    with pytest.raises(GradingError):
        fix_P_check(rec.presentation, D, 0, P)
    with pytest.raises(GradingError):
        fix_P_check(rec.presentation, D, 1, rec.p0[1])


# verdicts

@pytest.mark.parametrize("kind, n, variant", [("A", 1, "standard"), ("A", 4, "standard"),
                                              ("D", 4, "standard"), ("D", 5, "exceptional")])
def test_catalog_modules_have_klinear_but_no_connection(kind, n, variant):
    g = threefold_lie(kind, n, variant)
    for rec in threefold_modules(kind, n):
        if variant == "standard" and rec.ident.startswith("B"):
            continue  # these need the exceptional relation
        v = exists_connection(rec.presentation, g)
        assert v.kind == NONE and v.obstruction_witness, rec.ident
        assert exists_klinear(rec.presentation, g)
        assert exists_connection(rec.presentation, g, check_klinear=True).kind == "klinear_only"


def test_a1_n_minus():
    rec = threefold_module("A", 1, "N-")
    assert exists_connection(rec.presentation, threefold_lie("A", 1)).kind == NONE


@pytest.mark.parametrize("kind, n, variant", [("A", 3, "standard"), ("D", 4, "standard"),
                                              ("D", 5, "exceptional"), ("D", 6, "full")])
def test_free_module_has_connection(kind, n, variant):
    g = threefold_lie(kind, n, variant)
    for degrees in ((0,), (0, 3)):
        v = exists_connection(free_module(kind, n, degrees), g)
        assert v.kind == CONNECTION and v.relation_completeness_assumed
        assert all(all(e.is_zero() for r in cert[0] for e in r) for cert in v.certificates)


def _verdict(p, g):
    return exists_connection(p, g).kind


@pytest.mark.parametrize("kind, n, a, b", [
    ("A", 1, "N+", "N-"), ("A", 3, "N+", "N-"), ("A", 5, "N+", "N-"),
    ("D", 4, "B2", "B1"), ("D", 5, "B2", "B1"), ("D", 4, "D-", "C+"), ("D", 4, "D+", "C-"),
    ("D", 6, "D-", "C+"),
])
def test_duality_invariance_on_printed_pairs(kind, n, a, b):
    variant = "exceptional" if a.startswith("B") else "standard"
    g = threefold_lie(kind, n, variant)
    pa, pb = threefold_module(kind, n, a).presentation, threefold_module(kind, n, b).presentation
    assert _verdict(pa, g) == _verdict(pb, g) == _verdict(dual_presentation(pb), g)


@pytest.mark.parametrize("kind, n", [("A", 2), ("A", 4), ("D", 5), ("D", 6)])
def test_duality_invariance_on_transposes(kind, n):
    g = threefold_lie(kind, n)
    for rec in threefold_modules(kind, n)[:3]:
        assert _verdict(rec.presentation, g) == _verdict(dual_presentation(rec.presentation), g)


def test_n_l_is_dual_of_m_l():
    # A_n, n even: N_l has the transposed shape of M_l
    g = threefold_lie("A", 4)
    m = threefold_module("A", 4, "M1").presentation
    assert _verdict(dual_presentation(m), g) == _verdict(m, g) == NONE


def test_direct_sum_verdicts():
    g = threefold_lie("A", 3)
    m = threefold_module("A", 3, "N-").presentation
    free = free_module("A", 3, (0,))
    assert _verdict(direct_sum(free, free), g) == CONNECTION
    assert _verdict(direct_sum(m, free), g) == NONE
    assert _verdict(direct_sum(free, m), g) == NONE
    gz, mods = zero_dim_modules(4)
    assert _verdict(direct_sum(mods[0], mods[2]), gz) == CONNECTION


def test_more_relations_keep_none():
    g = threefold_lie("A", 3)
    rec = threefold_module("A", 3, "N+")
    assert _verdict(rec.presentation, g) == NONE
    ring = g.ring
    x = ring.var("x")
    doubled = LieRinehartSpec(ring, g.generators, g.relations + [[x * a for a in g.relations[0]]])
    assert _verdict(rec.presentation, doubled) == NONE


# certificates and curvature

@pytest.mark.parametrize("n", [1, 2, 5, 10])
def test_zero_dimensional_modules(n):
    g, mods = zero_dim_modules(n)
    for p in mods:
        v = exists_connection(p, g)
        assert v.kind == CONNECTION
        assert curvature(p, g, v.certificates).integrable


def test_certificates_satisfy_generator_equations():
    g, p = cusp_fixture()
    v = exists_connection(p, g)
    assert v.kind == CONNECTION
    amb = p.ring.ambient()
    f = p.f.with_ring(amb)
    d0 = [[e.with_ring(amb) for e in r] for r in p.d0]
    for D, (P, C, Q) in zip(g.generators, v.certificates):
        for i in range(p.rank0):
            for j in range(p.rank1):
                lhs = D(p.d0[i][j]).with_ring(amb)
                dc = sum((d0[i][k] * C[k][j].with_ring(amb) for k in range(p.rank1)), amb.zero())
                pd = sum((P[i][k].with_ring(amb) * d0[k][j] for k in range(p.rank0)), amb.zero())
                assert lhs - dc + pd - f * Q[i][j].with_ring(amb) == amb.zero()
    assert curvature(p, g, v.certificates).integrable


def test_curvature_needs_brackets():
    gz, mods = zero_dim_modules(2)
    v = exists_connection(mods[0], gz)
    nob = LieRinehartSpec(gz.ring, gz.generators, gz.relations)
    with pytest.raises(ValueError):
        curvature(mods[0], nob, v.certificates)


def test_free_module_curvature_vanishes():
    g = derive_brackets(threefold_lie("A", 2))
    p = free_module("A", 2, (0, 1))
    v = exists_connection(p, g)
    rep = curvature(p, g, v.certificates)
    assert rep.integrable and len(rep.pairs) == 3


@pytest.mark.parametrize("kind, n, variant", [("A", 3, "standard"), ("D", 5, "standard"),
                                              ("D", 6, "exceptional")])
def test_derive_brackets(kind, n, variant):
    g = derive_brackets(threefold_lie(kind, n, variant))
    assert set(g.brackets) == {(0, 1), (0, 2), (1, 2)}


def test_derive_brackets_reports_missing_span():
    with pytest.raises(ValueError):
        derive_brackets(threefold_lie("D", 5, "full"))


def test_hard_coded_a_brackets_match_derived():
    fixed = threefold_lie("A", 4)
    derived = derive_brackets(LieRinehartSpec(fixed.ring, fixed.generators, fixed.relations))
    for key, coeffs in fixed.brackets.items():
        assert derived.brackets[key] == coeffs


# zero in End

def test_zero_in_end():
    rec = threefold_module("A", 2, "M1")
    p = rec.presentation
    ring = p.ring
    amb = ring.ambient()
    ident = [[ring.one() if i == j else ring.zero() for j in range(p.rank0)] for i in range(p.rank0)]
    assert not zero_in_end(p, ident, 0)
    fI = [[p.f if i == j else ring.zero() for j in range(p.rank0)] for i in range(p.rank0)]
    assert zero_in_end(p, fI, p.f.degree())
    # Q = d0 H with H: L0 -> L1 supported in one entry, H[0][0] = y of weight 2
    H = [[amb.zero()] * p.rank0 for _ in range(p.rank1)]
    H[0][0] = amb.var("y")
    w = p.deg_source[0] - p.deg_target[0] + 2
    Q = mat_mul([[e.with_ring(amb) for e in r] for r in p.d0], H)
    assert any(not e.is_zero() for r in Q for e in r)
    assert zero_in_end(p, [[e.with_ring(ring) for e in r] for r in Q], w)


# small toy systems

def test_zero_dimensional_single_equation():
    g, mods = zero_dim_modules(3)
    gs = build_generator_system(mods[1], g.generators[0])
    assert gs.system.ncols > 0
    assert solve_generator(mods[1], g.generators[0]).feasible


def test_free_system_is_empty():
    p = free_module("A", 2, (0,))
    gs = build_generator_system(p, threefold_lie("A", 2).generators[0])
    assert len(gs.system) == 0


def test_infeasible_toy():
    # k[x, y]/(y), module k = coker(x), D = d/dx: D(x) = 1 cannot equal x (c - p) + y q
    ring = WPolyRing(["x", "y"], [1, 1])
    ring = ring.with_modulus(parse_poly(ring, "y"))
    dx = Derivation(ring, [ring.one(), ring.zero()], -1)
    p = GradedPresentation(ring, [[ring.var("x")]], (0,), (1,))
    g = LieRinehartSpec(ring, [dx])
    assert not solve_generator(p, dx).feasible
    assert not exists_klinear(p, g)
    assert exists_connection(p, g).kind == NONE


def test_resource_limit():
    rec = threefold_module("D", 6, "M1")
    with pytest.raises(ResourceLimitExceeded):
        exists_connection(rec.presentation, threefold_lie("D", 6), max_unknowns=10)


def test_relation_validation():
    g = threefold_lie("A", 2)
    ring = g.ring
    with pytest.raises(GradingError):
        LieRinehartSpec(ring, g.generators, [[ring.var("x"), ring.one(), ring.one()]])
    with pytest.raises(ValueError):
        LieRinehartSpec(ring, g.generators, [[ring.one(), ring.zero(), ring.zero()]])
    with pytest.raises(GradingError):
        LieRinehartSpec(ring, g.generators, [[ring.one()]])
    with pytest.raises(NotHomogeneous):
        LieRinehartSpec(ring, g.generators, [[ring.var("x") + ring.one(), ring.zero(), ring.zero()]])


def test_bad_bracket_rejected():
    g = threefold_lie("A", 2)
    ring = g.ring
    with pytest.raises(ValueError):
        g.add_bracket(0, 1, [ring.zero(), ring.zero(), ring.zero()])


def test_verdict_is_deterministic():
    rec = threefold_module("D", 5, "X1")
    g = threefold_lie("D", 5)
    a = exists_connection(rec.presentation, g)
    b = exists_connection(rec.presentation, g)
    assert (a.kind, a.obstruction_witness, a.unknowns, a.equations) == \
        (b.kind, b.obstruction_witness, b.unknowns, b.equations)


def test_subset_keeps_supported_relations():
    g = threefold_lie("D", 5, "full")
    sub = g.subset([0, 3, 4])
    assert len(sub.generators) == 3 and len(sub.relations) == 1
    assert euler_derivation(g.ring).degree == 0
