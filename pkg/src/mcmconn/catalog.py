"""Fixture library: simple singularities, their 3-fold MCM modules, derivations.

The 3-fold A_n and D_n hypersurfaces are written in the coordinates
x^2 + y^(n+1) + zw and x^2 y + y^(n-1) + zw (z = z2 + i z3, w = z2 - i z3),
so that every indecomposable module has a presentation over Q or Q(i).
Each module record carries its presentation matrix, the degrees of the
basis of L0 (``deg_target``) and L1 (``deg_source``), and the fixed P
matrices known to solve the generator equation (``p0``).
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .gradconn import LieRinehartSpec
from .matfac import GradedPresentation, MatrixFactorization, as_ring, free_presentation, partner
from .wpoly import Derivation, WPolyRing, euler_derivation, parse_poly


class CatalogError(ValueError):
    pass


SIMPLE_TYPES = ("A", "D", "E6", "E7", "E8")


@dataclass
class SimpleEquation:
    ring: WPolyRing  # carries the modulus
    f: object
    coordinates: str  # "diagonal" or "zw"


def _check_type(kind: str, n: int):
    if kind == "A" and n < 1:
        raise CatalogError("A_n needs n >= 1")
    if kind == "D" and n < 4:
        raise CatalogError("D_n needs n >= 4")
    if kind not in SIMPLE_TYPES:
        raise CatalogError(f"unknown type {kind!r}; choose from {', '.join(SIMPLE_TYPES)}")


def simple_equation(kind: str, n: int = 0, d: int = 3) -> SimpleEquation:
    """Weighted-homogeneous equation of a simple singularity of dimension d.

    d = 0 exists for type A only (k[x]/(x^(n+1))).  For d = 3 and types A, D
    the zw coordinates are used; otherwise z0, ..., zd with squares added.
    """
    if kind in ("E6", "E7", "E8"):
        n = int(kind[1])
    _check_type(kind, n)
    if d < 0:
        raise CatalogError("dimension must be >= 0")
    if d == 0:
        if kind != "A":
            raise CatalogError("only A_n has a zero-dimensional model x^(n+1)")
        ring = WPolyRing(["x"], [1])
        f = ring.var("x") ** (n + 1)
        return SimpleEquation(ring.with_modulus(f), f, "diagonal")
    if d == 3 and kind in ("A", "D"):
        ring = _threefold_ring(kind, n)
        return SimpleEquation(ring, ring.modulus, "zw")
    # diagonal model: plane curve part in z0, z1, plus squares of z2, ..., zd
    if kind == "A":
        core, w0, w1, deg = f"z0^2 + z1^{n + 1}", n + 1, 2, 2 * (n + 1)
    elif kind == "D":
        core, w0, w1, deg = f"z0^2*z1 + z1^{n - 1}", n - 2, 2, 2 * (n - 1)
    elif kind == "E6":
        core, w0, w1, deg = "z0^3 + z1^4", 4, 3, 12
    elif kind == "E7":
        core, w0, w1, deg = "z0^3 + z0*z1^3", 6, 4, 18
    else:
        core, w0, w1, deg = "z0^3 + z1^5", 10, 6, 30
    names = [f"z{k}" for k in range(d + 1)]
    ring = WPolyRing(names, [w0, w1] + [deg // 2] * (d - 1))
    f = parse_poly(ring, core + "".join(f" + z{k}^2" for k in range(2, d + 1)))
    return SimpleEquation(ring.with_modulus(f), f, "diagonal")


def _threefold_ring(kind: str, n: int) -> WPolyRing:
    if kind == "A":
        ring = WPolyRing(["x", "y", "z", "w"], [n + 1, 2, n + 1, n + 1])
        f = parse_poly(ring, f"x^2 + y^{n + 1} + z*w")
    elif kind == "D":
        ring = WPolyRing(["x", "y", "z", "w"], [n - 2, 2, n - 1, n - 1])
        f = parse_poly(ring, f"x^2*y + y^{n - 1} + z*w")
    else:
        raise CatalogError(f"no 3-fold model for type {kind}")
    return ring.with_modulus(f)


# --------------------------------------------------------------------------
# module records


@dataclass
class ModuleRecord:
    family: str  # "A" or "D"
    n: int
    ident: str  # e.g. "M2", "N-", "B1", "C+"
    presentation: GradedPresentation
    psi: list | None = None  # the partner matrix, when printed
    p0: dict = field(default_factory=dict)  # generator index (1-based) -> P matrix
    directions: list = field(default_factory=list)  # (generator index, matrix): P0 + a * dir also solves
    sign_errata: tuple = ()  # generator indices whose printed P0 solves the equation only after negation

    def checked_p0(self) -> dict:
        """p0 with the sign errata applied; every entry passes fix_P_check."""
        return {s: [[-e for e in r] for r in P] if s in self.sign_errata else P
                for s, P in self.p0.items()}

    @property
    def ring(self) -> WPolyRing:
        return self.presentation.ring


def _m(ring, rows) -> list:
    return [[parse_poly(ring, e) if isinstance(e, str) else ring.const(e) for e in r] for r in rows]


def _diag(ring, vals) -> list:
    k = len(vals)
    return _m(ring, [[vals[i] if i == j else 0 for j in range(k)] for i in range(k)])


def _sparse(ring, k, entries) -> list:
    """k x k matrix with entries {(i, j): text} (1-based)."""
    return _m(ring, [[entries.get((i + 1, j + 1), 0) for j in range(k)] for i in range(k)])


def _record(family, n, ident, ring, d0, tgt, src, psi=None) -> ModuleRecord:
    p = GradedPresentation(ring, _m(ring, d0), tuple(tgt), tuple(src), name=f"{family}{n}:{ident}")
    return ModuleRecord(family, n, ident, p, None if psi is None else _m(ring, psi))


def _a_modules(n: int) -> list[ModuleRecord]:
    ring = _threefold_ring("A", n)
    out = []
    if n % 2 == 0:
        top = n // 2
    else:
        top = (n + 1) // 2 - 1
    for l in range(1, top + 1):
        e = n + 1 - l
        d0 = [["z", 0, "-x", f"-y^{e}"],
              [0, "z", f"-y^{l}", "x"],
              ["x", f"y^{e}", "w", 0],
              [f"y^{l}", "-x", 0, "w"]]
        psi = [["w", 0, "x", f"y^{e}"],
               [0, "w", f"y^{l}", "-x"],
               ["-x", f"-y^{e}", "z", 0],
               [f"-y^{l}", "x", 0, "z"]]
        r = _record("A", n, f"M{l}", ring, d0,
                    (0, n + 1 - 2 * l, 0, n + 1 - 2 * l),
                    (n + 1, 2 * n + 2 - 2 * l, n + 1, 2 * n + 2 - 2 * l), psi)
        r.p0 = {1: _diag(ring, [0, 0, 1, 1]),
                2: _sparse(ring, 4, {(1, 3): "-1", (2, 4): "1"}),
                3: _sparse(ring, 4, {(3, 1): "1", (4, 2): "-1"})}
        r.sign_errata = (2, 3)
        out.append(r)
    if n % 2 == 1:
        p = (n + 1) // 2
        for sign, a, b in (("-", "+", "-"), ("+", "-", "+")):
            d0 = [["z", f"-(x {a} i*y^{p})"], [f"x {b} i*y^{p}", "w"]]
            psi = [["w", f"x {a} i*y^{p}"], [f"-(x {b} i*y^{p})", "z"]]
            r = _record("A", n, f"N{sign}", ring, d0, (0, 0), (n + 1, n + 1), psi)
            if sign == "-":
                r.p0 = {1: _diag(ring, [0, -1]),
                        2: _sparse(ring, 2, {(1, 2): "-1"}),
                        3: _sparse(ring, 2, {(2, 1): "1"})}
                r.sign_errata = (1, 2, 3)
            out.append(r)
    return out


def _d_modules(n: int, extra: bool = False) -> list[ModuleRecord]:
    ring = _threefold_ring("D", n)
    out = []
    odd = n % 2 == 1
    p = (n - 3) // 2 if odd else (n - 2) // 2

    def M(l):
        d0 = [["z", 0, "-x*y", f"-y^{n - 1 - l}"],
              [0, "z", f"-y^{l + 1}", "x*y"],
              ["x", f"y^{n - 2 - l}", "w", 0],
              [f"y^{l}", "-x", 0, "w"]]
        return _record("D", n, f"M{l}", ring, d0,
                       (0, n - 2 - 2 * l, 1, n - 1 - 2 * l),
                       (n - 1, 2 * n - 3 - 2 * l, n, 2 * n - 2 - 2 * l))

    def N(l):
        d0 = [["z", 0, "-x", f"-y^{n - 2 - l}"],
              [0, "z", f"-y^{l}", "x"],
              ["x*y", f"y^{n - 1 - l}", "w", 0],
              [f"y^{l + 1}", "-x*y", 0, "w"]]
        return _record("D", n, f"N{l}", ring, d0,
                       (0, n - 2 - 2 * l, -1, n - 3 - 2 * l),
                       (n - 1, 2 * n - 3 - 2 * l, n - 2, 2 * n - 4 - 2 * l))

    def X(l):
        d0 = [["z", 0, "-x", f"-y^{n - 1 - l}"],
              [0, "z", f"-y^{l}", "x*y"],
              ["x*y", f"y^{n - 1 - l}", "w", 0],
              [f"y^{l}", "-x", 0, "w"]]
        return _record("D", n, f"X{l}", ring, d0,
                       (0, n - 2 - 2 * l, -1, n - 1 - 2 * l),
                       (n - 1, 2 * n - 3 - 2 * l, n - 2, 2 * n - 2 - 2 * l))

    def Y(l):
        d0 = [["z", 0, "-x*y", f"-y^{n - 1 - l}"],
              [0, "z", f"-y^{l}", "x"],
              ["x", f"y^{n - 1 - l}", "w", 0],
              [f"y^{l}", "-x*y", 0, "w"]]
        return _record("D", n, f"Y{l}", ring, d0,
                       (0, n - 2 * l, 1, n - 1 - 2 * l),
                       (n - 1, 2 * n - 1 - 2 * l, n, 2 * n - 2 - 2 * l))

    m_p0 = {1: _diag(ring, [-1, -1, 0, 0]),
            2: _sparse(ring, 4, {(1, 3): "y", (2, 4): "-y"}),
            3: _sparse(ring, 4, {(3, 1): "-1", (4, 2): "1"})}
    if odd:
        y_p0 = {1: _diag(ring, [0, 0, 1, 1]),
                2: _sparse(ring, 4, {(1, 3): "y", (2, 4): "-1"}),
                3: _sparse(ring, 4, {(3, 1): "-1", (4, 2): "y"})}
        b1_p1 = _diag(ring, [1, 0])
        m_top, n_top, x_top, y_top = p, p, p + 1, p + 1 if extra else p
    else:
        y_p0 = {1: _diag(ring, [-1, -1, 0, 0]),
                2: _sparse(ring, 4, {(1, 3): "y", (2, 4): "-1"}),
                3: _sparse(ring, 4, {(3, 1): "-1", (4, 2): "y"})}
        b1_p1 = _diag(ring, [-1, 0])
        m_top, n_top, x_top, y_top = p - 1, p - 1, p, p

    for l in range(1, m_top + 1):
        r = M(l)
        r.p0 = dict(m_p0)
        if odd and l == p:
            phi1 = _m(ring, [[0, "y", 0, 0], [-1, 0, 0, 0], [0, 0, 0, "-y"], [0, 0, 1, 0]])
            r.directions = [(2, phi1), (3, phi1)]
        out.append(r)
    for l in range(1, n_top + 1):
        out.append(N(l))
    for l in range(1, x_top + 1):
        out.append(X(l))
    for l in range(1, y_top + 1):
        r = Y(l)
        r.p0 = dict(y_p0)
        if odd:
            psi1 = _m(ring, [[0, "-w", "-y", "x"], [0] * 4, [0] * 4, [0] * 4])
            psi1b = _m(ring, [[0, "z", 0, 0], [0] * 4, [0, "x", 0, 0], [0, "y", 0, 0]])
            psi1c = _m(ring, [[0, "y", 0, 0], [-1, 0, 0, 0], [0, 0, 0, -1], [0, 0, "y", 0]])
            if l == 1:
                r.directions += [(s, m) for s in (2, 3) for m in (psi1, psi1b)]
            if l == p + 1:
                r.directions += [(s, psi1c) for s in (2, 3)]
        else:
            psi1 = _m(ring, [[0, "z", 0, 0], [0] * 4, [0, "x", 0, 0], [0, "y", 0, 0]])
            psi1b = _m(ring, [[0, "-w", "-y", "x"], [0] * 4, [0] * 4, [0] * 4])
            if l == 1:
                r.directions += [(s, m) for s in (2, 3) for m in (psi1, psi1b)]
        out.append(r)

    gamma = f"{n - 2}*y^{n - 3}"
    b1 = _record("D", n, "B1", ring, [["z", f"-(x^2 + y^{n - 2})"], ["y", "w"]],
                 (0, n - 3), (n - 1, 2 * n - 4))
    b1.p0 = {1: b1_p1,
             4: _sparse(ring, 2, {(1, 2): f"-{gamma}"}),
             5: _sparse(ring, 2, {(2, 1): "1"})}
    b1.sign_errata = (1, 4, 5) if odd else (4, 5)
    if odd:
        b1.directions = [(s, _diag(ring, [f"y^{p}", f"y^{p}"])) for s in (4, 5)]
    out.append(b1)
    out.append(_record("D", n, "B2", ring, [["z", "-y"], [f"x^2 + y^{n - 2}", "w"]],
                       (0, 3 - n), (n - 1, 2)))
    if not odd:
        pp = p
        for sign, a, b in (("-", "+", "-"), ("+", "-", "+")):
            c = _record("D", n, f"C{sign}", ring,
                        [["z", f"-(x {a} i*y^{pp})"], [f"y*(x {b} i*y^{pp})", "w"]],
                        (0, -1), (n - 1, n - 2))
            im = "i" if sign == "-" else "-i"
            c.p0 = {1: _diag(ring, [-1, 0]),
                    4: _sparse(ring, 2, {(1, 2): f"{im}*{pp}*y^{pp - 1}"}),
                    5: _sparse(ring, 2, {(2, 1): f"-x {a} i*{pp + 1}*y^{pp}"})}
            out.append(c)
        for sign, a, b in (("-", "+", "-"), ("+", "-", "+")):
            out.append(_record("D", n, f"D{sign}", ring,
                               [["z", f"-y*(x {a} i*y^{pp})"], [f"x {b} i*y^{pp}", "w"]],
                               (0, 1), (n - 1, n)))
    return out


def threefold_modules(kind: str, n: int) -> list[ModuleRecord]:
    """All listed indecomposable non-free MCM modules on the 3-fold of type kind_n."""
    _check_type(kind, n)
    if kind == "A":
        return _a_modules(n)
    if kind == "D":
        return _d_modules(n)
    raise CatalogError(f"no 3-fold module list for type {kind}")


def threefold_module(kind: str, n: int, ident: str) -> ModuleRecord:
    for r in threefold_modules(kind, n):
        if r.ident == ident:
            return r
    extra = _extra_module(kind, n, ident)
    if extra is not None:
        return extra
    known = ", ".join(r.ident for r in threefold_modules(kind, n))
    raise CatalogError(f"no module {ident!r} for {kind}{n}; known: {known}")


def _extra_module(kind, n, ident):
    # odd D_n: Y_(p+1) is isomorphic to X_(p+1), so it is not listed, but it
    # has its own printed P0 data
    if kind == "D" and n % 2 == 1:
        for r in _d_modules(n, extra=True):
            if r.ident == ident:
                return r
    return None


def module_factorization(rec: ModuleRecord) -> MatrixFactorization:
    """(d0, psi) with the recorded psi, or a psi solved from phi psi = psi phi = f I."""
    if rec.psi is None:
        mf = partner(rec.presentation)
        if mf is None:
            raise CatalogError(f"{rec.ident} has no partner matrix")
        return mf
    amb = rec.ring.ambient()
    return MatrixFactorization(amb, rec.ring.modulus.with_ring(amb),
                               as_ring(rec.presentation.d0, amb), as_ring(rec.psi, amb))


# --------------------------------------------------------------------------
# derivations


def threefold_derivations(kind: str, n: int) -> list[Derivation]:
    """D1, D2, D3 (and D4, D5 for type D), all trivial derivations of the 3-fold."""
    ring = _threefold_ring(kind, n)
    P = lambda s: parse_poly(ring, s)  # noqa: E731
    if kind == "A":
        return [Derivation(ring, {"z": P("z"), "w": P("-w")}, 0, "D1"),
                Derivation(ring, {"x": P("w"), "z": P("-2*x")}, 0, "D2"),
                Derivation(ring, {"x": P("z"), "w": P("-2*x")}, 0, "D3")]
    beta = P(f"x^2 + {n - 1}*y^{n - 2}")
    return [Derivation(ring, {"z": P("z"), "w": P("-w")}, 0, "D1"),
            Derivation(ring, {"x": P("w"), "z": P("-2*x*y")}, 1, "D2"),
            Derivation(ring, {"x": P("z"), "w": P("-2*x*y")}, 1, "D3"),
            Derivation(ring, {"y": P("w"), "z": -beta}, n - 3, "D4"),
            Derivation(ring, {"y": P("z"), "w": -beta}, n - 3, "D5")]


LIE_VARIANTS = ("standard", "exceptional", "full")


def threefold_lie(kind: str, n: int, variant: str = "standard") -> LieRinehartSpec:
    """Lie-Rinehart data for the 3-fold.

    standard: D1, D2, D3 with the relation 2x D1 + z D2 - w D3 = 0 (type A)
    or 2xy D1 + z D2 - w D3 = 0 (type D).  exceptional (type D): D1, D4, D5
    with beta D1 + z D4 - w D5 = 0.  full (type D): all five generators and
    both relations.
    """
    if variant not in LIE_VARIANTS:
        raise CatalogError(f"unknown variant {variant!r}")
    ring = _threefold_ring(kind, n)
    Ds = threefold_derivations(kind, n)
    P = lambda s: parse_poly(ring, s)  # noqa: E731
    if kind == "A":
        if variant != "standard":
            raise CatalogError("type A has only the standard variant")
        one = ring.one()
        brackets = {(0, 1): [0, -one, 0], (0, 2): [0, 0, one], (1, 2): [2 * one, 0, 0]}
        return LieRinehartSpec(ring, Ds, [[P("2*x"), P("z"), P("-w")]], brackets, name=f"A{n}")
    beta = P(f"x^2 + {n - 1}*y^{n - 2}")
    std = [P("2*x*y"), P("z"), P("-w")]
    exc = [beta, P("z"), P("-w")]
    if variant == "standard":
        return LieRinehartSpec(ring, Ds[:3], [std], name=f"D{n}/standard")
    if variant == "exceptional":
        return LieRinehartSpec(ring, [Ds[0], Ds[3], Ds[4]], [exc], name=f"D{n}/exceptional")
    z = ring.zero()
    return LieRinehartSpec(ring, Ds, [std + [z, z], [exc[0], z, z, exc[1], exc[2]]],
                           name=f"D{n}/full")


def lie_for_generator_indices(kind: str, n: int, indices) -> tuple[LieRinehartSpec, dict]:
    """Spec that contains the given 1-based generator indices, plus the index map."""
    indices = set(indices)
    if kind == "A" or indices <= {1, 2, 3}:
        g = threefold_lie(kind, n, "standard")
        return g, {s: s - 1 for s in (1, 2, 3)}
    if indices <= {1, 4, 5}:
        return threefold_lie(kind, n, "exceptional"), {1: 0, 4: 1, 5: 2}
    return threefold_lie(kind, n, "full"), {s: s - 1 for s in range(1, 6)}


# --------------------------------------------------------------------------
# small fixtures


def zero_dim_modules(n: int) -> tuple[LieRinehartSpec, list[GradedPresentation]]:
    """k[x]/(x^(n+1)) with the Euler field, and the modules coker(x^i), 1 <= i <= n.

    The relation x^n E = 0 holds since x^n * x = 0.
    """
    if n < 1:
        raise CatalogError("n must be >= 1")
    ring = simple_equation("A", n, 0).ring
    x = ring.var("x")
    E = euler_derivation(ring)
    g = LieRinehartSpec(ring, [E], [[x ** n]], {}, name=f"x^{n + 1}")
    mods = [GradedPresentation(ring, [[x ** i]], (0,), (i,), name=f"x^{i}") for i in range(1, n + 1)]
    return g, mods


def free_module(kind: str, n: int, degrees=(0,)) -> GradedPresentation:
    return free_presentation(_threefold_ring(kind, n), degrees, name=f"{kind}{n}:free")


def cusp_fixture() -> tuple[LieRinehartSpec, GradedPresentation]:
    """The cusp k[t^2, t^3] = k[x, y]/(y^2 - x^3) with the normalization k[t] as module.

    Derivations: Euler E (degree 0) and T = 2y d/dx + 3x^2 d/dy = t E
    (degree 1), related by y E - x T = 0 and x^2 E - y T = 0.
    """
    ring = WPolyRing(["x", "y"], [2, 3])
    f = parse_poly(ring, "y^2 - x^3")
    ring = ring.with_modulus(f)
    P = lambda s: parse_poly(ring, s)  # noqa: E731
    E = euler_derivation(ring)
    T = Derivation(ring, [P("2*y"), P("3*x^2")], 1, "T")
    g = LieRinehartSpec(ring, [E, T], [[P("y"), P("-x")], [P("x^2"), P("-y")]],
                        {(0, 1): [ring.zero(), ring.one()]}, name="cusp")
    m = GradedPresentation(ring, [[P("y"), P("x^2")], [P("-x"), P("-y")]], (0, 1), (3, 4),
                           name="k[t]")
    return g, m
