"""Graded connections on M = coker(d0) by exact linear feasibility.

For a homogeneous derivation D of degree w, a graded connection gives
matrices P on L0 and C on L1 of degree w with

    D(d0) = d0*C - P*d0        (in A = S/(f)),

and nabla_D is induced by D + P on L0.  Equality in A is encoded with a
multiplier matrix Q of fresh unknowns: D(d0) - d0*C + P*d0 - f*Q = 0 in S.
A graded relation sum_i a_i D_i = 0 forces sum_i a_i P_i to vanish in
End_A(M), i.e. sum_i a_i P_i = d0*H + f*Q' for some H, Q'.  Stacking all
of this into one system decides existence of a connection over the Lie
algebra spanned by the generators.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .exact import AffineSolveResult, SparseSystem, solve_sparse
from .matfac import GradedPresentation, add_linpoly_rows, mat_mul
from .wpoly import (ANY_DEGREE, Derivation, LinPoly, NotHomogeneous, RingMismatch, Unknowns,
                    WPoly, bracket, generic_homogeneous)

CONNECTION = "connection"
KLINEAR_ONLY = "klinear_only"
NONE = "none"


class GradingError(ValueError):
    """Inconsistent degrees in a Lie-Rinehart spec or a fixed matrix."""


class ResourceLimitExceeded(RuntimeError):
    pass


# --------------------------------------------------------------------------
# Lie-Rinehart data


def _annihilates(ring, coeffs: Sequence[WPoly], gens: Sequence[Derivation], extra=None) -> bool:
    """sum_i coeffs[i] * gens[i] (minus `extra`) kills every variable modulo f."""
    for v in range(ring.nvars):
        acc = ring.zero()
        for a, D in zip(coeffs, gens):
            if not a.is_zero():
                acc = acc + a * D.images[v]
        if extra is not None:
            acc = acc - extra.images[v]
        if not acc.in_ideal(ring.modulus):
            return False
    return True


class LieRinehartSpec:
    """Homogeneous derivation generators, graded relations, optional bracket table.

    ``relations`` is a list of coefficient lists (one homogeneous WPoly per
    generator).  ``brackets`` maps (s, t) with s < t to coefficient lists b
    with [D_s, D_t] = sum_u b_u D_u.
    """

    def __init__(self, ring, generators: Sequence[Derivation], relations=(), brackets=None,
                 name: str = ""):
        self.ring = ring
        self.generators = list(generators)
        self.name = name
        for D in self.generators:
            if D.ring.key != ring.key:
                raise RingMismatch("generator lives in another ring")
        self.relations = [self._coerce_coeffs(r) for r in relations]
        self.relation_degrees = [self._check_relation(k, r) for k, r in enumerate(self.relations)]
        self.brackets = None
        if brackets is not None:
            self.brackets = {}
            for (s, t), coeffs in brackets.items():
                self.add_bracket(s, t, coeffs)

    def _coerce_coeffs(self, coeffs):
        if len(coeffs) != len(self.generators):
            raise GradingError("relation needs one coefficient per generator")
        out = []
        for a in coeffs:
            if isinstance(a, WPoly):
                out.append(a.with_ring(self.ring))
            else:
                out.append(self.ring.const(a))
        return out

    def _check_relation(self, k, coeffs) -> int:
        degs = set()
        for a, D in zip(coeffs, self.generators):
            d = a.degree()
            if d is None:
                raise NotHomogeneous(f"relation {k}: coefficient {a} is not homogeneous")
            if d is not ANY_DEGREE:
                degs.add(d + D.degree)
        if len(degs) > 1:
            raise GradingError(f"relation {k} is not graded: degrees {sorted(degs)}")
        if not _annihilates(self.ring, coeffs, self.generators):
            raise ValueError(f"relation {k} does not vanish on the ring variables modulo f")
        return degs.pop() if degs else 0

    def add_bracket(self, s: int, t: int, coeffs):
        coeffs = self._coerce_coeffs(coeffs)
        br = bracket(self.generators[s], self.generators[t])
        for u, a in enumerate(coeffs):
            d = a.degree()
            if d is None or (d is not ANY_DEGREE and d + self.generators[u].degree != br.degree):
                raise GradingError(f"bracket ({s},{t}): coefficient {u} has the wrong degree")
        if not _annihilates(self.ring, coeffs, self.generators, extra=br):
            raise ValueError(f"bracket table entry ({s},{t}) is wrong")
        if self.brackets is None:
            self.brackets = {}
        self.brackets[(s, t)] = coeffs

    @property
    def degrees(self) -> list[int]:
        return [D.degree for D in self.generators]

    def subset(self, idx: Sequence[int]) -> "LieRinehartSpec":
        """Generators idx only; relations supported on idx are kept."""
        idx = list(idx)
        rels = []
        for r in self.relations:
            if all(r[i].is_zero() for i in range(len(r)) if i not in idx):
                rels.append([r[i] for i in idx])
        return LieRinehartSpec(self.ring, [self.generators[i] for i in idx], rels,
                               name=f"{self.name}[{','.join(map(str, idx))}]")


def derive_brackets(g: LieRinehartSpec) -> LieRinehartSpec:
    """Fill the bracket table by solving for homogeneous coefficients (modulo f).

    Raises ValueError if some [D_s, D_t] is not in the A-span of the
    generators at the forced degrees.
    """
    ring = g.ring
    amb = ring.ambient()
    f = ring.modulus.with_ring(amb)
    df = f.degree()
    n = len(g.generators)
    for s in range(n):
        for t in range(s + 1, n):
            br = bracket(g.generators[s], g.generators[t])
            unk = Unknowns()
            b = [generic_homogeneous(amb, br.degree - g.generators[u].degree, unk, ("b", u))
                 for u in range(n)]
            system = SparseSystem()
            rows = []
            for v, w in enumerate(ring.weights):
                q = generic_homogeneous(amb, br.degree + w - df, unk, ("q", v))
                acc = LinPoly(amb) - br.images[v].with_ring(amb)
                for u in range(n):
                    acc = acc + b[u].scale(g.generators[u].images[v].with_ring(amb))
                rows.append(acc - q.scale(f))
            system.ncols = len(unk)
            for lp in rows:
                add_linpoly_rows(system, lp)
            res = solve_sparse(system, want_nullspace=False)
            if not res.feasible:
                raise ValueError(f"[D{s + 1}, D{t + 1}] is not a combination of the generators")
            g.add_bracket(s, t, [b[u].evaluate(res.particular).with_ring(ring) for u in range(n)])
    return g


# --------------------------------------------------------------------------
# system construction


def _apply_matrix(D: Derivation, m) -> list:
    return [[D(e) for e in r] for r in m]


class _Builder:
    """Accumulates unknowns and equations for one linear system."""

    def __init__(self, p: GradedPresentation, max_unknowns: int | None = None):
        self.p = p
        self.amb = p.ring.ambient()
        self.f = p.f.with_ring(self.amb)
        self.df = self.f.degree()
        self.unknowns = Unknowns()
        self.eqs: list[tuple[LinPoly, object]] = []
        self.max_unknowns = max_unknowns
        self.d0 = [[e.with_ring(self.amb) for e in r] for r in p.d0]

    def _guard(self):
        if self.max_unknowns is not None and len(self.unknowns) > self.max_unknowns:
            raise ResourceLimitExceeded(
                f"system needs more than {self.max_unknowns} unknowns")

    def template(self, tag, row_degs, col_degs, shift) -> list:
        """Matrix of generic homogeneous entries; (i, j) has degree col_degs[j] - row_degs[i] + shift."""
        out = [[generic_homogeneous(self.amb, cd - rd + shift, self.unknowns, (tag, i, j))
                for j, cd in enumerate(col_degs)] for i, rd in enumerate(row_degs)]
        self._guard()
        return out

    def generator_equations(self, tag, D: Derivation, P, C=None, Q=None):
        """Add D(d0) - d0*C + P*d0 - f*Q = 0 entrywise; returns (C, Q) templates."""
        p = self.p
        w = D.degree
        if C is None:
            C = self.template((tag, "C"), p.deg_source, p.deg_source, w)
        if Q is None:
            Q = self.template((tag, "Q"), p.deg_target, p.deg_source, w - self.df)
        Dd0 = _apply_matrix(D, p.d0)
        for i in range(p.rank0):
            for j in range(p.rank1):
                acc = LinPoly(self.amb) + Dd0[i][j].with_ring(self.amb)
                for k in range(p.rank1):
                    if not self.d0[i][k].is_zero():
                        acc = acc - _lin(C[k][j]).scale(self.d0[i][k])
                for k in range(p.rank0):
                    if not self.d0[k][j].is_zero():
                        acc = acc + _lin(P[i][k]).scale(self.d0[k][j])
                acc = acc - _lin(Q[i][j]).scale(self.f)
                self.eqs.append((acc, (tag, (i + 1, j + 1))))
        return C, Q

    def end_zero_equations(self, tag, K, w):
        """Add K = d0*H + f*Q' entrywise (K is an n0 x n0 matrix of LinPoly/WPoly)."""
        p = self.p
        H = self.template((tag, "H"), p.deg_source, p.deg_target, w)
        Qp = self.template((tag, "Q'"), p.deg_target, p.deg_target, w - self.df)
        for i in range(p.rank0):
            for j in range(p.rank0):
                acc = _lin(K[i][j])
                for k in range(p.rank1):
                    if not self.d0[i][k].is_zero():
                        acc = acc - _lin(H[k][j]).scale(self.d0[i][k])
                acc = acc - _lin(Qp[i][j]).scale(self.f)
                self.eqs.append((acc, (tag, (i + 1, j + 1))))
        return H, Qp

    def system(self) -> SparseSystem:
        s = SparseSystem(len(self.unknowns))
        for lp, label in self.eqs:
            add_linpoly_rows(s, lp, label)
        return s


def _lin(x) -> LinPoly:
    return x if isinstance(x, LinPoly) else LinPoly.from_poly(x)


def _check_fixed(p: GradedPresentation, M, row_degs, col_degs, w, what="P"):
    ring = p.ring
    if len(M) != len(row_degs) or any(len(r) != len(col_degs) for r in M):
        raise GradingError(f"{what} has the wrong shape")
    out = []
    for i, r in enumerate(M):
        row = []
        for j, e in enumerate(r):
            e = e if isinstance(e, WPoly) else ring.const(e)
            d = e.degree()
            want = col_degs[j] - row_degs[i] + w
            if d is None or (d is not ANY_DEGREE and d != want):
                raise GradingError(
                    f"{what}[{i + 1},{j + 1}] = {e} violates the degree pattern (needs degree {want})")
            row.append(e.with_ring(ring.ambient()))
        out.append(row)
    return out


@dataclass
class GeneratorSystem:
    system: SparseSystem
    unknowns: Unknowns
    P: list
    C: list
    Q: list


def build_generator_system(p: GradedPresentation, D: Derivation, omega: int | None = None,
                           max_unknowns: int | None = None) -> GeneratorSystem:
    """Linear system for one generator: unknowns are the entries of P, C and Q."""
    _check_omega(D, omega)
    if D.ring.key != p.ring.key:
        raise RingMismatch("derivation and presentation live in different rings")
    b = _Builder(p, max_unknowns)
    P = b.template(("D", "P"), p.deg_target, p.deg_target, D.degree)
    C, Q = b.generator_equations("D", D, P)
    return GeneratorSystem(b.system(), b.unknowns, P, C, Q)


def _check_omega(D: Derivation, omega):
    if omega is not None and omega != D.degree:
        raise GradingError(f"derivation has degree {D.degree}, not {omega}")


def _evaluate(M, values):
    return [[_lin(e).evaluate(values) for e in r] for r in M]


@dataclass
class GeneratorSolution:
    index: int
    P: list
    C: list
    Q: list
    result: AffineSolveResult

    @property
    def feasible(self) -> bool:
        return self.result.feasible

    def values(self, vector=None):
        """Concrete (P, C, Q) for a solution vector (default: the particular one)."""
        v = self.result.particular if vector is None else vector
        return _evaluate(self.P, v), _evaluate(self.C, v), _evaluate(self.Q, v)


def solve_generator(p: GradedPresentation, D: Derivation, omega: int | None = None,
                    index: int = 0, max_unknowns: int | None = None) -> GeneratorSolution:
    gs = build_generator_system(p, D, omega, max_unknowns)
    res = solve_sparse(gs.system)
    return GeneratorSolution(index, gs.P, gs.C, gs.Q, res)


def fix_P_check(p: GradedPresentation, D: Derivation, omega: int | None, P_fixed) -> bool:
    """True iff some C, Q complete the generator equation with exactly this P."""
    _check_omega(D, omega)
    P = _check_fixed(p, P_fixed, p.deg_target, p.deg_target, D.degree)
    b = _Builder(p)
    b.generator_equations("D", D, P)
    return solve_sparse(b.system(), want_nullspace=False).feasible


def zero_in_end(p: GradedPresentation, Q_end, degree: int) -> bool:
    """True iff the endomorphism of L0 given by Q_end induces zero on M."""
    K = _check_fixed(p, Q_end, p.deg_target, p.deg_target, degree, what="Q_end")
    b = _Builder(p)
    b.end_zero_equations("end", K, degree)
    return solve_sparse(b.system(), want_nullspace=False).feasible


# --------------------------------------------------------------------------
# verdicts


@dataclass
class ConnectionVerdict:
    kind: str
    certificates: list = field(default_factory=list)  # per generator (P, C, Q) when kind == connection
    obstruction_witness: str | None = None
    relation_completeness_assumed: bool = False
    klinear: bool | None = None
    unknowns: int = 0
    equations: int = 0

    @property
    def has_connection(self) -> bool:
        return self.kind == CONNECTION


def _format_label(label) -> str:
    if label is None:
        return "?"
    if isinstance(label, tuple) and len(label) == 2 and isinstance(label[1], tuple) \
            and all(isinstance(x, int) for x in label[1]) and isinstance(label[0], tuple):
        (tag, entry), mono = label[0], label[1]
        return f"{tag} entry {entry} monomial {list(mono)}"
    return str(label)


def _joint_builder(p, g, max_unknowns=None):
    b = _Builder(p, max_unknowns)
    Ps, Cs, Qs = [], [], []
    for s, D in enumerate(g.generators):
        tag = f"D{s + 1}"
        P = b.template((tag, "P"), p.deg_target, p.deg_target, D.degree)
        C, Q = b.generator_equations(tag, D, P)
        Ps.append(P)
        Cs.append(C)
        Qs.append(Q)
    for r, (coeffs, w) in enumerate(zip(g.relations, g.relation_degrees)):
        K = [[LinPoly(b.amb) for _ in range(p.rank0)] for _ in range(p.rank0)]
        for a, P in zip(coeffs, Ps):
            if a.is_zero():
                continue
            aa = a.with_ring(b.amb)
            for i in range(p.rank0):
                for j in range(p.rank0):
                    K[i][j] = K[i][j] + _lin(P[i][j]).scale(aa)
        b.end_zero_equations(f"relation{r + 1}", K, w)
    return b, Ps, Cs, Qs


def exists_klinear(p: GradedPresentation, g: LieRinehartSpec, max_unknowns: int | None = None) -> bool:
    """True iff every generator equation is feasible on its own."""
    return all(solve_generator(p, D, index=s, max_unknowns=max_unknowns).feasible
               for s, D in enumerate(g.generators))


def exists_connection(p: GradedPresentation, g: LieRinehartSpec, check_klinear: bool = False,
                      max_unknowns: int | None = None) -> ConnectionVerdict:
    """Decide existence of a graded g-connection on coker(d0).

    "none" is unconditional.  "connection" assumes the relation list
    generates all relations among the generators; the verdict says so.
    With check_klinear, an infeasible joint system is refined to
    "klinear_only" when every generator is solvable alone.
    """
    if p.ring.key != g.ring.key:
        raise RingMismatch("presentation and Lie-Rinehart spec live in different rings")
    b, Ps, Cs, Qs = _joint_builder(p, g, max_unknowns)
    system = b.system()
    res = solve_sparse(system, want_nullspace=False)
    nunk, neq = system.ncols, len(system)
    if res.feasible:
        certs = [(_evaluate(P, res.particular), _evaluate(C, res.particular), _evaluate(Q, res.particular))
                 for P, C, Q in zip(Ps, Cs, Qs)]
        return ConnectionVerdict(CONNECTION, certs, None, relation_completeness_assumed=True,
                                 klinear=True if check_klinear else None,
                                 unknowns=nunk, equations=neq)
    witness = _format_label(system.labels[res.witness])
    if check_klinear:
        kl = exists_klinear(p, g, max_unknowns)
        return ConnectionVerdict(KLINEAR_ONLY if kl else NONE, [], witness, klinear=kl,
                                 unknowns=nunk, equations=neq)
    return ConnectionVerdict(NONE, [], witness, unknowns=nunk, equations=neq)


# --------------------------------------------------------------------------
# curvature


@dataclass
class CurvatureReport:
    pairs: list  # (s, t)
    matrices: list  # curvature matrix on L0 per pair
    zero_in_end: list  # bool per pair

    @property
    def integrable(self) -> bool:
        return all(self.zero_in_end)


def curvature(p: GradedPresentation, g: LieRinehartSpec, certificates) -> CurvatureReport:
    """Curvature of the connection D_s -> D_s + P_s, pair by pair.

    K = D_s(P_t) - D_t(P_s) + [P_s, P_t] - sum_u b_u P_u, with b from the
    bracket table; the pair passes when K induces zero on M.
    """
    if g.brackets is None:
        raise ValueError("curvature needs a bracket table (see derive_brackets)")
    amb = p.ring.ambient()
    Ps = [[[e.with_ring(amb) for e in r] for r in cert[0]] for cert in certificates]
    n = len(g.generators)
    pairs, mats, zs = [], [], []
    for s in range(n):
        for t in range(s + 1, n):
            if (s, t) not in g.brackets:
                raise ValueError(f"bracket table has no entry for ({s}, {t})")
            Ds = _ambient_derivation(g.generators[s], amb)
            Dt = _ambient_derivation(g.generators[t], amb)
            K = _mat_add(_apply_matrix(Ds, Ps[t]), _mat_neg(_apply_matrix(Dt, Ps[s])))
            if p.rank0:
                K = _mat_add(K, mat_mul(Ps[s], Ps[t]))
                K = _mat_add(K, _mat_neg(mat_mul(Ps[t], Ps[s])))
            for u, bu in enumerate(g.brackets[(s, t)]):
                if not bu.is_zero():
                    bu = bu.with_ring(amb)
                    K = _mat_add(K, _mat_neg([[bu * e for e in r] for r in Ps[u]]))
            w = g.generators[s].degree + g.generators[t].degree
            pairs.append((s, t))
            mats.append(K)
            zs.append(zero_in_end(p, K, w))
    return CurvatureReport(pairs, mats, zs)


def _ambient_derivation(D: Derivation, amb) -> Derivation:
    if D.ring.modulus is None:
        return D
    return Derivation(amb, [img.with_ring(amb) for img in D.images], D.degree, D.name)


def _mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _mat_neg(a):
    return [[-x for x in r] for r in a]
