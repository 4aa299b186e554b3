"""Matrix factorizations and graded presentations.

A matrix factorization of f is a pair of square matrices (phi, psi) over
the ambient polynomial ring with phi*psi = psi*phi = f*I.  The module
coker(phi) over S/(f) is described by a GradedPresentation: the matrix
d0 together with degree vectors for the bases of L0 (targets) and L1
(sources), with entry (i, j) homogeneous of degree
deg_source[j] - deg_target[i].
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import SparseSystem, solve_sparse
from .wpoly import (ANY_DEGREE, CONST, LinPoly, NotHomogeneous, RingMismatch, Unknowns,
                    WPoly, WPolyRing, generic_homogeneous)

Matrix = list  # list of rows of WPoly


# --------------------------------------------------------------------------
# small matrix helpers


def mat_shape(m: Matrix) -> tuple[int, int]:
    return len(m), (len(m[0]) if m else 0)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, k = mat_shape(a)
    k2, m = mat_shape(b)
    if k != k2:
        raise ValueError(f"shape mismatch {n}x{k} * {k2}x{m}")
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = None
            for t in range(k):
                x, y = a[i][t], b[t][j]
                if x.is_zero() or y.is_zero():
                    continue
                acc = x * y if acc is None else acc + x * y
            row.append(acc if acc is not None else _zero_like(a, b))
        out.append(row)
    return out


def _zero_like(*mats):
    for m in mats:
        for row in m:
            for e in row:
                return e.ring.zero()
    raise ValueError("cannot infer ring of an empty matrix")


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_neg(a: Matrix) -> Matrix:
    return [[-x for x in r] for r in a]


def mat_scale(a: Matrix, c) -> Matrix:
    return [[x * c for x in r] for r in a]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)] if a and a[0] else []


def identity(ring: WPolyRing, n: int, c=None) -> Matrix:
    c = ring.one() if c is None else c
    return [[c if i == j else ring.zero() for j in range(n)] for i in range(n)]


def zeros(ring: WPolyRing, n: int, m: int) -> Matrix:
    return [[ring.zero() for _ in range(m)] for _ in range(n)]


def mat_eq(a: Matrix, b: Matrix) -> bool:
    return mat_shape(a) == mat_shape(b) and all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def blocks(rows_of_blocks: Sequence[Sequence[Matrix]]) -> Matrix:
    out = []
    for brow in rows_of_blocks:
        height = len(brow[0])
        for r in range(height):
            out.append([e for b in brow for e in b[r]])
    return out


def map_entries(a: Matrix, fn) -> Matrix:
    return [[fn(x) for x in r] for r in a]


def det(a: Matrix) -> WPoly:
    """Determinant by cofactor expansion (intended for small matrices)."""
    n, m = mat_shape(a)
    if n != m:
        raise ValueError("det of non-square matrix")
    if n == 1:
        return a[0][0]
    if n == 2:
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]
    acc = None
    for j in range(n):
        if a[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in a[1:]]
        term = a[0][j] * det(minor)
        if j % 2:
            term = -term
        acc = term if acc is None else acc + term
    return acc if acc is not None else a[0][0].ring.zero()


def as_ring(a: Matrix, ring: WPolyRing) -> Matrix:
    return [[x.with_ring(ring) for x in r] for r in a]


# --------------------------------------------------------------------------
# matrix factorizations


@dataclass(frozen=True)
class MatrixFactorization:
    ring: WPolyRing  # ambient, no modulus
    f: WPoly
    phi: Matrix
    psi: Matrix

    def __post_init__(self):
        n, m = mat_shape(self.phi)
        if n != m or mat_shape(self.psi) != (n, m):
            raise ValueError("phi and psi must be square of the same size")

    @property
    def size(self) -> int:
        return len(self.phi)

    def __eq__(self, other):
        if not isinstance(other, MatrixFactorization):
            return NotImplemented
        return (self.ring.key == other.ring.key and self.f == other.f
                and mat_eq(self.phi, other.phi) and mat_eq(self.psi, other.psi))

    __hash__ = None


def verify(mf: MatrixFactorization) -> bool:
    """True iff phi*psi == psi*phi == f*I exactly."""
    fi = identity(mf.ring, mf.size, mf.f)
    return mat_eq(mat_mul(mf.phi, mf.psi), fi) and mat_eq(mat_mul(mf.psi, mf.phi), fi)


def is_reduced(mf: MatrixFactorization) -> bool:
    """True iff no entry of phi or psi has a nonzero constant term."""
    return all(e.constant_term() == 0 for m in (mf.phi, mf.psi) for r in m for e in r)


def dual(mf: MatrixFactorization) -> MatrixFactorization:
    return MatrixFactorization(mf.ring, mf.f, transpose(mf.phi), transpose(mf.psi))


def syzygy(mf: MatrixFactorization) -> MatrixFactorization:
    return MatrixFactorization(mf.ring, mf.f, mf.psi, mf.phi)


def knoerrer(mf: MatrixFactorization, u_name: str = "u", v_name: str = "v",
             u_weight: int | None = None, v_weight: int | None = None) -> MatrixFactorization:
    """Knoerrer's block construction: a factorization of f + u*v.

    phi' = [[u I, -psi], [phi, v I]],  psi' = [[v I, psi], [-phi, u I]].
    Weights default to a split of deg f so that f + uv stays homogeneous.
    """
    df = mf.f.degree()
    if df is None or df is ANY_DEGREE:
        raise NotHomogeneous("knoerrer needs a nonzero homogeneous f")
    if df < 2:
        raise ValueError(f"knoerrer needs deg f >= 2 so that u and v get positive weights, got {df}")
    if u_weight is None and v_weight is None:
        v_weight = max(1, df // 2)
        u_weight = df - v_weight
    elif u_weight is None:
        u_weight = df - v_weight
    elif v_weight is None:
        v_weight = df - u_weight
    if u_weight + v_weight != df:
        raise ValueError(f"weights of {u_name}, {v_name} must sum to deg f = {df}")
    ring = mf.ring.extend([u_name, v_name], [u_weight, v_weight])
    emb = lambda m: [[x.embed(ring) for x in r] for r in m]
    phi, psi = emb(mf.phi), emb(mf.psi)
    u, v = ring.var(u_name), ring.var(v_name)
    n = mf.size
    uI, vI = identity(ring, n, u), identity(ring, n, v)
    phi2 = blocks([[uI, mat_neg(psi)], [phi, vI]])
    psi2 = blocks([[vI, psi], [mat_neg(phi), uI]])
    return MatrixFactorization(ring, mf.f.embed(ring) + u * v, phi2, psi2)


# --------------------------------------------------------------------------
# graded presentations


class PresentationError(ValueError):
    pass


@dataclass(frozen=True)
class GradedPresentation:
    """Presentation 0 <- M <- L0 <- L1 of M = coker(d0) over ring (with modulus)."""

    ring: WPolyRing
    d0: Matrix
    deg_target: tuple
    deg_source: tuple
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "deg_target", tuple(int(d) for d in self.deg_target))
        object.__setattr__(self, "deg_source", tuple(int(d) for d in self.deg_source))
        object.__setattr__(self, "d0", as_ring(self.d0, self.ring))
        if self.ring.modulus is None:
            raise PresentationError("presentation ring needs a modulus (use a hypersurface ring)")
        if len(self.d0) != len(self.deg_target):
            raise PresentationError(
                f"d0 has {len(self.d0)} rows but {len(self.deg_target)} target degrees")
        for i, row in enumerate(self.d0):
            if len(row) != len(self.deg_source):
                raise PresentationError(
                    f"row {i} of d0 has {len(row)} entries, expected {len(self.deg_source)}")
            for j, e in enumerate(row):
                d = e.degree()
                want = self.deg_source[j] - self.deg_target[i]
                if d is None:
                    raise NotHomogeneous(f"entry ({i + 1},{j + 1}) of d0 is not homogeneous")
                if d is not ANY_DEGREE and d != want:
                    raise PresentationError(
                        f"entry ({i + 1},{j + 1}) has degree {d}, expected {want}")

    @property
    def rank0(self) -> int:
        return len(self.deg_target)

    @property
    def rank1(self) -> int:
        return len(self.deg_source)

    @property
    def f(self) -> WPoly:
        return self.ring.modulus

    def is_free(self) -> bool:
        """Free by construction: L1 = 0 or d0 identically zero."""
        return all(e.is_zero() for r in self.d0 for e in r)

    def __eq__(self, other):
        if not isinstance(other, GradedPresentation):
            return NotImplemented
        return (self.ring == other.ring and mat_eq(self.d0, other.d0)
                and self.deg_target == other.deg_target and self.deg_source == other.deg_source)

    __hash__ = None


def free_presentation(ring: WPolyRing, degrees: Sequence[int], name: str = "free") -> GradedPresentation:
    """A free module: L1 = 0."""
    return GradedPresentation(ring, [[] for _ in degrees], tuple(degrees), (), name=name)


def check_presentation(p: GradedPresentation) -> bool:
    """Re-run the homogeneity validator (raises on failure)."""
    GradedPresentation(p.ring, p.d0, p.deg_target, p.deg_source, p.name)
    return True


def dual_presentation(p: GradedPresentation) -> GradedPresentation:
    """Transpose d0; target/source degree vectors swap and change sign."""
    return GradedPresentation(p.ring, transpose(p.d0) if p.rank1 else [],
                              tuple(-d for d in p.deg_source), tuple(-d for d in p.deg_target),
                              name=f"dual({p.name})" if p.name else "")


def direct_sum(p: GradedPresentation, q: GradedPresentation) -> GradedPresentation:
    if p.ring != q.ring:
        raise RingMismatch("direct sum needs a common ring")
    z = p.ring.zero()
    d0 = [list(r) + [z] * q.rank1 for r in p.d0] + [[z] * p.rank1 + list(r) for r in q.d0]
    return GradedPresentation(p.ring, d0, p.deg_target + q.deg_target,
                              p.deg_source + q.deg_source, name=f"{p.name}+{q.name}")


def grade_matrix(d0: Matrix, ring: WPolyRing, first: int = 0) -> tuple[tuple, tuple]:
    """Find degree vectors making d0 homogeneous (first target degree pinned to `first`).

    Components of the bipartite row/column graph not reached from row 0
    get their smallest row pinned to 0 as well.
    """
    n, m = mat_shape(d0)
    m = len(d0[0]) if d0 else 0
    tgt: list = [None] * n
    src: list = [None] * m
    edges = {}
    for i in range(n):
        for j in range(m):
            e = d0[i][j]
            d = e.degree()
            if d is None:
                raise NotHomogeneous(f"entry ({i + 1},{j + 1}) is not homogeneous")
            if d is not ANY_DEGREE:
                edges[(i, j)] = d
    for start in range(n):
        if tgt[start] is not None:
            continue
        tgt[start] = first if start == 0 else 0
        stack = [("r", start)]
        while stack:
            kind, k = stack.pop()
            if kind == "r":
                for j in range(m):
                    if (k, j) in edges:
                        want = tgt[k] + edges[(k, j)]
                        if src[j] is None:
                            src[j] = want
                            stack.append(("c", j))
                        elif src[j] != want:
                            raise PresentationError("matrix admits no consistent grading")
            else:
                for i in range(n):
                    if (i, k) in edges:
                        want = src[k] - edges[(i, k)]
                        if tgt[i] is None:
                            tgt[i] = want
                            stack.append(("r", i))
                        elif tgt[i] != want:
                            raise PresentationError("matrix admits no consistent grading")
    src = [s if s is not None else 0 for s in src]
    return tuple(tgt), tuple(src)


def presentation_of(mf: MatrixFactorization, deg_target: Sequence[int] | None = None,
                    name: str = "") -> GradedPresentation:
    """coker(phi) as a graded presentation over S/(f)."""
    ring = mf.ring.with_modulus(mf.f)
    tgt, src = grade_matrix(mf.phi, mf.ring)
    if deg_target is not None:
        shift = deg_target[0] - tgt[0]
        tgt = tuple(t + shift for t in tgt)
        src = tuple(s + shift for s in src)
        if tuple(deg_target) != tgt:
            raise PresentationError("requested target degrees are inconsistent with phi")
    return GradedPresentation(ring, mf.phi, tgt, src, name=name)


def restrict(p: GradedPresentation, vars_to_zero: Sequence[str]) -> GradedPresentation:
    """Set the listed variables to zero in d0 and the modulus; drop them from the ring."""
    vars_to_zero = list(vars_to_zero)
    if not vars_to_zero:
        return p
    keep = [n for n in p.ring.names if n not in vars_to_zero]
    for n in vars_to_zero:
        p.ring.index(n)
    weights = [w for n, w in zip(p.ring.names, p.ring.weights) if n in keep]
    base = WPolyRing(keep, weights)

    def down(e: WPoly) -> WPoly:
        e = e.set_zero(vars_to_zero)
        idx = [p.ring.index(n) for n in keep]
        return WPoly(base, {tuple(x[i] for i in idx): c for x, c in e.terms.items()})

    f0 = down(p.ring.modulus)
    if f0.is_zero():
        raise PresentationError("modulus collapses to zero under the restriction")
    ring = base.with_modulus(f0)
    d0 = [[down(e).with_ring(ring) for e in r] for r in p.d0]
    return GradedPresentation(ring, d0, p.deg_target, p.deg_source, name=p.name)


def partner(p: GradedPresentation) -> MatrixFactorization | None:
    """Solve phi*psi = psi*phi = f*I for psi with homogeneous entries of forced degree.

    psi maps L0 -> L1 shifted by deg f, so entry (j, k) has degree
    deg_target[k] + deg f - deg_source[j].  Returns None if no partner
    exists (d0 must be square).
    """
    n, m = p.rank0, p.rank1
    if n != m:
        return None
    amb = p.ring.ambient()
    f = p.f.with_ring(amb)
    df = f.degree()
    phi = as_ring(p.d0, amb)
    unk = Unknowns()
    psi = [[generic_homogeneous(amb, p.deg_target[k] + df - p.deg_source[j], unk, ("psi", j, k))
            for k in range(n)] for j in range(m)]
    system = SparseSystem(0)
    eqs = []
    for i in range(n):
        for k in range(n):
            acc = LinPoly(amb)
            for j in range(m):
                acc = acc + psi[j][k].scale(phi[i][j])
            if i == k:
                acc = acc - f
            eqs.append(acc)
            acc = LinPoly(amb)
            for j in range(n):
                acc = acc + psi[i][j].scale(phi[j][k])
            if i == k:
                acc = acc - f
            eqs.append(acc)
    system.ncols = len(unk)
    for lp in eqs:
        add_linpoly_rows(system, lp)
    res = solve_sparse(system, want_nullspace=False)
    if not res.feasible:
        return None
    psi_val = [[e.evaluate(res.particular) for e in r] for r in psi]
    return MatrixFactorization(amb, f, phi, psi_val)


def add_linpoly_rows(system: SparseSystem, lp: LinPoly, label=None):
    """Append one equation per monomial of lp == 0 (constant parts move to the rhs)."""
    for e in sorted(lp.terms):
        form = lp.terms[e]
        row = {u: c for u, c in form.items() if u != CONST}
        rhs = -form.get(CONST, Fraction(0))
        if not row and rhs == 0:
            continue
        system.add_row(row, rhs, label=(label, e) if label is not None else e)
