"""Monomial curve singularities k[[Gamma]] and their rank-one modules k[[Lambda]].

Derivations of A = k[[Gamma]] are h*E with E = t d/dt; the A-module
Der(A) is spanned by t^c E for c in D(Gamma) = {c >= 0 : c + Gamma* in Gamma}.
A connection on M = k[[Lambda]] is determined by one series f in M with
nabla_{t^c E} = t^c (E + f).  The condition that every such operator maps
M into M is linear in the coefficients of f and only involves exponents
up to the Frobenius number g, because everything above g lies in Gamma.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator, Sequence

from .exact import SparseSystem, solve_sparse

CONNECTION = "connection"
KLINEAR_ONLY = "klinear_only"
NONE = "none"


class SemigroupError(ValueError):
    pass


class NumSemigroup:
    """Numerical semigroup given by generators (need not be minimal)."""

    def __init__(self, generators: Iterable[int]):
        gens = sorted({int(a) for a in generators})
        if not gens or any(a <= 0 for a in gens):
            raise SemigroupError("generators must be positive integers")
        g0 = 0
        for a in gens:
            g0 = gcd(g0, a)
        if g0 != 1:
            raise SemigroupError(f"generators {gens} have gcd {g0} != 1")
        m = gens[0]
        member = [True]
        run = 0
        n = 0
        # sieve until m consecutive members: everything beyond is in Gamma
        while run < m:
            n += 1
            ok = any(n >= a and member[n - a] for a in gens)
            member.append(ok)
            run = run + 1 if ok else 0
        self.frobenius = max((k for k, ok in enumerate(member) if not ok), default=-1)
        self._member = tuple(member[: self.frobenius + 1])
        self.gaps = frozenset(k for k, ok in enumerate(self._member) if not ok)
        self.generators = self._minimal_generators()

    @classmethod
    def from_gaps(cls, gaps: Iterable[int]) -> "NumSemigroup":
        """Semigroup with exactly this gap set (validated)."""
        gaps = frozenset(int(h) for h in gaps)
        g = max(gaps, default=-1)
        members = [a for a in range(1, 2 * g + 3) if a not in gaps]
        sg = cls(members)
        if sg.gaps != gaps:
            raise SemigroupError(f"{sorted(gaps)} is not the gap set of a numerical semigroup")
        return sg

    def _minimal_generators(self) -> tuple:
        g = self.frobenius
        m = self.multiplicity
        top = g + m + 1  # minimal generators never exceed g + m
        elems = [a for a in range(1, top + 1) if a in self]
        out = []
        for a in elems:
            if not any((a - b) in self and a - b > 0 for b in out if b < a):
                out.append(a)
        return tuple(out)

    @property
    def multiplicity(self) -> int:
        return next(a for a in range(1, self.frobenius + 3) if a in self)

    def __contains__(self, a: int) -> bool:
        if a < 0:
            return False
        if a > self.frobenius:
            return True
        return self._member[a]

    def elements_upto(self, bound: int) -> list[int]:
        return [a for a in range(bound + 1) if a in self]

    def __eq__(self, other):
        return isinstance(other, NumSemigroup) and self.gaps == other.gaps

    def __hash__(self):
        return hash(self.gaps)

    def __repr__(self):
        return f"NumSemigroup<{','.join(map(str, self.generators))}>"


def gaps(sg: NumSemigroup) -> frozenset:
    return sg.gaps


def frobenius(sg: NumSemigroup) -> int:
    return sg.frobenius


def is_symmetric(sg: NumSemigroup) -> bool:
    """a in Gamma iff g - a not in Gamma, for 0 <= a <= g."""
    g = sg.frobenius
    return all((a in sg) != ((g - a) in sg) for a in range(g + 1))


def delta(sg: NumSemigroup) -> frozenset:
    """{h in H : g - h in H}; undefined (error) for symmetric semigroups."""
    g = sg.frobenius
    d = frozenset(h for h in sg.gaps if (g - h) in sg.gaps)
    if not d:
        raise SemigroupError(f"{sg} is symmetric: Delta is empty and s = max Delta is undefined")
    return d


def s_max(sg: NumSemigroup) -> int:
    return max(delta(sg))


@dataclass(frozen=True)
class LambdaSet:
    """Lambda = Gamma + extra (extra a set of gaps), closed under adding Gamma."""

    parent: NumSemigroup
    extra: frozenset = frozenset()

    def __post_init__(self):
        extra = frozenset(int(h) for h in self.extra)
        object.__setattr__(self, "extra", extra)
        bad = extra - self.parent.gaps
        if bad:
            raise SemigroupError(f"{sorted(bad)} are not gaps of {self.parent}")
        g = self.parent.frobenius
        for h in extra:
            for a in range(1, g - h + 1):
                if a in self.parent and (h + a) not in self:
                    raise SemigroupError(
                        f"Gamma + Lambda not contained in Lambda: {h} + {a} missing")

    def __contains__(self, a: int) -> bool:
        return a in self.parent or a in self.extra

    @property
    def label(self) -> str:
        if not self.extra:
            return "free"
        hs = sorted(self.extra)
        if all(h < 10 for h in hs):
            return "M" + "".join(map(str, hs))
        return "M(" + ",".join(map(str, hs)) + ")"

    def elements_upto(self, bound: int) -> list[int]:
        return [a for a in range(bound + 1) if a in self]


def enumerate_lambda(sg: NumSemigroup) -> list[LambdaSet]:
    """All Gamma-stable Lambda between Gamma and N0, the free module first.

    Gaps are decided from the largest down; a gap may be added only if
    every gap above it reachable by adding a nonzero element of Gamma is
    already in.  Ordered by (size of extra, sorted extra).
    """
    hs = sorted(sg.gaps, reverse=True)
    ups = {h: [h2 for h2 in sg.gaps if h2 > h and (h2 - h) in sg] for h in hs}
    out: list[frozenset] = []

    def rec(k: int, chosen: frozenset):
        if k == len(hs):
            out.append(chosen)
            return
        h = hs[k]
        rec(k + 1, chosen)
        if all(h2 in chosen for h2 in ups[h]):
            rec(k + 1, chosen | {h})

    rec(0, frozenset())
    out.sort(key=lambda s: (len(s), sorted(s)))
    return [LambdaSet(sg, s) for s in out]


def canonical_lambda(sg: NumSemigroup) -> LambdaSet:
    """Lambda = Gamma + (Gamma + Delta); Gamma itself when Gamma is symmetric."""
    if is_symmetric(sg):
        return LambdaSet(sg, frozenset())
    d = delta(sg)
    extra = frozenset(h for h in sg.gaps if any((h - x) in sg for x in d))
    return LambdaSet(sg, extra)


def derivation_exponents(sg: NumSemigroup, bound: int) -> list[int]:
    """D(Gamma) intersected with [0, bound]; every c > g belongs."""
    g = sg.frobenius
    if bound < g:
        raise SemigroupError(f"bound {bound} is below the Frobenius number {g}")
    nonzero = [a for a in range(1, g + 1) if a in sg]
    return [c for c in range(bound + 1) if all((c + a) in sg for a in nonzero)]


@dataclass
class CurveConnectionWitness:
    verdict: str
    f_coefficients: dict = field(default_factory=dict)  # mu -> Fraction
    h_coefficients: dict = field(default_factory=dict)  # c -> {mu -> Fraction}
    obstruction: tuple | None = None  # (c, lambda, e) of the first inconsistent constraint


def _connection_system(sg: NumSemigroup, lam: LambdaSet):
    g = sg.frobenius
    mus = lam.elements_upto(g)
    col = {mu: k for k, mu in enumerate(mus)}
    system = SparseSystem(len(mus))
    for c in derivation_exponents(sg, g):
        for l in mus:
            for e in range(c + l, g + 1):
                if e in lam:
                    continue
                mu = e - c - l
                if mu not in col:
                    continue
                system.add_row({col[mu]: Fraction(1)}, Fraction(-l if mu == 0 else 0),
                               label=(c, l, e))
    return system, mus


def decide_connection(sg: NumSemigroup, lam: LambdaSet) -> CurveConnectionWitness:
    """Is there f in k[[Lambda]] with t^c (E + f) M in M for all c in D(Gamma)?

    Constraint for derivation exponent c, basis element t^l and
    obstructed exponent e (a gap of Lambda): lambda [mu = 0] + f_mu = 0,
    mu = e - c - l.  Witness: the particular solution (free coefficients 0).
    """
    system, mus = _connection_system(sg, lam)
    res = solve_sparse(system, want_nullspace=False)
    if not res.feasible:
        return CurveConnectionWitness(NONE, obstruction=system.labels[res.witness])
    f = {mu: res.particular[k] for k, mu in enumerate(mus)}
    return CurveConnectionWitness(CONNECTION, f_coefficients=f)


def _klinear_system(sg: NumSemigroup, lam: LambdaSet, c: int):
    g = sg.frobenius
    mus = lam.elements_upto(g)
    col = {mu: k for k, mu in enumerate(mus)}
    system = SparseSystem(len(mus))
    for l in mus:
        for e in range(l, g + 1):
            if e in lam:
                continue
            row = {col[e - l]: Fraction(1)} if (e - l) in col else {}
            rhs = Fraction(-l if e == c + l else 0)
            if row or rhs:
                system.add_row(row, rhs, label=(c, l, e))
    return system, mus


def decide_klinear(sg: NumSemigroup, lam: LambdaSet) -> CurveConnectionWitness:
    """Per-derivation solvability: each t^c E gets its own multiplier h_c in k[[Lambda]].

    Returns verdict klinear_only when all c are solvable (the caller
    combines with decide_connection), none otherwise.
    """
    hs = {}
    for c in derivation_exponents(sg, sg.frobenius):
        system, mus = _klinear_system(sg, lam, c)
        res = solve_sparse(system, want_nullspace=False)
        if not res.feasible:
            return CurveConnectionWitness(NONE, obstruction=system.labels[res.witness])
        hs[c] = {mu: res.particular[k] for k, mu in enumerate(mus)}
    return CurveConnectionWitness(KLINEAR_ONLY, h_coefficients=hs)


def klinear_exists(sg: NumSemigroup, lam: LambdaSet) -> bool:
    return decide_klinear(sg, lam).verdict != NONE


def verdict(sg: NumSemigroup, lam: LambdaSet) -> str:
    """connection, klinear_only or none."""
    if decide_connection(sg, lam).verdict == CONNECTION:
        return CONNECTION
    return KLINEAR_ONLY if klinear_exists(sg, lam) else NONE


def canonical_connection_theorem(sg: NumSemigroup) -> tuple[bool, bool]:
    """(canonical module admits a connection, Gamma symmetric)."""
    admits = decide_connection(sg, canonical_lambda(sg)).verdict == CONNECTION
    return admits, is_symmetric(sg)


# --------------------------------------------------------------------------
# integrability


def _nabla(c: int, f: dict, series: dict, bound: int) -> dict:
    """t^c (E + f) applied to a truncated series {exponent: coeff}."""
    out: dict = {}
    for a, s in series.items():
        if a + c <= bound and a:
            out[a + c] = out.get(a + c, 0) + a * s
        for mu, fm in f.items():
            e = a + c + mu
            if e <= bound and fm:
                out[e] = out.get(e, 0) + fm * s
    return {e: v for e, v in out.items() if v != 0}


def _sub(p: dict, q: dict, scale=1) -> dict:
    out = dict(p)
    for e, v in q.items():
        out[e] = out.get(e, 0) - scale * v
    return {e: v for e, v in out.items() if v != 0}


def check_integrability(sg: NumSemigroup, lam: LambdaSet, witness: CurveConnectionWitness) -> bool:
    """Curvature of nabla_{t^c E} = t^c (E + f) on every t^l, l <= g, truncated at 2g + 2.

    Uses [t^c E, t^c' E] = (c' - c) t^(c + c') E.
    """
    if witness.verdict != CONNECTION:
        raise SemigroupError("integrability needs a connection witness")
    g = sg.frobenius
    bound = 2 * g + 2
    f = witness.f_coefficients
    if any(mu > g for mu in f):
        raise SemigroupError("witness exceeds the truncation bound")
    cs = derivation_exponents(sg, g)
    for i, c in enumerate(cs):
        for c2 in cs[i + 1:]:
            for l in lam.elements_upto(g):
                basis = {l: Fraction(1)}
                a = _nabla(c, f, _nabla(c2, f, basis, bound), bound)
                b = _nabla(c2, f, _nabla(c, f, basis, bound), bound)
                r = _sub(_sub(a, b), _nabla(c + c2, f, basis, bound), scale=c2 - c)
                if r:
                    return False
    return True


# --------------------------------------------------------------------------
# enumeration and sampling


def semigroups_up_to_frobenius(max_g: int) -> Iterator[NumSemigroup]:
    """Every numerical semigroup with Frobenius number <= max_g (N0 included).

    Walks the tree whose children remove one minimal generator larger
    than the current Frobenius number; each semigroup's parent is
    Gamma + {g}, so every node is reached exactly once.
    """
    stack = [NumSemigroup([1])]
    while stack:
        sg = stack.pop()
        yield sg
        for a in sorted(sg.generators, reverse=True):
            if sg.frobenius < a <= max_g:
                stack.append(NumSemigroup.from_gaps(sg.gaps | {a}))


def random_symmetric_semigroups(count: int, max_g: int, seed: int = 0,
                                max_generator: int = 16) -> list[NumSemigroup]:
    """Distinct symmetric semigroups with g <= max_g, sampled from random generator sets."""
    rng = random.Random(seed)
    found: dict = {}
    attempts = 0
    while len(found) < count:
        attempts += 1
        if attempts > 200000:
            raise SemigroupError("could not sample enough symmetric semigroups")
        r = rng.choice((2, 3, 3, 4))
        gens = rng.sample(range(2, max_generator + 1), r)
        g0 = 0
        for a in gens:
            g0 = gcd(g0, a)
        if g0 != 1:
            continue
        sg = NumSemigroup(gens)
        if 0 < sg.frobenius <= max_g and is_symmetric(sg) and sg.gaps not in found:
            found[sg.gaps] = sg
    return list(found.values())


# --------------------------------------------------------------------------
# tables


@dataclass
class ClassificationRow:
    label: str
    extra: tuple
    verdict: str
    connection: bool
    klinear: bool
    canonical: bool


def classify(sg: NumSemigroup) -> list[ClassificationRow]:
    """Connection / k-linear verdict for every rank-one gradable module."""
    can = canonical_lambda(sg).extra
    rows = []
    for lam in enumerate_lambda(sg):
        conn = decide_connection(sg, lam).verdict == CONNECTION
        kl = True if conn else klinear_exists(sg, lam)
        v = CONNECTION if conn else (KLINEAR_ONLY if kl else NONE)
        rows.append(ClassificationRow(lam.label, tuple(sorted(lam.extra)), v, conn, kl,
                                      lam.extra == can))
    return rows


def info(sg: NumSemigroup) -> dict:
    sym = is_symmetric(sg)
    d = {} if sym else {"delta": sorted(delta(sg)), "s": s_max(sg)}
    return {
        "generators": list(sg.generators),
        "gaps": sorted(sg.gaps),
        "frobenius": sg.frobenius,
        "multiplicity": sg.multiplicity,
        "symmetric": sym,
        **d,
        "derivation_exponents": derivation_exponents(sg, max(sg.frobenius, 0)),
    }


def parse_generators(items: Sequence[str]) -> NumSemigroup:
    try:
        gens = [int(x) for x in items]
    except ValueError as exc:
        raise SemigroupError(f"generators must be integers: {exc}") from None
    return NumSemigroup(gens)
