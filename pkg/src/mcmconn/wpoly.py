"""Weighted-graded polynomials over exact scalars, and derivations.

A ring is a list of variable names with positive integer weights and an
optional homogeneous modulus f.  Polynomials store only nonzero terms,
keyed by exponent tuples.  Arithmetic is always carried out in the
ambient polynomial ring; the modulus only matters for membership tests
("is this polynomial in (f)?") and for validating derivations.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .exact import as_scalar

MAX_EXPONENT = 2**63 - 1


class RingMismatch(ValueError):
    pass


class NotHomogeneous(ValueError):
    pass


class _Any:
    """Degree reported for the zero polynomial."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "ANY_DEGREE"


ANY_DEGREE = _Any()


class WPolyRing:
    def __init__(self, names: Sequence[str], weights: Sequence[int], modulus: "WPoly | None" = None):
        names = tuple(names)
        weights = tuple(int(w) for w in weights)
        if len(names) != len(weights):
            raise ValueError("need one weight per variable")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        for nm, w in zip(names, weights):
            if w <= 0:
                raise ValueError(f"weight of {nm} must be positive, got {w}")
        self.names = names
        self.weights = weights
        self.modulus = None
        if modulus is not None:
            if modulus.ring.key != self.key:
                raise RingMismatch("modulus lives in a different ring")
            if modulus.is_zero():
                raise ValueError("modulus must be nonzero")
            if modulus.degree() is None:
                raise NotHomogeneous("modulus must be weighted-homogeneous")
            self.modulus = WPoly(self, modulus.terms)

    @property
    def key(self):
        return (self.names, self.weights)

    @property
    def nvars(self) -> int:
        return len(self.names)

    def ambient(self) -> "WPolyRing":
        return self if self.modulus is None else WPolyRing(self.names, self.weights)

    def with_modulus(self, f: "WPoly") -> "WPolyRing":
        return WPolyRing(self.names, self.weights, f)

    def extend(self, names: Sequence[str], weights: Sequence[int]) -> "WPolyRing":
        """Ambient ring with extra variables appended (no modulus)."""
        clash = set(names) & set(self.names)
        if clash:
            raise ValueError(f"variable name collision: {sorted(clash)}")
        return WPolyRing(self.names + tuple(names), self.weights + tuple(weights))

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"no variable {name!r} in ring {self.names}") from None

    def var(self, name: str) -> "WPoly":
        e = [0] * self.nvars
        e[self.index(name)] = 1
        return WPoly(self, {tuple(e): Fraction(1)})

    def gens(self) -> list["WPoly"]:
        return [self.var(n) for n in self.names]

    def const(self, c) -> "WPoly":
        c = as_scalar(c)
        return WPoly(self, {(0,) * self.nvars: c} if c != 0 else {})

    def zero(self) -> "WPoly":
        return WPoly(self, {})

    def one(self) -> "WPoly":
        return self.const(1)

    def monomial(self, exps: Sequence[int], coeff=1) -> "WPoly":
        return WPoly(self, {tuple(exps): as_scalar(coeff)})

    def mdeg(self, exps: Sequence[int]) -> int:
        return sum(e * w for e, w in zip(exps, self.weights))

    def __eq__(self, other):
        if not isinstance(other, WPolyRing):
            return NotImplemented
        return self.key == other.key and self.modulus == other.modulus

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        mod = f", modulus={self.modulus}" if self.modulus is not None else ""
        return f"WPolyRing({list(self.names)}, {list(self.weights)}{mod})"


@lru_cache(maxsize=None)
def _monomials(weights: tuple, d: int) -> tuple:
    if d < 0:
        return ()
    if not weights:
        return ((),) if d == 0 else ()
    w, rest = weights[0], weights[1:]
    out = []
    for a in range(d // w, -1, -1):
        for tail in _monomials(rest, d - a * w):
            out.append((a,) + tail)
    return tuple(out)


def monomials_of_degree(ring: WPolyRing, d: int) -> list[tuple]:
    """All exponent vectors of weighted degree d, in descending lex order."""
    return list(_monomials(ring.weights, int(d)))


class WPoly:
    """Polynomial with exact coefficients in a weighted ring."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: WPolyRing, terms: dict | None = None):
        self.ring = ring
        t = {}
        if terms:
            n = ring.nvars
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != n:
                    raise ValueError(f"exponent {e} has wrong length for {ring.names}")
                if any(x < 0 for x in e):
                    raise ValueError(f"negative exponent in {e}")
                if c != 0:
                    t[e] = c
        self.terms = t

    # construction helpers -------------------------------------------------
    def _new(self, terms):
        p = WPoly.__new__(WPoly)
        p.ring = self.ring
        p.terms = terms
        return p

    def _coerce(self, other) -> "WPoly":
        if isinstance(other, WPoly):
            if other.ring.key != self.ring.key:
                raise RingMismatch(f"{other.ring.names} vs {self.ring.names}")
            return other
        return self.ring.const(other)

    # arithmetic -------------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            v = t.get(e, 0) + c
            if v != 0:
                t[e] = v
            else:
                t.pop(e, None)
        return self._new(t)

    __radd__ = __add__

    def __neg__(self):
        return self._new({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, WPoly):
            c = as_scalar(other)
            if c == 0:
                return self._new({})
            return self._new({e: v * c for e, v in self.terms.items()})
        other = self._coerce(other)
        if self.terms and other.terms:
            if self.max_exponent() + other.max_exponent() > MAX_EXPONENT:
                raise OverflowError("exponent exceeds machine word")
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = t.get(e, 0) + c1 * c2
                if v != 0:
                    t[e] = v
                else:
                    t.pop(e, None)
        return self._new(t)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, WPoly):
            return self.ring.key == other.ring.key and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring.key, frozenset(self.terms.items())))

    # inspection -------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def max_exponent(self) -> int:
        return max((max(e) if e else 0 for e in self.terms), default=0)

    def constant_term(self):
        return self.terms.get((0,) * self.ring.nvars, Fraction(0))

    def degree(self):
        """Weighted degree if homogeneous, ANY_DEGREE for zero, else None."""
        if not self.terms:
            return ANY_DEGREE
        degs = {self.ring.mdeg(e) for e in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def sorted_terms(self) -> list[tuple[tuple, object]]:
        """Terms in descending lex order of exponents."""
        return sorted(self.terms.items(), key=lambda t: t[0], reverse=True)

    def leading_term(self):
        return max(self.terms.items(), key=lambda t: t[0])

    # calculus and substitution ---------------------------------------------
    def diff(self, name_or_index) -> "WPoly":
        i = name_or_index if isinstance(name_or_index, int) else self.ring.index(name_or_index)
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                t[ne] = c * e[i]
        return self._new(t)

    def set_zero(self, names: Iterable[str]) -> "WPoly":
        idx = [self.ring.index(n) for n in names]
        return self._new({e: c for e, c in self.terms.items() if all(e[i] == 0 for i in idx)})

    def embed(self, ring: WPolyRing) -> "WPoly":
        """Re-express in a ring whose variables contain ours (matched by name)."""
        pos = [ring.index(n) for n in self.ring.names]
        t = {}
        for e, c in self.terms.items():
            ne = [0] * ring.nvars
            for i, a in zip(pos, e):
                ne[i] = a
            t[tuple(ne)] = c
        return WPoly(ring, t)

    def with_ring(self, ring: WPolyRing) -> "WPoly":
        if ring.key != self.ring.key:
            raise RingMismatch("with_ring requires identical variables and weights")
        p = WPoly.__new__(WPoly)
        p.ring = ring
        p.terms = self.terms
        return p

    def divmod(self, f: "WPoly") -> tuple["WPoly", "WPoly"]:
        """Division by a single polynomial w.r.t. lex order.

        For a principal ideal the remainder is zero exactly when f divides
        self, since {f} is a Groebner basis of (f).
        """
        f = self._coerce(f)
        if f.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        lt_e, lt_c = f.leading_term()
        q: dict = {}
        r: dict = {}
        p = dict(self.terms)
        while p:
            e = max(p)
            c = p[e]
            if all(a >= b for a, b in zip(e, lt_e)):
                qe = tuple(a - b for a, b in zip(e, lt_e))
                qc = c / lt_c
                q[qe] = q.get(qe, 0) + qc
                for fe, fc in f.terms.items():
                    ne = tuple(a + b for a, b in zip(qe, fe))
                    v = p.get(ne, 0) - qc * fc
                    if v != 0:
                        p[ne] = v
                    else:
                        p.pop(ne, None)
            else:
                r[e] = c
                del p[e]
        return self._new({e: c for e, c in q.items() if c != 0}), self._new(r)

    def in_ideal(self, f: "WPoly | None" = None) -> bool:
        """True iff self lies in (f); f defaults to the ring's modulus."""
        if f is None:
            f = self.ring.modulus
        if self.is_zero():
            return True
        if f is None:
            return False
        return self.divmod(f)[1].is_zero()

    def __repr__(self):
        return f"WPoly({format_poly(self)})"

    def __str__(self):
        return format_poly(self)


def is_homogeneous(p: WPoly):
    """Common weighted degree of p, ANY_DEGREE for zero, None if mixed."""
    return p.degree()


def mul(p: WPoly, q: WPoly) -> WPoly:
    if p.ring.key != q.ring.key:
        raise RingMismatch(f"{p.ring.names} vs {q.ring.names}")
    return p * q


def _fmt_scalar(c) -> str:
    if isinstance(c, Fraction):
        return str(c)
    return f"({c.re}{'+' if c.im >= 0 else '-'}{abs(c.im)}*i)"


def format_poly(p: WPoly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for e, c in p.sorted_terms():
        mono = "*".join(
            n if a == 1 else f"{n}^{a}" for n, a in zip(p.ring.names, e) if a)
        if not mono:
            parts.append(_fmt_scalar(c))
        elif c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append("-" + mono)
        else:
            parts.append(f"{_fmt_scalar(c)}*{mono}")
    return " + ".join(parts).replace("+ -", "- ")


def parse_poly(ring: WPolyRing, text: str) -> WPoly:
    """Parse a small infix polynomial language: + - * ^ and integer/rational constants.

    Convenience for fixtures and demos; ``i`` denotes the imaginary unit
    unless it is a ring variable.
    """
    from .exact import I

    toks = _tokenize(text)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else None

    def take():
        nonlocal pos
        pos += 1
        return toks[pos - 1]

    def expr():
        neg = False
        if peek() in ("+", "-"):
            neg = take() == "-"
        acc = term()
        if neg:
            acc = -acc
        while peek() in ("+", "-"):
            op = take()
            t = term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term():
        acc = power()
        while peek() in ("*", "/"):
            op = take()
            f = power()
            if op == "*":
                acc = acc * f
            else:
                if f.degree() != 0 or len(f.terms) != 1:
                    raise ValueError("can only divide by a nonzero constant")
                acc = acc * (1 / f.constant_term())
        return acc

    def power():
        b = atom()
        if peek() == "^":
            take()
            k = take()
            if not k.isdigit():
                raise ValueError(f"bad exponent {k!r}")
            b = b ** int(k)
        return b

    def atom():
        t = take() if peek() is not None else None
        if t is None:
            raise ValueError("unexpected end of polynomial")
        if t == "(":
            v = expr()
            if take() != ")":
                raise ValueError("unbalanced parentheses")
            return v
        if t == "-":
            return -power()
        if t.isdigit():
            return ring.const(int(t))
        if t in ring.names:
            return ring.var(t)
        if t == "i":
            return WPoly(ring, {(0,) * ring.nvars: I})
        raise ValueError(f"unknown symbol {t!r}")

    v = expr()
    if pos != len(toks):
        raise ValueError(f"trailing input in {text!r}")
    return v


def _tokenize(text: str) -> list[str]:
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            out.append(text[i:j])
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] in "_'"):
                j += 1
            out.append(text[i:j])
            i = j
        elif ch in "+-*/^()":
            out.append(ch)
            i += 1
        else:
            raise ValueError(f"unexpected character {ch!r} in {text!r}")
    return out


# --------------------------------------------------------------------------
# derivations


class Derivation:
    """Homogeneous derivation of degree `degree`, given by the images of the variables.

    Over a ring with modulus f the derivation must preserve (f); that is
    checked at construction.
    """

    def __init__(self, ring: WPolyRing, images: Sequence[WPoly] | dict, degree: int, name: str = ""):
        if isinstance(images, dict):
            images = [images.get(n, ring.zero()) for n in ring.names]
        images = [ring.zero() if (isinstance(p, int) and p == 0) else p for p in images]
        if len(images) != ring.nvars:
            raise ValueError("need one image per variable")
        self.ring = ring
        self.images = tuple(img.with_ring(ring) if img.ring.key == ring.key else _raise_ring(img, ring)
                            for img in images)
        self.degree = int(degree)
        self.name = name
        for nm, w, img in zip(ring.names, ring.weights, self.images):
            d = img.degree()
            if d is None:
                raise NotHomogeneous(f"image of {nm} is not homogeneous")
            if d is not ANY_DEGREE and d != w + self.degree:
                raise NotHomogeneous(
                    f"image of {nm} has degree {d}, expected {w + self.degree}")
        if ring.modulus is not None:
            if not self(ring.modulus).in_ideal(ring.modulus):
                raise ValueError(f"derivation {name or ''} does not preserve the modulus")

    def __call__(self, p: WPoly) -> WPoly:
        return apply_derivation(self, p)

    def image(self, name: str) -> WPoly:
        return self.images[self.ring.index(name)]

    def __repr__(self):
        body = ", ".join(f"{n}->{img}" for n, img in zip(self.ring.names, self.images) if not img.is_zero())
        return f"Derivation({self.name or '?'}: {body}; degree {self.degree})"


def _raise_ring(img, ring):
    raise RingMismatch(f"image in ring {img.ring.names}, expected {ring.names}")


def apply_derivation(D: Derivation, p: WPoly) -> WPoly:
    """D(p) by the Leibniz rule: sum over variables of dp/dx_v * D(x_v)."""
    if p.ring.key != D.ring.key:
        raise RingMismatch(f"{p.ring.names} vs {D.ring.names}")
    out = p.ring.zero()
    for i, img in enumerate(D.images):
        if img.is_zero():
            continue
        dp = p.diff(i)
        if not dp.is_zero():
            out = out + dp * img
    return out


def bracket(D1: Derivation, D2: Derivation) -> Derivation:
    """Commutator [D1, D2] = D1 D2 - D2 D1."""
    imgs = [D1(b) - D2(a) for a, b in zip(D1.images, D2.images)]
    return Derivation(D1.ring, imgs, D1.degree + D2.degree,
                      name=f"[{D1.name},{D2.name}]")


def euler_derivation(ring: WPolyRing) -> Derivation:
    """Weighted Euler field sum w_v x_v d/dx_v (degree 0)."""
    imgs = [ring.var(n) * w for n, w in zip(ring.names, ring.weights)]
    return Derivation(ring, imgs, 0, name="E")


# --------------------------------------------------------------------------
# linear templates: polynomials whose coefficients are affine forms in unknowns


class Unknowns:
    """Registry of scalar unknowns; ids are allocated in call order."""

    def __init__(self):
        self.labels: list = []

    def new(self, label) -> int:
        self.labels.append(label)
        return len(self.labels) - 1

    def __len__(self):
        return len(self.labels)


CONST = -1  # key for the constant part of an affine form


class LinPoly:
    """Polynomial whose coefficients are affine forms {unknown id or CONST: scalar}."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: WPolyRing, terms: dict | None = None):
        self.ring = ring
        self.terms = terms or {}

    @classmethod
    def from_poly(cls, p: WPoly) -> "LinPoly":
        return cls(p.ring, {e: {CONST: c} for e, c in p.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def unknown_ids(self) -> set:
        return {u for form in self.terms.values() for u in form if u != CONST}

    def __add__(self, other: "LinPoly | WPoly") -> "LinPoly":
        if isinstance(other, WPoly):
            other = LinPoly.from_poly(other)
        t = {e: dict(f) for e, f in self.terms.items()}
        for e, form in other.terms.items():
            tgt = t.setdefault(e, {})
            for u, c in form.items():
                v = tgt.get(u, 0) + c
                if v != 0:
                    tgt[u] = v
                else:
                    tgt.pop(u, None)
            if not tgt:
                del t[e]
        return LinPoly(self.ring, t)

    def __neg__(self):
        return LinPoly(self.ring, {e: {u: -c for u, c in f.items()} for e, f in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, WPoly):
            other = LinPoly.from_poly(other)
        return self + (-other)

    def scale(self, p: WPoly) -> "LinPoly":
        """Multiply by a concrete polynomial."""
        t: dict = {}
        for e1, c1 in p.terms.items():
            for e2, form in self.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                tgt = t.setdefault(e, {})
                for u, c in form.items():
                    v = tgt.get(u, 0) + c1 * c
                    if v != 0:
                        tgt[u] = v
                    else:
                        tgt.pop(u, None)
        return LinPoly(self.ring, {e: f for e, f in t.items() if f})

    def evaluate(self, values: Sequence) -> WPoly:
        """Substitute scalar values for the unknowns."""
        t = {}
        for e, form in self.terms.items():
            v = 0
            for u, c in form.items():
                v = v + (c if u == CONST else c * values[u])
            if v != 0:
                t[e] = v
        return WPoly(self.ring, t)


def generic_homogeneous(ring: WPolyRing, d: int, unknowns: Unknowns, tag) -> LinPoly:
    """Sum of u_m * m over all monomials m of degree d, one fresh unknown per monomial.

    Unknowns are labelled (tag, exponent).  Empty when no monomial has
    degree d.
    """
    terms = {}
    for e in monomials_of_degree(ring, d):
        terms[e] = {unknowns.new((tag, e)): Fraction(1)}
    return LinPoly(ring, terms)
