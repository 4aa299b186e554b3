"""JSON serialization of rings, polynomials, presentations, factorizations and Lie data.

A polynomial is a list of terms [coefficient, exponents], sorted by
exponent vector in descending lex order, with no zero coefficients.
Coefficients are strings: "p" or "p/q" for rationals, "a+bi" or "a+bi/q"
(meaning (a + b i)/q) for Gaussian rationals.  Serializing and parsing
back gives the identical structure, and serializing that gives the
identical text.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from math import lcm

from .exact import GaussianRational
from .gradconn import LieRinehartSpec
from .matfac import GradedPresentation, MatrixFactorization
from .wpoly import Derivation, WPoly, WPolyRing


class SerializationError(ValueError):
    """Malformed document; the message starts with the offending field path."""

    def __init__(self, path: str, msg: str):
        super().__init__(f"{path or '<root>'}: {msg}")
        self.path = path


_RAT = re.compile(r"^(-?\d+)(?:/(\d+))?$")
_GAUSS = re.compile(r"^(?:(-?\d+)(?=[+-]))?([+-]?\d*)i(?:/(\d+))?$")


def format_coeff(c) -> str:
    if isinstance(c, GaussianRational) and c.im != 0:
        q = lcm(c.re.denominator, c.im.denominator)
        a, b = c.re * q, c.im * q
        s = f"{a}{'+' if b >= 0 else '-'}{abs(b)}i"
        return s if q == 1 else f"{s}/{q}"
    c = Fraction(c.re if isinstance(c, GaussianRational) else c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def parse_coeff(text, path: str = ""):
    if not isinstance(text, str):
        raise SerializationError(path, f"coefficient must be a string, got {type(text).__name__}")
    m = _RAT.match(text)
    if m:
        num, den = int(m.group(1)), int(m.group(2) or 1)
        if den == 0:
            raise SerializationError(path, "zero denominator")
        return Fraction(num, den)
    m = _GAUSS.match(text)
    if m:
        a = int(m.group(1) or 0)
        bs = m.group(2)
        b = int(bs + "1") if bs in ("", "+", "-") else int(bs)
        q = int(m.group(3) or 1)
        if q == 0:
            raise SerializationError(path, "zero denominator")
        return GaussianRational.make(Fraction(a, q), Fraction(b, q))
    raise SerializationError(path, f"bad coefficient {text!r}")


def poly_to_json(p: WPoly) -> list:
    return [[format_coeff(c), list(e)] for e, c in p.sorted_terms()]


def poly_from_json(ring: WPolyRing, data, path: str) -> WPoly:
    if not isinstance(data, list):
        raise SerializationError(path, "polynomial must be a list of [coefficient, exponents] terms")
    terms: dict = {}
    for k, t in enumerate(data):
        tp = f"{path}[{k}]"
        if not (isinstance(t, list) and len(t) == 2):
            raise SerializationError(tp, "term must be [coefficient, exponents]")
        c = parse_coeff(t[0], f"{tp}[0]")
        e = t[1]
        if not (isinstance(e, list) and len(e) == ring.nvars
                and all(isinstance(x, int) and not isinstance(x, bool) and x >= 0 for x in e)):
            raise SerializationError(f"{tp}[1]", f"exponents must be {ring.nvars} non-negative integers")
        e = tuple(e)
        terms[e] = terms.get(e, 0) + c
    return WPoly(ring, {e: c for e, c in terms.items() if c != 0})


def _require(d, key, path, kind=None):
    if not isinstance(d, dict):
        raise SerializationError(path, "expected an object")
    if key not in d:
        raise SerializationError(f"{path}.{key}" if path else key, "missing field")
    v = d[key]
    if kind is not None and not isinstance(v, kind):
        raise SerializationError(f"{path}.{key}" if path else key, f"expected {kind.__name__}")
    return v


def _int_list(v, path) -> list:
    if not isinstance(v, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in v):
        raise SerializationError(path, "expected a list of integers")
    return v


# --------------------------------------------------------------------------
# rings


def ring_to_json(ring: WPolyRing) -> dict:
    return {"vars": list(ring.names), "weights": list(ring.weights),
            "modulus": None if ring.modulus is None else poly_to_json(ring.modulus)}


def ring_from_json(data, path: str = "ring") -> WPolyRing:
    names = _require(data, "vars", path, list)
    if not all(isinstance(n, str) and re.match(r"^[A-Za-z_][A-Za-z0-9_']*$", n) for n in names):
        raise SerializationError(f"{path}.vars", "variable names must be identifiers")
    if len(set(names)) != len(names):
        raise SerializationError(f"{path}.vars", "duplicate variable name")
    weights = _int_list(_require(data, "weights", path), f"{path}.weights")
    if len(weights) != len(names):
        raise SerializationError(f"{path}.weights", "need one weight per variable")
    for k, w in enumerate(weights):
        if w <= 0:
            raise SerializationError(f"{path}.weights[{k}]", f"weight must be positive, got {w}")
    ring = WPolyRing(names, weights)
    mod = data.get("modulus")
    if mod is not None:
        f = poly_from_json(ring, mod, f"{path}.modulus")
        if f.degree() is None:
            raise SerializationError(f"{path}.modulus", "modulus is not weighted-homogeneous")
        if f.is_zero():
            raise SerializationError(f"{path}.modulus", "modulus is zero")
        ring = ring.with_modulus(f)
    return ring


def _matrix_to_json(m) -> list:
    return [[poly_to_json(e) for e in r] for r in m]


def _matrix_from_json(ring, data, path) -> list:
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise SerializationError(path, "matrix must be a list of rows")
    return [[poly_from_json(ring, e, f"{path}[{i}][{j}]") for j, e in enumerate(r)]
            for i, r in enumerate(data)]


# --------------------------------------------------------------------------
# presentations, factorizations


def presentation_to_json(p: GradedPresentation) -> dict:
    return {"ring": ring_to_json(p.ring), "matrix": _matrix_to_json(p.d0),
            "deg_target": list(p.deg_target), "deg_source": list(p.deg_source), "name": p.name}


def presentation_from_json(data, path: str = "presentation") -> GradedPresentation:
    ring = ring_from_json(_require(data, "ring", path), f"{path}.ring")
    if ring.modulus is None:
        raise SerializationError(f"{path}.ring.modulus", "a presentation needs the hypersurface equation")
    m = _matrix_from_json(ring, _require(data, "matrix", path), f"{path}.matrix")
    tgt = _int_list(_require(data, "deg_target", path), f"{path}.deg_target")
    src = _int_list(_require(data, "deg_source", path), f"{path}.deg_source")
    name = data.get("name", "")
    if not isinstance(name, str):
        raise SerializationError(f"{path}.name", "expected a string")
    if len(m) != len(tgt):
        raise SerializationError(f"{path}.matrix", f"{len(m)} rows but {len(tgt)} target degrees")
    for i, r in enumerate(m):
        if len(r) != len(src):
            raise SerializationError(f"{path}.matrix[{i}]", f"{len(r)} entries but {len(src)} source degrees")
    try:
        return GradedPresentation(ring, m, tuple(tgt), tuple(src), name=name)
    except ValueError as e:
        raise SerializationError(f"{path}.matrix", str(e)) from e


def mf_to_json(mf: MatrixFactorization) -> dict:
    return {"ring": ring_to_json(mf.ring), "f": poly_to_json(mf.f),
            "phi": _matrix_to_json(mf.phi), "psi": _matrix_to_json(mf.psi)}


def mf_from_json(data, path: str = "mf") -> MatrixFactorization:
    ring = ring_from_json(_require(data, "ring", path), f"{path}.ring")
    amb = ring.ambient()
    f = poly_from_json(amb, _require(data, "f", path), f"{path}.f")
    if ring.modulus is not None and ring.modulus.with_ring(amb) != f:
        raise SerializationError(f"{path}.ring.modulus", "differs from f")
    phi = _matrix_from_json(amb, _require(data, "phi", path), f"{path}.phi")
    psi = _matrix_from_json(amb, _require(data, "psi", path), f"{path}.psi")
    k = len(phi)
    for nm, m in (("phi", phi), ("psi", psi)):
        if len(m) != k or any(len(r) != k for r in m):
            raise SerializationError(f"{path}.{nm}", f"expected a {k} x {k} matrix")
    return MatrixFactorization(amb, f, phi, psi)


# --------------------------------------------------------------------------
# Lie-Rinehart data


def derivation_to_json(D: Derivation) -> dict:
    return {"name": D.name, "degree": D.degree,
            "images": {n: poly_to_json(img) for n, img in zip(D.ring.names, D.images)
                       if not img.is_zero()}}


def derivation_from_json(ring: WPolyRing, data, path: str) -> Derivation:
    deg = _require(data, "degree", path, int)
    imgs = _require(data, "images", path, dict)
    for k in imgs:
        if k not in ring.names:
            raise SerializationError(f"{path}.images.{k}", "not a ring variable")
    images = {k: poly_from_json(ring, v, f"{path}.images.{k}") for k, v in imgs.items()}
    name = data.get("name", "")
    try:
        return Derivation(ring, images, deg, name)
    except ValueError as e:
        raise SerializationError(path, str(e)) from e


def lie_to_json(g: LieRinehartSpec) -> dict:
    out = {"generators": [derivation_to_json(D) for D in g.generators],
           "relations": [[poly_to_json(a) for a in r] for r in g.relations],
           "name": g.name}
    if g.brackets is not None:
        out["brackets"] = [{"pair": [s, t], "coefficients": [poly_to_json(a) for a in b]}
                           for (s, t), b in sorted(g.brackets.items())]
    return out


def lie_from_json(ring: WPolyRing, data, path: str = "lie") -> LieRinehartSpec:
    gens = _require(data, "generators", path, list)
    Ds = [derivation_from_json(ring, d, f"{path}.generators[{k}]") for k, d in enumerate(gens)]
    rels_raw = data.get("relations", [])
    if not isinstance(rels_raw, list):
        raise SerializationError(f"{path}.relations", "expected a list")
    rels = []
    for k, r in enumerate(rels_raw):
        if not isinstance(r, list) or len(r) != len(Ds):
            raise SerializationError(f"{path}.relations[{k}]", "need one coefficient per generator")
        rels.append([poly_from_json(ring, a, f"{path}.relations[{k}][{j}]") for j, a in enumerate(r)])
    try:
        g = LieRinehartSpec(ring, Ds, rels, name=data.get("name", ""))
    except ValueError as e:
        raise SerializationError(f"{path}.relations", str(e)) from e
    if "brackets" in data:
        br = data["brackets"]
        if not isinstance(br, list):
            raise SerializationError(f"{path}.brackets", "expected a list")
        g.brackets = {}
        for k, entry in enumerate(br):
            bp = f"{path}.brackets[{k}]"
            pair = _int_list(_require(entry, "pair", bp), f"{bp}.pair")
            if len(pair) != 2 or not 0 <= pair[0] < pair[1] < len(Ds):
                raise SerializationError(f"{bp}.pair", "need [s, t] with 0 <= s < t < #generators")
            coeffs = _require(entry, "coefficients", bp, list)
            if len(coeffs) != len(Ds):
                raise SerializationError(f"{bp}.coefficients", "need one coefficient per generator")
            cs = [poly_from_json(ring, a, f"{bp}.coefficients[{j}]") for j, a in enumerate(coeffs)]
            try:
                g.add_bracket(pair[0], pair[1], cs)
            except ValueError as e:
                raise SerializationError(bp, str(e)) from e
    return g


def connection_problem_to_json(p: GradedPresentation, g: LieRinehartSpec) -> dict:
    return {"presentation": presentation_to_json(p), "lie": lie_to_json(g)}


def connection_problem_from_json(data) -> tuple[GradedPresentation, LieRinehartSpec]:
    p = presentation_from_json(_require(data, "presentation", ""), "presentation")
    g = lie_from_json(p.ring, _require(data, "lie", ""), "lie")
    return p, g


# --------------------------------------------------------------------------
# text


def dumps(obj) -> str:
    """Canonical JSON text (sorted keys, two-space indent, trailing newline)."""
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise SerializationError(f"line {e.lineno}, column {e.colno}", e.msg) from e


def load_file(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise SerializationError(path, e.strerror or str(e)) from e
    except UnicodeDecodeError as e:
        raise SerializationError(path, "not UTF-8") from e
    return loads(text)
