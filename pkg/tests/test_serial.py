import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mcmconn import serial
from mcmconn.catalog import (LIE_VARIANTS, cusp_fixture, module_factorization, threefold_lie,
                             threefold_modules, zero_dim_modules)
from mcmconn.exact import GaussianRational
from mcmconn.serial import SerializationError


def _fixtures():
    out = []
    for kind, ns in (("A", range(1, 11)), ("D", range(4, 11))):
        for n in ns:
            variants = ("standard",) if kind == "A" else LIE_VARIANTS
            for rec in threefold_modules(kind, n):
                for v in variants:
                    out.append((f"{kind}{n}-{rec.ident}-{v}", rec.presentation, threefold_lie(kind, n, v), rec))
    g, mods = zero_dim_modules(6)
    out += [(f"zero-{m.name}", m, g, None) for m in mods]
    g, m = cusp_fixture()
    out.append(("cusp", m, g, None))
    return out


FIXTURES = _fixtures()


def test_every_fixture_round_trips_byte_identically():
    for key, p, g, _ in FIXTURES:
        text = serial.dumps(serial.connection_problem_to_json(p, g))
        p2, g2 = serial.connection_problem_from_json(serial.loads(text))
        assert p2 == p, key
        assert serial.dumps(serial.connection_problem_to_json(p2, g2)) == text, key


def test_factorizations_round_trip():
    for key, _, _, rec in FIXTURES:
        if rec is None or not key.endswith("standard"):
            continue
        mf = module_factorization(rec)
        text = serial.dumps(serial.mf_to_json(mf))
        assert serial.mf_from_json(serial.loads(text)) == mf
        assert serial.dumps(serial.mf_to_json(serial.mf_from_json(serial.loads(text)))) == text


def test_one_third():
    assert serial.parse_coeff("1/3") == Fraction(1, 3)
    assert serial.parse_coeff("-4/6") == Fraction(-2, 3)


@pytest.mark.parametrize("text, value", [
    ("i", GaussianRational(0, 1)),
    ("-i", GaussianRational(0, -1)),
    ("2+3i", GaussianRational(2, 3)),
    ("3-2i/6", GaussianRational(Fraction(1, 2), Fraction(-1, 3))),
    ("5i/7", GaussianRational(0, Fraction(5, 7))),
    ("0+5i/7", GaussianRational(0, Fraction(5, 7))),
    ("7", Fraction(7)),
])
def test_gaussian_coefficients(text, value):
    assert serial.parse_coeff(text) == value


fracs = st.fractions(max_denominator=50).filter(lambda q: abs(q) < 1000)


@given(fracs, fracs)
def test_coefficient_round_trip(a, b):
    c = GaussianRational.make(a, b)
    assert serial.parse_coeff(serial.format_coeff(c)) == c


@pytest.mark.parametrize("text", ["", "1/0", "x", "1.5", "2+i+i", "i3", "1/2+i", "2+3i/0"])
def test_bad_coefficients(text):
    with pytest.raises(SerializationError):
        serial.parse_coeff(text, "c")


def _cusp_json():
    g, m = cusp_fixture()
    return serial.connection_problem_to_json(m, g)


def test_negative_weight_reports_field_path():
    data = _cusp_json()
    data["presentation"]["ring"]["weights"][0] = -1
    with pytest.raises(SerializationError) as exc:
        serial.connection_problem_from_json(data)
    assert "weights[0]" in str(exc.value)
    assert "positive" in str(exc.value)


@pytest.mark.parametrize("mutate, where", [
    (lambda d: d["presentation"].pop("matrix"), "matrix"),
    (lambda d: d["presentation"].update(deg_target=[0]), "presentation"),
    (lambda d: d["presentation"]["matrix"][0][0].append(["1", [9]]), "matrix[0][0]"),
    (lambda d: d["presentation"]["ring"].update(vars=["x", "x"]), "vars"),
])
def test_schema_errors(mutate, where):
    data = _cusp_json()
    mutate(data)
    with pytest.raises(SerializationError) as exc:
        serial.connection_problem_from_json(data)
    assert where in str(exc.value)


def test_loads_reports_position():
    with pytest.raises(SerializationError) as exc:
        serial.loads('{\n  "a": 1,\n  oops\n}')
    assert "line 3" in str(exc.value)


def test_dumps_is_canonical():
    text = serial.dumps({"b": 1, "a": [1, 2]})
    assert text == json.dumps({"a": [1, 2], "b": 1}, sort_keys=True, indent=2) + "\n"


def test_polynomial_term_order():
    g, m = cusp_fixture()
    data = serial.poly_to_json(m.f)
    assert [t[1] for t in data] == sorted((t[1] for t in data), reverse=True)
