import json
import random

import pytest

from precalc.algebroid import (
    AlgebroidSpec,
    LForm,
    PolyVec,
    SpecError,
    contract,
    de_rham,
    form_wedge,
    lie_derivative,
    load_spec,
    precalculus_defects,
    schouten,
    validate,
    wedge,
)
from precalc.samples import random_lform, random_polyvec
from precalc.scalar import Poly

FIXTURES = ("A1", "A2", "A3")


def sgn(e):
    return -1 if e % 2 else 1


def fn(spec, p):
    return PolyVec.function(spec, p)


def test_fixtures_validate():
    for name in FIXTURES + ("A1_1d",):
        assert validate(load_spec(name))["valid"], name


def test_broken_antisymmetry_is_reported():
    data = load_spec("A2").to_json()
    data["structure"].append({"i": 1, "j": 0, "k": 2, "coeff": "1"})
    report = validate(AlgebroidSpec.from_json(data))
    assert not report["valid"]
    assert {f["axiom"] for f in report["failures"]} >= {"antisymmetry"}


def test_shape_mismatch_raises():
    with pytest.raises(SpecError):
        AlgebroidSpec.from_json({"m": 1, "d": 2, "anchor": [["1"]]})


def test_schouten_examples():
    s1 = load_spec("A1_1d")
    y = Poly.var(1, 0)
    assert schouten(PolyVec.basis(s1, 0), fn(s1, y)) == fn(s1, Poly.const(1, 1))
    s2 = load_spec("A2")
    assert schouten(PolyVec.basis(s2, 0), PolyVec.basis(s2, 1)) == PolyVec.basis(s2, 2)
    s3 = load_spec("A3")
    y = Poly.var(1, 0)
    got = schouten(PolyVec.basis(s3, 0), PolyVec.basis(s3, 1, coeff=y))
    # rho(e0)(y) e1 + y [e0, e1] = e1 + y e0
    assert got == PolyVec.basis(s3, 1) + PolyVec.basis(s3, 0, coeff=y)


def test_wedge_examples():
    s = load_spec("A1")
    e0, e1 = PolyVec.basis(s, 0), PolyVec.basis(s, 1)
    assert wedge(e0, e1) == PolyVec.basis(s, 0, 1)
    assert wedge(e0, e0).is_zero()
    y0 = Poly.var(2, 0)
    assert wedge(PolyVec.basis(s, 0, coeff=y0), e1) == PolyVec.basis(s, 0, 1, coeff=y0)
    assert wedge(e1, e0) == -PolyVec.basis(s, 0, 1)


def test_de_rham_examples():
    s1 = load_spec("A1_1d")
    y = Poly.var(1, 0)
    assert de_rham(LForm.function(s1, y)) == LForm.basis(s1, 0)
    assert de_rham(de_rham(LForm.function(s1, y * y))).is_zero()
    s3 = load_spec("A3")
    # d(e0*)(e0, e1) = -e0*([e0, e1]) = -1
    assert de_rham(LForm.basis(s3, 0)).evaluate((0, 1)) == Poly.const(1, -1)


def test_contract_examples():
    s = load_spec("A1")
    one = LForm.function(s, Poly.const(2, 1))
    assert contract(PolyVec.basis(s, 0), LForm.basis(s, 0)) == one
    assert contract(PolyVec.basis(s, 0), LForm.basis(s, 1)).is_zero()
    # sign forced by (a u b) n w = a n (b n w)
    ab = contract(PolyVec.basis(s, 0, 1), LForm.basis(s, 0, 1))
    step = contract(PolyVec.basis(s, 0), contract(PolyVec.basis(s, 1), LForm.basis(s, 0, 1)))
    assert ab == step and not ab.is_zero()
    # over-contraction is zero
    assert contract(PolyVec.basis(s, 0, 1), LForm.basis(s, 0)).is_zero()
    # a function contracts by multiplication
    y0 = Poly.var(2, 0)
    assert contract(fn(s, y0), LForm.basis(s, 1)) == LForm.basis(s, 1, coeff=y0)


def test_lie_derivative_examples():
    s = load_spec("A1_1d")
    y = Poly.var(1, 0)
    e = PolyVec.basis(s, 0)
    assert lie_derivative(e, LForm.function(s, y)) == LForm.function(s, Poly.const(1, 1))
    assert lie_derivative(e, LForm.basis(s, 0)).is_zero()
    assert lie_derivative(PolyVec.basis(s, 0, coeff=y), de_rham(LForm.function(s, y))) == LForm.basis(s, 0)


def _triples(spec, rng, n):
    for _ in range(n):
        yield tuple(random_polyvec(rng, spec, rng.randint(0, min(3, spec.d))) for _ in range(3))


@pytest.mark.parametrize("name", FIXTURES)
def test_schouten_graded_lie(name):
    spec = load_spec(name)
    rng = random.Random(name)
    for a, b, c in _triples(spec, rng, 50):
        da, db = a.degree(), b.degree()
        assert schouten(a, b) == schouten(b, a).scale(-sgn(da * db))
        lhs = schouten(a, schouten(b, c))
        rhs = schouten(schouten(a, b), c) + schouten(b, schouten(a, c)).scale(sgn(da * db))
        assert lhs == rhs


@pytest.mark.parametrize("name", FIXTURES)
def test_wedge_and_leibniz(name):
    spec = load_spec(name)
    rng = random.Random(name + "w")
    for a, b, c in _triples(spec, rng, 30):
        da, db = a.degree(), b.degree()
        assert wedge(a, b) == wedge(b, a).scale(sgn((da + 1) * (db + 1)))
        assert wedge(a, wedge(b, c)) == wedge(wedge(a, b), c)
        lhs = schouten(a, wedge(b, c))
        rhs = wedge(schouten(a, b), c) + wedge(b, schouten(a, c)).scale(sgn(da * (db + 1)))
        assert lhs == rhs


@pytest.mark.parametrize("name", FIXTURES)
def test_de_rham_squares_to_zero(name):
    spec = load_spec(name)
    rng = random.Random(name + "d")
    for _ in range(30):
        w = random_lform(rng, spec, rng.randint(0, spec.d))
        assert de_rham(de_rham(w)).is_zero()
        v = random_lform(rng, spec, rng.randint(0, spec.d))
        k = -w.degree()
        assert de_rham(form_wedge(w, v)) == form_wedge(de_rham(w), v) + form_wedge(w, de_rham(v)).scale(sgn(k))


@pytest.mark.parametrize("name", FIXTURES)
def test_precalculus_axioms(name):
    spec = load_spec(name)
    rng = random.Random(name + "p")
    for _ in range(50):
        a = random_polyvec(rng, spec, rng.randint(0, min(3, spec.d)))
        b = random_polyvec(rng, spec, rng.randint(0, min(3, spec.d)))
        w = random_lform(rng, spec, rng.randint(0, spec.d))
        for key, v in precalculus_defects(a, b, w).items():
            assert v.is_zero(), key


def test_precalculus_negative_control():
    spec = load_spec("A3")
    rng = random.Random(5)
    caught = set()
    for _ in range(40):
        a = random_polyvec(rng, spec, rng.randint(1, 2))
        b = random_polyvec(rng, spec, rng.randint(1, 2))
        w = random_lform(rng, spec, rng.randint(1, 2))
        for key in ("contraction-lie", "lie-of-wedge", "contraction-module", "lie-module"):
            if not precalculus_defects(a, b, w, flip=key)[key].is_zero():
                caught.add(key)
    assert caught == {"contraction-lie", "lie-of-wedge", "contraction-module", "lie-module"}


def test_spec_json_round_trip(tmp_path):
    spec = load_spec("A3")
    path = tmp_path / "a3.json"
    path.write_text(json.dumps(spec.to_json()))
    assert load_spec(str(path)) == spec
