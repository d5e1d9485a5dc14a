import random
from fractions import Fraction

import pytest

from precalc.algebroid import LForm, PolyVec, load_spec, wedge
from precalc.chains import Chain, b_h
from precalc.dpoly import PolyDOp, brace, cup, d_hoch
from precalc.hkr import antisym, hkr_chain, hkr_cochain
from precalc.samples import random_chain, random_poly, random_polyvec
from precalc.scalar import Poly
from precalc.uea import OrderError

FIXTURES = ("A1", "A2", "A3")


def sgn(e):
    return -1 if e % 2 else 1


def test_hkr_examples():
    s = load_spec("A2")
    half = Poly.const(s.m, Fraction(1, 2))
    assert hkr_cochain(PolyVec.basis(s, 1)) == PolyDOp.gens(s, 1)
    assert hkr_cochain(PolyVec.basis(s, 0, 1)) == PolyDOp.gens(s, 0, 1, coeff=-half) + PolyDOp.gens(s, 1, 0, coeff=half)
    r = random_poly(random.Random(1), s.m, 2, 3)
    assert hkr_cochain(PolyVec.function(s, r)) == PolyDOp.function(s, r)


def test_hkr_chain_examples():
    s = load_spec("A1")
    r = Poly.var(s.m, 0)
    assert hkr_chain(Chain.function(s, r, 2)) == LForm(s, {(): r})
    e1 = Chain(s, 1, 1, {((1, 0),): 1})
    assert hkr_chain(e1) == LForm(s, {(0,): Poly.const(s.m, 1)})
    with pytest.raises(OrderError):
        hkr_chain(Chain(s, 2, 1))


def test_antisym_kills_symmetric_and_mu():
    s = load_spec("A2")
    assert antisym(PolyDOp.gens(s, 0, 1) + PolyDOp.gens(s, 1, 0)).is_zero()
    assert antisym(PolyDOp.mu(s)).is_zero()
    assert antisym(PolyDOp.slot(s, (2, 0, 0))).is_zero()


@pytest.mark.parametrize("name", FIXTURES)
def test_closed_and_retracted(name):
    s = load_spec(name)
    rng = random.Random(name)
    for _ in range(50):
        g = random_polyvec(rng, s, rng.randint(0, min(3, s.d)))
        H = hkr_cochain(g)
        assert d_hoch(H).is_zero()
        assert antisym(H) == g


@pytest.mark.parametrize("name", FIXTURES)
def test_chain_map_to_zero_differential(name):
    s = load_spec(name)
    rng = random.Random(name + "c")
    for _ in range(30):
        t = rng.randint(1, min(3, s.d + 1))
        a = random_chain(rng, s, t, t, 0.6)
        assert hkr_chain(b_h(a)).is_zero()


@pytest.mark.parametrize("name", FIXTURES)
def test_cup_defect_on_hkr_cocycles(name):
    s = load_spec(name)
    rng = random.Random(name + "u")
    odd_seen = False
    for _ in range(20):
        g1 = random_polyvec(rng, s, rng.randint(0, min(2, s.d)))
        g2 = random_polyvec(rng, s, rng.randint(0, min(2, s.d)))
        D1, D2 = hkr_cochain(g1), hkr_cochain(g2)
        d1, d2 = D1.degree(), D2.degree()
        defect = cup(D1, D2) - cup(D2, D1).scale(sgn((d1 - 1) * (d2 - 1)))
        corr = d_hoch(brace(D1, [D2]))
        assert defect == corr.scale(sgn(d1))
        if d1 % 2 and not corr.is_zero():
            odd_seen = True
            assert defect != corr
        assert antisym(cup(D1, D2)) == wedge(g1, g2)
    assert odd_seen
