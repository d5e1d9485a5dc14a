"""Seeded random samples used by the identity suite and the tests."""

from __future__ import annotations

import random
from itertools import combinations

from .scalar import Poly


def monomials(m: int, max_deg: int) -> list[tuple]:
    out = [()] if m == 0 else []
    if m == 0:
        return out

    def rec(prefix, left, k):
        if k == m - 1:
            for e in range(left + 1):
                out.append(prefix + (e,))
            return
        for e in range(left + 1):
            rec(prefix + (e,), left - e, k + 1)

    rec((), max_deg, 0)
    return out


def random_poly(rng: random.Random, m: int, max_deg: int = 2, nterms: int = 3, coeff: int = 3) -> Poly:
    mons = monomials(m, max_deg)
    t = {}
    for _ in range(nterms):
        c = rng.randint(-coeff, coeff)
        if c:
            e = rng.choice(mons)
            t[e] = t.get(e, 0) + c
    return Poly(m, t)


def random_polyvec(rng, spec, nfactors: int, max_deg: int = 2, nterms: int = 2):
    from .algebroid import PolyVec

    combos = list(combinations(range(spec.d), nfactors))
    if not combos:
        return PolyVec(spec, {})
    t = {}
    for _ in range(nterms):
        I = rng.choice(combos)
        t[I] = t.get(I, spec.zero()) + random_poly(rng, spec.m, max_deg)
    return PolyVec(spec, t)


def random_lform(rng, spec, k: int, max_deg: int = 2, nterms: int = 2):
    from .algebroid import LForm

    combos = list(combinations(range(spec.d), k))
    if not combos:
        return LForm(spec, {})
    t = {}
    for _ in range(nterms):
        I = rng.choice(combos)
        t[I] = t.get(I, spec.zero()) + random_poly(rng, spec.m, max_deg)
    return LForm(spec, t)


def random_polydop(rng, spec, arity: int, filtration: int = 1, nterms: int = 2):
    """Homogeneous poly-differential operator whose slots have PBW order 1..filtration."""
    from .dpoly import PolyDOp
    from .uea import pbw_basis

    if arity == 0:
        return PolyDOp(spec, {(): random_poly(rng, spec.m, 1) or Poly.const(spec.m, 1)})
    basis = [b for b in pbw_basis(spec.d, filtration) if sum(b) >= 1]
    t = {}
    for _ in range(nterms):
        key = tuple(rng.choice(basis) for _ in range(arity))
        t[key] = t.get(key, spec.zero()) + random_poly(rng, spec.m, 1)
    return PolyDOp(spec, t)


def random_chain(rng, spec, t: int, order: int, density: float = 0.5):
    from .chains import Chain, tuples_upto

    tab = {}
    for k in tuples_upto(spec.d, t, order):
        if rng.random() < density:
            tab[k] = random_poly(rng, spec.m, 1, 2)
    return Chain(spec, t, order, tab)
