"""Hochschild-Kostant-Rosenberg maps between poly-vectors/forms and poly-differential operators/chains."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations
from math import factorial

from .algebroid import LForm, PolyVec
from .chains import Chain
from .dpoly import PolyDOp
from .scalar import koszul_sign, sort_sign
from .uea import OrderError, unit_index


def _hkr_sign(p: int) -> int:
    return -1 if (p * (p - 1) // 2) % 2 else 1


def hkr_cochain(g: PolyVec) -> PolyDOp:
    """e_{i_1} ^ ... ^ e_{i_p} -> (-1)^{p(p-1)/2} / p! sum_s sgn(s) e_{i_s(1)} (x) ... (x) e_{i_s(p)}, R-linearly."""
    spec = g.spec
    terms: dict = {}
    for I, f in g.terms.items():
        p = len(I)
        c = Fraction(_hkr_sign(p), factorial(p))
        for perm in permutations(range(p)):
            key = tuple(unit_index(spec.d, I[k]) for k in perm)
            v = f.scale(c * koszul_sign(perm, [1] * p))
            terms[key] = terms[key] + v if key in terms else v
    return PolyDOp(spec, terms)


def antisym(D: PolyDOp) -> PolyVec:
    """Left inverse of hkr_cochain: keep slots of PBW order exactly one, then wedge them with the HKR sign."""
    spec = D.spec
    out: dict = {}
    for k, c in D.terms.items():
        if any(sum(a) != 1 for a in k):
            continue
        idx = tuple(a.index(1) for a in k)
        s, key = sort_sign(idx)
        if not s:
            continue
        v = c.scale(s * _hkr_sign(len(k)))
        out[key] = out[key] + v if key in out else v
    return PolyVec(spec, out)


def hkr_chain(a: Chain) -> LForm:
    """The form whose value on e_{i_1} ^ ... ^ e_{i_p} is a(hkr_cochain(e_{i_1} ^ ... ^ e_{i_p}))."""
    spec = a.spec
    if a.t == 0:
        return LForm(spec, {(): a.value(())})
    if a.order < a.t:
        raise OrderError(f"hkr of a degree {-a.t} chain needs order >= {a.t}, got {a.order}")
    out = {}
    for I in combinations(range(spec.d), a.t):
        v = a.evaluate(hkr_cochain(PolyVec.basis(spec, *I)))
        if v:
            out[I] = v
    return LForm(spec, out)
