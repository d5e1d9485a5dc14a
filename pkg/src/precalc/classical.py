"""Classical Hochschild calculus of the polynomial ring R, used as an independent oracle.

Cochains are multilinear callables on polynomials; chains are formal sums of tuples
(a_0 | a_1 | ... | a_t) of polynomials. Nothing here touches PBW tables or jets.
"""

from __future__ import annotations

from itertools import combinations
from typing import Callable, Mapping, Sequence

from .algebroid import AlgebroidSpec
from .chains import Chain, tuples_upto
from .dpoly import MultiDiffOp, _sgn
from .scalar import Poly, as_rational
from .uea import apply_monomial


def cochain(arity: int, fn: Callable[[Sequence[Poly]], Poly]) -> MultiDiffOp:
    return MultiDiffOp(arity, fn)


def c_mu() -> MultiDiffOp:
    return MultiDiffOp(2, lambda a: a[0] * a[1])


def c_brace(P: MultiDiffOp, Qs: Sequence[MultiDiffOp]) -> MultiDiffOp:
    """P{Q_1..Q_q}: insert the Q's, in order, into slots of P; sign (-1)^{sum |Q_k| (position - 1)}."""
    q = len(Qs)
    degs = [Q.arity - 1 for Q in Qs]
    arity = P.arity + sum(degs)
    if q == 0:
        return P

    def fn(args):
        total = None
        for slots in combinations(range(P.arity), q):
            exp = 0
            inner = []
            pos = 0
            k = 0
            for s in range(P.arity):
                if k < q and slots[k] == s:
                    exp += degs[k] * pos
                    Q = Qs[k]
                    inner.append(Q(*args[pos:pos + Q.arity]))
                    pos += Q.arity
                    k += 1
                else:
                    inner.append(args[pos])
                    pos += 1
            v = P(*inner)
            if exp % 2:
                v = -v
            total = v if total is None else total + v
        return total

    return MultiDiffOp(arity, fn)


def c_add(A: MultiDiffOp, B: MultiDiffOp, sb: int = 1) -> MultiDiffOp:
    if A.arity != B.arity:
        raise ValueError("arity mismatch")
    return MultiDiffOp(A.arity, lambda a: A(*a) + B(*a) * sb)


def c_bracket(D1: MultiDiffOp, D2: MultiDiffOp) -> MultiDiffOp:
    d1, d2 = D1.arity - 1, D2.arity - 1
    return c_add(c_brace(D1, [D2]), c_brace(D2, [D1]), -_sgn(d1 * d2))


def c_cup(D1: MultiDiffOp, D2: MultiDiffOp) -> MultiDiffOp:
    s = _sgn((D1.arity - 2) * (D2.arity - 2))
    n1 = D1.arity
    return MultiDiffOp(n1 + D2.arity, lambda a: D1(*a[:n1]) * D2(*a[n1:]) * s)


def c_dhoch(D: MultiDiffOp) -> MultiDiffOp:
    return c_bracket(c_mu(), D)


class CChain:
    """Formal sum of (a_0 | ... | a_t) with rational coefficients."""

    def __init__(self, m: int, t: int, terms: Mapping[tuple, object] | None = None):
        self.m = m
        self.t = t
        self.terms: dict = {}
        for k, c in (terms or {}).items():
            self._acc(k, as_rational(c))

    def _acc(self, k: tuple, c):
        if len(k) != self.t + 1:
            raise ValueError("tuple length does not match chain degree")
        if not c or any(not p for p in k):
            return
        v = self.terms.get(k, 0) + c
        if v:
            self.terms[k] = v
        else:
            self.terms.pop(k, None)

    def __add__(self, other: "CChain") -> "CChain":
        out = CChain(self.m, self.t, self.terms)
        for k, c in other.terms.items():
            out._acc(k, c)
        return out

    def scale(self, c) -> "CChain":
        c = as_rational(c)
        return CChain(self.m, self.t, {k: v * c for k, v in self.terms.items()})


def iota(P: MultiDiffOp, c: CChain) -> CChain:
    """(a_0 P(a_1..a_m) | a_{m+1} | ... | a_t)."""
    n = P.arity
    if n > c.t:
        return CChain(c.m, 0)
    out = CChain(c.m, c.t - n)
    for k, v in c.terms.items():
        out._acc((k[0] * P(*k[1:1 + n]),) + k[1 + n:], v)
    return out


def lie(P: MultiDiffOp, c: CChain) -> CChain:
    """L_P on classical chains. The first sum starts at i = 1; its i = 0 term is the l = t+1 term of the
    cyclic sum and is counted there."""
    n = P.arity
    t = c.t
    if n > t + 1:
        return CChain(c.m, 0)
    out = CChain(c.m, t - n + 1)
    for k, v in c.terms.items():
        for i in range(1, t - n + 2):
            new = k[:i] + (P(*k[i:i + n]),) + k[i + n:]
            out._acc(new, v * _sgn((n - 1) * i))
        for l in range(t - n + 2, t + 2):
            args = k[l:] + k[:n - t + l - 1]
            new = (P(*args),) + k[n - t + l - 1:l]
            out._acc(new, v * _sgn(l * t))
    return out


def b(c: CChain) -> CChain:
    return lie(c_mu(), c)


def transport(spec: AlgebroidSpec, c: CChain, order: int) -> Chain:
    """(a_0 | ... | a_t) -> the functional D_1..D_t -> a_0 prod_i D_i(a_i), truncated at the given order."""
    table: dict = {}
    for key in tuples_upto(spec.d, c.t, order):
        tot = spec.zero()
        for k, v in c.terms.items():
            val = k[0]
            for alpha, r in zip(key, k[1:]):
                val = val * apply_monomial(spec, alpha, r)
                if not val:
                    break
            if val:
                tot = tot + val.scale(v)
        if tot:
            table[key] = tot
    return Chain(spec, c.t, order, table)
