"""Poly-differential operators: braces, Gerstenhaber bracket, cup product and the Hochschild differential.

A PolyDOp of arity n+1 has shifted degree n; arity 0 is a function (degree -1).
"""

from __future__ import annotations

from itertools import combinations
from typing import Callable, Mapping, Sequence

from .algebroid import AlgebroidSpec, SpecError
from .scalar import Poly
from .uea import (
    UTensor,
    _add,
    apply_monomial,
    iterated_coproduct,
    monomial_product,
    mul_terms,
    unit_index,
)


class PolyDOp:
    """Sum of tensors r (e^a_1 (x) ... (x) e^a_p) over R, possibly of mixed arity."""

    __slots__ = ("spec", "terms")

    def __init__(self, spec: AlgebroidSpec, terms: Mapping[tuple, Poly] | None = None, *, _clean=False):
        self.spec = spec
        if _clean:
            self.terms = terms
            return
        t: dict = {}
        for k, p in (terms or {}).items():
            k = tuple(tuple(a) for a in k)
            if any(len(a) != spec.d for a in k):
                raise ValueError(f"bad PBW index in {k}")
            if not isinstance(p, Poly):
                p = Poly.const(spec.m, p)
            _add(t, k, p)
        self.terms = t

    @classmethod
    def function(cls, spec, r) -> "PolyDOp":
        if not isinstance(r, Poly):
            r = Poly.const(spec.m, r)
        return cls(spec, {(): r})

    @classmethod
    def from_tensor(cls, x: UTensor) -> "PolyDOp":
        return cls(x.spec, dict(x.terms), _clean=True)

    @classmethod
    def mu(cls, spec) -> "PolyDOp":
        z = (0,) * spec.d
        return cls(spec, {(z, z): spec.one()}, _clean=True)

    @classmethod
    def slot(cls, spec, *alphas, coeff=None) -> "PolyDOp":
        return cls(spec, {tuple(tuple(a) for a in alphas): coeff if coeff is not None else spec.one()})

    @classmethod
    def gens(cls, spec, *idx, coeff=None) -> "PolyDOp":
        """e_{i_1} (x) ... (x) e_{i_p}; use None for a slot holding 1."""
        key = tuple((0,) * spec.d if i is None else unit_index(spec.d, i) for i in idx)
        return cls(spec, {key: coeff if coeff is not None else spec.one()})

    def arities(self) -> set:
        return {len(k) for k in self.terms}

    def degree(self) -> int:
        ar = self.arities()
        if len(ar) > 1:
            raise ValueError("inhomogeneous poly-differential operator")
        return (ar.pop() if ar else 0) - 1

    def component(self, arity: int) -> "PolyDOp":
        return PolyDOp(self.spec, {k: p for k, p in self.terms.items() if len(k) == arity}, _clean=True)

    def homogeneous_parts(self) -> list:
        return [self.component(a) for a in sorted(self.arities())]

    def filtration(self) -> int:
        """Largest total PBW order of a term."""
        return max((sum(sum(a) for a in k) for k in self.terms), default=0)

    def _same(self, other):
        if not isinstance(other, PolyDOp):
            raise TypeError("expected PolyDOp")
        if other.spec is not self.spec and other.spec != self.spec:
            raise SpecError("spec mismatch")

    def __add__(self, other):
        self._same(other)
        t = dict(self.terms)
        for k, p in other.terms.items():
            _add(t, k, p)
        return PolyDOp(self.spec, t, _clean=True)

    def __neg__(self):
        return PolyDOp(self.spec, {k: -p for k, p in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "PolyDOp":
        t = {}
        for k, p in self.terms.items():
            q = p * c
            if q:
                t[k] = q
        return PolyDOp(self.spec, t, _clean=True)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, PolyDOp) and self.spec == other.spec and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def max_abs_coeff(self):
        return max((p.max_abs_coeff() for p in self.terms.values()), default=0)

    def __repr__(self):
        if not self.terms:
            return "PolyDOp(0)"
        return "PolyDOp(" + " + ".join(
            f"({p!r})" + ("*" + "(x)".join(f"e^{a}" for a in k) if k else "") for k, p in sorted(self.terms.items())
        ) + ")"

    def to_json(self):
        return [{"slots": [list(a) for a in k], "coeff": p.to_json()} for k, p in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, spec, data):
        return cls(spec, {tuple(tuple(a) for a in it["slots"]): Poly.from_json(spec.m, it["coeff"]) for it in data})


def _sgn(e: int) -> int:
    return -1 if e % 2 else 1


def _insert_block(spec, x: tuple, y: PolyDOp) -> list:
    """Delta^{|y|}(e^x) times y, for a homogeneous y; returns [(key tuple, Poly)].

    A function y = r gives the single scalar e^x(r)."""
    out: dict = {}
    for k, c in y.terms.items():
        if not k:
            v = apply_monomial(spec, x, c)
            if v:
                _add(out, (), v)
            continue
        for parts, w in iterated_coproduct(spec, x, len(k) - 1):
            # coefficient c sits in the first slot of the block
            partial = {(): spec.one().scale(w)}
            for n, (a, b) in enumerate(zip(parts, k)):
                prod = mul_terms(spec, a, spec.one(), b, c) if n == 0 else monomial_product(spec, a, b)
                nxt: dict = {}
                for pre, q in partial.items():
                    for key, p in prod.items():
                        _add(nxt, pre + (key,), q * p)
                partial = nxt
            for key, q in partial.items():
                _add(out, key, q)
    return list(out.items())


def brace(D: PolyDOp, args: Sequence[PolyDOp]) -> PolyDOp:
    """D{D_1, ..., D_q}: insert the D_k into distinct slots of D, in order, with sign
    (-1)^(sum_k |D_k| (i_k - 1)) where i_k is the output position of D_k's first slot."""
    spec = D.spec
    for a in args:
        D._same(a)
    if not args:
        return D
    out: dict = {}
    for Dh in D.homogeneous_parts():
        A = Dh.degree() + 1
        degs = []
        for a in args:
            degs.append(a.degree())
        q = len(args)
        for slots in combinations(range(A), q):
            exp = 0
            shift = 0
            for k in range(q):
                exp += degs[k] * (slots[k] + shift)
                shift += degs[k]
            sign = _sgn(exp)
            for x, c in Dh.terms.items():
                partial = {(): c if sign > 0 else -c}
                prev = 0
                for k, s in enumerate(slots):
                    head = x[prev:s]
                    block = _insert_block(spec, x[s], args[k])
                    nxt: dict = {}
                    for pre, p in partial.items():
                        for key, v in block:
                            _add(nxt, pre + head + key, p * v)
                    partial = nxt
                    prev = s + 1
                    if not partial:
                        break
                tail = x[prev:]
                for pre, p in partial.items():
                    _add(out, pre + tail, p)
    return PolyDOp(spec, out, _clean=True)


def _bilinear(f: Callable, a: PolyDOp, b: PolyDOp) -> PolyDOp:
    out = PolyDOp(a.spec, {})
    for x in a.homogeneous_parts():
        for y in b.homogeneous_parts():
            out = out + f(x, y)
    return out


def g_bracket(D1: PolyDOp, D2: PolyDOp) -> PolyDOp:
    """Gerstenhaber bracket D1{D2} - (-1)^(|D1||D2|) D2{D1}."""

    def hom(x, y):
        return brace(x, [y]) - brace(y, [x]).scale(_sgn(x.degree() * y.degree()))

    return _bilinear(hom, D1, D2)


def cup(D1: PolyDOp, D2: PolyDOp) -> PolyDOp:
    """(-1)^((|D1|-1)(|D2|-1)) D1 (x)_R D2."""

    def hom(x, y):
        t: dict = {}
        s = _sgn((x.degree() - 1) * (y.degree() - 1))
        for kx, cx in x.terms.items():
            for ky, cy in y.terms.items():
                _add(t, kx + ky, (cx * cy).scale(s))
        return PolyDOp(x.spec, t, _clean=True)

    return _bilinear(hom, D1, D2)


def cup_via_brace(D1: PolyDOp, D2: PolyDOp) -> PolyDOp:
    """(-1)^(|D1|+1) mu{D1, D2}."""
    mu = PolyDOp.mu(D1.spec)
    return _bilinear(lambda x, y: brace(mu, [x, y]).scale(_sgn(x.degree() + 1)), D1, D2)


def d_hoch(D: PolyDOp) -> PolyDOp:
    """[mu, D]."""
    return g_bracket(PolyDOp.mu(D.spec), D)


class MultiDiffOp:
    """A poly-differential operator acting on tuples of polynomials."""

    def __init__(self, arity: int, fn: Callable[[Sequence[Poly]], Poly]):
        self.arity = arity
        self._fn = fn

    def __call__(self, *args: Poly) -> Poly:
        if len(args) != self.arity:
            raise ValueError(f"expected {self.arity} arguments")
        return self._fn(args)


def realize(D: PolyDOp, arity: int | None = None) -> MultiDiffOp:
    """(D_1 (x) ... (x) D_p)(r_1, ..., r_p) = prod D_i(r_i).

    ``arity`` is only needed for the zero operator, which carries no arity of its own."""
    ar = D.arities()
    if len(ar) > 1:
        raise ValueError("realize needs a homogeneous operator")
    if ar:
        if arity is not None and arity not in ar:
            raise ValueError("arity does not match the operator")
        arity = ar.pop()
    elif arity is None:
        arity = 0
    spec = D.spec

    def fn(args):
        out = spec.zero()
        for k, c in D.terms.items():
            v = c
            for a, r in zip(k, args):
                v = v * apply_monomial(spec, a, r)
                if not v:
                    break
            out = out + v
        return out

    return MultiDiffOp(arity, fn)


# homotopy Gerstenhaber identities

def cup_homotopy_sign(d1: int) -> int:
    """The sign in front of the cup-commutativity homotopy: (-1)^|D1|.

    Found by trying both signs over all degree pairs up to 4; no single constant works."""
    return _sgn(d1)


def leibniz_homotopy_sign(d1: int, d2: int) -> int:
    """Prefactor of the homotopy term in the bracket/cup compatibility: (-1)^(|D1|+|D2|+1).

    With the prefactor (-1)^|D1| the identity fails whenever |D2| is even."""
    return _sgn(d1 + d2 + 1)


def _defect_size(x: PolyDOp):
    return x.max_abs_coeff()


def cup_homotopy_correction(D1: PolyDOp, D2: PolyDOp) -> PolyDOp:
    d1 = D1.degree()
    return (
        d_hoch(brace(D1, [D2]))
        - brace(d_hoch(D1), [D2])
        - brace(D1, [d_hoch(D2)]).scale(_sgn(d1))
    )


def cup_commutativity_defect(D1: PolyDOp, D2: PolyDOp, sign: int | None = None) -> PolyDOp:
    d1, d2 = D1.degree(), D2.degree()
    if sign is None:
        sign = cup_homotopy_sign(d1)
    return cup(D1, D2) - cup(D2, D1).scale(_sgn((d1 - 1) * (d2 - 1))) - cup_homotopy_correction(D1, D2).scale(sign)


def leibniz_defect(D1: PolyDOp, D2: PolyDOp, D3: PolyDOp, sign: int | None = None) -> PolyDOp:
    d1, d2 = D1.degree(), D2.degree()
    if sign is None:
        sign = leibniz_homotopy_sign(d1, d2)
    corr = (
        d_hoch(brace(D1, [D2, D3]))
        - brace(d_hoch(D1), [D2, D3])
        - brace(D1, [d_hoch(D2), D3]).scale(_sgn(d1))
        - brace(D1, [D2, d_hoch(D3)]).scale(_sgn(d1 + d2))
    )
    rhs = (
        cup(g_bracket(D1, D2), D3)
        + cup(D2, g_bracket(D1, D3)).scale(_sgn(d1 * (d2 - 1)))
        + corr.scale(sign)
    )
    return g_bracket(D1, cup(D2, D3)) - rhs


def gerstenhaber_defects(D1: PolyDOp, D2: PolyDOp, D3: PolyDOp, flip: str | None = None) -> dict:
    """LHS - RHS for each identity of the homotopy Gerstenhaber structure; every entry must be the zero operator.

    ``flip`` names one identity whose homotopy sign is deliberately negated (negative control)."""
    d1, d2 = D1.degree(), D2.degree()
    s5 = cup_homotopy_sign(d1) * (-1 if flip == "cup-commutativity" else 1)
    s7 = leibniz_homotopy_sign(d1, d2) * (-1 if flip == "bracket-cup-leibniz" else 1)
    out = {
        "bracket-antisymmetry": g_bracket(D1, D2) + g_bracket(D2, D1).scale(_sgn(d1 * d2)),
        "bracket-jacobi": g_bracket(D1, g_bracket(D2, D3))
        - g_bracket(g_bracket(D1, D2), D3)
        - g_bracket(D2, g_bracket(D1, D3)).scale(_sgn(d1 * d2)),
        "cup-commutativity": cup_commutativity_defect(D1, D2, s5),
        "cup-associativity": cup(D1, cup(D2, D3)) - cup(cup(D1, D2), D3),
        "bracket-cup-leibniz": leibniz_defect(D1, D2, D3, s7),
    }
    return out
