"""Lie algebroids over polynomial rings and their precalculus of poly-vector fields and forms.

Grading is shifted: a poly-vector with n+1 wedge factors has degree n, a function has
degree -1 and a k-form has degree -k.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from itertools import combinations
from pathlib import Path
from typing import Mapping

from .scalar import Poly, as_rational, merge_sign, sort_sign


class SpecError(ValueError):
    pass


class AlgebroidSpec:
    """Free Lie algebroid of rank d over Q[y_0..y_{m-1}].

    ``anchor[i][j]`` is the coefficient of d/dy_j in rho(e_i); ``structure`` maps (i, j, k)
    to c_ij^k with [e_i, e_j] = sum_k c_ij^k e_k.  A pair (j, i) with no listed entries is
    filled by antisymmetry from (i, j).
    """

    def __init__(self, m: int, d: int, anchor, structure: Mapping[tuple, Poly], name: str = ""):
        if m < 0 or d < 0:
            raise SpecError("m and d must be non-negative")
        if len(anchor) != d or any(len(row) != m for row in anchor):
            raise SpecError(f"anchor must be a {d}x{m} matrix")
        self.m = m
        self.d = d
        self.name = name
        self.anchor = tuple(tuple(p if isinstance(p, Poly) else Poly.const(m, p) for p in row) for row in anchor)
        raw: dict = {}
        for (i, j, k), c in structure.items():
            if not (0 <= i < d and 0 <= j < d and 0 <= k < d):
                raise SpecError(f"structure index ({i},{j},{k}) out of range for d={d}")
            c = c if isinstance(c, Poly) else Poly.const(m, c)
            if c.m != m:
                raise SpecError("structure coefficient has wrong variable count")
            raw[(i, j, k)] = raw.get((i, j, k), Poly.zero(m)) + c
        listed = {(i, j) for (i, j, _k) in raw}
        for (i, j) in list(listed):
            if (j, i) not in listed:
                for k in range(d):
                    if (i, j, k) in raw:
                        raw[(j, i, k)] = -raw[(i, j, k)]
        self.structure = {key: c for key, c in raw.items() if c}
        self._bracket = {}
        for (i, j, k), c in self.structure.items():
            self._bracket.setdefault((i, j), {})[k] = c
        self.cache: dict = {}
        self._key = (m, d, self.anchor, frozenset(self.structure.items()))

    def rho(self, i: int, p: Poly) -> Poly:
        """Anchor of e_i applied to p."""
        out = Poly.zero(self.m)
        for j, a in enumerate(self.anchor[i]):
            if a:
                dp = p.derive(j)
                if dp:
                    out = out + a * dp
        return out

    def bracket(self, i: int, j: int) -> dict:
        """{k: c_ij^k}"""
        return self._bracket.get((i, j), {})

    def one(self) -> Poly:
        return Poly.const(self.m, 1)

    def zero(self) -> Poly:
        return Poly.zero(self.m)

    def __eq__(self, other):
        return isinstance(other, AlgebroidSpec) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"AlgebroidSpec({self.name or '?'}, m={self.m}, d={self.d})"

    # JSON

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "name": self.name,
            "m": self.m,
            "d": self.d,
            "anchor": [[p.to_json() for p in row] for row in self.anchor],
            "structure": [
                {"i": i, "j": j, "k": k, "coeff": c.to_json()} for (i, j, k), c in sorted(self.structure.items())
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "AlgebroidSpec":
        try:
            m, d = int(data["m"]), int(data["d"])
            anchor = data.get("anchor", [[0] * m for _ in range(d)])
            if len(anchor) != d:
                raise SpecError(f"anchor must have {d} rows")
            rows = []
            for row in anchor:
                if len(row) != m:
                    raise SpecError(f"anchor rows must have {m} entries")
                rows.append([Poly.from_json(m, p) for p in row])
            structure: dict = {}
            for item in data.get("structure", []):
                key = (int(item["i"]), int(item["j"]), int(item["k"]))
                structure[key] = structure.get(key, Poly.zero(m)) + Poly.from_json(m, item["coeff"])
        except (KeyError, TypeError) as exc:
            raise SpecError(f"malformed algebroid spec: {exc}") from exc
        return cls(m, d, rows, structure, name=data.get("name", ""))


def tangent(n: int) -> AlgebroidSpec:
    """Tangent algebroid of affine n-space: rho(e_i) = d/dy_i, abelian frame."""
    anchor = [[Poly.const(n, 1 if i == j else 0) for j in range(n)] for i in range(n)]
    return AlgebroidSpec(n, n, anchor, {}, name=f"tangent{n}")


def so3() -> AlgebroidSpec:
    eps = {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1}
    structure = {}
    for (i, j, k), s in eps.items():
        structure[(i, j, k)] = Poly.const(0, s)
        structure[(j, i, k)] = Poly.const(0, -s)
    return AlgebroidSpec(0, 3, [[] for _ in range(3)], structure, name="A2")


def affine_line_pair() -> AlgebroidSpec:
    """m=1, d=2: rho(e_0) = d/dy, rho(e_1) = y d/dy, [e_0, e_1] = e_0."""
    y = Poly.var(1, 0)
    anchor = [[Poly.const(1, 1)], [y]]
    return AlgebroidSpec(1, 2, anchor, {(0, 1, 0): Poly.const(1, 1)}, name="A3")


FIXTURES = ("A1", "A1_1d", "A2", "A3")


def load_spec(path_or_name) -> AlgebroidSpec:
    """Load an algebroid from a JSON file or one of the packaged fixture names."""
    if isinstance(path_or_name, str) and path_or_name in FIXTURES:
        text = resources.files("precalc.fixtures").joinpath(f"{path_or_name}.json").read_text()
    else:
        text = Path(path_or_name).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid JSON: {exc}") from exc
    return AlgebroidSpec.from_json(data)


# validation


def _vf_bracket(spec: AlgebroidSpec, u: list, v: list) -> list:
    """Bracket of two derivations of the base ring given by coefficient lists."""
    out = []
    for l in range(spec.m):
        s = Poly.zero(spec.m)
        for j in range(spec.m):
            if u[j]:
                s = s + u[j] * v[l].derive(j)
            if v[j]:
                s = s - v[j] * u[l].derive(j)
        out.append(s)
    return out


def validate(spec: AlgebroidSpec) -> dict:
    """Check antisymmetry, Jacobi (with anchor terms) and that the anchor preserves brackets."""
    failures = []
    d, m = spec.d, spec.m
    for i in range(d):
        for j in range(d):
            for k in range(d):
                a = spec.structure.get((i, j, k), spec.zero())
                b = spec.structure.get((j, i, k), spec.zero())
                if a + b:
                    failures.append({"axiom": "antisymmetry", "indices": [i, j, k]})
    # anchor morphism: rho([e_i,e_j]) = [rho e_i, rho e_j]
    for i in range(d):
        for j in range(i + 1, d):
            lhs = [spec.zero() for _ in range(m)]
            for k, c in spec.bracket(i, j).items():
                for l in range(m):
                    lhs[l] = lhs[l] + c * spec.anchor[k][l]
            rhs = _vf_bracket(spec, list(spec.anchor[i]), list(spec.anchor[j]))
            if any(a != b for a, b in zip(lhs, rhs)):
                failures.append({"axiom": "anchor", "indices": [i, j]})
    # Jacobi on basis triples, [e_i, c e_l] = rho_i(c) e_l + c [e_i, e_l]
    def br_elem(i, vec):
        out = {}
        for l, c in vec.items():
            rc = spec.rho(i, c)
            if rc:
                out[l] = out.get(l, spec.zero()) + rc
            for k, c2 in spec.bracket(i, l).items():
                out[k] = out.get(k, spec.zero()) + c * c2
        return out

    for i, j, k in combinations(range(d), 3):
        total: dict = {}
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            for l, v in br_elem(a, spec.bracket(b, c)).items():
                total[l] = total.get(l, spec.zero()) + v
        if any(v for v in total.values()):
            failures.append({"axiom": "jacobi", "indices": [i, j, k]})
    return {"valid": not failures, "failures": failures, "m": m, "d": d}


# poly-vectors and forms


class _Table:
    """Sparse table: strictly increasing index tuple -> Poly."""

    __slots__ = ("spec", "terms")
    kind = "table"

    def __init__(self, spec: AlgebroidSpec, terms: Mapping[tuple, Poly] | None = None, *, _clean=False):
        self.spec = spec
        if _clean:
            self.terms = terms
            return
        t: dict = {}
        for idx, p in (terms or {}).items():
            if not isinstance(p, Poly):
                p = Poly.const(spec.m, p)
            if any(not 0 <= i < spec.d for i in idx):
                raise IndexError(f"basis index out of range in {idx}")
            sign, key = sort_sign(idx)
            if not sign:
                continue
            if sign < 0:
                p = -p
            t[key] = t[key] + p if key in t else p
        self.terms = {k: p for k, p in t.items() if p}

    def _new(self, terms):
        return type(self)(self.spec, terms, _clean=True)

    def _same(self, other):
        if type(other) is not type(self):
            raise TypeError(f"expected {type(self).__name__}")
        if other.spec is not self.spec and other.spec != self.spec:
            raise SpecError("spec mismatch")

    def __add__(self, other):
        self._same(other)
        t = dict(self.terms)
        for k, p in other.terms.items():
            if k in t:
                q = t[k] + p
                if q:
                    t[k] = q
                else:
                    del t[k]
            else:
                t[k] = p
        return self._new(t)

    def __neg__(self):
        return self._new({k: -p for k, p in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "_Table":
        if isinstance(c, Poly):
            return self._new({k: q for k, p in self.terms.items() if (q := p * c)})
        if not c:
            return self._new({})
        return self._new({k: p.scale(c) for k, p in self.terms.items()})

    __mul__ = scale
    __rmul__ = scale

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.spec == other.spec and self.terms == other.terms

    def __hash__(self):
        return hash((type(self).__name__, frozenset(self.terms.items())))

    def component(self, nfactors: int):
        return self._new({k: p for k, p in self.terms.items() if len(k) == nfactors})

    def factor_counts(self) -> set:
        return {len(k) for k in self.terms}

    def max_abs_coeff(self):
        return max((p.max_abs_coeff() for p in self.terms.values()), default=0)

    def __repr__(self):
        if not self.terms:
            return f"{type(self).__name__}(0)"
        sym = "e" if isinstance(self, PolyVec) else "e*"
        body = " + ".join(
            f"({p!r})" + ("" if not k else "*" + "^".join(f"{sym}{i}" for i in k)) for k, p in sorted(self.terms.items())
        )
        return f"{type(self).__name__}({body})"

    def to_json(self) -> list:
        return [{"indices": list(k), "poly": p.to_json()} for k, p in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, spec, data):
        return cls(spec, {tuple(item["indices"]): Poly.from_json(spec.m, item["poly"]) for item in data})


class PolyVec(_Table):
    """Element of the exterior algebra of L over R.  Key () is the function part."""

    kind = "polyvec"

    @classmethod
    def function(cls, spec, p) -> "PolyVec":
        return cls(spec, {(): p})

    @classmethod
    def basis(cls, spec, *idx, coeff=None) -> "PolyVec":
        return cls(spec, {tuple(idx): coeff if coeff is not None else spec.one()})

    def degree(self) -> int:
        """Shifted degree of a homogeneous element."""
        ns = self.factor_counts()
        if len(ns) > 1:
            raise ValueError("inhomogeneous poly-vector")
        return (ns.pop() if ns else 0) - 1


class LForm(_Table):
    """Element of the exterior algebra of L* over R; key (i_1<...<i_k) stands for e*_i1 ^ ... ^ e*_ik."""

    kind = "lform"

    @classmethod
    def function(cls, spec, p) -> "LForm":
        return cls(spec, {(): p})

    @classmethod
    def basis(cls, spec, *idx, coeff=None) -> "LForm":
        return cls(spec, {tuple(idx): coeff if coeff is not None else spec.one()})

    def degree(self) -> int:
        ns = self.factor_counts()
        if len(ns) > 1:
            raise ValueError("inhomogeneous form")
        return -(ns.pop() if ns else 0)

    def evaluate(self, idx: tuple) -> Poly:
        """Value on the basis vectors e_idx (any order)."""
        sign, key = sort_sign(idx)
        if not sign:
            return self.spec.zero()
        p = self.terms.get(key)
        if p is None:
            return self.spec.zero()
        return p if sign > 0 else -p


def _add(t: dict, k, p):
    if not p:
        return
    if k in t:
        q = t[k] + p
        if q:
            t[k] = q
        else:
            del t[k]
    else:
        t[k] = p


def _vec_bracket(spec, a: Poly, alpha: int, b: Poly, beta: int) -> dict:
    """[a e_alpha, b e_beta] as {k: coeff}."""
    out: dict = {}
    rb = spec.rho(alpha, b)
    if rb:
        _add(out, beta, a * rb)
    ra = spec.rho(beta, a)
    if ra:
        _add(out, alpha, -(b * ra))
    br = spec.bracket(alpha, beta)
    if br:
        ab = a * b
        for k, c in br.items():
            _add(out, k, ab * c)
    return out


def _schouten_terms(spec, I: tuple, f: Poly, J: tuple, g: Poly, out: dict):
    p, q = len(I), len(J)
    if p == 0 and q == 0:
        return
    if q == 0:
        # [X_1 ^ ... ^ X_p, g] = sum_i (-1)^(p-i) X_i(g) X_1..^X_i..X_p, with X_1 = f e_I1
        for i in range(p):
            r = spec.rho(I[i], g)
            if r:
                sign = -1 if (p - 1 - i) % 2 else 1
                _add(out, I[:i] + I[i + 1:], (f * r).scale(sign))
        return
    if p == 0:
        # [f, Y] = (-1)^q [Y, f]
        tmp: dict = {}
        _schouten_terms(spec, J, g, I, f, tmp)
        sign = -1 if q % 2 else 1
        for k, v in tmp.items():
            _add(out, k, v.scale(sign))
        return
    one = spec.one()
    for i in range(p):
        a = f if i == 0 else one
        restx = I[:i] + I[i + 1:]
        cx = one if i == 0 else f
        for j in range(q):
            b = g if j == 0 else one
            resty = J[:j] + J[j + 1:]
            cy = one if j == 0 else g
            br = _vec_bracket(spec, a, I[i], b, J[j])
            if not br:
                continue
            s0 = -1 if (i + j) % 2 else 1
            s1, rest = merge_sign(restx, resty)
            if not s1:
                continue
            coef = cx * cy
            for k, v in br.items():
                s2, key = merge_sign((k,), rest)
                if s2:
                    _add(out, key, (coef * v).scale(s0 * s1 * s2))


def schouten(a: PolyVec, b: PolyVec) -> PolyVec:
    """Schouten-Nijenhuis bracket (degree 0 in the shifted grading)."""
    a._same(b)
    spec = a.spec
    out: dict = {}
    for I, f in a.terms.items():
        for J, g in b.terms.items():
            _schouten_terms(spec, I, f, J, g, out)
    return PolyVec(spec, out, _clean=True)


def wedge(a: PolyVec, b: PolyVec) -> PolyVec:
    a._same(b)
    out: dict = {}
    for I, f in a.terms.items():
        for J, g in b.terms.items():
            s, key = merge_sign(I, J)
            if s:
                _add(out, key, (f * g).scale(s))
    return PolyVec(a.spec, out, _clean=True)


def form_wedge(a: LForm, b: LForm) -> LForm:
    a._same(b)
    out: dict = {}
    for I, f in a.terms.items():
        for J, g in b.terms.items():
            s, key = merge_sign(I, J)
            if s:
                _add(out, key, (f * g).scale(s))
    return LForm(a.spec, out, _clean=True)


def de_rham(w: LForm) -> LForm:
    """Chevalley-Eilenberg differential of L with values in R."""
    spec = w.spec
    out: dict = {}
    for k in sorted(w.factor_counts()):
        if k >= spec.d:
            continue
        wk = w.component(k)
        for J in combinations(range(spec.d), k + 1):
            val = spec.zero()
            for i in range(k + 1):
                v = wk.terms.get(J[:i] + J[i + 1:])
                if v:
                    r = spec.rho(J[i], v)
                    if r:
                        val = val + (r if i % 2 == 0 else -r)
            for i in range(k + 1):
                for j in range(i + 1, k + 1):
                    rest = J[:i] + J[i + 1:j] + J[j + 1:]
                    for c, cc in spec.bracket(J[i], J[j]).items():
                        v = wk.evaluate((c,) + rest)
                        if v:
                            val = val + (cc * v if (i + j) % 2 == 0 else -(cc * v))
            if val:
                _add(out, J, val)
    return LForm(spec, out, _clean=True)


def _iota_basis(a: int, J: tuple):
    """Interior product of e_a into e*_J: (sign, remaining tuple) or (0, None)."""
    for r, x in enumerate(J):
        if x == a:
            return (-1 if r % 2 else 1), J[:r] + J[r + 1:]
    return 0, None


def contract(g: PolyVec, w: LForm) -> LForm:
    """Interior product; e_I acts as iota_{I_1} iota_{I_2} ... iota_{I_p}."""
    if g.spec != w.spec:
        raise SpecError("spec mismatch")
    out: dict = {}
    for I, f in g.terms.items():
        for J, h in w.terms.items():
            if len(I) > len(J):
                continue
            sign, rest = 1, J
            for a in reversed(I):
                s, rest = _iota_basis(a, rest)
                if not s:
                    break
                sign *= s
            else:
                _add(out, rest, (f * h).scale(sign))
    return LForm(w.spec, out, _clean=True)


def lie_derivative(g: PolyVec, w: LForm) -> LForm:
    """L_g = [d_L, iota_g] = d iota_g - (-1)^(|g|+1) iota_g d, summed over homogeneous parts of g."""
    out = LForm(w.spec, {})
    for n in g.factor_counts():
        gn = g.component(n)
        term = de_rham(contract(gn, w))
        other = contract(gn, de_rham(w))
        out = out + (term - other if n % 2 == 0 else term + other)
    return out


def anchor_action(spec: AlgebroidSpec, vec: Mapping[int, Poly], p: Poly) -> Poly:
    out = spec.zero()
    for i, c in vec.items():
        r = spec.rho(i, p)
        if r:
            out = out + c * r
    return out


def precalculus_defects(a: PolyVec, b: PolyVec, w: LForm, flip: str | None = None) -> dict:
    """LHS - RHS of the precalculus compatibilities and module axioms for homogeneous a, b; all zero.

    ``flip`` negates one sign as a negative control."""
    da, db = a.degree(), b.degree()
    f = (lambda name: -1 if flip == name else 1)
    i, L = contract, lie_derivative
    sg = (lambda e: -1 if e % 2 else 1)
    return {
        "contraction-lie": i(a, L(b, w)) - L(b, i(a, w)).scale(sg((da + 1) * db) * f("contraction-lie"))
        - i(schouten(a, b), w),
        "lie-of-wedge": L(a, i(b, w)) + i(a, L(b, w)).scale(sg(da + 1) * f("lie-of-wedge")) - L(wedge(a, b), w),
        "contraction-module": i(wedge(a, b), w) - i(a, i(b, w)).scale(f("contraction-module")),
        "lie-module": L(schouten(a, b), w) - L(a, L(b, w)) + L(b, L(a, w)).scale(sg(da * db) * f("lie-module")),
    }
