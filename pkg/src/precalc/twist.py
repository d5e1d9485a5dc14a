"""Twisting by Maurer-Cartan elements over a graded-commutative coefficient algebra.

Poly-vector fields and forms on affine d-space are extended by odd generators eta_0..eta_{s-1}.
An element is stored as {eta-monomial K: PolyVec or LForm}, read as sum_K eta^K (x) v_K.
Operations are extended with Koszul signs: a bilinear operation written infix moves the right
argument's etas past the operation symbol and the left argument.
"""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from typing import Mapping

from .algebroid import (
    LForm,
    PolyVec,
    contract,
    de_rham,
    form_wedge,
    lie_derivative,
    schouten,
    tangent,
    wedge,
)
from .scalar import Poly, SuperScalar, merge_sign, sort_sign


def _sgn(e: int) -> int:
    return -1 if e % 2 else 1


_SPECS: dict = {}


def flat(d: int):
    """Tangent algebroid of affine d-space, shared per d."""
    if d not in _SPECS:
        _SPECS[d] = tangent(d)
    return _SPECS[d]


class SuperElem:
    """sum_K eta^K (x) v_K with v_K a PolyVec (kind 'vec') or LForm (kind 'form')."""

    __slots__ = ("kind", "d", "s", "comps")

    def __init__(self, kind: str, d: int, s: int, comps: Mapping[tuple, object] | None = None):
        if kind not in ("vec", "form"):
            raise ValueError("kind must be 'vec' or 'form'")
        self.kind = kind
        self.d = d
        self.s = s
        out: dict = {}
        for K, v in (comps or {}).items():
            sign, key = sort_sign(K)
            if not sign or v.is_zero():
                continue
            if any(not 0 <= i < s for i in key):
                raise IndexError(f"eta index out of range in {K}")
            v = v if sign > 0 else -v
            out[key] = out[key] + v if key in out else v
        self.comps = {K: v for K, v in out.items() if not v.is_zero()}

    @property
    def spec(self):
        return flat(self.d)

    def _base(self):
        return PolyVec if self.kind == "vec" else LForm

    @classmethod
    def zero(cls, kind, d, s):
        return cls(kind, d, s)

    @classmethod
    def even(cls, x, s: int) -> "SuperElem":
        kind = "vec" if isinstance(x, PolyVec) else "form"
        return cls(kind, x.spec.d, s, {(): x})

    def _check(self, other):
        if (self.kind, self.d, self.s) != (other.kind, other.d, other.s):
            raise ValueError("mismatched super elements")

    def __add__(self, other):
        self._check(other)
        out = dict(self.comps)
        for K, v in other.comps.items():
            out[K] = out[K] + v if K in out else v
        return SuperElem(self.kind, self.d, self.s, out)

    def __neg__(self):
        return SuperElem(self.kind, self.d, self.s, {K: -v for K, v in self.comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "SuperElem":
        return SuperElem(self.kind, self.d, self.s, {K: v.scale(c) for K, v in self.comps.items()})

    def eta_left(self, J: tuple) -> "SuperElem":
        """eta^J * self."""
        out = {}
        for K, v in self.comps.items():
            sign, key = merge_sign(tuple(sorted(J)), K)
            if sign:
                out[key] = out[key] + v.scale(sign) if key in out else v.scale(sign)
        s, _ = sort_sign(J)
        return SuperElem(self.kind, self.d, self.s, out).scale(s)

    def is_zero(self):
        return not self.comps

    def __eq__(self, other):
        return (
            isinstance(other, SuperElem)
            and (self.kind, self.d, self.s) == (other.kind, other.d, other.s)
            and self.comps == other.comps
        )

    def parts(self):
        """Yield (eta monomial, base degree count, homogeneous base component)."""
        for K, v in sorted(self.comps.items()):
            for n in sorted(v.factor_counts()):
                yield K, n, v.component(n)

    def max_abs_coeff(self):
        return max((v.max_abs_coeff() for v in self.comps.values()), default=0)

    def __repr__(self):
        if not self.comps:
            return f"Super{self.kind}(0)"
        return " + ".join(
            ("" if not K else "".join(f"eta{i}" for i in K) + "*") + repr(v) for K, v in sorted(self.comps.items())
        )

    def to_json(self):
        return {
            "kind": self.kind,
            "d": self.d,
            "s": self.s,
            "terms": [{"etas": list(K), "value": v.to_json()} for K, v in sorted(self.comps.items())],
        }

    def truncate(self, n: int) -> "SuperElem":
        base = self._base()
        out = {}
        for K, v in self.comps.items():
            out[K] = base(v.spec, {I: p.truncate(n) for I, p in v.terms.items()})
        return SuperElem(self.kind, self.d, self.s, out)


def _combine(kind, d, s, pairs):
    """Sum of sign * eta^K eta^L (x) value."""
    out: dict = {}
    for sign, K, L, v in pairs:
        if not sign or v.is_zero():
            continue
        m, key = merge_sign(K, L)
        if not m:
            continue
        v = v.scale(sign * m)
        out[key] = out[key] + v if key in out else v
    return SuperElem(kind, d, s, out)


# base degrees: a poly-vector with n factors has shifted degree n-1; a form with k slots has parity k

def super_schouten(a: SuperElem, b: SuperElem) -> SuperElem:
    return _combine(
        "vec", a.d, a.s,
        ((_sgn(len(L) * (na - 1)), K, L, schouten(x, y)) for K, na, x in a.parts() for L, _nb, y in b.parts()),
    )


def super_wedge(a: SuperElem, b: SuperElem) -> SuperElem:
    return _combine(
        "vec", a.d, a.s,
        ((_sgn(len(L) * na), K, L, wedge(x, y)) for K, na, x in a.parts() for L, _nb, y in b.parts()),
    )


def super_cap(D: SuperElem, w: SuperElem) -> SuperElem:
    """Infix contraction: (eta^K D) cap (eta^L w) = (-1)^{|L|(|D|+1)} eta^K eta^L (D cap w)."""
    return _combine(
        "form", D.d, D.s,
        ((_sgn(len(L) * nD), K, L, contract(x, y)) for K, nD, x in D.parts() for L, _n, y in w.parts()),
    )


def super_form_wedge(a: SuperElem, b: SuperElem) -> SuperElem:
    return _combine(
        "form", a.d, a.s,
        ((_sgn(len(L) * na), K, L, form_wedge(x, y)) for K, na, x in a.parts() for L, _n, y in b.parts()),
    )


def super_d(w: SuperElem) -> SuperElem:
    """de Rham differential, odd: d(eta^K w) = (-1)^{|K|} eta^K dw."""
    return _combine("form", w.d, w.s, ((_sgn(len(K)), K, (), de_rham(x)) for K, _n, x in w.parts()))


def super_lie_cartan(D: SuperElem, w: SuperElem) -> SuperElem:
    """L_D = [d, D cap -], graded commutator with the total degree |K| + |D|."""
    out = SuperElem.zero("form", w.d, w.s)
    for K, nD, x in D.parts():
        piece = SuperElem("vec", D.d, D.s, {K: x})
        tot = len(K) + nD - 1
        out = out + super_d(super_cap(piece, w)) - super_cap(piece, super_d(w)).scale(_sgn(tot + 1))
    return out


def lie_action(D: SuperElem, w: SuperElem) -> SuperElem:
    """Koszul prefix extension of the Lie derivative: L_{eta^K D}(eta^L w) = (-1)^{|L||D|} eta^K eta^L L_D w."""
    return _combine(
        "form", D.d, D.s,
        ((_sgn(len(L) * (nD - 1)), K, L, lie_derivative(x, y)) for K, nD, x in D.parts() for L, _n, y in w.parts()),
    )


def _iota_form_base(theta: LForm, D: PolyVec) -> PolyVec:
    """Contraction of a 1-form into a poly-vector: odd derivation with e_i -> -theta(e_i)."""
    spec = D.spec
    out: dict = {}
    for I, f in D.terms.items():
        for r, i in enumerate(I):
            th = theta.terms.get((i,))
            if not th:
                continue
            v = (f * th).scale(-_sgn(r))
            key = I[:r] + I[r + 1:]
            out[key] = out[key] + v if key in out else v
    return PolyVec(spec, out)


def iota_form(theta: SuperElem, D: SuperElem) -> SuperElem:
    """iota_{eta^K theta}(eta^L D) = eta^K eta^L iota_theta(D) for a 1-form theta."""
    pairs = []
    for K, n, th in theta.parts():
        if n != 1:
            raise ValueError("iota_form needs a 1-form")
        for L, _nD, x in D.parts():
            pairs.append((1, K, L, _iota_form_base(th, x)))
    return _combine("vec", D.d, D.s, pairs)


# the coefficient differential

class EtaDifferential:
    """Degree one derivation of the eta algebra given on generators."""

    def __init__(self, s: int, d: int, table: Mapping[int, SuperScalar] | None = None):
        self.s = s
        self.d = d
        self.table = dict(table or {})

    def on_monomial(self, K: tuple) -> dict:
        """d(eta^K) as {eta monomial: Fraction}."""
        out: dict = {}
        for i, k in enumerate(K):
            img = self.table.get(k)
            if img is None:
                continue
            for M, p in img.terms.items():
                c = p.const_term() * _sgn(i)
                new = K[:i] + M + K[i + 1:]
                sign, key = sort_sign(new)
                if sign:
                    out[key] = out.get(key, 0) + sign * c
        return {k: v for k, v in out.items() if v}

    def apply(self, x: SuperElem) -> SuperElem:
        out: dict = {}
        for K, v in x.comps.items():
            for M, c in self.on_monomial(K).items():
                out[M] = out[M] + v.scale(c) if M in out else v.scale(c)
        return SuperElem(x.kind, x.d, x.s, out)

    def is_zero(self):
        return not any(not v.is_zero() for v in self.table.values())


class MCElement:
    """A degree one vector field omega = sum eta_a omega_{a,i} d/dx_i with a coefficient differential."""

    def __init__(self, omega: SuperElem, dm: EtaDifferential | None = None, name: str = ""):
        self.omega = omega
        self.dm = dm or EtaDifferential(omega.s, omega.d)
        self.name = name

    @property
    def d(self):
        return self.omega.d

    @property
    def s(self):
        return self.omega.s

    def coefficient(self, a: int, i: int) -> Poly:
        v = self.omega.comps.get((a,))
        if v is None:
            return Poly.zero(self.d)
        return v.terms.get((i,), Poly.zero(self.d))


def _check_degree_one(omega: SuperElem):
    if omega.kind != "vec":
        raise ValueError("a Maurer-Cartan element is a poly-vector")
    for K, n, _x in omega.parts():
        if len(K) + n - 1 != 1:
            raise ValueError(f"term with {len(K)} etas and {n} vector factors does not have total degree 1")


def mc_check(omega: SuperElem, dm: EtaDifferential | None = None) -> SuperElem:
    """d_m omega + 1/2 [omega, omega]."""
    _check_degree_one(omega)
    out = super_schouten(omega, omega).scale(Fraction(1, 2))
    if dm is not None:
        out = out + dm.apply(omega)
    return out


def _require_mc(mc: MCElement):
    defect = mc_check(mc.omega, mc.dm)
    if not defect.is_zero():
        raise ValueError(f"not a Maurer-Cartan element: defect {defect}")


def twist_diff_T(mc: MCElement):
    """d_omega = d_m + [omega, -] on poly-vectors."""
    _require_mc(mc)
    return lambda x: mc.dm.apply(x) + super_schouten(mc.omega, x)


def twist_diff_Omega(mc: MCElement):
    """d_omega = d_m + L_omega on forms."""
    _require_mc(mc)
    return lambda w: mc.dm.apply(w) + lie_action(mc.omega, w)


def xi_matrix(mc: MCElement) -> list:
    """Xi_ij = eta_a d(d/dx_j omega_{a,i}), a d x d matrix of 1-forms with odd coefficients."""
    d, s = mc.d, mc.s
    spec = flat(d)
    rows = []
    for i in range(d):
        row = []
        for j in range(d):
            comps = {}
            for a in range(s):
                f = mc.coefficient(a, i).derive(j)
                if f:
                    comps[(a,)] = de_rham(LForm.function(spec, f))
            row.append(SuperElem("form", d, s, comps))
        rows.append(row)
    return rows


def matmul(A: list, B: list) -> list:
    n = len(A)
    out = []
    for i in range(n):
        row = []
        for k in range(n):
            acc = None
            for j in range(n):
                t = super_form_wedge(A[i][j], B[j][k])
                acc = t if acc is None else acc + t
            row.append(acc)
        out.append(row)
    return out


def tr_xi_power(mc: MCElement, n: int) -> SuperElem:
    if n < 1:
        raise ValueError("power must be positive")
    X = xi_matrix(mc)
    P = X
    for _ in range(n - 1):
        P = matmul(P, X)
    acc = P[0][0]
    for i in range(1, len(P)):
        acc = acc + P[i][i]
    return acc


def tr_xi_closedness(mc: MCElement, n: int) -> SuperElem:
    """(d_m + L_omega) Tr(Xi^n); zero on Maurer-Cartan elements."""
    return twist_diff_Omega(mc)(tr_xi_power(mc, n))


# derivation identities for d_F b and Tr(Xi)

def _deg_vec(D: SuperElem) -> int:
    degs = {len(K) + n - 1 for K, n, _x in D.parts()}
    if len(degs) > 1:
        raise ValueError("inhomogeneous poly-vector")
    return degs.pop() if degs else -1


def derivation_defects(theta: SuperElem, D: SuperElem, w: SuperElem, odd: bool = False) -> dict:
    """Defects of the cap and Lie identities for wedging with a 1-form theta.

    even theta (theta = d b):
      theta ^ (D cap w) = -iota_theta(D) cap w + (-1)^{|D|+1} D cap (theta ^ w)
      theta ^ L_D w = L_{iota_theta D} w + (-1)^{|D|} L_D(theta ^ w)
    odd theta (theta = Tr Xi):
      theta ^ (D cap w) = -iota_theta(D) cap w + D cap (theta ^ w)
      theta ^ L_D w = -L_{iota_theta D} w + L_D(theta ^ w)
    """
    dD = _deg_vec(D)
    it = iota_form(theta, D)
    cap_lhs = super_form_wedge(theta, super_cap(D, w))
    lie_lhs = super_form_wedge(theta, super_lie_cartan(D, w))
    if not odd:
        cap_rhs = -super_cap(it, w) + super_cap(D, super_form_wedge(theta, w)).scale(_sgn(dD + 1))
        lie_rhs = super_lie_cartan(it, w) + super_lie_cartan(D, super_form_wedge(theta, w)).scale(_sgn(dD))
    else:
        cap_rhs = -super_cap(it, w) + super_cap(D, super_form_wedge(theta, w))
        lie_rhs = -super_lie_cartan(it, w) + super_lie_cartan(D, super_form_wedge(theta, w))
    return {"cap": cap_lhs - cap_rhs, "lie": lie_lhs - lie_rhs}


def derivation_suite(b: Poly, D: SuperElem, w: SuperElem, mc: MCElement | None = None) -> dict:
    """The four identities: d_F b and, given an MC element, Tr(Xi) versions."""
    spec = flat(D.d)
    db = SuperElem("form", D.d, D.s, {(): de_rham(LForm.function(spec, b))})
    out = {f"dFb-{k}": v for k, v in derivation_defects(db, D, w).items()}
    if mc is not None:
        tr = tr_xi_power(mc, 1)
        out.update({f"trxi-{k}": v for k, v in derivation_defects(tr, D, w, odd=True).items()})
    return out


# fixtures

def load_mc(name_or_path: str) -> MCElement:
    if name_or_path.endswith(".json"):
        with open(name_or_path) as fh:
            data = json.load(fh)
    else:
        data = json.loads(resources.files("precalc.fixtures").joinpath(f"{name_or_path}.json").read_text())
    return mc_from_json(data)


def mc_from_json(data) -> MCElement:
    d, s = int(data["d"]), int(data["s"])
    spec = flat(d)
    comps: dict = {}
    for item in data["omega"]:
        a, i = int(item["eta"]), int(item["index"])
        v = PolyVec(spec, {(i,): Poly.from_json(d, item["poly"])})
        comps[(a,)] = comps[(a,)] + v if (a,) in comps else v
    table = {}
    for item in data.get("dm", []):
        table[int(item["eta"])] = SuperScalar.from_json(s, d, item["value"])
    return MCElement(SuperElem("vec", d, s, comps), EtaDifferential(s, d, table), name=data.get("name", ""))


def mc_to_json(mc: MCElement) -> dict:
    omega = []
    for (a,), v in sorted(mc.omega.comps.items()):
        for (i,), p in sorted(v.terms.items()):
            omega.append({"eta": a, "index": i, "poly": p.to_json()})
    dm = [{"eta": k, "value": v.to_json()} for k, v in sorted(mc.dm.table.items())]
    return {"schema": 1, "name": mc.name, "d": mc.d, "s": mc.s, "omega": omega, "dm": dm}


def action_mc(fields: list, name: str = "") -> MCElement:
    """omega = sum_a eta_a v_a for vector fields spanning a Lie algebra, with the Chevalley-Eilenberg
    differential d_m eta_c = -1/2 sum c^c_{ab} eta_a eta_b."""
    d = fields[0].spec.d
    s = len(fields)
    consts = {}
    for a in range(s):
        for b in range(a + 1, s):
            consts[(a, b)] = _solve_span(schouten(fields[a], fields[b]), fields)
    table = {}
    for c in range(s):
        terms = {}
        for (a, b), coeffs in consts.items():
            if coeffs[c]:
                terms[(a, b)] = Poly.const(d, -coeffs[c])
        table[c] = SuperScalar(s, d, terms)
    omega = SuperElem("vec", d, s, {(a,): v for a, v in enumerate(fields)})
    return MCElement(omega, EtaDifferential(s, d, table), name=name)


def _solve_span(target: PolyVec, fields: list) -> list:
    """Rational coefficients expressing target in the span of fields."""
    import sympy

    keys = sorted({(I, e) for f in fields + [target] for I, p in f.terms.items() for e in p.terms})

    def col(v):
        return [sympy.Rational(str(v.terms[I].terms.get(e, 0))) if I in v.terms else 0 for I, e in keys]

    A = sympy.Matrix([col(f) for f in fields]).T
    rhs = sympy.Matrix(col(target))
    sol, params = A.gauss_jordan_solve(rhs)
    if params.shape[0]:
        sol = sol.subs({p: 0 for p in params})
    out = [Fraction(str(x)) for x in sol]
    return out
