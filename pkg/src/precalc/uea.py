"""Universal enveloping algebra U_R(L) in PBW normal form, its tensor powers over R, and jets."""

from __future__ import annotations

from math import comb, factorial
from typing import Mapping

from .algebroid import AlgebroidSpec, SpecError
from .samples import monomials
from .scalar import Poly


class OrderError(ValueError):
    """A truncated object was evaluated beyond its order."""


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


def unit_index(d: int, i: int) -> tuple:
    return tuple(1 if j == i else 0 for j in range(d))


def word(alpha: tuple) -> list[int]:
    """Generator word of e^alpha, ascending."""
    out = []
    for i, k in enumerate(alpha):
        out.extend([i] * k)
    return out


def alpha_add(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def alpha_sub(a: tuple, b: tuple) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def sub_indices(alpha: tuple):
    """All beta <= alpha componentwise, with binom(alpha, beta)."""
    out = [((), 1)]
    for a in alpha:
        out = [(b + (k,), c * comb(a, k)) for b, c in out for k in range(a + 1)]
    return out


def compositions(alpha: tuple, parts: int):
    """All ordered decompositions alpha = beta_1 + ... + beta_parts with multinomial weights."""
    if parts == 1:
        return [((alpha,), 1)]
    out = []
    for beta, c in sub_indices(alpha):
        rest = alpha_sub(alpha, beta)
        for tail, c2 in compositions(rest, parts - 1):
            out.append(((beta,) + tail, c * c2))
    return out


def apply_monomial(spec: AlgebroidSpec, alpha: tuple, r: Poly) -> Poly:
    """e^alpha acting on r through the anchor."""
    cache = spec.cache.setdefault("apply", {})
    key = (alpha, r)
    hit = cache.get(key)
    if hit is not None:
        return hit
    out = r
    for i in reversed(word(alpha)):
        out = spec.rho(i, out)
        if not out:
            break
    cache[key] = out
    return out


def _gen_times_monomial(spec: AlgebroidSpec, i: int, beta: tuple) -> dict:
    """e_i * e^beta in normal form, as {alpha: Poly}."""
    cache = spec.cache.setdefault("gen_mono", {})
    key = (i, beta)
    hit = cache.get(key)
    if hit is not None:
        return hit
    j = next((k for k in range(i) if beta[k]), None)
    if j is None:
        out = {alpha_add(beta, unit_index(spec.d, i)): spec.one()}
    else:
        # e_i e_j e^beta' = e_j (e_i e^beta') + [e_i, e_j] e^beta'
        rest = alpha_sub(beta, unit_index(spec.d, j))
        out = _left_gen(spec, j, _gen_times_monomial(spec, i, rest))
        for k, c in spec.bracket(i, j).items():
            for a, p in _gen_times_monomial(spec, k, rest).items():
                _add(out, a, c * p)
    cache[key] = out
    return out


def _left_gen(spec: AlgebroidSpec, j: int, x: Mapping[tuple, Poly]) -> dict:
    """e_j * x for x in normal form."""
    out: dict = {}
    for gamma, s in x.items():
        for a, p in _gen_times_monomial(spec, j, gamma).items():
            _add(out, a, s * p)
        r = spec.rho(j, s)
        if r:
            _add(out, gamma, r)
    return out


def monomial_product(spec: AlgebroidSpec, alpha: tuple, gamma: tuple) -> dict:
    """e^alpha * e^gamma in normal form."""
    cache = spec.cache.setdefault("mono_mul", {})
    key = (alpha, gamma)
    hit = cache.get(key)
    if hit is not None:
        return hit
    if not any(alpha):
        out = {gamma: spec.one()}
    else:
        i = next(k for k, a in enumerate(alpha) if a)
        # e^alpha = e_i e^alpha' with i the smallest index
        out = _left_gen(spec, i, monomial_product(spec, alpha_sub(alpha, unit_index(spec.d, i)), gamma))
    cache[key] = out
    return out


class UElem:
    """sum_alpha r_alpha e^alpha, coefficients on the left."""

    __slots__ = ("spec", "terms")

    def __init__(self, spec: AlgebroidSpec, terms: Mapping[tuple, Poly] | None = None):
        self.spec = spec
        t: dict = {}
        for a, p in (terms or {}).items():
            a = tuple(a)
            if len(a) != spec.d or any(k < 0 for k in a):
                raise ValueError(f"bad PBW index {a}")
            if not isinstance(p, Poly):
                p = Poly.const(spec.m, p)
            _add(t, a, p)
        self.terms = t

    @classmethod
    def one(cls, spec, coeff=None):
        return cls(spec, {(0,) * spec.d: coeff if coeff is not None else spec.one()})

    @classmethod
    def gen(cls, spec, i: int, coeff=None):
        return cls(spec, {unit_index(spec.d, i): coeff if coeff is not None else spec.one()})

    @classmethod
    def monomial(cls, spec, alpha, coeff=None):
        return cls(spec, {tuple(alpha): coeff if coeff is not None else spec.one()})

    def filtration(self) -> int:
        return max((sum(a) for a in self.terms), default=-1)

    def __add__(self, other):
        t = dict(self.terms)
        for a, p in other.terms.items():
            _add(t, a, p)
        return UElem(self.spec, t)

    def __neg__(self):
        return UElem(self.spec, {a: -p for a, p in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return UElem(self.spec, {a: p * c for a, p in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, UElem):
            return u_mul(self, other)
        return self.scale(other)

    def __eq__(self, other):
        return isinstance(other, UElem) and self.spec == other.spec and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "UElem(0)"
        return "UElem(" + " + ".join(f"({p!r})*e^{a}" for a, p in sorted(self.terms.items())) + ")"

    def to_json(self):
        return [{"alpha": list(a), "coeff": p.to_json()} for a, p in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, spec, data):
        return cls(spec, {tuple(it["alpha"]): Poly.from_json(spec.m, it["coeff"]) for it in data})


def times_function(spec: AlgebroidSpec, alpha: tuple, s: Poly) -> dict:
    """e^alpha * s = sum_beta binom(alpha,beta) e^beta(s) e^(alpha-beta)."""
    out: dict = {}
    for beta, c in sub_indices(alpha):
        v = apply_monomial(spec, beta, s)
        if v:
            _add(out, alpha_sub(alpha, beta), v.scale(c))
    return out


def mul_terms(spec: AlgebroidSpec, alpha: tuple, r: Poly, gamma: tuple, s: Poly) -> dict:
    """(r e^alpha)(s e^gamma) in normal form."""
    out: dict = {}
    if s.is_const():
        c = s.const_term()
        for a, p in monomial_product(spec, alpha, gamma).items():
            _add(out, a, (r * p).scale(c))
        return out
    for delta, v in times_function(spec, alpha, s).items():
        rv = r * v
        for a, p in monomial_product(spec, delta, gamma).items():
            _add(out, a, rv * p)
    return out


def u_mul(a: UElem, b: UElem) -> UElem:
    if a.spec != b.spec:
        raise SpecError("spec mismatch")
    out: dict = {}
    for alpha, r in a.terms.items():
        for gamma, s in b.terms.items():
            for k, p in mul_terms(a.spec, alpha, r, gamma, s).items():
                _add(out, k, p)
    x = UElem(a.spec)
    x.terms = out
    return x


def apply(a: UElem, r: Poly) -> Poly:
    out = a.spec.zero()
    for alpha, c in a.terms.items():
        v = apply_monomial(a.spec, alpha, r)
        if v:
            out = out + c * v
    return out


def counit(a: UElem) -> Poly:
    return a.terms.get((0,) * a.spec.d, a.spec.zero())


class UTensor:
    """Element of the p-fold tensor power of U over R; one coefficient per tuple of PBW indices."""

    __slots__ = ("spec", "arity", "terms")

    def __init__(self, spec: AlgebroidSpec, arity: int, terms: Mapping[tuple, Poly] | None = None, *, _clean=False):
        self.spec = spec
        self.arity = arity
        if _clean:
            self.terms = terms
            return
        t: dict = {}
        for k, p in (terms or {}).items():
            k = tuple(tuple(a) for a in k)
            if len(k) != arity:
                raise ValueError(f"tensor key {k} does not have arity {arity}")
            if not isinstance(p, Poly):
                p = Poly.const(spec.m, p)
            _add(t, k, p)
        self.terms = t

    def filtration(self) -> int:
        return max((sum(sum(a) for a in k) for k in self.terms), default=-1)

    def __add__(self, other):
        if other.arity != self.arity:
            raise ValueError("arity mismatch")
        t = dict(self.terms)
        for k, p in other.terms.items():
            _add(t, k, p)
        return UTensor(self.spec, self.arity, t, _clean=True)

    def __neg__(self):
        return UTensor(self.spec, self.arity, {k: -p for k, p in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        t = {}
        for k, p in self.terms.items():
            q = p * c
            if q:
                t[k] = q
        return UTensor(self.spec, self.arity, t, _clean=True)

    def __eq__(self, other):
        return (
            isinstance(other, UTensor)
            and self.arity == other.arity
            and self.spec == other.spec
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.arity, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return f"UTensor[{self.arity}](0)"
        return f"UTensor[{self.arity}](" + " + ".join(
            f"({p!r})*" + "(x)".join(f"e^{a}" for a in k) for k, p in sorted(self.terms.items())
        ) + ")"


def iterated_coproduct(spec: AlgebroidSpec, alpha: tuple, k: int) -> list:
    """Delta^k(e^alpha) as [(tuple of k+1 indices, integer weight)]."""
    cache = spec.cache.setdefault("coprod", {})
    key = (alpha, k)
    hit = cache.get(key)
    if hit is None:
        hit = compositions(alpha, k + 1)
        cache[key] = hit
    return hit


def coproduct(a: UElem, k: int = 1) -> UTensor:
    out: dict = {}
    for alpha, r in a.terms.items():
        for parts, c in iterated_coproduct(a.spec, alpha, k):
            _add(out, parts, r.scale(c))
    return UTensor(a.spec, k + 1, out, _clean=True)


def tensor_mul(x: UTensor, y: UTensor) -> UTensor:
    """Slotwise product; meaningful when x lies in the centralizer (e.g. a coproduct)."""
    if x.arity == 0:
        return tensor_join(x, y)
    if x.arity != y.arity:
        raise ValueError("arity mismatch")
    spec = x.spec
    out: dict = {}
    one = spec.one()
    for kx, cx in x.terms.items():
        for ky, cy in y.terms.items():
            # the coefficient of y is placed in the first slot, where x's first factor meets it
            partial = {(): one}
            for n, (ax, ay) in enumerate(zip(kx, ky)):
                nxt: dict = {}
                prod = mul_terms(spec, ax, cx, ay, cy) if n == 0 else monomial_product(spec, ax, ay)
                for pre, c in partial.items():
                    for a, p in prod.items():
                        _add(nxt, pre + (a,), c * p)
                partial = nxt
            for k, p in partial.items():
                _add(out, k, p)
    return UTensor(spec, x.arity, out, _clean=True)


def tensor_join(x: UTensor, y: UTensor) -> UTensor:
    """x (x)_R y."""
    out: dict = {}
    for kx, cx in x.terms.items():
        for ky, cy in y.terms.items():
            _add(out, kx + ky, cx * cy)
    return UTensor(x.spec, x.arity + y.arity, out, _clean=True)


# jets


def pbw_basis(d: int, n: int) -> list[tuple]:
    """PBW multi-indices with |alpha| <= n, graded then lexicographic."""
    mons = monomials(d, n) if d else [()]
    return sorted(mons, key=lambda a: (sum(a), a))


class Jet:
    """Truncated R-linear functional on U: the values phi(e^alpha) for |alpha| <= order."""

    __slots__ = ("spec", "order", "table")

    def __init__(self, spec: AlgebroidSpec, order: int, table: Mapping[tuple, Poly] | None = None):
        if order < 0:
            raise OrderError("jet order must be non-negative")
        self.spec = spec
        self.order = order
        t: dict = {}
        for a, p in (table or {}).items():
            a = tuple(a)
            if sum(a) > order:
                continue
            if not isinstance(p, Poly):
                p = Poly.const(spec.m, p)
            _add(t, a, p)
        self.table = t

    def value(self, alpha: tuple) -> Poly:
        if sum(alpha) > self.order:
            raise OrderError(f"jet of order {self.order} evaluated at order {sum(alpha)}")
        return self.table.get(alpha, self.spec.zero())

    def __call__(self, x: UElem) -> Poly:
        out = self.spec.zero()
        for a, r in x.terms.items():
            v = self.value(a)
            if v:
                out = out + r * v
        return out

    def _check(self, other):
        if other.spec != self.spec:
            raise SpecError("spec mismatch")
        if other.order != self.order:
            raise OrderError(f"order mismatch: {self.order} vs {other.order}")

    def __add__(self, other):
        self._check(other)
        t = dict(self.table)
        for a, p in other.table.items():
            _add(t, a, p)
        return Jet(self.spec, self.order, t)

    def __neg__(self):
        return Jet(self.spec, self.order, {a: -p for a, p in self.table.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        """R-multiplication through alpha_1 (pointwise on values)."""
        return Jet(self.spec, self.order, {a: p * c for a, p in self.table.items()})

    def truncate(self, n: int) -> "Jet":
        return Jet(self.spec, n, {a: p for a, p in self.table.items() if sum(a) <= n})

    def __eq__(self, other):
        return (
            isinstance(other, Jet)
            and self.order == other.order
            and self.spec == other.spec
            and self.table == other.table
        )

    def __repr__(self):
        return f"Jet[{self.order}](" + ", ".join(f"{a}: {p!r}" for a, p in sorted(self.table.items())) + ")"

    def to_json(self):
        return {
            "order": self.order,
            "entries": [{"alpha": list(a), "value": p.to_json()} for a, p in sorted(self.table.items())],
        }


def jet_mul(phi: Jet, psi: Jet) -> Jet:
    phi._check(psi)
    t = {}
    for alpha in pbw_basis(phi.spec.d, phi.order):
        v = phi.spec.zero()
        for beta, c in sub_indices(alpha):
            a = phi.table.get(beta)
            if a:
                b = psi.table.get(alpha_sub(alpha, beta))
                if b:
                    v = v + (a * b).scale(c)
        if v:
            t[alpha] = v
    return Jet(phi.spec, phi.order, t)


def alpha1(spec: AlgebroidSpec, r: Poly, order: int) -> Jet:
    return Jet(spec, order, {(0,) * spec.d: r})


def alpha2(spec: AlgebroidSpec, r: Poly, order: int) -> Jet:
    return Jet(spec, order, {a: apply_monomial(spec, a, r) for a in pbw_basis(spec.d, order)})


def jet_counit(spec: AlgebroidSpec, order: int) -> Jet:
    return alpha1(spec, spec.one(), order)


def nabla1(i: int, phi: Jet) -> Jet:
    """Grothendieck connection: (nabla1_i phi)(D) = e_i(phi(D)) - phi(e_i D)."""
    if phi.order == 0:
        raise OrderError("order exhausted")
    spec = phi.spec
    t = {}
    for alpha in pbw_basis(spec.d, phi.order - 1):
        v = spec.rho(i, phi.value(alpha))
        for a, p in _gen_times_monomial(spec, i, alpha).items():
            w = phi.table.get(a)
            if w:
                v = v - p * w
        if v:
            t[alpha] = v
    return Jet(spec, phi.order - 1, t)


def nabla2(i: int, phi: Jet) -> Jet:
    """(nabla2_i phi)(D) = phi(D e_i)."""
    if phi.order == 0:
        raise OrderError("order exhausted")
    spec = phi.spec
    ei = unit_index(spec.d, i)
    t = {}
    for alpha in pbw_basis(spec.d, phi.order - 1):
        v = spec.zero()
        for a, p in monomial_product(spec, alpha, ei).items():
            w = phi.table.get(a)
            if w:
                v = v + p * w
        if v:
            t[alpha] = v
    return Jet(spec, phi.order - 1, t)


def graded_dims(d: int, n: int) -> int:
    """Number of PBW monomials of exact order n, i.e. rank of Sym^n of a rank-d module."""
    return sum(1 for a in pbw_basis(d, n) if sum(a) == n)


def sym_dim(d: int, n: int) -> int:
    return factorial(n + d - 1) // (factorial(n) * factorial(d - 1)) if d else int(n == 0)


def coproduct_at(x: UTensor, slot: int) -> UTensor:
    """Apply the coproduct to one slot of a tensor, raising its arity by one."""
    out: dict = {}
    for k, p in x.terms.items():
        for parts, c in iterated_coproduct(x.spec, k[slot], 1):
            _add(out, k[:slot] + parts + k[slot + 1:], p.scale(c))
    return UTensor(x.spec, x.arity + 1, out, _clean=True)


def counit_at(x: UTensor, slot: int) -> UTensor:
    """Apply the counit to one slot: only the PBW unit survives."""
    z = (0,) * x.spec.d
    out: dict = {}
    for k, p in x.terms.items():
        if k[slot] == z:
            _add(out, k[:slot] + k[slot + 1:], p)
    return UTensor(x.spec, x.arity - 1, out, _clean=True)
