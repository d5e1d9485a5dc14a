"""Hochschild L-chains as truncated functionals on tensor powers of U, and their pairings with cochains.

A chain of degree -t is stored by its values on t-tuples of PBW monomials of total order <= N.
Operations of the relative Hochschild calculus act on t+1 slots; a chain is lifted to its unique
horizontal extension Phi with Phi(1 (x) D) = phi(D), the operation is applied, and the result is
restricted back to a leading 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .algebroid import AlgebroidSpec, SpecError
from .dpoly import PolyDOp, _insert_block, _sgn, cup, d_hoch, g_bracket
from .scalar import Poly
from .uea import OrderError, _add, _gen_times_monomial, iterated_coproduct, pbw_basis, unit_index


def tuples_upto(d: int, t: int, n: int) -> list:
    """All t-tuples of PBW indices in rank d with total order <= n."""
    basis = pbw_basis(d, n)
    out = [((), 0)]
    for _ in range(t):
        out = [(k + (a,), s + sum(a)) for k, s in out for a in basis if s + sum(a) <= n]
    return [k for k, _s in out]


class Chain:
    """Degree -t chain truncated at order N."""

    __slots__ = ("spec", "t", "order", "table", "_lift")

    def __init__(self, spec: AlgebroidSpec, t: int, order: int, table: Mapping[tuple, Poly] | None = None):
        if t < 0 or order < 0:
            raise ValueError("chain degree and order must be non-negative")
        self.spec = spec
        self.t = t
        self.order = order
        tab: dict = {}
        for k, p in (table or {}).items():
            k = tuple(tuple(a) for a in k)
            if len(k) != t:
                raise ValueError(f"chain key {k} does not have {t} slots")
            if sum(sum(a) for a in k) > order:
                continue
            if not isinstance(p, Poly):
                p = Poly.const(spec.m, p)
            _add(tab, k, p)
        self.table = tab
        self._lift = None

    @classmethod
    def function(cls, spec, r, order: int = 0) -> "Chain":
        return cls(spec, 0, order, {(): r})

    def degree(self) -> int:
        return -self.t

    def value(self, key: tuple) -> Poly:
        if sum(sum(a) for a in key) > self.order:
            raise OrderError(f"chain of order {self.order} evaluated at order {sum(sum(a) for a in key)}")
        return self.table.get(key, self.spec.zero())

    def evaluate(self, D: PolyDOp) -> Poly:
        out = self.spec.zero()
        for k, c in D.terms.items():
            if len(k) != self.t:
                continue
            v = self.value(k)
            if v:
                out = out + c * v
        return out

    def _check(self, other):
        if other.spec != self.spec:
            raise SpecError("spec mismatch")
        if other.t != self.t:
            raise ValueError(f"degree mismatch: {-self.t} vs {-other.t}")

    def truncate(self, n: int) -> "Chain":
        if n > self.order:
            raise OrderError("cannot raise the order of a truncated chain")
        return Chain(self.spec, self.t, n, self.table)

    def __add__(self, other):
        if other.t != self.t and (not self.table or not other.table):
            # a zero chain carries no reliable degree (e.g. L_D a with D = 0)
            keep = other if not self.table else self
            return Chain(keep.spec, keep.t, min(self.order, other.order), keep.table)
        self._check(other)
        n = min(self.order, other.order)
        t: dict = {}
        for src in (self.table, other.table):
            for k, p in src.items():
                if sum(sum(a) for a in k) <= n:
                    _add(t, k, p)
        return Chain(self.spec, self.t, n, t)

    def __neg__(self):
        return Chain(self.spec, self.t, self.order, {k: -p for k, p in self.table.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return Chain(self.spec, self.t, self.order, {k: p * c for k, p in self.table.items()})

    def is_zero(self):
        return not self.table

    def max_abs_coeff(self):
        return max((p.max_abs_coeff() for p in self.table.values()), default=0)

    def __eq__(self, other):
        return (
            isinstance(other, Chain)
            and self.t == other.t
            and self.order == other.order
            and self.spec == other.spec
            and self.table == other.table
        )

    def __repr__(self):
        return f"Chain(deg={-self.t}, order={self.order}, {len(self.table)} entries)"

    def to_json(self):
        return {
            "degree": -self.t,
            "order": self.order,
            "entries": [
                {"slots": [list(a) for a in k], "value": p.to_json()} for k, p in sorted(self.table.items())
            ],
        }

    @classmethod
    def from_json(cls, spec, data):
        t = -int(data["degree"])
        return cls(
            spec,
            t,
            int(data["order"]),
            {tuple(tuple(a) for a in it["slots"]): Poly.from_json(spec.m, it["value"]) for it in data["entries"]},
        )

    # horizontal lift

    def lift(self) -> "Lift":
        if self._lift is None:
            self._lift = Lift(self)
        return self._lift


class Lift:
    """The horizontal extension Phi of a chain to t+1 slots.

    Horizontality, l(Phi(D_0..D_t)) = sum_i Phi(.., l D_i, ..), determines Phi from its values with
    D_0 = 1, peeling generators off D_0 one at a time."""

    def __init__(self, chain: Chain):
        self.chain = chain
        self.spec = chain.spec
        self.memo: dict = {}

    def __call__(self, key: tuple) -> Poly:
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        spec = self.spec
        head = key[0]
        if not any(head):
            val = self.chain.value(key[1:])
        else:
            j = next(i for i, a in enumerate(head) if a)
            rest_head = tuple(a - (1 if i == j else 0) for i, a in enumerate(head))
            val = spec.rho(j, self((rest_head,) + key[1:]))
            for i in range(1, len(key)):
                for a, p in _gen_times_monomial(spec, j, key[i]).items():
                    v = self((rest_head,) + key[1:i] + (a,) + key[i + 1:])
                    if v:
                        val = val - p * v
        self.memo[key] = val
        return val

    def horizontality_defect(self, j: int, key: tuple) -> Poly:
        """l(Phi(D)) - sum_i Phi(.., e_j D_i, ..) for l = e_j."""
        spec = self.spec
        out = spec.rho(j, self(key))
        for i in range(len(key)):
            for a, p in _gen_times_monomial(spec, j, key[i]).items():
                out = out - p * self(key[:i] + (a,) + key[i + 1:])
        return out


def sigma(a: Chain, power: int = 1) -> Chain:
    """Cyclic operator sigma(Phi)(D_0..D_t) = Phi(D_1..D_t, D_0), restricted to D_0 = 1."""
    t = a.t
    k = power % (t + 1)
    if k == 0:
        return a
    lift = a.lift()
    z = (0,) * a.spec.d
    out = {}
    for key in tuples_upto(a.spec.d, t, a.order):
        full = (z,) + key
        v = lift(full[k:] + full[:k])
        if v:
            out[key] = v
    return Chain(a.spec, t, a.order, out)


def _homogeneous(D: PolyDOp) -> int:
    return D.degree()


def _compose(P: PolyDOp, inserts: Sequence[tuple]) -> list:
    """P with the cochains in ``inserts`` (pairs (P-slot, cochain)) placed by iterated coproducts.

    Returns [(key tuple, Poly)] without signs."""
    spec = P.spec
    out: dict = {}
    slots = [s for s, _ in inserts]
    for x, c in P.terms.items():
        partial = {(): c}
        prev = 0
        for s, Y in inserts:
            head = x[prev:s]
            block = _insert_block(spec, x[s], Y)
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
    return list(out.items())


def _filtration(D: PolyDOp) -> int:
    return D.filtration()


@dataclass(frozen=True)
class OrderBudget:
    """Orders are consumed by the filtration degree of every cochain fed into a chain operation."""

    available: int
    consumed: int

    @classmethod
    def for_op(cls, a: "Chain", cochains: Sequence[PolyDOp]) -> "OrderBudget":
        return cls(a.order, sum(_filtration(X) for X in cochains))

    @property
    def produced(self) -> int:
        return self.available - self.consumed

    def check(self) -> int:
        if self.produced < 0:
            raise OrderError(
                f"order budget exhausted: chain order {self.available}, cochains consume {self.consumed}"
            )
        return self.produced


def m_l1(P: PolyDOp, Qs: Sequence[PolyDOp], a: Chain, Rs: Sequence[PolyDOp]) -> Chain:
    """Taylor component m_{L,1}^{1,q,r}(P (x) Q_1..Q_q (x) a (x) R_1..R_r).

    P is applied to a cyclic block of slots of the lifted chain containing slot 0; the Q's are
    inserted into P before slot 0, the R's after it.  With s block slots before slot 0 the
    block starts at l = -s and the sign is
    (-1)^(l(t-l+1) + sum |Q_b|(j_b - l) + sum |R_c|(k_c - l - 1))."""
    spec = a.spec
    t = a.t
    dP = P.degree()
    dQ = [Q.degree() for Q in Qs]
    dR = [R.degree() for R in Rs]
    total = dP + sum(dQ) + sum(dR)
    t_out = t - total
    n_out = OrderBudget.for_op(a, [P, *Qs, *Rs]).check()
    if t_out < 0:
        return Chain(spec, 0, n_out)
    q, r = len(Qs), len(Rs)
    nP = dP + 1
    configs = []  # (l, sign, composite terms)
    for p0 in range(nP):
        for qslots in combinations(range(p0), q):
            for rslots in combinations(range(p0 + 1, nP), r):
                # composite positions
                pos = 0
                qpos, rpos = [], []
                a0pos = None
                inserts = []
                qi = ri = 0
                for sP in range(nP):
                    if qi < q and qslots[qi] == sP:
                        qpos.append(pos)
                        inserts.append((sP, Qs[qi]))
                        pos += dQ[qi] + 1
                        qi += 1
                    elif ri < r and rslots[ri] == sP:
                        rpos.append(pos)
                        inserts.append((sP, Rs[ri]))
                        pos += dR[ri] + 1
                        ri += 1
                    else:
                        if sP == p0:
                            a0pos = pos
                        pos += 1
                if pos != t + 1 - t_out:
                    raise AssertionError("composite arity mismatch")
                s = a0pos
                # l is the block start as the residue in (-(t+1), 0]; the sign depends on this choice
                l = -s
                exp = l * (t - l + 1)
                for b in range(q):
                    jb = l + qpos[b]
                    exp += dQ[b] * (jb - l)
                for c in range(r):
                    kc = rpos[c] - s
                    exp += dR[c] * (kc - l - 1)
                terms = _compose(P, inserts)
                if terms:
                    configs.append((s, _sgn(exp), terms))
    lift = a.lift()
    out: dict = {}
    for key in tuples_upto(spec.d, t_out, n_out):
        val = spec.zero()
        for k, sign, terms in configs:
            for kk, c in terms:
                full = kk + key
                # composite slot k carries slot 0 of the lifted chain
                v = lift(full[k:] + full[:k])
                if v:
                    val = val + (c * v if sign > 0 else -(c * v))
        if val:
            out[key] = val
    return Chain(spec, t_out, n_out, out)


def m_l2(a: Chain, Rs: Sequence[PolyDOp]) -> Chain:
    """Taylor component m_{L,2}^{0,0,r}(a (x) R_1..R_r): insert the R's into slots 1..t (never slot 0),
    with sign (-1)^(sum |R_c|(i_c - 1)), i_c the slot where R_c's block starts."""
    spec = a.spec
    if not Rs:
        return a
    t = a.t
    dR = [R.degree() for R in Rs]
    t_out = t - sum(dR)
    n_out = OrderBudget.for_op(a, Rs).check()
    if t_out < 0:
        return Chain(spec, 0, n_out)
    r = len(Rs)
    placements = []
    for us in combinations(range(t_out), r):  # output slots (0-indexed among slots 1..t_out)
        exp = 0
        shift = 0
        for c in range(r):
            ic = us[c] + 1 + shift
            exp += dR[c] * (ic - 1)
            shift += dR[c]
        placements.append((us, _sgn(exp)))
    out: dict = {}
    for key in tuples_upto(spec.d, t_out, n_out):
        val = spec.zero()
        for us, sign in placements:
            partial = {(): spec.one()}
            prev = 0
            for c, u in enumerate(us):
                head = key[prev:u]
                block = _insert_block(spec, key[u], Rs[c])
                nxt: dict = {}
                for pre, p in partial.items():
                    for kk, v in block:
                        _add(nxt, pre + head + kk, p * v)
                partial = nxt
                prev = u + 1
                if not partial:
                    break
            tail = key[prev:]
            for pre, p in partial.items():
                v = a.value(pre + tail)
                if v:
                    val = val + (p * v if sign > 0 else -(p * v))
        if val:
            out[key] = val
    return Chain(spec, t_out, n_out, out)


def lie_der_chain(D: PolyDOp, a: Chain) -> Chain:
    """L_D a = m_{L,1}^{1,0,0}(D (x) a) + (-1)^|D| m_{L,2}^{0,0,1}(a (x) D)."""
    out = None
    for Dh in D.homogeneous_parts():
        term = m_l1(Dh, [], a, []) + m_l2(a, [Dh]).scale(_sgn(Dh.degree()))
        out = term if out is None else out + term
    if out is None:
        return Chain(a.spec, a.t, a.order)
    return out


def b_h(a: Chain) -> Chain:
    """Hochschild differential L_mu; equals (-1)^|a| a o d_H."""
    if a.t == 0:
        return Chain(a.spec, 0, a.order)
    return lie_der_chain(PolyDOp.mu(a.spec), a)


def b_h_dual(a: Chain) -> Chain:
    """(D -> a(d_H D)) on (t-1)-tuples; equals (-1)^|a| b_h(a)."""
    spec = a.spec
    out = {}
    if a.t == 0:
        return Chain(spec, 0, a.order)
    for key in tuples_upto(spec.d, a.t - 1, a.order):
        v = a.evaluate(d_hoch(PolyDOp(spec, {key: spec.one()})))
        if v:
            out[key] = v
    return Chain(spec, a.t - 1, a.order, out)


def _sum_parts(terms, a: Chain) -> Chain:
    out = None
    for term in terms:
        out = term if out is None else out + term
    return out if out is not None else Chain(a.spec, a.t, a.order)


def cap_left(D: PolyDOp, a: Chain) -> Chain:
    """D cap a = (-1)^(|D|+1) m_{L,1}^{1,1,0}(mu (x) D (x) a).

    The normalization (-1)^|D| would give 1 cap a = a and break associativity with cup;
    this one makes the unit act by -1 and D1 cap (D2 cap a) = (D1 cup D2) cap a."""
    mu = PolyDOp.mu(a.spec)
    return _sum_parts((m_l1(mu, [Dh], a, []).scale(_sgn(Dh.degree() + 1)) for Dh in D.homogeneous_parts()), a)


def cap_right(a: Chain, D: PolyDOp) -> Chain:
    """a cap D = (-1)^((|a|+1)(|D|+1)) m_{L,1}^{1,0,1}(mu (x) a (x) D).

    Chosen over (-1)^|a| so that (a cap D1) cap D2 = a cap (D1 cup D2)."""
    mu = PolyDOp.mu(a.spec)
    return _sum_parts(
        (m_l1(mu, [], a, [Dh]).scale(_sgn((a.degree() + 1) * (Dh.degree() + 1))) for Dh in D.homogeneous_parts()), a
    )


def partial_eval(a: Chain, D: PolyDOp) -> Chain:
    """a(D (x)_R -): plug D into the leading slots, evaluated directly on the table."""
    spec = a.spec
    n = D.degree() + 1
    t_out = a.t - n
    n_out = OrderBudget.for_op(a, [D]).check()
    if t_out < 0:
        return Chain(spec, 0, n_out)
    out = {}
    for key in tuples_upto(spec.d, t_out, n_out):
        v = spec.zero()
        for k, c in D.terms.items():
            w = a.value(k + key)
            if w:
                v = v + c * w
        if v:
            out[key] = v
    return Chain(spec, t_out, n_out, out)


# identities of the chain-level calculus

def homotopy_signs(name: str, da: int, d1: int, d2: int = 0) -> list:
    """Coefficients c_i with sum_i c_i T_i = 0 for the term lists built in chain_calculus_defects.

    Correction signs are the ones that make every identity vanish exactly over all degree parities."""
    s = _sgn
    if name == "cap-symmetry":
        e = s(d1)  # the unspecified sign, same as in the cup-commutativity homotopy
        return [1, -s((d1 - 1) * (da - 1)), -e, e, e * s(d1)]
    if name == "lie-cap-left":
        # prefactor (-1)^(|D1|+|D2|+1), not (-1)^|D1|
        p = s(d1 + d2 + 1)
        return [1, -1, -s(d1 * (d2 - 1)), -p, p, p * s(d1), p * s(d1 + d2)]
    if name == "lie-cap-right":
        # prefactor (-1)^|D1| with per-term signs
        p = s(d1)
        x = s((da + 1) * (d2 + 1))
        return [1, -1, -s(d1 * (da - 1)), -p * x, p * x, p * s(d1) * x * s(d2), p * s(d1 + da)]
    if name == "lie-cup":
        eps = s((d1 - 1) * (d2 - 1))
        g12 = [s(d2), -s(d1), s(d2), s(d1 + d2)]
        g21 = [s(d1), -s(d2), s(d1), s(d1 + d2)]
        main = [1, eps, -1, -s((d1 - 1) * (d2 + da - 1)), -s(da * (d2 - 1)),
                -s(da * (d2 - 1)) * s((d1 + da - 1) * (d2 - 1)), -s(d2 - 1), -s(d2 - 1) * s((da - 1) * (d1 + d2 - 1))]
        # (L_{D1 cup D2} a + G(D1,D2)) + eps (L_{D2 cup D1} a + G(D2,D1)) = main terms
        return main + g12 + [eps * x for x in g21]
    raise KeyError(name)


def homotopy_terms(name: str, D1: PolyDOp, D2: PolyDOp | None, a: Chain) -> list:
    """The chains entering each homotopy identity, in a fixed order."""
    L = lie_der_chain
    mu = PolyDOp.mu(a.spec)
    if name == "cap-symmetry":
        D = D1
        return [cap_left(D, a), cap_right(a, D), b_h(m_l1(D, [], a, [])), m_l1(d_hoch(D), [], a, []),
                m_l1(D, [], b_h(a), [])]
    if name == "lie-cap-left":
        return [L(D1, cap_left(D2, a)), cap_left(g_bracket(D1, D2), a), cap_left(D2, L(D1, a)),
                b_h(m_l1(D1, [D2], a, [])), m_l1(d_hoch(D1), [D2], a, []), m_l1(D1, [d_hoch(D2)], a, []),
                m_l1(D1, [D2], b_h(a), [])]
    if name == "lie-cap-right":
        return [L(D1, cap_right(a, D2)), cap_right(L(D1, a), D2), cap_right(a, g_bracket(D1, D2)),
                b_h(m_l1(D1, [], a, [D2])), m_l1(d_hoch(D1), [], a, [D2]), m_l1(D1, [], b_h(a), [D2]),
                m_l1(D1, [], a, [d_hoch(D2)])]
    if name == "lie-cup":
        ba = b_h(a)
        return [L(cup(D1, D2), a), L(cup(D2, D1), a), cap_left(D1, L(D2, a)), cap_right(L(D2, a), D1),
                cap_right(L(D1, a), D2), cap_left(D2, L(D1, a)), cap_left(g_bracket(D1, D2), a),
                cap_right(a, g_bracket(D1, D2)),
                b_h(m_l2(a, [D1, D2])), m_l2(ba, [D1, D2]), m_l2(a, [d_hoch(D1), D2]), m_l2(a, [D1, d_hoch(D2)]),
                b_h(m_l2(a, [D2, D1])), m_l2(ba, [D2, D1]), m_l2(a, [d_hoch(D2), D1]), m_l2(a, [D2, d_hoch(D1)])]
    raise KeyError(name)


def _combine(terms: list, coeffs: list) -> Chain:
    n0 = min(x.order for x in terms)
    out = None
    for x, c in zip(terms, coeffs):
        x = x.truncate(n0).scale(c)
        out = x if out is None else out + x
    return out


def chain_calculus_defects(D1: PolyDOp, D2: PolyDOp, a: Chain, flip: str | None = None) -> dict:
    """Defect chains of the chain-calculus identities for homogeneous D1, D2 and a chain a.

    All entries are zero when the identities hold.

    ``flip`` names an identity whose homotopy correction (or, for the strict ones, right-hand side) is
    negated, as a negative control."""
    d1, d2, da = D1.degree(), D2.degree(), a.degree()
    L = lie_der_chain
    out = {}
    f = (lambda name: -1 if flip == name else 1)
    lhs = L(g_bracket(D1, D2), a)
    rhs = L(D1, L(D2, a)) - L(D2, L(D1, a)).scale(_sgn(d1 * d2))
    out["lie-module"] = _combine([lhs, rhs], [1, -f("lie-module")])
    name = "cap-left-associativity"
    out[name] = _combine([cap_left(D1, cap_left(D2, a)), cap_left(cup(D1, D2), a)], [1, -f(name)])
    name = "cap-right-associativity"
    out[name] = _combine([cap_right(cap_right(a, D1), D2), cap_right(a, cup(D1, D2))], [1, -f(name)])
    main = {"cap-symmetry": 2, "lie-cap-left": 3, "lie-cap-right": 3, "lie-cup": 8}
    for name in ("cap-symmetry", "lie-cap-left", "lie-cap-right", "lie-cup"):
        terms = homotopy_terms(name, D1, D2, a)
        c = homotopy_signs(name, da, d1, d2)
        if flip == name:
            c = c[: main[name]] + [-x for x in c[main[name]:]]
        out[name] = _combine(terms, c)
    return out


# descent of horizontal jets (the map Phi -> Phi(1, -))

def _sparse_rank(rows: list) -> int:
    """Rank of a list of sparse rows {column: Fraction}."""
    pivots: dict = {}
    rank = 0
    for row in rows:
        row = {k: Fraction(v) for k, v in row.items() if v}
        while row:
            col = min(row)
            if col in pivots:
                prow = pivots[col]
                c = row[col]
                for k, v in prow.items():
                    nv = row.get(k, 0) - c * v
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
            else:
                c = row[col]
                pivots[col] = {k: v / c for k, v in row.items()}
                rank += 1
                break
    return rank


def descent_check(spec: AlgebroidSpec, t: int, order: int, max_poly_degree: int = 2) -> dict:
    """Horizontal elements of the truncated JL^{(x)(t+1)} versus degree -t chains.

    Unknowns are the values Phi(D_0..D_t) on PBW tuples of total order <= N, polynomials of degree
    <= max_poly_degree.  Horizontality is imposed on tuples of order <= N-1; the map restricts to
    D_0 = 1.  Bijectivity is decided by exact ranks."""
    from .samples import monomials

    if t < 0 or order < 0 or max_poly_degree < 0:
        raise ValueError("degree, order and polynomial bound must be non-negative")
    mons = monomials(spec.m, max_poly_degree)
    mon_index = {e: i for i, e in enumerate(mons)}
    keys = tuples_upto(spec.d, t + 1, order)
    key_index = {k: i for i, k in enumerate(keys)}
    nm = len(mons)

    def var(key, e):
        return key_index[key] * nm + mon_index[e]

    rows = []
    lower = tuples_upto(spec.d, t + 1, order - 1) if order >= 1 else []
    for sigma_key in lower:
        for j in range(spec.d):
            # rho_j Phi(sigma) - sum_k sum_a p_a Phi(sigma with slot k -> a) = 0, one row per output monomial
            acc: dict = {}
            for e in mons:
                img = spec.rho(j, Poly(spec.m, {e: 1}))
                for e2, c in img.terms.items():
                    acc.setdefault(e2, {})
                    col = var(sigma_key, e)
                    acc[e2][col] = acc[e2].get(col, 0) + c
            for k in range(t + 1):
                for a_idx, p in _gen_times_monomial(spec, j, sigma_key[k]).items():
                    tgt = sigma_key[:k] + (a_idx,) + sigma_key[k + 1:]
                    for e in mons:
                        prod = p * Poly(spec.m, {e: 1})
                        for e2, c in prod.terms.items():
                            acc.setdefault(e2, {})
                            col = var(tgt, e)
                            acc[e2][col] = acc[e2].get(col, 0) - c
            rows.extend(r for r in acc.values() if any(r.values()))
    n_unknowns = len(keys) * nm
    r_c = _sparse_rank(rows)
    horizontal_dim = n_unknowns - r_c
    z = (0,) * spec.d
    head_one = [k for k in keys if k[0] == z]
    chain_dim = len(head_one) * nm
    restrict_rows = [{var(k, e): 1} for k in head_one for e in mons]
    r_joint = _sparse_rank(rows + restrict_rows)
    injective = r_joint == n_unknowns
    image_dim = horizontal_dim - (n_unknowns - r_joint)
    surjective = image_dim == chain_dim
    return {
        "fixture": spec.name,
        "degree": -t,
        "order": order,
        "max_poly_degree": max_poly_degree,
        "unknowns": n_unknowns,
        "constraint_rank": r_c,
        "horizontal_dim": horizontal_dim,
        "chain_dim": chain_dim,
        "injective": injective,
        "surjective": surjective,
        "bijective": injective and surjective,
    }
