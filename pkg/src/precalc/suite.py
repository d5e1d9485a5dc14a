"""Seeded identity suite: every exact identity of the calculus, sampled and checked to defect zero."""

from __future__ import annotations

import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .algebroid import load_spec, precalculus_defects
from .chains import b_h, cap_right, chain_calculus_defects, descent_check, lie_der_chain, m_l1, partial_eval
from .charclass import (
    TraceSeries,
    UniSeries,
    det_of_series,
    j_omega,
    j_series,
    modified_todd,
    newton_convert,
    q_series,
    q_tilde_series,
    todd,
)
from .classical import CChain, b as classical_b, c_bracket, c_cup, c_dhoch, iota, lie, transport
from .dpoly import PolyDOp, cup, d_hoch, g_bracket, gerstenhaber_defects, realize
from .hkr import antisym, hkr_cochain, hkr_chain
from .samples import random_chain, random_lform, random_poly, random_polydop, random_polyvec
from .scalar import Poly
from .twist import (
    SuperElem,
    derivation_suite,
    flat,
    load_mc,
    mc_check,
    tr_xi_closedness,
    twist_diff_Omega,
    twist_diff_T,
)
from .uea import (
    OrderError,
    UElem,
    alpha1,
    alpha2,
    coproduct,
    coproduct_at,
    counit_at,
    graded_dims,
    jet_mul,
    nabla1,
    nabla2,
    pbw_basis,
    sym_dim,
    tensor_mul,
    u_mul,
)

GROUPS = ("precalculus", "gerstenhaber", "chain-calculus", "oracle", "hkr", "jets", "descent", "todd", "twist")

IDENTITIES = {
    "precalculus": ("contraction-lie", "lie-of-wedge", "contraction-module", "lie-module"),
    "gerstenhaber": (
        "bracket-antisymmetry", "bracket-jacobi", "cup-commutativity", "cup-associativity", "bracket-cup-leibniz",
    ),
    "chain-calculus": (
        "lie-module", "cap-symmetry", "cap-left-associativity", "cap-right-associativity",
        "lie-cap-left", "lie-cap-right", "lie-cup",
    ),
}

MC_FIXTURES = ("mc_line", "mc_line_sl2", "mc_plane_commuting", "mc_space_commuting", "mc_plane_sl3")

DEFAULT_SAMPLES = {
    "precalculus": 50,
    "gerstenhaber": 30,
    "chain-calculus": 20,
    "oracle": 30,
    "hkr": 50,
    "jets": 10,
    "todd": 10,
    "twist": 30,
}


@dataclass(frozen=True)
class SuiteConfig:
    fixtures: tuple = ("A1",)
    seed: int = 42
    groups: tuple = GROUPS
    samples: dict = field(default_factory=lambda: dict(DEFAULT_SAMPLES))
    chain_order: int = 4
    jet_order: int = 3
    todd_order: int = 6
    descent_order: int = 3
    corrupt: str | None = None

    def to_json(self) -> dict:
        return {
            "fixtures": list(self.fixtures),
            "seed": self.seed,
            "groups": list(self.groups),
            "samples": {k: self.samples[k] for k in sorted(self.samples)},
            "chain_order": self.chain_order,
            "jet_order": self.jet_order,
            "todd_order": self.todd_order,
            "descent_order": self.descent_order,
            "corrupt": self.corrupt,
        }


class Tally:
    """Per-identity counters; the defect of a sample is the largest absolute coefficient left over."""

    def __init__(self, group: str, fixture: str):
        self.group = group
        self.fixture = fixture
        self.rows: dict = {}

    def add(self, identity: str, defect) -> None:
        row = self.rows.setdefault(identity, {"samples": 0, "failures": 0, "skipped": 0, "max_defect": Fraction(0)})
        size = _size(defect)
        row["samples"] += 1
        if size:
            row["failures"] += 1
            row["max_defect"] = max(row["max_defect"], size)

    def skip(self, identity: str) -> None:
        row = self.rows.setdefault(identity, {"samples": 0, "failures": 0, "skipped": 0, "max_defect": Fraction(0)})
        row["skipped"] += 1

    def records(self) -> list:
        out = []
        for identity in sorted(self.rows):
            row = self.rows[identity]
            out.append({
                "group": self.group,
                "identity": identity,
                "fixture": self.fixture,
                "samples": row["samples"],
                "skipped": row["skipped"],
                "failures": row["failures"],
                "max_defect": str(row["max_defect"]),
            })
        return out


def _size(x) -> Fraction:
    if isinstance(x, bool):
        return Fraction(int(not x))
    if isinstance(x, (int, Fraction)):
        return abs(Fraction(x))
    if isinstance(x, TraceSeries):
        return max((abs(v) for v in x.table.values()), default=Fraction(0))
    if isinstance(x, UniSeries):
        return max((abs(v) for v in x.c), default=Fraction(0))
    if hasattr(x, "max_abs_coeff"):
        return Fraction(x.max_abs_coeff())
    if hasattr(x, "terms"):
        vals = [_size(v) for v in x.terms.values()]
        return max(vals, default=Fraction(0))
    if hasattr(x, "table"):
        vals = [_size(v) for v in x.table.values()]
        return max(vals, default=Fraction(0))
    raise TypeError(f"cannot size {type(x).__name__}")


def _flip_for(cfg: SuiteConfig, group: str) -> str | None:
    if cfg.corrupt and cfg.corrupt in IDENTITIES.get(group, ()):
        return cfg.corrupt
    return None


# groups

def run_precalculus(rng: random.Random, cfg: SuiteConfig, fixture: str) -> Tally:
    spec = load_spec(fixture)
    tally = Tally("precalculus", fixture)
    flip = _flip_for(cfg, "precalculus")
    for _ in range(cfg.samples["precalculus"]):
        a = random_polyvec(rng, spec, rng.randint(0, min(3, spec.d)))
        b = random_polyvec(rng, spec, rng.randint(0, min(3, spec.d)))
        w = random_lform(rng, spec, rng.randint(0, spec.d))
        for name, v in precalculus_defects(a, b, w, flip).items():
            tally.add(name, v)
    return tally


def run_gerstenhaber(rng: random.Random, cfg: SuiteConfig, fixture: str) -> Tally:
    spec = load_spec(fixture)
    tally = Tally("gerstenhaber", fixture)
    flip = _flip_for(cfg, "gerstenhaber")
    for _ in range(cfg.samples["gerstenhaber"]):
        Ds = [random_polydop(rng, spec, rng.randint(0, 3), rng.choice((1, 2))) for _ in range(3)]
        for name, v in gerstenhaber_defects(*Ds, flip=flip).items():
            tally.add(name, v)
    return tally


def run_chain_calculus(rng: random.Random, cfg: SuiteConfig, fixture: str) -> Tally:
    spec = load_spec(fixture)
    tally = Tally("chain-calculus", fixture)
    flip = _flip_for(cfg, "chain-calculus")
    done = 0
    attempts = 0
    while done < cfg.samples["chain-calculus"] and attempts < 5 * cfg.samples["chain-calculus"]:
        attempts += 1
        t = rng.randint(1, 3)
        a = random_chain(rng, spec, t, cfg.chain_order, 0.4)
        D1 = random_polydop(rng, spec, rng.randint(0, 3), 1)
        D2 = random_polydop(rng, spec, rng.randint(0, 3), 1)
        try:
            res = chain_calculus_defects(D1, D2, a, flip)
        except OrderError:
            for name in IDENTITIES["chain-calculus"]:
                tally.skip(name)
            continue
        done += 1
        for name, v in res.items():
            tally.add(name, v)
    return tally


def _random_cchain(rng: random.Random, m: int, t: int) -> CChain:
    terms = {}
    for _ in range(2):
        k = tuple(random_poly(rng, m, 2, 2) for _ in range(t + 1))
        terms[k] = terms.get(k, 0) + rng.randint(1, 3)
    return CChain(m, t, terms)


def run_oracle(rng: random.Random, cfg: SuiteConfig, fixture: str) -> Tally:
    """Transport to the classical Hochschild calculus of the base ring; meaningful on tangent fixtures."""
    spec = load_spec(fixture)
    tally = Tally("oracle", fixture)
    if any(spec.bracket(i, j) for i in range(spec.d) for j in range(spec.d)) or spec.d != spec.m:
        return tally
    n = cfg.samples["oracle"]
    for _ in range(n):
        D1 = random_polydop(rng, spec, rng.randint(1, 2), rng.choice((1, 2)))
        D2 = random_polydop(rng, spec, rng.randint(1, 2), rng.choice((1, 2)))
        R1, R2 = realize(D1), realize(D2)
        checks = (
            ("realize-d-hoch", d_hoch(D1), c_dhoch(R1)),
            ("realize-bracket", g_bracket(D1, D2), c_bracket(R1, R2)),
            ("realize-cup", cup(D1, D2), c_cup(R1, R2)),
        )
        for name, X, y in checks:
            x = realize(X, y.arity)
            args = [random_poly(rng, spec.m, 3, 3) for _ in range(y.arity)]
            tally.add(name, x(*args) - y(*args))
    order = 5
    for _ in range(n):
        t = rng.randint(1, 3)
        c = _random_cchain(rng, spec.m, t)
        a = transport(spec, c, order)
        tally.add("chain-b", b_h(a) - transport(spec, classical_b(c), order))
        D = random_polydop(rng, spec, rng.randint(1, t), 1)
        pe = partial_eval(a, D)
        tally.add("chain-iota", pe - transport(spec, iota(realize(D), c), pe.order))
        tally.add("cap-right-route", m_l1(PolyDOp.mu(spec), [], a, [D]) - pe)
        s = -1 if (a.degree() + 1) * (D.degree() + 1) % 2 else 1
        tally.add("cap-right-sign", cap_right(a, D) - pe.scale(s))
        D = random_polydop(rng, spec, rng.randint(0, t + 1), 1)
        lv = lie_der_chain(D, a)
        tally.add("chain-lie", lv - transport(spec, lie(realize(D), c), lv.order))
    return tally


def run_hkr(rng: random.Random, cfg: SuiteConfig, fixture: str) -> Tally:
    spec = load_spec(fixture)
    tally = Tally("hkr", fixture)
    for _ in range(cfg.samples["hkr"]):
        g = random_polyvec(rng, spec, rng.randint(0, min(3, spec.d)))
        H = hkr_cochain(g)
        tally.add("hkr-closed", d_hoch(H))
        tally.add("hkr-retraction", antisym(H) - g)
        t = rng.randint(1, min(3, spec.d + 1))
        a = random_chain(rng, spec, t, t, 0.6)
        tally.add("hkr-chain-map", hkr_chain(b_h(a)))
    if spec.d >= 2:
        from .algebroid import PolyVec

        got = hkr_cochain(PolyVec.basis(spec, 0, 1))
        e1, e2 = (1,) + (0,) * (spec.d - 1), (0, 1) + (0,) * (spec.d - 2)
        want = PolyDOp(spec, {(e1, e2): Poly.const(spec.m, Fraction(-1, 2)), (e2, e1): Poly.const(spec.m, Fraction(1, 2))})
        tally.add("hkr-basis-value", got - want)
    return tally


def _random_uelem(rng, spec, order=2):
    basis = pbw_basis(spec.d, order)
    return UElem(spec, {rng.choice(basis): random_poly(rng, spec.m, 1, 2) for _ in range(2)})


def _random_jet(rng, spec, order):
    from .uea import Jet

    return Jet(spec, order, {a: random_poly(rng, spec.m, 2, 2) for a in pbw_basis(spec.d, order) if rng.random() < 0.7})


def run_jets(rng: random.Random, cfg: SuiteConfig, fixture: str) -> Tally:
    spec = load_spec(fixture)
    tally = Tally("jets", fixture)
    N = cfg.jet_order
    for _ in range(cfg.samples["jets"]):
        a, b = _random_uelem(rng, spec), _random_uelem(rng, spec)
        da = coproduct(a)
        tally.add("coassociativity", coproduct_at(da, 0) - coproduct_at(da, 1))
        tally.add("counit", (counit_at(da, 0) - coproduct(a, 0)) + (counit_at(da, 1) - coproduct(a, 0)))
        tally.add("coproduct-multiplicative", coproduct(u_mul(a, b)) - tensor_mul(coproduct(a), coproduct(b)))
        phi, psi = _random_jet(rng, spec, N), _random_jet(rng, spec, N)
        for i in range(spec.d):
            for j in range(spec.d):
                # commuting connections
                tally.add("nabla-commute", nabla1(i, nabla2(j, phi)) - nabla2(j, nabla1(i, phi)))
                # flatness, with the bracket expanded through the appropriate R-module structure
                br = spec.bracket(i, j)
                lhs1 = nabla1(i, nabla1(j, phi)) - nabla1(j, nabla1(i, phi))
                lhs2 = nabla2(i, nabla2(j, phi)) - nabla2(j, nabla2(i, phi))
                rhs1 = lhs1.scale(0)
                rhs2 = lhs2.scale(0)
                for k, c in br.items():
                    rhs1 = rhs1 + nabla1(k, phi).truncate(N - 2).scale(c)
                    rhs2 = rhs2 + jet_mul(alpha2(spec, c, N - 2), nabla2(k, phi).truncate(N - 2))
                tally.add("flatness-nabla1", lhs1 - rhs1)
                tally.add("flatness-nabla2", lhs2 - rhs2)
            prod = jet_mul(phi, psi)
            l1 = nabla1(i, prod) - jet_mul(nabla1(i, phi), psi.truncate(N - 1)) - jet_mul(phi.truncate(N - 1), nabla1(i, psi))
            tally.add("leibniz-nabla1", l1)
            l2 = nabla2(i, prod) - jet_mul(nabla2(i, phi), psi.truncate(N - 1)) - jet_mul(phi.truncate(N - 1), nabla2(i, psi))
            tally.add("leibniz-nabla2", l2)
            r = random_poly(rng, spec.m, 3, 3)
            tally.add("alpha2-horizontal", nabla1(i, alpha2(spec, r, N)))
            if spec.m:
                tally.add("alpha1-nabla2", nabla2(i, alpha1(spec, r, N)))
    for n in range(N + 1):
        tally.add("graded-dimension", Fraction(graded_dims(spec.d, n) - sym_dim(spec.d, n)))
    # on the associated graded, both connections act by contraction (with opposite signs)
    for n in range(1, N + 1):
        top = [al for al in pbw_basis(spec.d, n) if sum(al) == n]
        phi = type(_random_jet(rng, spec, 0))(spec, n, {al: random_poly(rng, spec.m, 2, 2) for al in top})
        for i in range(spec.d):
            n1, n2 = nabla1(i, phi), nabla2(i, phi)
            for be in pbw_basis(spec.d, n - 1):
                if sum(be) != n - 1:
                    continue
                up = tuple(x + (k == i) for k, x in enumerate(be))
                tally.add("graded-contraction-nabla1", n1.value(be) + phi.value(up))
                tally.add("graded-contraction-nabla2", n2.value(be) - phi.value(up))
    return tally


def run_descent(rng: random.Random, cfg: SuiteConfig, fixture: str) -> Tally:
    spec = load_spec(fixture)
    tally = Tally("descent", fixture)
    for t in range(3):
        for N in range(cfg.descent_order + 1):
            rep = descent_check(spec, t, N)
            tally.add(f"descent-degree-{-t}", rep["bijective"])
            tally.add("horizontal-jets-are-functions" if t == 0 else f"descent-dimension-{-t}",
                      Fraction(rep["horizontal_dim"] - rep["chain_dim"]))
    return tally


def _series_of_matrix(f: UniSeries, M, N: int):
    """Exact det f(eps M) truncated at eps^N, through sympy determinants of a polynomial matrix."""
    import sympy

    eps = sympy.Symbol("eps")
    n = M.shape[0]
    acc = sympy.zeros(n, n)
    power = sympy.eye(n)
    for k in range(N + 1):
        acc += sympy.Rational(f.c[k].numerator, f.c[k].denominator) * eps**k * power
        power = power * M
    det = sympy.expand(acc.det(method="berkowitz"))
    poly = sympy.Poly(det, eps)
    return [Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1])) for c in
            [poly.coeff_monomial(eps**k) for k in range(N + 1)]]


def _trace_values(M, N: int) -> dict:
    vals = {}
    P = M
    for k in range(1, N + 1):
        tr = P.trace()
        vals[k] = Fraction(int(tr.p), int(tr.q))
        P = P * M
    return vals


def matrix_oracle(f: UniSeries, M, N: int) -> list:
    """Weight-by-weight defect between the trace-series determinant and the sympy determinant."""
    d = M.shape[0]
    T = det_of_series(f, d, N)
    vals = _trace_values(M, N)
    want = _series_of_matrix(f, M, N)
    return [T.homogeneous(w).evaluate(vals) - want[w] for w in range(N + 1)]


def run_todd(rng: random.Random, cfg: SuiteConfig, fixture: str) -> Tally:
    import sympy

    tally = Tally("todd", "-")
    N = cfg.todd_order
    half = TraceSeries.gen(N, 1).scale(Fraction(-1, 2)).exp()
    for d in (1, 2, 3):
        j = j_omega(d, N)
        tally.add("j-squared", j * j - modified_todd(d, N))
        tally.add("todd-shift", todd(d, N) * half - modified_todd(d, N))
    T = todd(3, N)
    tally.add("newton-round-trip", newton_convert(newton_convert(T, "elementary"), "power") - T)
    series = {"q": q_series("standard", N), "q-tilde": q_tilde_series(N), "j": j_series(N),
              "one-plus-x": UniSeries(N, [1, 1])}
    for k in range(cfg.samples["todd"]):
        # strictly upper triangular: all traces vanish and det f(M) = f(0)^4
        U = sympy.Matrix(4, 4, lambda i, j: rng.randint(-3, 3) if j > i else 0)
        for name, f in series.items():
            T = det_of_series(f, 4, N)
            got = T.evaluate(_trace_values(U, N))
            want = sympy.Matrix(4, 4, lambda i, j: 0)
            power = sympy.eye(4)
            for c in f.c:
                want += sympy.Rational(c.numerator, c.denominator) * power
                power = power * U
            w = want.det()
            tally.add(f"nilpotent-{name}", got - Fraction(int(w.p), int(w.q)))
        # a general matrix, scaled: compare every weight of det f(eps M)
        G = sympy.Matrix(3, 3, lambda i, j: rng.randint(-2, 2))
        for name, f in series.items():
            for defect in matrix_oracle(f, G, min(N, 4)):
                tally.add(f"scaled-matrix-{name}", defect)
    return tally


def _random_super(rng, mc, kind):
    d, s = mc.d, mc.s
    spec = flat(d)
    comps = {}
    for _ in range(2):
        K = tuple(sorted(rng.sample(range(s), rng.randint(0, min(2, s)))))
        n = rng.randint(0, d)
        x = random_polyvec(rng, spec, n) if kind == "vec" else random_lform(rng, spec, n)
        comps[K] = comps[K] + x if K in comps else x
    return SuperElem(kind, d, s, comps)


def run_twist(rng: random.Random, cfg: SuiteConfig, fixture: str) -> Tally:
    tally = Tally("twist", fixture)
    mc = load_mc(fixture)
    tally.add("mc-equation", mc_check(mc.omega, mc.dm))
    dT, dO = twist_diff_T(mc), twist_diff_Omega(mc)
    for _ in range(min(10, cfg.samples["twist"])):
        x = _random_super(rng, mc, "vec")
        tally.add("twisted-d-squared-vectors", dT(dT(x)))
        y = _random_super(rng, mc, "form")
        tally.add("twisted-d-squared-forms", dO(dO(y)))
    for n in (1, 2, 3):
        tally.add("trace-xi-closed", tr_xi_closedness(mc, n))
    for _ in range(cfg.samples["twist"]):
        b = random_poly(rng, mc.d, 3)
        D = SuperElem.even(random_polyvec(rng, flat(mc.d), rng.randint(0, mc.d)), mc.s)
        w = SuperElem.even(random_lform(rng, flat(mc.d), rng.randint(0, mc.d)), mc.s)
        for name, v in derivation_suite(b, D, w, mc).items():
            tally.add(name, v)
    return tally


RUNNERS: dict[str, Callable] = {
    "precalculus": run_precalculus,
    "gerstenhaber": run_gerstenhaber,
    "chain-calculus": run_chain_calculus,
    "oracle": run_oracle,
    "hkr": run_hkr,
    "jets": run_jets,
    "descent": run_descent,
    "todd": run_todd,
    "twist": run_twist,
}


def _jobs(cfg: SuiteConfig) -> list:
    jobs = []
    for g in GROUPS:
        if g not in cfg.groups:
            continue
        if g == "todd":
            jobs.append((g, "-"))
        elif g == "twist":
            jobs.extend((g, f) for f in MC_FIXTURES)
        elif g in ("oracle", "descent"):
            jobs.append((g, "A1"))
        else:
            jobs.extend((g, f) for f in cfg.fixtures)
    return jobs


def threads_from_env() -> int:
    try:
        return max(1, int(os.environ.get("PRECALC_THREADS", "1")))
    except ValueError:
        return 1


def run_suite(cfg: SuiteConfig, threads: int | None = None) -> dict:
    """Run the selected groups; the report depends only on the config, never on scheduling."""
    unknown = [g for g in cfg.groups if g not in RUNNERS]
    if unknown:
        raise ValueError(f"unknown identity group(s): {', '.join(unknown)}")
    if cfg.corrupt and not any(cfg.corrupt in ids for ids in IDENTITIES.values()):
        raise ValueError(f"unknown identity for corruption: {cfg.corrupt}")
    master = random.Random(cfg.seed)
    jobs = [(g, f, master.getrandbits(64)) for g, f in _jobs(cfg)]
    threads = threads or threads_from_env()

    def work(job):
        g, f, s = job
        return RUNNERS[g](random.Random(s), cfg, f).records()

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(work, jobs))
    else:
        results = [work(j) for j in jobs]
    records = [r for rs in results for r in rs]
    ok = all(r["failures"] == 0 for r in records)
    return {"schema": 1, "config": cfg.to_json(), "results": records, "ok": ok}
