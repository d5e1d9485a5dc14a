"""Acceptance criteria 1-10, one test each.

Every test records a one-line verdict; the lines are printed at the end of the pytest run
(and directly when this file is executed as a script)."""

import json
import subprocess
import sys
import time
from fractions import Fraction

from precalc.algebroid import PolyVec, load_spec
from precalc.chains import descent_check
from precalc.dpoly import PolyDOp
from precalc.hkr import hkr_cochain
from precalc.samples import monomials
from precalc.scalar import Poly
from precalc.suite import DEFAULT_SAMPLES, SuiteConfig, run_suite

FIXTURES = ("A1", "A2", "A3")
VERDICTS: dict = {}


def record(n, ok, detail):
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    VERDICTS[n] = line
    print(line)
    return ok


def suite(groups, fixtures=FIXTURES, **kw):
    t0 = time.perf_counter()
    rep = run_suite(SuiteConfig(fixtures=fixtures, seed=42, groups=groups, **kw))
    return rep, time.perf_counter() - t0


def summary(rep):
    recs = rep["results"]
    fails = sum(r["failures"] for r in recs)
    samples = sum(r["samples"] for r in recs)
    return recs, fails, f"{len(recs)} identity rows, {samples} samples, {fails} failures"


def per_identity_min(recs):
    return min(r["samples"] for r in recs)


def test_criterion_1_precalculus():
    rep, dt = suite(("precalculus",))
    recs, fails, text = summary(rep)
    ok = fails == 0 and per_identity_min(recs) >= 50 and {r["fixture"] for r in recs} == set(FIXTURES) and dt < 60
    assert record(1, ok, f"precalculus axioms on A1/A2/A3: {text}, {dt:.1f}s")


def test_criterion_2_gerstenhaber():
    rep, dt = suite(("gerstenhaber",))
    recs, fails, text = summary(rep)
    ok = fails == 0 and per_identity_min(recs) >= 30 and len(recs) == 15 and dt < 300
    assert record(2, ok, f"homotopy Gerstenhaber identities: {text}, {dt:.1f}s")


def test_criterion_3_chain_calculus():
    rep, dt = suite(("chain-calculus",))
    recs, fails, text = summary(rep)
    ok = fails == 0 and per_identity_min(recs) >= 20 and len(recs) == 21 and dt < 600
    assert record(3, ok, f"chain-level calculus identities: {text}, {dt:.1f}s")


def test_criterion_4_classical_oracle():
    rep, dt = suite(("oracle",), fixtures=("A1",))
    recs, fails, text = summary(rep)
    names = {r["identity"] for r in recs}
    want = {"realize-d-hoch", "realize-bracket", "realize-cup", "chain-b", "chain-iota", "chain-lie"}
    ok = fails == 0 and names >= want and per_identity_min(recs) >= 30
    assert record(4, ok, f"classical Hochschild oracle on A1: {text}")


def test_criterion_5_hkr():
    rep, _ = suite(("hkr",))
    recs, fails, text = summary(rep)
    s = load_spec("A1")
    half = Poly.const(2, Fraction(1, 2))
    want = PolyDOp.gens(s, 0, 1, coeff=-half) + PolyDOp.gens(s, 1, 0, coeff=half)
    got = hkr_cochain(PolyVec.basis(s, 0, 1))
    exact = json.dumps(got.to_json(), sort_keys=True) == json.dumps(want.to_json(), sort_keys=True)
    ok = fails == 0 and exact and min(r["samples"] for r in recs if r["identity"] != "hkr-basis-value") >= 50
    assert record(5, ok, f"HKR closedness, retraction, chain map: {text}; e1^e2 value exact={exact}")


def test_criterion_6_jets():
    rep, _ = suite(("jets",))
    recs, fails, text = summary(rep)
    names = {r["identity"] for r in recs}
    want = {"coassociativity", "coproduct-multiplicative", "flatness-nabla1", "flatness-nabla2",
            "nabla-commute", "graded-dimension", "alpha2-horizontal"}
    hz = descent_check(load_spec("A1"), 0, 3, max_poly_degree=3)
    horizontal = hz["bijective"] and hz["horizontal_dim"] == len(monomials(2, 3))
    ok = fails == 0 and names >= want and horizontal
    assert record(6, ok, f"enveloping algebra and jets: {text}; horizontal jets = alpha_2(R) at order 3: {horizontal}")


def test_criterion_7_descent():
    s = load_spec("A1")
    rows = []
    for t in range(3):
        for N in range(4):
            rep = descent_check(s, t, N)
            rows.append((t, N, rep["bijective"], rep["chain_dim"]))
    ok = all(r[2] for r in rows)
    dims = ", ".join(f"t={t},N={N}:{d}" for t, N, _b, d in rows if N == 3)
    assert record(7, ok, f"descent map bijective for t<=2, N<=3 on A1 ({dims})")


def test_criterion_8_characteristic_classes():
    rep, _ = suite(("todd",))
    recs, fails, text = summary(rep)
    names = {r["identity"] for r in recs}
    want = {"j-squared", "todd-shift", "newton-round-trip", "nilpotent-q"}
    nil = min(r["samples"] for r in recs if r["identity"].startswith("nilpotent"))
    ok = fails == 0 and names >= want and nil >= 10
    assert record(8, ok, f"Todd-type series: {text}")


def test_criterion_9_twisting():
    rep, _ = suite(("twist",))
    recs, fails, text = summary(rep)
    deriv = [r for r in recs if r["identity"].startswith(("dFb-", "trxi-"))]
    closed = [r for r in recs if r["identity"] == "trace-xi-closed"]
    ok = fails == 0 and len({r["identity"] for r in deriv}) == 4 and min(r["samples"] for r in deriv) >= 30 \
        and all(r["samples"] == 3 for r in closed)
    assert record(9, ok, f"Maurer-Cartan twisting on {len({r['fixture'] for r in recs})} fixtures: {text}")


def test_criterion_10_reproducibility(tmp_path):
    cmd = [sys.executable, "-m", "precalc.cli", "suite", "--seed", "42"]
    a = subprocess.run(cmd, capture_output=True)
    b = subprocess.run(cmd, capture_output=True)
    same = a.returncode == b.returncode == 0 and a.stdout == b.stdout and len(a.stdout) > 0
    bad = subprocess.run(cmd + ["--group", "chain-calculus", "--samples", "chain-calculus=5", "--corrupt", "lie-cup"],
                         capture_output=True)
    ok = same and bad.returncode != 0
    assert record(10, ok, f"seed 42 report byte-identical: {same}; corrupted sign exits {bad.returncode}")


if __name__ == "__main__":
    import pytest

    sys.exit(pytest.main([__file__, "-q"]))
