"""Command-line entry point: validate, op, suite, todd, twist.

Exit codes: 0 success, 1 identity failure (or invalid algebroid), 2 input error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import algebroid as alg
from . import chains, dpoly, hkr, twist, uea
from .algebroid import AlgebroidSpec, LForm, PolyVec, SpecError, load_spec
from .chains import Chain
from .charclass import CONVENTIONS, j_omega, modified_todd, newton_convert, sqrt_todd, todd
from .dpoly import PolyDOp
from .suite import DEFAULT_SAMPLES, GROUPS, SuiteConfig, run_suite, threads_from_env
from .uea import OrderError, UElem

SCHEMA = 1


class InputError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True)


def _emit(obj, out=None) -> None:
    text = _dump(obj) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# validate

def cmd_validate(args) -> int:
    try:
        text = Path(args.path).read_text()
        spec = AlgebroidSpec.from_json(json.loads(text))
    except (OSError, json.JSONDecodeError, SpecError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    report = alg.validate(spec)
    _emit({"schema": SCHEMA, "name": spec.name, **report})
    return 0 if report["valid"] else 1


# op

def _spec_for(name: str) -> AlgebroidSpec:
    try:
        return load_spec(name)
    except (OSError, SpecError) as exc:
        raise InputError(f"cannot load algebroid {name!r}: {exc}") from exc


def _parse_arg(raw: str):
    if raw.startswith("@"):
        raw = Path(raw[1:]).read_text()
    if raw == "mu":
        return "mu"
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON argument: {exc}") from exc


def _decode(kind: str, spec: AlgebroidSpec, data):
    if kind == "polydop":
        return PolyDOp.mu(spec) if data == "mu" else PolyDOp.from_json(spec, data)
    if data == "mu":
        raise InputError("'mu' is only accepted where a poly-differential operator is expected")
    if kind == "polyvec":
        return PolyVec.from_json(spec, data)
    if kind == "lform":
        return LForm.from_json(spec, data)
    if kind == "uelem":
        return UElem.from_json(spec, data)
    if kind == "chain":
        return Chain.from_json(spec, data)
    raise AssertionError(kind)


def _op_brace(D, *rest):
    return dpoly.brace(D, list(rest))


OPS = {
    "schouten": (("polyvec", "polyvec"), alg.schouten),
    "wedge": (("polyvec", "polyvec"), alg.wedge),
    "d_l": (("lform",), alg.de_rham),
    "contract": (("polyvec", "lform"), alg.contract),
    "lie": (("polyvec", "lform"), alg.lie_derivative),
    "u-mul": (("uelem", "uelem"), uea.u_mul),
    "coproduct": (("uelem",), lambda a: PolyDOp.from_tensor(uea.coproduct(a))),
    "brace": (("polydop", "polydop*"), _op_brace),
    "bracket": (("polydop", "polydop"), dpoly.g_bracket),
    "cup": (("polydop", "polydop"), dpoly.cup),
    "d-hoch": (("polydop",), dpoly.d_hoch),
    "b-h": (("chain",), chains.b_h),
    "cap-left": (("polydop", "chain"), chains.cap_left),
    "cap-right": (("chain", "polydop"), chains.cap_right),
    "lie-chain": (("polydop", "chain"), chains.lie_der_chain),
    "hkr": (("polyvec",), hkr.hkr_cochain),
    "hkr-chain": (("chain",), hkr.hkr_chain),
    "antisym": (("polydop",), hkr.antisym),
}


def cmd_op(args) -> int:
    if args.name not in OPS:
        raise InputError(f"unknown op {args.name!r}; choose from {', '.join(sorted(OPS))}")
    kinds, fn = OPS[args.name]
    spec = _spec_for(args.fixture)
    raw = [_parse_arg(a) for a in args.arg]
    variadic = kinds[-1].endswith("*")
    fixed = kinds[:-1] if variadic else kinds
    if len(raw) < len(fixed) or (not variadic and len(raw) != len(fixed)):
        raise InputError(f"op {args.name} expects {len(fixed)}{'+' if variadic else ''} argument(s), got {len(raw)}")
    kinds_full = list(fixed) + [kinds[-1][:-1]] * (len(raw) - len(fixed)) if variadic else list(fixed)
    try:
        values = [_decode(k, spec, r) for k, r in zip(kinds_full, raw)]
        result = fn(*values)
    except (OrderError, SpecError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{args.name}: {exc}") from exc
    _emit({"schema": SCHEMA, "op": args.name, "fixture": spec.name, "result": result.to_json()})
    return 0


# suite

def _parse_samples(items) -> dict:
    samples = dict(DEFAULT_SAMPLES)
    for item in items or []:
        key, _, val = item.partition("=")
        if key not in samples or not val.isdigit():
            raise InputError(f"bad --samples entry {item!r}; use GROUP=N with GROUP in {', '.join(sorted(samples))}")
        samples[key] = int(val)
    return samples


def cmd_suite(args) -> int:
    groups = tuple(args.group) if args.group else GROUPS
    for g in groups:
        if g not in GROUPS:
            raise InputError(f"unknown group {g!r}; choose from {', '.join(GROUPS)}")
    fixtures = tuple(args.fixture) if args.fixture else ("A1",)
    for f in fixtures:
        _spec_for(f)
    cfg = SuiteConfig(
        fixtures=fixtures,
        seed=args.seed,
        groups=groups,
        samples=_parse_samples(args.samples),
        chain_order=args.chain_order,
        corrupt=args.corrupt,
    )
    try:
        report = run_suite(cfg, threads=args.threads or threads_from_env())
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _emit(report, args.output)
    return 0 if report["ok"] else 1


# todd

def cmd_todd(args) -> int:
    if args.rank < 0 or args.order < 0:
        raise InputError("rank and order must be non-negative")
    try:
        if args.kind == "todd":
            T = todd(args.rank, args.order, args.convention)
        elif args.kind == "sqrt-todd":
            T = sqrt_todd(args.rank, args.order, args.convention)
        elif args.kind == "modified-todd":
            T = modified_todd(args.rank, args.order)
        else:
            T = j_omega(args.rank, args.order)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if args.basis == "elementary":
        T = newton_convert(T, "elementary")
    if args.emit == "text":
        sys.stdout.write(repr(T) + "\n")
    else:
        _emit({"schema": SCHEMA, "kind": args.kind, "rank": args.rank, "convention": args.convention,
               "series": T.to_json()})
    return 0


# twist

def cmd_twist(args) -> int:
    try:
        mc = twist.load_mc(args.mc)
    except (OSError, KeyError, ValueError) as exc:
        raise InputError(f"cannot load Maurer-Cartan element {args.mc!r}: {exc}") from exc
    if args.action == "check":
        defect = twist.mc_check(mc.omega, mc.dm)
        _emit({"schema": SCHEMA, "name": mc.name, "mc_defect": defect.to_json(), "ok": defect.is_zero()})
        return 0 if defect.is_zero() else 1
    if args.action == "xi":
        xi = twist.xi_matrix(mc)
        powers = []
        ok = True
        for n in range(1, args.power + 1):
            closed = twist.tr_xi_closedness(mc, n)
            ok = ok and closed.is_zero()
            powers.append({"n": n, "trace": twist.tr_xi_power(mc, n).to_json(), "closed": closed.is_zero()})
        _emit({"schema": SCHEMA, "name": mc.name, "xi": [[x.to_json() for x in row] for row in xi],
               "trace_powers": powers, "ok": ok})
        return 0 if ok else 1
    from .suite import SuiteConfig as _Cfg, run_twist

    samples = dict(DEFAULT_SAMPLES)
    samples["twist"] = args.samples
    tally = run_twist(random.Random(args.seed), _Cfg(seed=args.seed, samples=samples), args.mc)
    records = tally.records()
    ok = all(r["failures"] == 0 for r in records)
    _emit({"schema": SCHEMA, "name": mc.name, "seed": args.seed, "results": records, "ok": ok})
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="precalc", description="Exact Hochschild calculus of Lie algebroids.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="check an algebroid JSON file")
    v.add_argument("path")
    v.set_defaults(func=cmd_validate)

    o = sub.add_parser("op", help="evaluate one operation on JSON-encoded inputs")
    o.add_argument("name")
    o.add_argument("--fixture", default="A1", help="fixture name or algebroid JSON path")
    o.add_argument("--arg", action="append", default=[], help="JSON value, @file, or 'mu'")
    o.set_defaults(func=cmd_op)

    s = sub.add_parser("suite", help="run the seeded identity suite")
    s.add_argument("--seed", type=int, default=42)
    s.add_argument("--fixture", action="append", help="repeatable; default A1")
    s.add_argument("--group", action="append", help=f"repeatable; any of {', '.join(GROUPS)}")
    s.add_argument("--samples", action="append", help="GROUP=N, repeatable")
    s.add_argument("--chain-order", type=int, default=4)
    s.add_argument("--corrupt", help="negate the sign of one identity (negative control)")
    s.add_argument("--threads", type=int, default=None, help="defaults to PRECALC_THREADS or 1")
    s.add_argument("--output", help="write the report here instead of stdout")
    s.set_defaults(func=cmd_suite)

    t = sub.add_parser("todd", help="emit Todd-type series in trace symbols")
    t.add_argument("--rank", type=int, required=True)
    t.add_argument("--order", type=int, required=True)
    t.add_argument("--convention", choices=CONVENTIONS, default="standard")
    t.add_argument("--kind", choices=("todd", "sqrt-todd", "modified-todd", "j"), default="todd")
    t.add_argument("--basis", choices=("power", "elementary"), default="power")
    t.add_argument("--emit", choices=("json", "text"), default="json")
    t.set_defaults(func=cmd_todd)

    w = sub.add_parser("twist", help="Maurer-Cartan checks, the Xi matrix and the derivation identities")
    w.add_argument("action", choices=("check", "xi", "derivation-suite"))
    w.add_argument("--mc", default="mc_line", help="fixture name or JSON path")
    w.add_argument("--power", type=int, default=3)
    w.add_argument("--seed", type=int, default=42)
    w.add_argument("--samples", type=int, default=30)
    w.set_defaults(func=cmd_twist)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
