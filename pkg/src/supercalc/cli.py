"""Command line front end: ``supercalc verify | moduli | hodge``."""

from __future__ import annotations

import argparse
import json
import os
import sys

from .hodge import MAX_M, RangeError, hodge_report
from .moduli import BundleSpec, exact_lagrangian_zariski_dim, torus_moduli
from .suites import SUITES, RunConfig, SuiteError, run_suite

SEED_ENV = "SUPERCALC_SEED"


def _seed(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get(SEED_ENV)
    return int(env) if env else 0


def _emit(report: dict, fmt: str, out: str | None) -> None:
    if fmt == "json":
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    else:
        text = "".join(f"{k:<16} {_cell(v)}\n" for k, v in sorted(report.items()))
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cell(v) -> str:
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    return str(v)


def cmd_verify(args) -> int:
    cfg = RunConfig(n=args.n, m=args.m, K=args.K, cases=args.cases, seed=_seed(args.seed))
    rep = run_suite(args.suite, cfg)
    _emit(rep.to_json(), args.format, args.out)
    return 0 if rep.ok else 1


def cmd_moduli(args) -> int:
    if args.target == "torus":
        if args.m is None:
            raise RangeError("moduli torus needs --m")
        rep = torus_moduli(args.m)
    else:
        if not args.degrees:
            raise ValueError("moduli p1 needs --degrees")
        degrees = [int(d) for d in args.degrees.split(",")]
        rep = exact_lagrangian_zariski_dim(BundleSpec(tuple(degrees)))
    _emit(rep.to_json(), args.format, args.out)
    return 0


def cmd_hodge(args) -> int:
    if not 1 <= args.m <= MAX_M:
        raise RangeError(f"m must lie in 1..{MAX_M}, got {args.m}")
    rep = hodge_report(args.m, args.K, bridge=not args.no_bridge)
    _emit(rep, args.format, args.out)
    bridge = rep.get("bridge")
    return 0 if bridge is None or bridge["max_deviation"] == "0" else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="supercalc", description="Exact super-geometry identity checks.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="write the report to this path")
        sp.add_argument("--format", choices=("json", "table"), default="json")

    v = sub.add_parser("verify", help="run an identity suite")
    v.add_argument("suite", help="one of: " + ", ".join(SUITES))
    v.add_argument("--n", type=int, default=2)
    v.add_argument("--m", type=int, default=1)
    v.add_argument("--K", type=int, default=1)
    v.add_argument("--cases", type=int, default=20)
    v.add_argument("--seed", type=int, default=None, help=f"falls back to ${SEED_ENV}, then 0")
    common(v)
    v.set_defaults(func=cmd_verify)

    mo = sub.add_parser("moduli", help="tangent-space dimension reports")
    mo.add_argument("target", choices=("torus", "p1"))
    mo.add_argument("--m", type=int)
    mo.add_argument("--degrees", help="comma separated line bundle degrees, e.g. 1,1")
    common(mo)
    mo.set_defaults(func=cmd_moduli)

    h = sub.add_parser("hodge", help="Betti numbers and the Delta / *d* comparison")
    h.add_argument("--m", type=int, required=True)
    h.add_argument("--K", type=int, default=1)
    h.add_argument("--no-bridge", action="store_true")
    common(h)
    h.set_defaults(func=cmd_hodge)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SuiteError, RangeError, ValueError) as exc:
        print(f"supercalc: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
