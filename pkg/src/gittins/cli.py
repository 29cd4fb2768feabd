"""Command-line front end.

Subcommands: build-table, index, sweep, verify, bayes2.  Exit codes:
0 success, 1 check failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import approx, bayes2, sim, table, verify
from .engine import GittinsEngine, IndexQuery
from .policies import PolicyKind

EXIT_OK = 0
EXIT_CHECK_FAIL = 1
EXIT_USAGE = 2


class ConfigError(Exception):
    pass


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError, KeyError, table.TableFormatError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gittins",
                                description="Finite-horizon Gaussian index toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build-table", help="build the (T, m) index lookup table")
    b.add_argument("--horizon", type=int, required=True)
    b.add_argument("--tol", type=float, default=1e-6,
                   help="per-stage spline fit tolerance")
    b.add_argument("--out", required=True)
    b.add_argument("--jobs", type=int, default=None,
                   help="parallel inductions (default: GITTINS_JOBS or 1)")
    b.set_defaults(func=cmd_build_table)

    i = sub.add_parser("index", help="print one index value")
    i.add_argument("--mean", type=float, required=True)
    i.add_argument("--variance", type=float, required=True)
    i.add_argument("--remaining", type=int, required=True)
    i.add_argument("--approx", action="store_true",
                   help="closed-form approximation instead of the exact engine")
    i.set_defaults(func=cmd_index)

    s = sub.add_parser("sweep", help="run a regret experiment sweep")
    s.add_argument("--config", required=True, help="JSON sweep configuration")
    s.add_argument("--table", default=None, help="index table file")
    s.add_argument("--out", required=True, help="output directory")
    s.set_defaults(func=cmd_sweep)

    v = sub.add_parser("verify", help="run the verification suite")
    v.add_argument("--table", required=True)
    v.add_argument("--reps", type=int, default=10000)
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("index-curve",
                       help="export exact and approximate index curves over m")
    c.add_argument("--variance", type=float, default=1.0)
    c.add_argument("--max-m", type=int, required=True)
    c.add_argument("--tol", type=float, default=1e-6)
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_index_curve)

    y = sub.add_parser("bayes2", help="two-armed decisions: index policy vs Bayes")
    y.add_argument("--horizon", type=int, default=2)
    y.add_argument("--nu2", type=float, nargs="+", required=True,
                   help="second-arm prior means (first arm N(0,1), second N(nu2, 1/2))")
    y.add_argument("--max-horizon", type=int, default=2000)
    y.set_defaults(func=cmd_bayes2)
    return p


def cmd_build_table(args) -> int:
    if args.horizon < 2:
        raise ConfigError(f"--horizon must be >= 2, got {args.horizon}")
    if args.horizon > 20000:
        est = args.horizon * args.horizon * 8 / 2 ** 20
        raise ConfigError(
            f"--horizon {args.horizon} needs roughly {est:.0f} MiB plus days of "
            "compute; rebuild with a smaller horizon")
    jobs = args.jobs if args.jobs is not None else table.default_jobs()
    t0 = time.time()
    tbl = table.build_table(args.horizon, args.tol, jobs=jobs)
    table.save_table(tbl, args.out)
    dt = time.time() - t0
    print(f"built {len(tbl)} entries (horizon {tbl.n}, tol {tbl.tol:g}) "
          f"in {dt:.1f}s -> {args.out}")
    return EXIT_OK


def cmd_index(args) -> int:
    if args.remaining < 1:
        raise ConfigError(f"--remaining must be >= 1, got {args.remaining}")
    if args.variance < 0:
        raise ConfigError(f"--variance must be >= 0, got {args.variance}")
    if args.approx:
        val = approx.approx_gittins(args.mean, args.variance, args.remaining)
    else:
        val = GittinsEngine().index(
            IndexQuery(args.mean, args.variance, args.remaining))
    print(f"{val:.6f}")
    return EXIT_OK


_POLICY_NAMES = {k.value: k for k in PolicyKind}


def parse_sweep_config(payload: dict) -> sim.SweepConfig:
    """Validate the JSON sweep schema, reporting every problem at once."""
    errors = []

    def want(key, typ, cond, desc):
        v = payload.get(key)
        if v is None:
            errors.append(f"missing key '{key}' ({desc})")
            return None
        if typ is float and isinstance(v, int):
            v = float(v)
        if not isinstance(v, typ) or isinstance(v, bool) or not cond(v):
            errors.append(f"key '{key}': expected {desc}, got {v!r}")
            return None
        return v

    n = want("horizon", int, lambda v: v >= 1, "integer >= 1")
    d = want("arms", int, lambda v: v >= 1, "integer >= 1")
    reps = want("reps", int, lambda v: v >= 1, "integer >= 1")
    seed = want("seed", int, lambda v: True, "integer")
    deltas = payload.get("deltas")
    if not isinstance(deltas, list) or not deltas or \
            not all(isinstance(x, (int, float)) and x >= 0 for x in deltas):
        errors.append("key 'deltas': expected a non-empty list of gaps >= 0")
        deltas = []
    policies = payload.get("policies")
    kinds = []
    if not isinstance(policies, list) or not policies:
        errors.append("key 'policies': expected a non-empty list of policy names")
    else:
        for name in policies:
            kind = _POLICY_NAMES.get(name)
            if kind is None:
                errors.append(f"unknown policy {name!r} "
                              f"(known: {', '.join(sorted(_POLICY_NAMES))})")
            else:
                kinds.append(kind)
    unknown = set(payload) - {"horizon", "arms", "reps", "seed", "deltas", "policies"}
    for key in sorted(unknown):
        errors.append(f"unknown key '{key}'")
    if errors:
        raise ConfigError("invalid sweep config:\n  " + "\n  ".join(errors))
    return sim.SweepConfig(n, d, tuple(float(x) for x in deltas),
                           tuple(kinds), reps, seed)


def cmd_sweep(args) -> int:
    import os
    try:
        with open(args.config) as fh:
            payload = json.load(fh)
    except json.JSONDecodeError as e:
        raise ConfigError(f"config {args.config} is not valid JSON: {e}") from None
    if not isinstance(payload, dict):
        raise ConfigError("config must be a JSON object")
    config = parse_sweep_config(payload)
    tbl = None
    if PolicyKind.GITTINS_FLAT in config.policies:
        if args.table is None:
            raise ConfigError(
                f"policy 'gittins' needs --table with horizon >= {config.horizon}")
        tbl = table.load_table(args.table)
        if tbl.n < config.horizon:
            raise ConfigError(
                f"table horizon {tbl.n} < required {config.horizon}")
    engine = GittinsEngine() if PolicyKind.GITTINS_PRIOR in config.policies else None
    os.makedirs(args.out, exist_ok=True)
    result = sim.run_sweep(config, tbl, engine)
    out = os.path.join(args.out, f"regret_n{config.horizon}_d{config.arms}.dat")
    sim.write_sweep(result, out)
    print(f"wrote {out}")
    return EXIT_OK


def cmd_index_curve(args) -> int:
    if args.max_m < 1:
        raise ConfigError(f"--max-m must be >= 1, got {args.max_m}")
    if args.variance <= 0:
        raise ConfigError(f"--variance must be > 0, got {args.variance}")
    engine = GittinsEngine(tol=args.tol)
    with open(args.out, "w") as fh:
        fh.write(f"% variance={args.variance:g} tol={args.tol:g}\n")
        fh.write("% columns: m exact approx\n")
        for m in range(1, args.max_m + 1):
            fh.write(f"{m} {engine.index_zero(args.variance, m):.17g} "
                     f"{approx.approx_gittins(0.0, args.variance, m):.17g}\n")
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    tbl = table.load_table(args.table)
    reports = []
    reports += verify.check_scale_bracket(tbl)
    reports += verify.check_f_beta()
    reps = args.reps
    if reps < verify.MIN_STAT_REPS:
        print(f"% warning: --reps {reps} < {verify.MIN_STAT_REPS}, "
              "statistical checks downgraded to report-only")
    rule = verify.StoppingRule(-0.5, 1000)
    reports.append(verify.mc_expected_tau(rule, 0.0, max(reps, 2)))
    tails = verify.mc_gaussian_tails(max(reps, 2))
    if reps < verify.MIN_STAT_REPS:
        for r in tails + [reports[-1]]:
            r.hard = False
    reports += tails
    ok = verify.write_report(reports, sys.stdout)
    return EXIT_OK if ok else EXIT_CHECK_FAIL


def cmd_bayes2(args) -> int:
    n = args.horizon
    if n < 2:
        raise ConfigError(f"--horizon must be >= 2, got {n}")
    if n > args.max_horizon:
        raise ConfigError(f"--horizon {n} exceeds --max-horizon {args.max_horizon}")
    engine = GittinsEngine()
    solver = bayes2.TwoArmedBayes()
    print("% columns: nu2 gittins_arm bayes_arm")
    for nu2 in args.nu2:
        g1 = engine.index(IndexQuery(0.0, 1.0, n))
        g2 = engine.index(IndexQuery(nu2, 0.5, n))
        g_arm = 1 if g1 >= g2 else 2
        b_arm = solver.select(bayes2.BayesState(0.0, 1.0, nu2, 0.5, n))
        print(f"{nu2:g} {g_arm} {b_arm}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
