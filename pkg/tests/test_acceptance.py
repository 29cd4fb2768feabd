"""Acceptance suite: one test per criterion, one pass/fail line each.

Run with -s to see the lines as they complete:

    python3 -m pytest tests/test_acceptance.py -q -s

The heavy shared artifacts (horizon-500 and horizon-1000 tables) are built
once per session.  Fit tolerances are relaxed from the 1e-6 default where a
criterion has a wall-clock budget; the measured index drift from that
relaxation is orders of magnitude below every tolerance used here (see the
engine tests and README accuracy notes).
"""

import math
import time

import numpy as np
import pytest

from gittins.approx import approx_gittins
from gittins.bayes2 import bayes_threshold_n2, gittins_threshold_n2
from gittins.engine import GittinsEngine, gittins_index
from gittins.policies import PolicyKind, PolicySpec
from gittins.sim import SweepConfig, episode_rng, run_episode, run_sweep
from gittins.table import build_table, load_table, save_table
from gittins.verify import StoppingRule, check_f_beta, check_scale_bracket, \
    f_beta, mc_expected_tau

from grid_oracle import gamma0_grid


def report(name, ok, detail):
    print(f"\n[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


# build times are charged against the criteria that use each table
_BUILD_TIMES = {}


@pytest.fixture(scope="module")
def table500():
    t0 = time.time()
    tbl = build_table(500, 1e-5)
    _BUILD_TIMES["table500"] = time.time() - t0
    return tbl


@pytest.fixture(scope="module")
def table1000():
    t0 = time.time()
    tbl = build_table(1000, 1e-4)
    _BUILD_TIMES["table1000"] = time.time() - t0
    return tbl


def test_index_paper_values():
    t0 = time.time()
    a = gittins_index(0.0, 1.0, 2)
    b = gittins_index(0.0, 0.5, 2)
    dt = time.time() - t0
    ok = abs(a - 0.195183) <= 1e-4 and abs(b - 0.112689) <= 1e-4 and dt < 1.0
    report("index paper values", ok,
           f"gamma(0,1,2)={a:.6f} gamma(0,1/2,2)={b:.6f} in {dt:.2f}s")


def test_decision_thresholds():
    g = gittins_threshold_n2()
    b = bayes_threshold_n2()
    ok = abs(g - 0.082494) <= 2e-4 and abs(b - 0.116462) <= 1e-3 and g < b
    report("two-armed decision thresholds", ok,
           f"index-policy switch {g:.6f}, bayes switch {b:.6f}, ordering {g < b}")


def test_oracle_equivalence():
    t0 = time.time()
    eng = GittinsEngine(tol=1e-6)
    worst = 0.0
    for s2 in (1.0, 0.5, 0.2, 0.02):
        for m in range(1, 51):
            spline = eng.index_zero(s2, m)
            grid = gamma0_grid(s2, m)[-1]
            worst = max(worst, abs(spline - grid))
    dt = time.time() - t0
    ok = worst <= 1e-4 and dt < 120.0
    report("oracle equivalence (m<=50, 4 variances)", ok,
           f"max |spline - grid oracle| = {worst:.2e} in {dt:.0f}s")


def test_scale_bracket_n500(table500):
    t0 = time.time()
    upper, lower = check_scale_bracket(table500)
    dt = time.time() - t0 + _BUILD_TIMES.get("table500", 0.0)
    ok = upper.passed and lower.estimate > 0.0 and dt < 600.0
    report("exponential-scale bracket on n=500 table", ok,
           f"zero violations={upper.passed}, worst margin at {upper.name}, "
           f"fitted lower constant c={lower.estimate:.4f}, total {dt:.0f}s")


def test_structural_suite(tmp_path):
    eng = GittinsEngine()
    checks = []
    # horizon one returns the mean exactly
    checks.append(gittins_index(0.37, 2.3, 1) == 0.37)
    # index never below the mean
    checks.append(all(eng.index_zero(s2, m) >= 0.0
                      for s2 in (0.1, 1.0, 3.0) for m in (1, 2, 5, 20)))
    # shift invariance is exact in the API
    base = gittins_index(0.0, 1.0, 7)
    checks.append(gittins_index(1.25, 1.0, 7) - base == 1.25)
    # monotone in m within tolerance
    vals = [eng.index_zero(1.0, m) for m in range(1, 15)]
    checks.append(all(b >= a - 1e-6 for a, b in zip(vals, vals[1:])))
    # table round-trip bit-exact
    tbl = build_table(25, 1e-6)
    save_table(tbl, tmp_path / "t.dat")
    back = load_table(tmp_path / "t.dat")
    checks.append(all(back.lookup(T, m) == v for T, m, v in tbl.entries()))
    # deterministic replays bit-exact
    from gittins.sim import BanditInstance
    inst = BanditInstance((0.0, -0.5), 40)
    spec = PolicySpec(PolicyKind.THOMPSON, 40, 2)
    a = run_episode(inst, spec, episode_rng(3, 0, 0, 0))
    b = run_episode(inst, spec, episode_rng(3, 0, 0, 0))
    checks.append((a == b).all())
    report("structural property suite", all(checks),
           f"{sum(bool(c) for c in checks)}/{len(checks)} exact assertions hold")


def test_comparative_regret(table1000):
    t0 = time.time()
    cfg = SweepConfig(1000, 10, (0.5,),
                      (PolicyKind.GITTINS_FLAT, PolicyKind.UCB,
                       PolicyKind.THOMPSON), 10000, 2024)
    res = run_sweep(cfg, table1000)
    (g, u, th) = res.regret[0]
    (gs, us, ths) = res.stderr[0]
    dt = time.time() - t0 + _BUILD_TIMES.get("table1000", 0.0)
    beats_ucb = u - g > 3.0 * math.hypot(gs, us)
    beats_th = th - g > 3.0 * math.hypot(gs, ths)
    ok = beats_ucb and beats_th and dt < 900.0
    report("comparative regret (n=1e3, d=10, Delta=0.5, R=1e4)", ok,
           f"gittins {g:.1f}+-{gs:.2f} vs ucb {u:.1f}+-{us:.2f} "
           f"vs thompson {th:.1f}+-{ths:.2f}, total {dt:.0f}s")


def test_logarithmic_growth(table1000):
    ratios = []
    for n in (250, 500, 1000):
        cfg = SweepConfig(n, 2, (1.0,), (PolicyKind.GITTINS_FLAT,), 10000, 77)
        res = run_sweep(cfg, table1000)
        ratios.append(res.regret[0, 0] / math.log(n))
    spread = max(ratios) / min(ratios)
    ok = spread < 2.0
    report("logarithmic regret growth (d=2, Delta=1)", ok,
           f"regret/log(n) = {[f'{r:.2f}' for r in ratios]}, spread x{spread:.2f}")


def test_stopping_time_lower_bound():
    rep = mc_expected_tau(StoppingRule(-0.5, 1000), 0.0, 10000, seed=11)
    ok = rep.estimate >= 500.0 - 3.0 * rep.stderr
    report("stopping-time lower bound (theta=0)", ok,
           f"mean tau = {rep.estimate:.1f} +- {rep.stderr:.2f} vs m/2 = 500")


def test_f_beta_inequalities():
    reports = check_f_beta()
    hard = [r for r in reports if r.hard]
    ok = all(r.passed for r in hard)
    report("tail functional two-sided bounds on the grid", ok,
           f"{sum(r.passed for r in hard)}/{len(hard)} inequalities hold")


@pytest.mark.xfail(strict=True, reason=(
    "criterion as stated is mathematically unattainable: "
    "f(beta) beta log beta = 0.180975 exactly at beta=1e6, 9.3% below "
    "1/sqrt(8 pi); convergence is O(1/log beta) so 5% needs beta ~ e^30. "
    "The limit itself is right: at beta=1e13 the scaled value is within 5%."))
def test_f_beta_limit_at_1e6():
    limit = 1.0 / math.sqrt(8.0 * math.pi)
    scaled_far = f_beta(1e13) * 1e13 * math.log(1e13)
    assert abs(scaled_far - limit) <= 0.05 * limit  # the limit claim holds
    scaled = f_beta(1e6) * 1e6 * math.log(1e6)
    assert abs(scaled - limit) <= 0.05 * limit  # fails: 0.181 vs 0.199


# ceiling frozen from the first diagnostic run (engine tol 1e-5): max
# relative deviation 0.18473 at T=100, m=1000 (the small-variance end of the
# T sweep; at sigma^2=1 the worst is 0.134 at m=100).  Guarded with ~8%
# headroom as a regression bound; no tighter tolerance is claimed anywhere.
APPROX_DEVIATION_CEILING = 0.20


def test_approximation_diagnostic():
    t0 = time.time()
    eng = GittinsEngine(tol=1e-5)
    devs = {}
    for m in (100, 1000, 10000):
        ex = eng.index_zero(1.0, m)
        devs[f"m={m}"] = abs(approx_gittins(0.0, 1.0, m) - ex) / ex
    for T in range(1, 101):
        ex = eng.index_zero(1.0 / T, 1000)
        devs[f"T={T}"] = abs(approx_gittins(0.0, 1.0 / T, 1000) - ex) / ex
    worst_key = max(devs, key=devs.get)
    worst = devs[worst_key]
    dt = time.time() - t0
    ok = worst <= APPROX_DEVIATION_CEILING
    report("approximation deviation diagnostic", ok,
           f"max |approx-exact|/exact = {worst:.4f} at {worst_key} "
           f"(ceiling {APPROX_DEVIATION_CEILING}), {dt:.0f}s")
