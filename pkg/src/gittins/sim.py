"""Gaussian bandit environment, episode runner and experiment sweeps.

Rewards are mu_i plus unit Gaussian noise.  Every episode derives its own
counter-based stream (Philox) from SeedSequence((base, gap index, policy
index, replication index)), and draws its noise in a fixed order: for
Thompson a (n, d) block of posterior-sample normals first, then the n reward
normals.  Batched runs over many replications consume the identical draws
and apply the identical elementwise arithmetic as a single scalar episode,
so results are bit-exact regardless of batching.

Regret is estimated from pull counts, sum_i gap_i * T_i(n), which is
unbiased for the expected regret and has lower variance than differencing
reward sums.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .policies import (PolicyKind, PolicySpec, PolicyState, ProtocolError,
                       gittins_approx_scores, gittins_flat_scores, observe,
                       ocucb_scores, select_arm, thompson_scores, ucb_scores)

CHUNK_REPS = 512


@dataclass(frozen=True)
class BanditInstance:
    means: tuple[float, ...]
    horizon: int

    def __post_init__(self):
        if self.horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {self.horizon}")
        if len(self.means) < 1:
            raise ValueError("need at least one arm")
        if not all(np.isfinite(self.means)):
            raise ValueError("means must be finite")

    @property
    def gaps(self) -> np.ndarray:
        mu = np.asarray(self.means)
        return mu.max() - mu


def episode_rng(base_seed: int, delta_idx: int, policy_idx: int,
                rep_idx: int) -> np.random.Generator:
    """Counter-based stream for one episode; pure function of the indices."""
    ss = np.random.SeedSequence((base_seed, delta_idx, policy_idx, rep_idx))
    return np.random.Generator(np.random.Philox(ss))


def _draw_noise(rng, n, d, thompson: bool):
    tn = rng.standard_normal((n, d)) if thompson else None
    rewards = rng.standard_normal(n)
    return tn, rewards


def run_episode(instance: BanditInstance, spec: PolicySpec,
                rng: np.random.Generator, table=None, engine=None) -> np.ndarray:
    """Simulate one episode; returns per-arm pull counts summing to n."""
    n, d = instance.horizon, len(instance.means)
    if spec.horizon != n or spec.arms != d:
        raise ValueError("policy spec does not match the instance")
    tn, rewards = _draw_noise(rng, n, d, spec.kind is PolicyKind.THOMPSON)
    state = PolicyState(spec, table=table, engine=engine, thompson_noise=tn)
    mu = np.asarray(instance.means)
    for t in range(1, n + 1):
        arm = select_arm(state)
        observe(state, arm, mu[arm] + rewards[t - 1])
    return state.counts.copy()


def _batch_counts(instance, spec, seeds, table=None, engine=None):
    """Counts for a block of episodes, one derived stream per row of seeds.

    seeds: list of (base, delta_idx, policy_idx, rep_idx) tuples.
    """
    n, d = instance.horizon, len(instance.means)
    R = len(seeds)
    kind = spec.kind
    is_th = kind is PolicyKind.THOMPSON
    tn = np.empty((R, n, d)) if is_th else None
    rewards = np.empty((R, n))
    for k, tup in enumerate(seeds):
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(tup)))
        if is_th:
            tn[k] = rng.standard_normal((n, d))
        rewards[k] = rng.standard_normal(n)
    mu = np.asarray(instance.means)
    counts = np.zeros((R, d), dtype=np.int64)
    sums = np.zeros((R, d))
    rows = np.arange(R)
    prior_vars = np.asarray(spec.prior_vars) if kind is PolicyKind.GITTINS_PRIOR else None
    prior_means = np.asarray(spec.prior_means) if kind is PolicyKind.GITTINS_PRIOR else None
    for t in range(1, n + 1):
        if kind in (PolicyKind.GITTINS_FLAT, PolicyKind.GITTINS_APPROX) and t <= d:
            arm = np.full(R, t - 1)
        else:
            if kind is PolicyKind.GITTINS_FLAT:
                scores = gittins_flat_scores(counts, sums, t, n, table)
            elif kind is PolicyKind.GITTINS_APPROX:
                scores = gittins_approx_scores(counts, sums, t, n)
            elif kind is PolicyKind.GITTINS_PRIOR:
                scores = _prior_scores(counts, sums, t, n, prior_means, prior_vars, engine)
            elif kind is PolicyKind.UCB:
                scores = ucb_scores(counts, sums, t)
            elif kind is PolicyKind.OCUCB:
                scores = ocucb_scores(counts, sums, t, n)
            elif kind is PolicyKind.THOMPSON:
                scores = thompson_scores(counts, sums, tn[:, t - 1, :])
            else:
                raise ValueError(f"unsupported policy kind {kind}")
            arm = np.argmax(scores, axis=1)
        r = mu[arm] + rewards[:, t - 1]
        counts[rows, arm] += 1
        sums[rows, arm] += r
    return counts


def _prior_scores(counts, sums, t, n, prior_means, prior_vars, engine):
    m = n - t + 1
    prec0 = 1.0 / prior_vars
    var = 1.0 / (prec0 + counts)
    mean = (prior_means * prec0 + sums) * var
    bonus = np.zeros_like(var)
    for j in range(counts.shape[1]):
        col = var[:, j] if var.ndim == 2 else np.atleast_1d(var[j])
        out = np.empty_like(col)
        for v in np.unique(col):
            out[col == v] = engine.index_zero(v, m)
        if var.ndim == 2:
            bonus[:, j] = out
        else:
            bonus[j] = out[0]
    return mean + bonus


def estimate_regret(counts: np.ndarray, instance: BanditInstance):
    """(mean, stderr) of the count-based regret over replications."""
    counts = np.atleast_2d(counts)
    R = counts.shape[0]
    regrets = counts @ instance.gaps
    mean = float(regrets.mean())
    stderr = float(regrets.std(ddof=1) / np.sqrt(R)) if R >= 2 else 0.0
    return mean, stderr


# ---------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class SweepConfig:
    horizon: int
    arms: int
    deltas: tuple[float, ...]
    policies: tuple[PolicyKind, ...]
    reps: int
    seed: int

    def __post_init__(self):
        if self.reps < 1:
            raise ValueError(f"reps must be >= 1, got {self.reps}")
        if any(d < 0 for d in self.deltas):
            raise ValueError("gaps must be >= 0")
        if self.horizon < 1 or self.arms < 1:
            raise ValueError("horizon and arms must be >= 1")

    def instance(self, delta: float) -> BanditInstance:
        # first arm optimal at 0, the rest at -delta
        means = (0.0,) + (-float(delta),) * (self.arms - 1)
        return BanditInstance(means, self.horizon)


@dataclass
class SweepResult:
    config: SweepConfig
    regret: np.ndarray = field(default=None)  # (len(deltas), len(policies))
    stderr: np.ndarray = field(default=None)


def run_sweep(config: SweepConfig, table=None, engine=None,
              chunk: int = CHUNK_REPS) -> SweepResult:
    needs_table = PolicyKind.GITTINS_FLAT in config.policies
    if needs_table and (table is None or table.n < config.horizon):
        have = "none" if table is None else str(table.n)
        raise ValueError(
            f"gittins policy needs an index table with horizon >= {config.horizon}"
            f" (have {have})")
    nD, nP = len(config.deltas), len(config.policies)
    regret = np.zeros((nD, nP))
    stderr = np.zeros((nD, nP))
    for di, delta in enumerate(config.deltas):
        inst = config.instance(delta)
        for pi, kind in enumerate(config.policies):
            spec = PolicySpec(kind, config.horizon, config.arms)
            all_counts = []
            for lo in range(0, config.reps, chunk):
                hi = min(lo + chunk, config.reps)
                seeds = [(config.seed, di, pi, rep) for rep in range(lo, hi)]
                all_counts.append(_batch_counts(inst, spec, seeds, table, engine))
            counts = np.concatenate(all_counts)
            regret[di, pi], stderr[di, pi] = estimate_regret(counts, inst)
    return SweepResult(config, regret, stderr)


def write_sweep(result: SweepResult, path) -> None:
    """'%'-commented whitespace table: one row per gap, regret then stderr
    columns per policy."""
    cfg = result.config
    names = [k.value for k in cfg.policies]
    with open(path, "w") as fh:
        fh.write(f"% n={cfg.horizon} d={cfg.arms} reps={cfg.reps} seed={cfg.seed}\n")
        cols = ["Delta"] + names + [f"{n}_stderr" for n in names]
        fh.write("% columns: " + " ".join(cols) + "\n")
        for di, delta in enumerate(cfg.deltas):
            row = [f"{delta:.17g}"]
            row += [f"{v:.17g}" for v in result.regret[di]]
            row += [f"{v:.17g}" for v in result.stderr[di]]
            fh.write(" ".join(row) + "\n")
