"""Arm-selection strategies for Gaussian bandits.

All policies share the same sufficient statistics (per-arm pull counts and
reward sums) and differ only in the score they maximize each round.  The
scoring functions are written over numpy arrays so the simulator can apply
them to a whole batch of replications at once; the scalar select/observe
protocol below goes through the same code path, which keeps single-episode
replays bit-identical to batched runs.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .approx import ApproxParams, approx_gittins
from .engine import GittinsEngine, IndexQuery, Posterior, posterior_update


class PolicyKind(enum.Enum):
    GITTINS_FLAT = "gittins"
    GITTINS_PRIOR = "gittins-prior"
    GITTINS_APPROX = "gittins-approx"
    UCB = "ucb"
    OCUCB = "ocucb"
    THOMPSON = "thompson"


@dataclass(frozen=True)
class PolicySpec:
    kind: PolicyKind
    horizon: int
    arms: int
    prior_means: tuple[float, ...] | None = None   # GITTINS_PRIOR only
    prior_vars: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {self.horizon}")
        if self.arms < 1:
            raise ValueError(f"need at least one arm, got {self.arms}")
        if self.kind is PolicyKind.GITTINS_PRIOR:
            if self.prior_means is None or self.prior_vars is None:
                raise ValueError("gittins-prior needs prior means and variances")
            if len(self.prior_means) != self.arms or len(self.prior_vars) != self.arms:
                raise ValueError("prior length must match arm count")
            if any(v <= 0 for v in self.prior_vars):
                raise ValueError("gittins-prior requires positive prior variances")
        elif self.prior_means is not None or self.prior_vars is not None:
            raise ValueError(f"{self.kind.value} does not take a prior")


class ProtocolError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# batched scoring: counts (..., d) int, sums (..., d) float, round t, horizon n


def ucb_scores(counts, sums, t):
    with np.errstate(divide="ignore", invalid="ignore"):
        mu = sums / counts
        bonus = np.sqrt(2.0 * math.log(t) / counts)
    return np.where(counts > 0, mu + bonus, np.inf)


def ocucb_scores(counts, sums, t, n):
    with np.errstate(divide="ignore", invalid="ignore"):
        mu = sums / counts
        bonus = np.sqrt(3.0 / counts * math.log(2.0 * n / t))
    return np.where(counts > 0, mu + bonus, np.inf)


def thompson_scores(counts, sums, noise):
    """Posterior samples N(mu_hat, 1/(T+1)); N(0, 1) for unpulled arms.

    noise: standard normal draws, same shape as counts.
    """
    with np.errstate(divide="ignore", invalid="ignore"):
        mu = np.where(counts > 0, sums / counts, 0.0)
    return mu + noise / np.sqrt(counts + 1.0)


def gittins_flat_scores(counts, sums, t, n, table):
    """mu_hat + table bonus(T, n - t + 1); rounds t <= d are forced pulls."""
    m = n - t + 1
    bonus = table.values[counts - 1, m - 1] if m >= 2 else 0.0
    return sums / counts + bonus


def gittins_approx_scores(counts, sums, t, n, params=ApproxParams()):
    m = n - t + 1
    bonus = np.zeros(counts.shape)
    if m >= 2:
        for T in np.unique(counts):
            bonus_T = approx_gittins(0.0, 1.0 / T, m, params)
            bonus = np.where(counts == T, bonus_T, bonus)
    return sums / counts + bonus


# ---------------------------------------------------------------------------
# scalar protocol


@dataclass
class PolicyState:
    spec: PolicySpec
    table: object | None = None
    engine: GittinsEngine | None = None
    rng: np.random.Generator | None = None
    thompson_noise: np.ndarray | None = None  # pre-drawn (n, d) block
    t: int = 1
    counts: np.ndarray = field(init=False)
    sums: np.ndarray = field(init=False)
    posteriors: list = field(init=False)
    _pending: int | None = field(init=False, default=None)

    def __post_init__(self):
        d = self.spec.arms
        self.counts = np.zeros(d, dtype=np.int64)
        self.sums = np.zeros(d)
        if self.spec.kind is PolicyKind.GITTINS_PRIOR:
            self.posteriors = [Posterior(m, v) for m, v in
                               zip(self.spec.prior_means, self.spec.prior_vars)]
            if self.engine is None:
                self.engine = GittinsEngine()
        else:
            self.posteriors = []
        if self.spec.kind is PolicyKind.GITTINS_FLAT and self.table is None:
            raise ValueError("gittins needs an index table")
        if self.spec.kind is PolicyKind.THOMPSON and \
                self.rng is None and self.thompson_noise is None:
            raise ValueError("thompson needs an RNG stream or a pre-drawn noise block")


def select_arm(state: PolicyState) -> int:
    """Pick the arm for the current round (0-based index, ties to lowest)."""
    spec = state.spec
    t, n, d = state.t, spec.horizon, spec.arms
    if t > n:
        raise ProtocolError(f"horizon {n} exhausted at round {t}")
    if state._pending is not None:
        raise ProtocolError("select_arm called twice without observe")
    kind = spec.kind
    if kind in (PolicyKind.GITTINS_FLAT, PolicyKind.GITTINS_APPROX) and t <= d:
        arm = t - 1
    elif kind is PolicyKind.GITTINS_FLAT:
        arm = int(np.argmax(gittins_flat_scores(state.counts, state.sums, t, n, state.table)))
    elif kind is PolicyKind.GITTINS_APPROX:
        arm = int(np.argmax(gittins_approx_scores(state.counts, state.sums, t, n)))
    elif kind is PolicyKind.GITTINS_PRIOR:
        m = n - t + 1
        scores = [state.engine.index(IndexQuery(p.mean, p.variance, m))
                  for p in state.posteriors]
        arm = int(np.argmax(scores))
    elif kind is PolicyKind.UCB:
        arm = int(np.argmax(ucb_scores(state.counts, state.sums, t)))
    elif kind is PolicyKind.OCUCB:
        arm = int(np.argmax(ocucb_scores(state.counts, state.sums, t, n)))
    elif kind is PolicyKind.THOMPSON:
        if state.thompson_noise is not None:
            noise = state.thompson_noise[t - 1]
        else:
            noise = state.rng.standard_normal(d)
        arm = int(np.argmax(thompson_scores(state.counts, state.sums, noise)))
    else:
        raise ValueError(f"unknown policy kind {kind}")
    state._pending = arm
    return arm


def observe(state: PolicyState, arm: int, reward: float) -> None:
    """Record the reward for this round's selected arm and advance the round."""
    if state._pending is None:
        raise ProtocolError("observe called before select_arm")
    if arm != state._pending:
        raise ProtocolError(f"observed arm {arm}, selected arm {state._pending}")
    if not math.isfinite(reward):
        raise ValueError(f"reward must be finite, got {reward}")
    state.counts[arm] += 1
    state.sums[arm] += reward
    if state.spec.kind is PolicyKind.GITTINS_PRIOR:
        state.posteriors[arm] = posterior_update(state.posteriors[arm], reward)
    state.t += 1
    state._pending = None
