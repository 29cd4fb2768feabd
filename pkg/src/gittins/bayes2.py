"""Two-armed Bayesian-optimal policy by backward induction.

Shift covariance reduces the two-armed value function to one dimension: with
gap d = nu2 - nu1, the value of (nu1, nu2) with r rounds left is

    V = r * nu1 + G(d; v1, v2, r),
    G(d; v1, v2, r) = max{ E_{e~N(0,w1)} G(d+e; v1', v2, r-1),
                           d + E_{e~N(0,w2)} G(d+e; v1, v2', r-1) },

with G(d; ., ., 1) = max{0, d}, posterior variances v' = v/(1+v) and
posterior-mean increment variances w = v^2/(1+v).  G is convex and
nondecreasing, vanishes as d -> -inf and is asymptotically r*d, so the same
piecewise-quadratic machinery as the index engine applies, with memoization
on (v1, v2, r).

Also provides the horizon-2 closed forms used as an oracle, with the
pull-second-arm Gaussian coefficient 1/sqrt(12 pi) (the increment variance
in that branch is 1/6).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.special import erf

from .engine import DEFAULT_TOL, MAX_KNOTS, AccuracyError, GittinsEngine
from .gaussian import PiecewiseQuad, expect_gauss, fit_adaptive


@dataclass(frozen=True)
class BayesState:
    nu1: float
    var1: float
    nu2: float
    var2: float
    remaining: int

    def __post_init__(self):
        if self.remaining < 0:
            raise ValueError(f"remaining must be >= 0, got {self.remaining}")
        if self.var1 < 0 or self.var2 < 0:
            raise ValueError("variances must be >= 0")


def _shrink(v: float) -> float:
    return v / (1.0 + v)


def _increment_var(v: float) -> float:
    return v * v / (1.0 + v)


def _vkey(v: float) -> float:
    return float(f"{v:.12g}")


class TwoArmedBayes:
    """Memoized gap-coordinate backward induction for the two-armed problem."""

    def __init__(self, tol: float = DEFAULT_TOL, max_knots: int = MAX_KNOTS):
        self.tol = tol
        self.max_knots = max_knots
        self._memo: dict[tuple[float, float, int], PiecewiseQuad] = {}

    # -- gap value function -------------------------------------------------

    def gap_function(self, v1: float, v2: float, r: int) -> PiecewiseQuad:
        """G(.; v1, v2, r) as a PiecewiseQuad, r >= 1."""
        if r < 1:
            raise ValueError(f"r must be >= 1, got {r}")
        key = (_vkey(v1), _vkey(v2), r)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if r == 1:
            pq = PiecewiseQuad([0.0, 1.0], [[0.0, 1.0, 0.0]], 1.0, 0.0)
            self._memo[key] = pq
            return pq
        # build bottom-up over extra pulls (a, b) of each arm so the
        # recursion depth stays O(1) for deep horizons
        for level in range(1, r + 1):
            k = r - level
            for a in range(k + 1):
                b = k - a
                u1 = v1 / (1.0 + a * v1)
                u2 = v2 / (1.0 + b * v2)
                lkey = (_vkey(u1), _vkey(u2), level)
                if lkey in self._memo:
                    continue
                if level == 1:
                    self._memo[lkey] = PiecewiseQuad([0.0, 1.0], [[0.0, 1.0, 0.0]],
                                                     1.0, 0.0)
                else:
                    self._memo[lkey] = self._backup(u1, u2, level)
        return self._memo[key]

    def branch_values(self, state: BayesState):
        """(value if arm 1 pulled now, value if arm 2 pulled now)."""
        r = state.remaining
        if r < 1:
            raise ValueError("no rounds remaining")
        delta = state.nu2 - state.nu1
        base = r * state.nu1
        if r == 1:
            return base, base + delta
        b1 = self._branch(delta, state.var1, state.var2, r, first=True)
        b2 = self._branch(delta, state.var1, state.var2, r, first=False)
        return base + b1, base + delta + b2

    def value(self, state: BayesState) -> float:
        """Optimal expected total reward from this state."""
        if state.remaining == 0:
            return 0.0
        return max(self.branch_values(state))

    def select(self, state: BayesState) -> int:
        """Optimal arm (1 or 2), ties to arm 1."""
        b1, b2 = self.branch_values(state)
        return 1 if b1 >= b2 else 2

    # -- internals ----------------------------------------------------------

    def _branch(self, delta, v1, v2, r, first: bool):
        """E G(delta + increment) after pulling the given arm, excluding the
        immediate-reward term."""
        if first:
            child = self.gap_function(_shrink(v1), v2, r - 1)
            w = _increment_var(v1)
        else:
            child = self.gap_function(v1, _shrink(v2), r - 1)
            w = _increment_var(v2)
        if w == 0.0:
            return child(delta)
        return expect_gauss(child, delta, w)

    def _backup(self, v1, v2, r) -> PiecewiseQuad:
        c1 = self.gap_function(_shrink(v1), v2, r - 1)
        c2 = self.gap_function(v1, _shrink(v2), r - 1)
        w1 = _increment_var(v1)
        w2 = _increment_var(v2)

        def g(xs):
            b1 = c1(xs) if w1 == 0.0 else expect_gauss(c1, xs, w1)
            b2 = c2(xs) if w2 == 0.0 else expect_gauss(c2, xs, w2)
            return np.maximum(b1, xs + b2)

        tol = self.tol
        # left end where G itself is below tol, right end where the gap to
        # the exact asymptote r*delta is below tol
        span = 1.0 + math.sqrt(max(w1, w2) * r)
        xlo = -2.0 * span
        while g(np.array([xlo]))[0] > tol and xlo > -80.0:
            xlo -= span
        ladder = 2.0 * span + np.arange(0.0, 40.5, 0.5)
        gaps = g(ladder) - r * ladder
        below = gaps <= tol
        k = int(np.argmax(below)) if below.any() else len(ladder) - 1
        xhi = float(ladder[k])
        tail_intercept = float(gaps[k])

        knots, coef, achieved = fit_adaptive(g, xlo, xhi, tol, max_knots=self.max_knots)
        if achieved > tol:
            raise AccuracyError(r, achieved, tol)
        return PiecewiseQuad(knots, coef, float(r), tail_intercept)


# ---------------------------------------------------------------------------
# horizon-2 oracles


def closed_form_n2(nu2: float):
    """Branch values for nu1 = 0, var1 = 1, var2 = 1/2, horizon 2.

    Returns (value if arm 1 pulled first, value if arm 2 pulled first).
    """
    v1 = math.exp(-nu2 * nu2) / (2.0 * math.sqrt(math.pi)) \
        + (nu2 + nu2 * erf(nu2)) / 2.0
    v2 = nu2 + math.exp(-3.0 * nu2 * nu2) / math.sqrt(12.0 * math.pi) \
        + (nu2 + nu2 * erf(math.sqrt(3.0) * nu2)) / 2.0
    return v1, v2


def bayes_threshold_n2() -> float:
    """Gap nu2 above which pulling arm 2 first is Bayes-optimal (approx 0.1165)."""
    return brentq(lambda x: closed_form_n2(x)[1] - closed_form_n2(x)[0], 0.0, 0.5,
                  xtol=1e-12)


def gittins_threshold_n2(engine: GittinsEngine | None = None) -> float:
    """Gap nu2 above which the index policy pulls arm 2 first (approx 0.0825).

    Equals gamma(0, 1, 2) - gamma(0, 1/2, 2): arm 2 wins once its index
    nu2 + gamma0(1/2, 2) exceeds the first arm's gamma0(1, 2).
    """
    eng = engine or GittinsEngine()
    return eng.index_zero(1.0, 2) - eng.index_zero(0.5, 2)
