"""Exact finite-horizon Gaussian Gittins indices.

The index gamma(nu, sigma^2, m) is computed by backward induction on the
optimal-stopping value function V_t(x).  V_1(x) = x and

    V_t(x) = x + E_eta[ max{0, V_{t-1}(x + eta)} ],

where eta is the zero-mean Gaussian increment of the posterior mean after one
more observation.  The index at zero mean is minus the largest root of V_m;
shift invariance gives gamma(nu, s2, m) = nu + gamma(0, s2, m).

Each stage's positive part max{0, V_t} is stored as a PiecewiseQuad, so the
expectation above is exact in terms of the error function and the induction
only approximates through the quadratic refit of each stage.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np

from .gaussian import PiecewiseQuad, expect_gauss, fit_adaptive

ROOT_XTOL = 1e-8
DEFAULT_TOL = 1e-6
MAX_KNOTS = 4000


class AccuracyError(RuntimeError):
    """Raised when a stage cannot be fitted to the requested tolerance."""

    def __init__(self, stage: int, achieved: float, requested: float):
        self.stage = stage
        self.achieved = achieved
        self.requested = requested
        super().__init__(
            f"stage {stage}: knot budget exhausted, achieved tolerance "
            f"{achieved:.3g} > requested {requested:.3g}"
        )


# ---------------------------------------------------------------------------
# posterior bookkeeping


@dataclass(frozen=True)
class Posterior:
    """Gaussian belief (mean, variance) over an arm's mean reward."""

    mean: float
    variance: float

    def __post_init__(self):
        if not (math.isfinite(self.mean) and math.isfinite(self.variance)):
            raise ValueError("posterior fields must be finite")
        if self.variance < 0:
            raise ValueError(f"variance must be >= 0, got {self.variance}")


def posterior_update(p: Posterior, x: float) -> Posterior:
    """Belief after observing one unit-variance reward x.

    A zero-variance posterior is absorbing (known mean).
    """
    if not math.isfinite(x):
        raise ValueError(f"observation must be finite, got {x}")
    if p.variance == 0.0:
        return p
    prec = 1.0 / p.variance
    return Posterior((p.mean * prec + x) / (prec + 1.0), 1.0 / (prec + 1.0))


def noise_variance(sigma2: float, t: int) -> float:
    """Variance of the posterior-mean increment at the t-th observation.

    Starting from prior variance sigma2 > 0, the posterior mean after the
    t-th unit-variance observation moves by a zero-mean Gaussian with this
    variance.  The partial sums telescope: sum_{s<=k} = k*sigma2^2/(1+k*sigma2).
    """
    if sigma2 <= 0:
        raise ValueError(f"sigma2 must be > 0, got {sigma2}")
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    return sigma2 / (1.0 + (t - 1) * sigma2) * sigma2 / (1.0 + t * sigma2)


def variance_schedule(sigma2: float, m: int) -> np.ndarray:
    """Posterior variances [sigma2, sigma2/(1+sigma2), ...] for m stages."""
    k = np.arange(m)
    return sigma2 / (1.0 + k * sigma2)


# ---------------------------------------------------------------------------
# value functions


@dataclass(frozen=True)
class QuadSegment:
    lo: float
    hi: float
    a: float
    b: float
    c: float


class ValueFunction:
    """One backward-induction stage.

    The signed V_t is fitted on [knots[0], knots[-1]]; ``root`` is its largest
    zero (V_t < 0 to the left of it, within the fit domain).  ``positive``
    exposes max{0, V_t} as a PiecewiseQuad: zero below the root, the fitted
    quadratics up to the last knot and an affine tail (slope = stage) beyond.
    """

    __slots__ = ("stage", "variance", "knots", "coef", "root",
                 "tail_slope", "tail_intercept", "_pos")

    def __init__(self, stage, variance, knots, coef, root, tail_slope, tail_intercept):
        self.stage = int(stage)
        self.variance = float(variance)
        self.knots = np.asarray(knots, float)
        self.coef = np.asarray(coef, float).reshape(-1, 3)
        self.root = float(root)
        self.tail_slope = float(tail_slope)
        self.tail_intercept = float(tail_intercept)
        i0 = max(np.searchsorted(self.knots, self.root, side="right") - 1, 0)
        kn = self.knots[i0:].copy()
        kn[0] = self.root
        self._pos = PiecewiseQuad(kn, self.coef[i0:], tail_slope, tail_intercept)

    @property
    def positive(self) -> PiecewiseQuad:
        return self._pos

    @property
    def segments(self):
        return [QuadSegment(self.knots[i], self.knots[i + 1], *self.coef[i])
                for i in range(len(self.coef))]

    def signed(self, x):
        """Signed V_t inside the fit domain (affine tail to the right)."""
        x = np.asarray(x, float)
        scalar = x.ndim == 0
        x = np.atleast_1d(x)
        out = np.empty_like(x)
        right = x >= self.knots[-1]
        out[right] = self.tail_slope * x[right] + self.tail_intercept
        i = np.clip(np.searchsorted(self.knots, x[~right], side="right") - 1,
                    0, len(self.coef) - 1)
        a, b, c = self.coef[i, 0], self.coef[i, 1], self.coef[i, 2]
        out[~right] = (a * x[~right] + b) * x[~right] + c
        return out[0] if scalar else out


def stage_one(variance: float, hi: float = 6.0) -> ValueFunction:
    """Base case V_1(x) = x (stop immediately or collect one mean)."""
    return ValueFunction(1, variance, [-1.0, hi], [[0.0, 1.0, 0.0]], 0.0, 1.0, 0.0)


def gauss_expect_positive_spline(v: ValueFunction, mean: float, var: float) -> float:
    """E[max{0, V}(U)] for U ~ N(mean, var), exact for the representation."""
    return expect_gauss(v.positive, mean, var)


def bellman_backup(v_prev: ValueFunction, sigma2_stage: float, noise_var: float,
                   tol: float = DEFAULT_TOL, max_knots: int = MAX_KNOTS) -> ValueFunction:
    """One backward-induction step: stage t from stage t-1.

    sigma2_stage is the posterior variance at the new stage, noise_var the
    variance of the posterior-mean increment connecting the two stages.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    t = v_prev.stage + 1
    w = noise_var
    s = math.sqrt(w)
    pos_prev = v_prev.positive

    def g(xs):
        return xs + expect_gauss(pos_prev, xs, w)

    # Fit window.  The root only moves down, by an amount bounded by the
    # added exploration value; the upper end is where V_t is affine with
    # slope t within tol (V_t(x) - t*x is the exact asymptote gap).
    xlo = v_prev.root - max(0.3, 3.0 * s)
    ladder = v_prev.root + 4.0 + np.arange(0.0, 40.5, 0.5)
    vals = g(np.concatenate([[xlo], ladder]))
    while vals[0] >= 0.0:
        xlo -= 1.0
        vals[0] = g(np.array([xlo]))[0]
    gaps = vals[1:] - t * ladder
    below = gaps <= tol
    k = int(np.argmax(below)) if below.any() else len(ladder) - 1
    xhi = float(ladder[k])
    tail_intercept = float(gaps[k])

    knots, coef, achieved = fit_adaptive(g, xlo, xhi, tol, max_knots=max_knots)
    if achieved > tol:
        raise AccuracyError(t, achieved, tol)

    # Largest zero: locate the last knot with a negative value, solve the
    # quadratic there, then one secant step on the exact backup.
    kv = (coef[:, 0] * knots[:-1] + coef[:, 1]) * knots[:-1] + coef[:, 2]
    neg = np.nonzero(kv < 0.0)[0]
    if neg.size == 0:
        raise AccuracyError(t, achieved, tol)  # domain failed to bracket the root
    i = int(neg[-1])
    a, b, c = coef[i]
    root = _quad_root_in(a, b, c, knots[i], knots[i + 1])
    d = 1e-4
    g0, g1 = g(np.array([root, root + d]))
    slope = (g1 - g0) / d
    if slope > 0:
        step = g0 / slope
        if abs(step) < 0.1:
            root -= step
    return ValueFunction(t, sigma2_stage, knots, coef, root, float(t), tail_intercept)


def _quad_root_in(a, b, c, lo, hi):
    """Root of a*x^2+b*x+c inside [lo, hi] (linear fallback at a ~ 0)."""
    if abs(a) > 1e-300:
        disc = b * b - 4.0 * a * c
        if disc >= 0.0:
            sq = math.sqrt(disc)
            for r in ((-b + sq) / (2.0 * a), (-b - sq) / (2.0 * a)):
                if lo - 1e-9 <= r <= hi + 1e-9:
                    return float(r)
    if b != 0.0:
        r = -c / b
        if lo - 1e-9 <= r <= hi + 1e-9:
            return float(r)
    return float(lo)


def index_zero_root(v_m: ValueFunction) -> float:
    """gamma(0, sigma^2, m) = -max{x : V_m(x) = 0}."""
    return -v_m.root


def index_curve(sigma2: float, m: int, tol: float = DEFAULT_TOL,
                max_knots: int = MAX_KNOTS) -> np.ndarray:
    """gamma(0, s_j, j) for j = 1..m along one backward induction.

    Stage j of the induction that starts from prior variance sigma2 has
    posterior variance s_{m-j+1} = sigma2/(1+(m-j)*sigma2); the returned
    array holds the index at zero mean for each stage, index [j-1] for
    stage j.  Entry [m-1] is gamma(0, sigma2, m).
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if sigma2 <= 0:
        raise ValueError(f"sigma2 must be > 0, got {sigma2}")
    sched = variance_schedule(sigma2, m)  # sched[k-1] = s_k
    out = np.zeros(m)
    v = stage_one(sched[m - 1])
    for j in range(2, m + 1):
        s2 = sched[m - j]
        v = bellman_backup(v, s2, s2 * s2 / (1.0 + s2), tol, max_knots)
        out[j - 1] = -v.root
    return out


# ---------------------------------------------------------------------------
# query front end


@dataclass(frozen=True)
class IndexQuery:
    mean: float
    variance: float
    remaining: int

    def __post_init__(self):
        if self.remaining < 1:
            raise ValueError(f"remaining must be >= 1, got {self.remaining}")
        if self.variance < 0:
            raise ValueError(f"variance must be >= 0, got {self.variance}")
        if not (math.isfinite(self.mean) and math.isfinite(self.variance)):
            raise ValueError("query fields must be finite")


class GittinsEngine:
    """Memoizing front end for gamma(nu, sigma^2, m).

    Results are cached on (sigma^2 rounded to 12 significant digits, m);
    the cache is safe for concurrent read/insert.  All stages of an
    induction are cached, since stage j yields the index for the shrunk
    variance s_{m-j+1}.
    """

    def __init__(self, tol: float = DEFAULT_TOL, max_knots: int = MAX_KNOTS):
        self.tol = tol
        self.max_knots = max_knots
        self._cache: dict[tuple[float, int], float] = {}
        self._lock = threading.Lock()

    @staticmethod
    def _key(sigma2: float, m: int) -> tuple[float, int]:
        return (float(f"{sigma2:.12g}"), m)

    def index_zero(self, sigma2: float, m: int) -> float:
        """gamma(0, sigma2, m)."""
        if m == 1 or sigma2 == 0.0:
            return 0.0
        key = self._key(sigma2, m)
        with self._lock:
            hit = self._cache.get(key)
        if hit is not None:
            return hit
        curve = index_curve(sigma2, m, self.tol, self.max_knots)
        sched = variance_schedule(sigma2, m)
        with self._lock:
            for j in range(1, m + 1):
                self._cache.setdefault(self._key(sched[m - j], j), float(curve[j - 1]))
        return float(curve[m - 1])

    def index(self, query: IndexQuery) -> float:
        """gamma(nu, sigma2, m) = nu + gamma(0, sigma2, m) (shift invariance)."""
        return query.mean + self.index_zero(query.variance, query.remaining)


_default_engine = GittinsEngine()


def gittins_index(mean: float, variance: float, remaining: int,
                  tol: float | None = None) -> float:
    """gamma(mean, variance, remaining) through a shared memoized engine."""
    if tol is not None and tol != _default_engine.tol:
        return IndexQuery(mean, variance, remaining).mean + \
            GittinsEngine(tol=tol).index_zero(variance, remaining)
    return _default_engine.index(IndexQuery(mean, variance, remaining))
