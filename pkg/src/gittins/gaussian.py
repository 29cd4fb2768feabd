"""Closed-form Gaussian integrals of piecewise-quadratic functions.

A ``PiecewiseQuad`` represents a convex, nondecreasing function that is
identically zero below its first knot, a quadratic a*x^2 + b*x + c on each
knot interval, and affine (slope*x + intercept) above its last knot.  Its
expectation against a Gaussian reduces to truncated moments of order 0..2,
which are expressible with the error function.  This is the workhorse shared
by the index engine and the two-armed Bayes solver.
"""

from __future__ import annotations

import numpy as np
from scipy.special import ndtr

_SQRT2PI = np.sqrt(2.0 * np.pi)


class PiecewiseQuad:
    """Piecewise-quadratic function with a zero left tail and affine right tail.

    knots: increasing array of K+1 knots; coef: (K, 3) array of (a, b, c)
    per segment.  Below knots[0] the function is 0, above knots[-1] it is
    tail_slope * x + tail_intercept.
    """

    __slots__ = ("knots", "coef", "tail_slope", "tail_intercept")

    def __init__(self, knots, coef, tail_slope, tail_intercept):
        self.knots = np.asarray(knots, float)
        self.coef = np.asarray(coef, float).reshape(-1, 3)
        self.tail_slope = float(tail_slope)
        self.tail_intercept = float(tail_intercept)
        if self.knots.ndim != 1 or len(self.knots) != len(self.coef) + 1:
            raise ValueError("need K+1 knots for K segments")
        if not np.all(np.diff(self.knots) > 0):
            raise ValueError("knots must be strictly increasing")
        if not (np.all(np.isfinite(self.knots)) and np.all(np.isfinite(self.coef))):
            raise ValueError("non-finite knots or coefficients")

    def __call__(self, x):
        x = np.asarray(x, float)
        scalar = x.ndim == 0
        x = np.atleast_1d(x)
        out = np.zeros_like(x)
        right = x >= self.knots[-1]
        out[right] = self.tail_slope * x[right] + self.tail_intercept
        mid = (x >= self.knots[0]) & ~right
        if mid.any():
            i = np.searchsorted(self.knots, x[mid], side="right") - 1
            a, b, c = self.coef[i, 0], self.coef[i, 1], self.coef[i, 2]
            out[mid] = (a * x[mid] + b) * x[mid] + c
        return out[0] if scalar else out


def expect_gauss(pq: PiecewiseQuad, mean, var: float):
    """E[pq(U)] for U ~ N(mean, var), exact for the representation.

    Vectorized over ``mean``.  Segments further than 9 standard deviations
    from every evaluation point are skipped; their weight is below 1e-18.
    """
    if var <= 0:
        raise ValueError(f"variance must be positive, got {var}")
    x = np.atleast_1d(np.asarray(mean, float))
    scalar = np.ndim(mean) == 0
    s = np.sqrt(var)
    kn = pq.knots
    lo = max(np.searchsorted(kn, x.min() - 9.0 * s) - 1, 0)
    hi = min(np.searchsorted(kn, x.max() + 9.0 * s) + 1, len(kn) - 1)
    kw = kn[lo : hi + 1]
    z = (kw[None, :] - x[:, None]) / s
    cdf = ndtr(z)
    pdf = np.exp(-0.5 * z * z)
    pdf /= _SQRT2PI
    m0 = cdf[:, 1:] - cdf[:, :-1]
    d = pdf[:, :-1] - pdf[:, 1:]
    zpdf = z * pdf
    m1 = x[:, None] * m0 + s * d
    m2 = (x * x)[:, None] * m0 + 2.0 * s * x[:, None] * d + var * (m0 + zpdf[:, :-1] - zpdf[:, 1:])
    co = pq.coef[lo:hi]
    out = m2 @ co[:, 0] + m1 @ co[:, 1] + m0 @ co[:, 2]
    # affine tail on [knots[-1], inf)
    zt = (kn[-1] - x) / s
    m0t = 1.0 - ndtr(zt)
    pdft = np.exp(-0.5 * zt * zt) / _SQRT2PI
    out += pq.tail_slope * (x * m0t + s * pdft) + pq.tail_intercept * m0t
    return float(out[0]) if scalar else out


def _quad_through(a, m, b, fa, fm, fb):
    """Coefficients of the parabola through (a,fa), (m,fm), (b,fb), m=(a+b)/2."""
    h = (b - a) * 0.5
    ca = (fa - 2.0 * fm + fb) / (2.0 * h * h)
    cb = (fb - fa) / (2.0 * h) - 2.0 * ca * m
    cc = fm - (ca * m + cb) * m
    return ca, cb, cc


def fit_adaptive(f, lo: float, hi: float, tol: float, max_knots: int = 4000,
                 init_segments: int = 8):
    """Fit f on [lo, hi] with quadratic segments by recursive bisection.

    Each segment interpolates f at its endpoints and midpoint and splits
    while the deviation at its quarter points exceeds tol.  Returns
    (knots, coef, achieved_tol).  f must accept a 1-d array.
    """
    k0 = np.linspace(lo, hi, 2 * init_segments + 1)
    v0 = f(k0)
    a, m, b = k0[0:-2:2], k0[1:-1:2], k0[2::2]
    fa, fm, fb = v0[0:-2:2], v0[1:-1:2], v0[2::2]
    done = []
    nseg = init_segments
    achieved = 0.0
    while a.size:
        ca, cb, cc = _quad_through(a, m, b, fa, fm, fb)
        q1 = 0.5 * (a + m)
        q3 = 0.5 * (m + b)
        fv = f(np.concatenate([q1, q3]))
        f1, f3 = fv[: a.size], fv[a.size :]
        err = np.maximum(np.abs((ca * q1 + cb) * q1 + cc - f1),
                         np.abs((ca * q3 + cb) * q3 + cc - f3))
        bad = err > tol
        if nseg + int(bad.sum()) > max_knots:
            achieved = max(achieved, float(err[bad].max()))
            bad[:] = False
        keep = ~bad
        done.append(np.column_stack([a[keep], ca[keep], cb[keep], cc[keep]]))
        nseg += int(bad.sum())
        a, m, b, fa, fm, fb = (
            np.concatenate([a[bad], m[bad]]),
            np.concatenate([q1[bad], q3[bad]]),
            np.concatenate([m[bad], b[bad]]),
            np.concatenate([fa[bad], fm[bad]]),
            np.concatenate([f1[bad], f3[bad]]),
            np.concatenate([fm[bad], fb[bad]]),
        )
    segs = np.concatenate(done)
    segs = segs[np.argsort(segs[:, 0])]
    knots = np.append(segs[:, 0], hi)
    return knots, segs[:, 1:], max(achieved, tol)
