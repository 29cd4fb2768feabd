"""Closed-form approximation of the finite-horizon Gaussian index.

The exact index at zero mean behaves like sqrt(2 sigma^2 log beta) with

    beta = max{1, c * min{ m / log+^{3/2}(m),  m sigma^2 / log+^{1/2}(m sigma^2) }},

where log+(x) = max{1, log x} and the leading constant c = 1/4 is an
empirical fit.  The approximation is exact at m = 1 (beta clamps to 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

DEFAULT_C = 0.25


@dataclass(frozen=True)
class ApproxParams:
    c_emp: float = DEFAULT_C

    def __post_init__(self):
        if self.c_emp <= 0:
            raise ValueError(f"c_emp must be > 0, got {self.c_emp}")


def _log_plus(x: float) -> float:
    return max(1.0, math.log(x)) if x > 0 else 1.0


def beta(sigma2: float, m: int, params: ApproxParams = ApproxParams()) -> float:
    """Exploration coefficient beta(sigma^2, m)."""
    if sigma2 <= 0:
        raise ValueError(f"sigma2 must be > 0, got {sigma2}")
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    ms2 = m * sigma2
    term1 = m / _log_plus(m) ** 1.5
    term2 = ms2 / _log_plus(ms2) ** 0.5
    return max(1.0, params.c_emp * min(term1, term2))


def approx_gittins(mean: float, sigma2: float, m: int,
                   params: ApproxParams = ApproxParams()) -> float:
    """Approximate index: mean + sqrt(2 sigma^2 log beta)."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if sigma2 < 0:
        raise ValueError(f"sigma2 must be >= 0, got {sigma2}")
    if sigma2 == 0.0 or m == 1:
        return mean
    return mean + math.sqrt(2.0 * sigma2 * math.log(beta(sigma2, m, params)))
