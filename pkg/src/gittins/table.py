"""Lookup table of gamma(0, 1/T, m) for the flat-prior index policy.

A horizon-n run needs every (T, m) with T + m <= n.  One backward induction
started at sigma^2 = 1 with depth h covers the whole anti-diagonal
T + m = h + 1: its stage-j value function has posterior variance 1/(h - j + 1),
so its root is gamma(0, 1/(h - j + 1), j).  Building h = 1..n-1 fills the
triangle in O(n^2 N) total work, and the inductions are independent jobs.
"""

from __future__ import annotations

import concurrent.futures
import os

import numpy as np

from .engine import DEFAULT_TOL, MAX_KNOTS, AccuracyError, index_curve

FORMAT_VERSION = 1


class TableFormatError(ValueError):
    pass


class IndexTable:
    """Dense triangular array of gamma(0, 1/T, m), T >= 1, m >= 1, T+m <= n."""

    def __init__(self, n: int, tol: float, values: np.ndarray):
        if n < 2:
            raise ValueError(f"horizon must be >= 2, got {n}")
        self.n = int(n)
        self.tol = float(tol)
        # values[T-1, m-1]; NaN outside the triangle
        self.values = np.asarray(values, float)

    def lookup(self, T: int, m: int) -> float:
        if T < 1 or m < 1 or T + m > self.n:
            raise KeyError(
                f"(T={T}, m={m}) out of range: need T >= 1, m >= 1, T + m <= {self.n}")
        return float(self.values[T - 1, m - 1])

    def entries(self):
        """Iterate (T, m, value) in row-major (T, m) order."""
        for T in range(1, self.n):
            for m in range(1, self.n - T + 1):
                yield T, m, float(self.values[T - 1, m - 1])

    def __len__(self):
        return self.n * (self.n - 1) // 2


def _diagonal(args):
    h, tol, max_knots = args
    try:
        return h, index_curve(1.0, h, tol, max_knots)
    except AccuracyError as e:
        raise AccuracyError(e.stage, e.achieved, e.requested) from None


def build_table(n: int, tol: float = DEFAULT_TOL, jobs: int = 1,
                max_knots: int = MAX_KNOTS) -> IndexTable:
    """Build the full triangle for horizon n.

    jobs > 1 runs the per-horizon inductions in separate processes.
    """
    if n < 2:
        raise ValueError(f"horizon must be >= 2, got {n}")
    values = np.full((n - 1, n - 1), np.nan)
    tasks = [(h, tol, max_knots) for h in range(1, n)]
    if jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as ex:
            results = ex.map(_diagonal, tasks, chunksize=4)
            for h, curve in results:
                _fill_diagonal(values, h, curve)
    else:
        for task in tasks:
            try:
                h, curve = _diagonal(task)
            except AccuracyError as e:
                raise AccuracyError(e.stage, e.achieved, e.requested) from None
            _fill_diagonal(values, h, curve)
    return IndexTable(n, tol, values)


def _fill_diagonal(values, h, curve):
    # stage j of the depth-h induction has variance 1/(h-j+1): entry (T=h-j+1, m=j)
    for j in range(1, h + 1):
        values[h - j, j - 1] = curve[j - 1]


def save_table(tbl: IndexTable, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"% format={FORMAT_VERSION}\n")
        fh.write(f"% n={tbl.n}\n")
        fh.write(f"% tol={tbl.tol:.17g}\n")
        fh.write("% columns: T m gamma(0,1/T,m)\n")
        for T, m, v in tbl.entries():
            fh.write(f"{T} {m} {v:.17g}\n")


def load_table(path) -> IndexTable:
    n = None
    tol = None
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("%"):
                body = line[1:].strip()
                if body.startswith("format="):
                    ver = int(body[len("format="):])
                    if ver != FORMAT_VERSION:
                        raise TableFormatError(
                            f"line {lineno}: unsupported format version {ver}")
                elif body.startswith("n="):
                    n = int(body[len("n="):])
                elif body.startswith("tol="):
                    tol = float(body[len("tol="):])
                continue
            parts = line.split()
            if len(parts) != 3:
                raise TableFormatError(f"line {lineno}: expected 'T m value', got {line!r}")
            try:
                rows.append((int(parts[0]), int(parts[1]), float(parts[2]), lineno))
            except ValueError:
                raise TableFormatError(f"line {lineno}: malformed row {line!r}") from None
    if n is None or tol is None:
        raise TableFormatError("missing 'n=' or 'tol=' header")
    values = np.full((n - 1, n - 1), np.nan)
    for T, m, v, lineno in rows:
        if T < 1 or m < 1 or T + m > n:
            raise TableFormatError(f"line {lineno}: entry (T={T}, m={m}) outside horizon {n}")
        values[T - 1, m - 1] = v
    for T in range(1, n):
        for m in range(1, n - T + 1):
            if np.isnan(values[T - 1, m - 1]):
                raise TableFormatError(f"missing entry (T={T}, m={m})")
    return IndexTable(n, tol, values)


def default_jobs() -> int:
    env = os.environ.get("GITTINS_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1
