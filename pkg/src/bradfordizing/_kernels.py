"""Numeric inner loops, compiled with numba when available.

Set ``BRADFORDIZING_DISABLE_NUMBA=1`` to force the pure-numpy path. Both
paths are kept importable as ``*_numba`` / ``*_numpy`` so tests and the
benchmark can compare them directly; the unsuffixed names are the active
selection.
"""

from __future__ import annotations

import math
import os

import numpy as np

# Costs are integers bounded by k * N * k, far below this sentinel.
INF_COST = np.int64(2**62)

_DISABLED = os.environ.get("BRADFORDIZING_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _DISABLED:
        raise ImportError("numba disabled by environment")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f


# --------------------------------------------------------------------------
# Signed-rank null distribution
# --------------------------------------------------------------------------

def signed_rank_counts_numpy(doubled_ranks: np.ndarray) -> np.ndarray:
    """Number of sign assignments yielding each doubled positive-rank sum.

    ``doubled_ranks`` holds 2 * rank as integers so average ranks (multiples
    of 0.5) stay exact. Entry ``s`` of the result counts the assignments with
    ``2 * W+ == s``; the entries sum to ``2 ** n``.
    """
    r = np.asarray(doubled_ranks, dtype=np.int64)
    counts = np.zeros(int(r.sum()) + 1, dtype=np.float64)
    counts[0] = 1.0
    top = 0
    for step in r:
        step = int(step)
        # In-place shift-add must read the old values, hence the copy.
        counts[step:top + step + 1] += counts[: top + 1].copy()
        top += step
    return counts


@njit(cache=True)
def _signed_rank_counts_jit(r):
    total = 0
    for i in range(r.shape[0]):
        total += r[i]
    counts = np.zeros(total + 1, dtype=np.float64)
    counts[0] = 1.0
    top = 0
    for i in range(r.shape[0]):
        step = r[i]
        for s in range(top, -1, -1):
            counts[s + step] += counts[s]
        top += step
    return counts


def signed_rank_counts_numba(doubled_ranks: np.ndarray) -> np.ndarray:
    return _signed_rank_counts_jit(np.ascontiguousarray(doubled_ranks, dtype=np.int64))


# --------------------------------------------------------------------------
# Snap-mode zone boundaries
# --------------------------------------------------------------------------

def snap_boundaries_numpy(candidates: np.ndarray, total: int, num_zones: int) -> np.ndarray:
    """Pick ``num_zones - 1`` strictly increasing indices into ``candidates``.

    Minimises sum_i |k * c[j_i] - i * N| (ideal cut i at i*N/k, scaled by k so
    everything stays integral) and returns the lexicographically smallest
    optimal index vector. Requires ``len(candidates) >= num_zones - 1``.
    """
    c = np.asarray(candidates, dtype=np.int64)
    m = c.shape[0]
    k = num_zones
    cuts = k - 1
    # best[i, j]: optimal cost of cuts i..cuts-1 with cut i at candidate j.
    best = np.full((cuts, m), INF_COST, dtype=np.int64)
    best[cuts - 1] = np.abs(k * c - cuts * total)
    for i in range(cuts - 2, -1, -1):
        nxt = best[i + 1]
        suffix = np.minimum.accumulate(nxt[::-1])[::-1]
        tail = np.full(m, INF_COST, dtype=np.int64)
        tail[:-1] = suffix[1:]
        cost = np.abs(k * c - (i + 1) * total)
        best[i] = np.where(tail >= INF_COST, INF_COST, cost + tail)
    out = np.empty(cuts, dtype=np.int64)
    lo = 0
    for i in range(cuts):
        row = best[i, lo:]
        j = lo + int(np.argmin(row))  # argmin returns the first minimum
        out[i] = j
        lo = j + 1
    return out


@njit(cache=True)
def _snap_boundaries_jit(c, total, k):
    m = c.shape[0]
    cuts = k - 1
    inf = INF_COST
    best = np.empty((cuts, m), dtype=np.int64)
    for j in range(m):
        best[cuts - 1, j] = abs(k * c[j] - cuts * total)
    for i in range(cuts - 2, -1, -1):
        run = inf
        for j in range(m - 1, -1, -1):
            if run >= inf:
                best[i, j] = inf
            else:
                best[i, j] = abs(k * c[j] - (i + 1) * total) + run
            if best[i + 1, j] < run:
                run = best[i + 1, j]
    out = np.empty(cuts, dtype=np.int64)
    lo = 0
    for i in range(cuts):
        arg = lo
        val = best[i, lo]
        for j in range(lo + 1, m):
            if best[i, j] < val:
                val = best[i, j]
                arg = j
        out[i] = arg
        lo = arg + 1
    return out


def snap_boundaries_numba(candidates: np.ndarray, total: int, num_zones: int) -> np.ndarray:
    return _snap_boundaries_jit(np.ascontiguousarray(candidates, dtype=np.int64), int(total), int(num_zones))


# --------------------------------------------------------------------------
# Regularized incomplete beta
# --------------------------------------------------------------------------

_CF_TOL = 1e-12
_CF_MAX_ITER = 10000
_TINY = 1e-300


def _betacf(a, b, x):
    """Modified Lentz evaluation of the incomplete-beta continued fraction."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_TOL:
            return h
    return h


def _betainc(a, b, x, xc):
    # xc = 1 - x supplied by the caller to avoid cancellation near x = 1.
    if x <= 0.0:
        return 0.0
    if xc <= 0.0:
        return 1.0
    log_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                 + a * math.log(x) + b * math.log(xc))
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, xc) / b


betainc_python = _betainc
_betacf_jit = njit(cache=True)(_betacf)


@njit(cache=True)
def _betainc_jit(a, b, x, xc):
    if x <= 0.0:
        return 0.0
    if xc <= 0.0:
        return 1.0
    log_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                 + a * math.log(x) + b * math.log(xc))
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf_jit(a, b, x) / a
    return 1.0 - front * _betacf_jit(b, a, xc) / b


def betainc_numba(a: float, b: float, x: float, xc: float) -> float:
    return _betainc_jit(float(a), float(b), float(x), float(xc))


if HAVE_NUMBA:
    signed_rank_counts = signed_rank_counts_numba
    snap_boundaries = snap_boundaries_numba
    betainc = betainc_numba
else:
    signed_rank_counts = signed_rank_counts_numpy
    snap_boundaries = snap_boundaries_numpy
    betainc = betainc_python

BACKEND = "numba" if HAVE_NUMBA else "numpy"
