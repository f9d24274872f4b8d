"""Exact prime k-tuple counts from the Moebius/von Mangoldt characteristic.

    pi_H(x) = sum_{n=2}^{x} (-1)^k prod_j mu(n+h_j) * prod_j Lambda(n+h_j)/log(n+h_j)

Each summand is evaluated as an exact rational (numerator ``(-1)^k prod mu``
restricted to prime powers, denominator ``prod nu``), so the sum is an
integer count with no floating point involved.  The index ``n`` runs over
``[2, x]`` and tuple members ``n + h`` may exceed ``x``.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._accel import njit, use_numba
from .errors import CoverageError, ExactnessError, InvalidArgumentError, InvalidRangeError
from .sieve import (
    MAX_N, base_primes, map_ordered, plan_units, sieve_arrays, sieve_segment,
    von_mangoldt_ratio,
)

CONVENTION = "start-in-range"


@dataclass(frozen=True)
class TupleCountResult:
    H: object
    checkpoints: list = field(default_factory=list)
    convention: str = CONVENTION

    def count_at(self, x):
        for cx, count in self.checkpoints:
            if cx == x:
                return count
        raise KeyError(x)

    @property
    def counts(self):
        return [count for _, count in self.checkpoints]


# ---------------------------------------------------------------------------
# kernels

@njit(cache=True, nogil=True)
def _count_numba(mu, exp, offsets, nvals, cuts):
    k = offsets.shape[0]
    sign = -1 if k % 2 else 1
    out = np.zeros(cuts.shape[0], dtype=np.int64)
    total = 0
    bad = 0
    ci = 0
    for m in range(nvals):
        num = sign
        den = 1
        for j in range(k):
            i = m + offsets[j]
            e = exp[i]
            if e == 0 or mu[i] == 0:
                num = 0
                break
            num *= mu[i]
            den *= e
        if num != 0:
            if num % den != 0:
                bad += 1
            total += num // den
        while ci < cuts.shape[0] and cuts[ci] == m + 1:
            out[ci] = total
            ci += 1
    return out, bad


def _count_numpy(mu, exp, offsets, nvals, cuts):
    num = np.full(nvals, -1 if len(offsets) % 2 else 1, dtype=np.int64)
    den = np.ones(nvals, dtype=np.int64)
    for h in offsets.tolist():
        e = exp[h:h + nvals]
        num *= mu[h:h + nvals] * (e != 0)
        den *= np.maximum(e, 1)
    live = num != 0
    bad = int(np.count_nonzero(num[live] % den[live]))
    values = np.where(live, num // den, 0)
    prefix = np.cumsum(values)
    return prefix[cuts - 1], bad


def _count_kernel(mu, exp, offsets, nvals, cuts):
    if use_numba():
        return _count_numba(mu, exp, offsets, np.int64(nvals), cuts)
    return _count_numpy(mu, exp, offsets, nvals, cuts)


# ---------------------------------------------------------------------------
# helpers shared with the Chebyshev module

def validate_checkpoints(checkpoints, H):
    xs = [int(x) for x in checkpoints]
    if not xs:
        raise InvalidArgumentError("no checkpoints given")
    if any(b < a for a, b in zip(xs, xs[1:])):
        raise InvalidArgumentError(f"checkpoints must be sorted ascending: {xs}")
    if xs[0] < 2:
        raise InvalidRangeError(f"checkpoints must be >= 2, got {xs[0]}")
    if xs[-1] > MAX_N - H.span:
        raise InvalidRangeError(f"x={xs[-1]} + {H.span} overflows 64-bit range")
    return xs


def unit_jobs(xs, span, segment_size):
    """Work units covering n in [2, max(xs)] with per-unit relative cut points.

    The final cut of every unit is its full length, so each job reports its
    own total as the last entry.
    """
    xarr = np.asarray(xs, dtype=np.int64)
    jobs = []
    for a, b in plan_units(2, xs[-1], span, segment_size):
        lo_i = np.searchsorted(xarr, a, side="left")
        hi_i = np.searchsorted(xarr, b, side="right")
        cuts = np.append(xarr[lo_i:hi_i] - a + 1, b - a + 1).astype(np.int64)
        jobs.append((a, b, cuts))
    return jobs


# ---------------------------------------------------------------------------
# public API

def chi_tuple(n, H, seg=None):
    """(-1)^k prod mu(n+h) * prod Lambda(n+h)/log(n+h), as an exact integer.

    ``seg`` must cover ``[n, n + span]``; a fresh segment is sieved when it
    is omitted.
    """
    n = int(n)
    if n < 2:
        raise InvalidRangeError(f"n must be >= 2, got {n}")
    if seg is None:
        seg = sieve_segment(n, n + H.span, segment_size=H.span + 1)
    elif n < seg.lo or n + H.span > seg.hi:
        raise CoverageError(
            f"segment [{seg.lo}, {seg.hi}] does not cover [{n}, {n + H.span}]")
    value = Fraction((-1) ** H.k)
    for h in H:
        value *= seg.mobius(n + h) * von_mangoldt_ratio(n + h, seg)
        if not value:
            return 0
    if value.denominator != 1:
        raise ExactnessError(f"non-integral characteristic value {value} at n={n}")
    return int(value)


def count_tuples_series(checkpoints, H, threads=1, segment_size=None):
    """Counts at every checkpoint from a single pass over the segments."""
    xs = validate_checkpoints(checkpoints, H)
    offsets = H.as_array()
    primes = base_primes(math.isqrt(xs[-1] + H.span))

    def work(job):
        a, b, cuts = job
        mu, exp, _ = sieve_arrays(a, b - a + 1 + H.span, primes)
        return _count_kernel(mu, exp, offsets, b - a + 1, cuts)

    jobs = unit_jobs(xs, H.span, segment_size)
    results = map_ordered(work, jobs, threads)
    rows = []
    running = 0
    for (a, b, cuts), (partial, bad) in zip(jobs, results):
        if bad:
            raise ExactnessError(f"{bad} non-integral summands in [{a}, {b}]")
        for c, value in zip(cuts[:-1].tolist(), partial[:-1].tolist()):
            rows.append((a + c - 1, running + value))
        running += int(partial[-1])
    return TupleCountResult(H, rows)


def count_tuples(x, H, threads=1, segment_size=None):
    x = int(x)
    if x < 2:
        raise InvalidRangeError(f"x must be >= 2, got {x}")
    return count_tuples_series([x], H, threads, segment_size).checkpoints[0][1]
