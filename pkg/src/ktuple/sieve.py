"""Segmented sieve producing the Moebius function and prime-power structure.

A segment ``[lo, hi]`` is sieved by the base primes ``p <= isqrt(hi)``.  For
every ``n`` the kernel records the sign of mu, the number of distinct base
primes dividing ``n`` and the base-prime-smooth part of ``n``; whatever is
left over is a single prime larger than ``sqrt(hi)``.  From that we read off

* ``mu[n]`` in {-1, 0, +1},
* ``pp_base[n], pp_exp[n]`` = ``(p, nu)`` when ``n == p**nu``, else ``(0, 0)``.

Lambda(n)/log(n) is kept as the exact rational ``1/nu``.
"""

import math
import os
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._accel import njit, use_numba
from .errors import InvalidArgumentError, InvalidRangeError, OutOfRangeError

DEFAULT_SEGMENT_SIZE = 1 << 22
MAX_N = (1 << 63) - 1


def default_segment_size():
    raw = os.environ.get("KTUPLE_SEGMENT_SIZE")
    if not raw:
        return DEFAULT_SEGMENT_SIZE
    try:
        size = int(raw)
    except ValueError:
        raise InvalidArgumentError(f"KTUPLE_SEGMENT_SIZE must be an integer, got {raw!r}") from None
    if size < 16:
        raise InvalidArgumentError("KTUPLE_SEGMENT_SIZE must be at least 16")
    return size


# ---------------------------------------------------------------------------
# base primes

_base_lock = threading.Lock()
_base_cache = np.array([2, 3, 5, 7], dtype=np.int64)
_base_limit = 10


def base_primes(limit):
    """All primes ``<= limit`` as an int64 array (cached, grows on demand)."""
    global _base_cache, _base_limit
    limit = int(limit)
    with _base_lock:
        if limit > _base_limit:
            new_limit = max(limit, 2 * _base_limit)
            flags = np.ones(new_limit + 1, dtype=np.bool_)
            flags[:2] = False
            for p in range(2, math.isqrt(new_limit) + 1):
                if flags[p]:
                    flags[p * p::p] = False
            _base_cache = np.flatnonzero(flags).astype(np.int64)
            _base_limit = new_limit
        cache = _base_cache
    return cache[:np.searchsorted(cache, limit, side="right")]


# ---------------------------------------------------------------------------
# kernels

_BLOCK = 1 << 15


@njit(cache=True, nogil=True)
def _sieve_numba(lo, length, primes):
    # cache-blocked: every base prime sweeps one L1/L2-sized block at a time
    hi = lo + length - 1
    mu = np.ones(length, dtype=np.int8)
    exp = np.zeros(length, dtype=np.uint8)
    base = np.zeros(length, dtype=np.int64)
    ndist = np.zeros(length, dtype=np.uint8)
    smooth = np.ones(length, dtype=np.int64)
    for b0 in range(0, length, _BLOCK):
        b1 = min(b0 + _BLOCK, length)
        blo = lo + b0
        for idx in range(primes.shape[0]):
            p = primes[idx]
            if p > hi // p:
                break
            for m in range(b0 + (p - blo % p) % p, b1, p):
                mu[m] = -mu[m]
                smooth[m] *= p
                ndist[m] += 1
                base[m] = p
                exp[m] = 1
            pk = p * p
            while True:
                for m in range(b0 + (pk - blo % pk) % pk, b1, pk):
                    mu[m] = 0
                    smooth[m] *= p
                    exp[m] += 1
                if pk > hi // p:
                    break
                pk *= p
        for m in range(b0, b1):
            n = lo + m
            if smooth[m] != n:
                # exactly one prime factor above sqrt(hi) remains
                mu[m] = -mu[m]
                if ndist[m] == 0:
                    base[m] = n
                    exp[m] = 1
                else:
                    base[m] = 0
                    exp[m] = 0
            elif ndist[m] != 1:
                base[m] = 0
                exp[m] = 0
    return mu, exp, base


def _sieve_numpy(lo, length, primes):
    hi = lo + length - 1
    mu = np.ones(length, dtype=np.int8)
    exp = np.zeros(length, dtype=np.uint8)
    base = np.zeros(length, dtype=np.int64)
    ndist = np.zeros(length, dtype=np.uint8)
    smooth = np.ones(length, dtype=np.int64)
    for p in primes.tolist():
        if p > hi // p:
            break
        start = -lo % p
        sl = slice(start, None, p)
        np.negative(mu[sl], out=mu[sl])
        smooth[sl] *= p
        ndist[sl] += 1
        base[sl] = p
        exp[sl] = 1
        pk = p * p
        while True:
            sl = slice(-lo % pk, None, pk)
            mu[sl] = 0
            smooth[sl] *= p
            exp[sl] += 1
            if pk > hi // p:
                break
            pk *= p
    n = np.arange(lo, lo + length, dtype=np.int64)
    rough = smooth != n
    np.negative(mu, out=mu, where=rough)
    fresh_prime = rough & (ndist == 0)
    base[fresh_prime] = n[fresh_prime]
    exp[fresh_prime] = 1
    not_pp = (rough & (ndist != 0)) | (~rough & (ndist != 1))
    base[not_pp] = 0
    exp[not_pp] = 0
    return mu, exp, base


def sieve_arrays(lo, length, primes=None):
    """Raw ``(mu, pp_exp, pp_base)`` arrays for ``[lo, lo + length)``."""
    if primes is None:
        primes = base_primes(math.isqrt(lo + length - 1))
    if use_numba():
        return _sieve_numba(np.int64(lo), np.int64(length), primes)
    return _sieve_numpy(lo, length, primes)


# ---------------------------------------------------------------------------
# public segment API

@dataclass(frozen=True, eq=False)
class SieveSegment:
    """Immutable tables of mu and prime-power structure on ``[lo, hi]``."""

    lo: int
    hi: int
    mu: np.ndarray
    pp_base: np.ndarray
    pp_exp: np.ndarray

    def __post_init__(self):
        for arr in (self.mu, self.pp_base, self.pp_exp):
            arr.flags.writeable = False

    def __len__(self):
        return self.hi - self.lo + 1

    def __contains__(self, n):
        return self.lo <= n <= self.hi

    def index(self, n):
        if not self.lo <= n <= self.hi:
            raise OutOfRangeError(f"{n} outside sieved segment [{self.lo}, {self.hi}]")
        return n - self.lo

    def mobius(self, n):
        return int(self.mu[self.index(n)])

    def prime_power(self, n):
        """``(p, nu)`` with ``p**nu == n``, or None when n is not a prime power."""
        i = self.index(n)
        nu = int(self.pp_exp[i])
        if nu == 0:
            return None
        return int(self.pp_base[i]), nu

    @property
    def pp(self):
        return [None if e == 0 else (int(b), int(e))
                for b, e in zip(self.pp_base.tolist(), self.pp_exp.tolist())]


def sieve_segment(lo, hi, primes=None, segment_size=None):
    """Sieve ``[lo, hi]`` (both inclusive).

    ``primes`` may supply the base primes; they must include every prime up
    to ``isqrt(hi)``.
    """
    lo, hi = int(lo), int(hi)
    if lo < 2 or hi < lo:
        raise InvalidRangeError(f"need 2 <= lo <= hi, got lo={lo}, hi={hi}")
    if hi > MAX_N:
        raise InvalidRangeError(f"hi={hi} exceeds the supported maximum {MAX_N}")
    if segment_size is None:
        segment_size = default_segment_size()
    if hi - lo + 1 > segment_size:
        raise InvalidRangeError(
            f"segment [{lo}, {hi}] longer than the configured segment size {segment_size}")
    root = math.isqrt(hi)
    if primes is None:
        primes = base_primes(root)
    elif primes.shape[0] == 0 or (root >= 2 and primes[-1] < base_primes(root)[-1]):
        raise InvalidArgumentError(f"base primes must reach isqrt(hi) = {root}")
    mu, exp, base = sieve_arrays(lo, hi - lo + 1, primes)
    return SieveSegment(lo, hi, mu, base, exp)


def von_mangoldt_ratio(n, seg):
    """Lambda(n)/log(n) as an exact Fraction: 1/nu for n = p**nu, else 0."""
    pp = seg.prime_power(n)
    if pp is None:
        return Fraction(0)
    return Fraction(1, pp[1])


def chi_prime(n, seg):
    """-mu(n) * Lambda(n)/log(n), evaluated exactly: 1 at primes, 0 elsewhere."""
    value = -seg.mobius(n) * von_mangoldt_ratio(n, seg)
    assert value.denominator == 1, value
    return int(value)


def chi_prime_array(mu, exp):
    """Vectorised ``chi_prime`` over raw segment arrays.

    The product -mu * (1/nu) is non-zero only where mu != 0 and nu >= 1; at
    such points nu must be 1, which is checked rather than assumed.
    """
    live = (mu != 0) & (exp != 0)
    if np.any(exp[live] != 1):
        raise ArithmeticError("squarefree prime power with exponent > 1")
    return np.where(live, -mu, 0).astype(np.int8)


# ---------------------------------------------------------------------------
# segment planning and ordered parallel map

def plan_units(first, last, overlap, segment_size=None):
    """Split the index range ``[first, last]`` into work units.

    Each unit ``(a, b)`` is sieved over ``[a, b + overlap]`` which never
    exceeds ``segment_size`` entries.  Unit boundaries depend only on the
    range and the segment size, never on the thread count.
    """
    if segment_size is None:
        segment_size = default_segment_size()
    step = segment_size - overlap
    if step < 1:
        raise InvalidArgumentError(
            f"segment size {segment_size} too small for tuple span {overlap}")
    units = []
    a = first
    while a <= last:
        b = min(a + step - 1, last)
        units.append((a, b))
        a = b + 1
    return units


def map_ordered(fn, items, threads=1):
    """``list(map(fn, items))`` optionally on a thread pool; order is preserved."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(threads, len(items))) as pool:
        return list(pool.map(fn, items))


def primes_in_range(lo, hi, threads=1, segment_size=None):
    """Primes in ``[lo, hi]`` located with the characteristic function."""
    lo = max(int(lo), 2)
    if hi < lo:
        return np.zeros(0, dtype=np.int64)
    primes = base_primes(math.isqrt(hi))

    def work(unit):
        a, b = unit
        mu, exp, _ = sieve_arrays(a, b - a + 1, primes)
        return a + np.flatnonzero(chi_prime_array(mu, exp))

    parts = map_ordered(work, plan_units(lo, hi, 0, segment_size), threads)
    return np.concatenate(parts).astype(np.int64)
