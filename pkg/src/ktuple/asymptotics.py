"""Singular series constants and the empirical constant pi_H(x) log^k(x) / x."""

import math
from dataclasses import dataclass

from .errors import InvalidRangeError
from .sieve import base_primes
from .summatory import count_tuples_series
from .tuples import OffsetSet

DEFAULT_PRIME_LIMIT = 10 ** 6


@dataclass(frozen=True)
class SingularSeriesEstimate:
    H: OffsetSet
    value: float
    prime_limit: int
    tail_gap: float


def _euler_product(H, prime_limit):
    k = H.k
    logs = []
    for p in base_primes(prime_limit).tolist():
        nu = len({h % p for h in H.offsets})
        if nu == p:
            return 0.0
        logs.append(math.log1p(-nu / p) - k * math.log1p(-1.0 / p))
    return math.exp(math.fsum(logs))


def singular_series(H, prime_limit=DEFAULT_PRIME_LIMIT):
    """Truncated Hardy-Littlewood product prod_p (1 - nu_p/p) (1 - 1/p)^-k.

    ``tail_gap`` is the change from halving the truncation point.
    """
    prime_limit = int(prime_limit)
    if prime_limit < 2:
        raise InvalidRangeError(f"prime_limit must be >= 2, got {prime_limit}")
    value = _euler_product(H, prime_limit)
    half = _euler_product(H, prime_limit // 2) if prime_limit >= 4 else value
    return SingularSeriesEstimate(H, value, prime_limit, abs(value - half))


def empirical_constant(x, H, count=None, threads=1, segment_size=None):
    """count_H(x) * log(x)**k / x; pass ``count`` to skip the sieve."""
    x = int(x)
    if x < 3:
        raise InvalidRangeError(f"x must be >= 3, got {x}")
    if count is None:
        count = count_tuples_series([x], H, threads, segment_size).checkpoints[0][1]
    return count * math.log(x) ** H.k / x


@dataclass(frozen=True)
class AsymptoticRow:
    x: int
    count: int
    empirical_c: float
    singular_c: float
    ratio: float = None


def asymptotic_report(checkpoints, H, prime_limit=DEFAULT_PRIME_LIMIT, threads=1,
                      segment_size=None):
    xs = [int(x) for x in checkpoints]
    if xs and xs[0] < 3:
        raise InvalidRangeError(f"checkpoints must be >= 3, got {xs[0]}")
    series = singular_series(H, prime_limit)
    counts = count_tuples_series(xs, H, threads, segment_size)
    rows = []
    for x, count in counts.checkpoints:
        emp = empirical_constant(x, H, count=count)
        ratio = emp / series.value if series.value > 0 else None
        rows.append(AsymptoticRow(x, count, emp, series.value, ratio))
    return rows
