"""Brute-force reference values.

Nothing here touches mu or Lambda: primes come from a plain bytearray
Eratosthenes table and tuples are found by scanning it directly.  Prime
powers for the psi-style references are enumerated as ``p, p**2, ...``.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CapacityError, CoverageError, InvalidRangeError

MAX_TABLE = 1 << 32


@dataclass(frozen=True, eq=False)
class PrimeTable:
    limit: int
    is_prime: np.ndarray

    @property
    def primes(self):
        return np.flatnonzero(self.is_prime)

    def __len__(self):
        return int(np.count_nonzero(self.is_prime))


def primes_up_to(limit):
    limit = int(limit)
    if limit < 2:
        raise InvalidRangeError(f"limit must be >= 2, got {limit}")
    if limit > MAX_TABLE:
        raise CapacityError(f"oracle table limited to {MAX_TABLE} entries")
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p::p] = bytes(len(range(p * p, limit + 1, p)))
    return PrimeTable(limit, np.frombuffer(bytes(flags), dtype=np.uint8).astype(bool))


def is_prime_trial(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _check(table, x, span):
    if x < 2:
        raise InvalidRangeError(f"x must be >= 2, got {x}")
    if table.limit < x + span:
        raise CoverageError(f"table limit {table.limit} < x + span = {x + span}")


def tuple_starts(x, H, table):
    """Sorted array of every n in [2, x] with all n + h prime."""
    x = int(x)
    _check(table, x, H.span)
    hits = np.ones(x - 1, dtype=bool)
    for h in H:
        hits &= table.is_prime[2 + h:x + 1 + h]
    return 2 + np.flatnonzero(hits)


def count_tuples_direct(x, H, table):
    return int(tuple_starts(x, H, table).shape[0])


def count_tuples_direct_all(x, H, table):
    """Counts for every cut-off 2..x at once (index 0 corresponds to x=2)."""
    x = int(x)
    _check(table, x, H.span)
    hits = np.ones(x - 1, dtype=np.int64)
    for h in H:
        hits &= table.is_prime[2 + h:x + 1 + h]
    return np.cumsum(hits)


def theta2_direct(x, i, table):
    """Half the sum of log(p (p + 2i)) over prime doubles with p <= x."""
    from .tuples import OffsetSet
    ps = tuple_starts(x, OffsetSet((0, 2 * int(i))), table)
    return 0.5 * math.fsum(math.log(p) + math.log(p + 2 * i) for p in ps.tolist())


def prime_power_exponents(limit, table):
    """``exps[n] = nu`` when ``n = p**nu``, else 0, for n <= limit."""
    if table.limit < limit:
        raise CoverageError(f"table limit {table.limit} < {limit}")
    exps = np.zeros(limit + 1, dtype=np.int64)
    for p in table.primes[table.primes <= limit].tolist():
        q, nu = p, 1
        while q <= limit:
            exps[q] = nu
            q *= p
            nu += 1
    return exps


def chebyshev_direct(x, H, table):
    """(theta, psi, weight) for pattern H by enumerating tuples directly.

    theta sums the mean log over prime tuples, psi sums it over prime-power
    tuples weighted by prod 1/nu, and weight is sum of prod 1/nu (exact).
    """
    x = int(x)
    _check(table, x, H.span)
    exps = prime_power_exponents(x + H.span, table)
    theta_terms, psi_terms = [], []
    weight = Fraction(0)
    for n in range(2, x + 1):
        nus = [int(exps[n + h]) for h in H]
        if 0 in nus:
            continue
        w = Fraction(1, math.prod(nus))
        mean_log = sum(math.log(n + h) for h in H) / H.k
        weight += w
        psi_terms.append(float(w) * mean_log)
        if all(nu == 1 for nu in nus):
            theta_terms.append(mean_log)
    return math.fsum(theta_terms), math.fsum(psi_terms), weight


def classical_theta(x, table):
    ps = table.primes[table.primes <= x]
    return math.fsum(np.log(ps.astype(float)).tolist())


def classical_psi(x, table):
    """sum of log p over prime powers p**nu <= x."""
    total = []
    for p in table.primes[table.primes <= x].tolist():
        q = p
        lp = math.log(p)
        while q <= x:
            total.append(lp)
            q *= p
    return math.fsum(total)
