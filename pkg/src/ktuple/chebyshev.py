"""k-tuple Chebyshev functions and the averaged prime-double functions.

With ``L(n) = (1/k) sum_j log(n + h_j)`` (log of the geometric mean of the
tuple) and ``lam(n) = prod_j Lambda(n+h_j)/log(n+h_j)``:

    psi_H(x)   = sum_{n<=x} lam(n) * L(n)
    theta_H(x) = sum_{n<=x} chi_H(n) * L(n)
    J_H(x)     = sum_{n<=x} lam(n)            (exact rational)

``chi_H`` is the exact tuple characteristic from :mod:`ktuple.summatory`.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._accel import njit, use_numba
from .errors import ExactnessError, InvalidRangeError
from .sieve import base_primes, map_ordered, primes_in_range, sieve_arrays, sieve_segment, von_mangoldt_ratio
from .summation import CompensatedSum
from .summatory import unit_jobs, validate_checkpoints
from .tuples import OffsetSet


@dataclass(frozen=True)
class ChebyshevResult:
    H: OffsetSet
    x: int
    theta: float
    psi: float
    pp_weight: Fraction


# ---------------------------------------------------------------------------
# kernels
#
# Both return per cut: (theta_s, theta_c, psi_s, psi_c, unit_weight) plus
# the positions and denominators of every fractional-weight term, so that
# the rational weight sum can be assembled exactly outside the kernel.

@njit(cache=True, nogil=True)
def _chebyshev_numba(lo, mu, exp, offsets, nvals, cuts):
    k = offsets.shape[0]
    sign = -1 if k % 2 else 1
    ncut = cuts.shape[0]
    th_s = np.zeros(ncut)
    th_c = np.zeros(ncut)
    ps_s = np.zeros(ncut)
    ps_c = np.zeros(ncut)
    units = np.zeros(ncut, dtype=np.int64)

    nfrac = 0
    for m in range(nvals):
        den = 1
        for j in range(k):
            e = exp[m + offsets[j]]
            if e == 0:
                den = 0
                break
            den *= e
        if den > 1:
            nfrac += 1
    frac_pos = np.empty(nfrac, dtype=np.int64)
    frac_den = np.empty(nfrac, dtype=np.int64)

    ts = 0.0
    tc = 0.0
    qs = 0.0
    qc = 0.0
    unit = 0
    bad = 0
    fi = 0
    ci = 0
    for m in range(nvals):
        num = sign
        den = 1
        for j in range(k):
            i = m + offsets[j]
            e = exp[i]
            if e == 0:
                den = 0
                break
            num *= mu[i]
            den *= e
        if den != 0:
            mean_log = 0.0
            for j in range(k):
                mean_log += np.log(np.float64(lo + m + offsets[j]))
            mean_log /= k
            if den == 1:
                unit += 1
            else:
                frac_pos[fi] = m
                frac_den[fi] = den
                fi += 1
            # psi term: weight 1/den
            term = mean_log / den
            t = qs + term
            if abs(qs) >= abs(term):
                qc += (qs - t) + term
            else:
                qc += (term - t) + qs
            qs = t
            # theta term: chi = num/den, must be 0 or 1
            if num != 0:
                if num != den:
                    bad += 1
                t = ts + mean_log
                if abs(ts) >= abs(mean_log):
                    tc += (ts - t) + mean_log
                else:
                    tc += (mean_log - t) + ts
                ts = t
        while ci < ncut and cuts[ci] == m + 1:
            th_s[ci] = ts
            th_c[ci] = tc
            ps_s[ci] = qs
            ps_c[ci] = qc
            units[ci] = unit
            ci += 1
    return th_s, th_c, ps_s, ps_c, units, frac_pos, frac_den, bad


def _chebyshev_numpy(lo, mu, exp, offsets, nvals, cuts):
    k = len(offsets)
    num = np.full(nvals, -1 if k % 2 else 1, dtype=np.int64)
    den = np.ones(nvals, dtype=np.int64)
    for h in offsets.tolist():
        e = exp[h:h + nvals].astype(np.int64)
        num *= mu[h:h + nvals]
        den *= e
    pos = np.flatnonzero(den)
    num, den = num[pos], den[pos]
    n = (lo + pos).astype(np.float64)
    mean_log = np.zeros(pos.shape[0])
    for h in offsets.tolist():
        mean_log += np.log(n + h)
    mean_log /= k
    prime = num != 0
    bad = int(np.count_nonzero(num[prime] != den[prime]))
    psi_terms = mean_log / den

    ends = np.searchsorted(pos, cuts - 1, side="right")
    ncut = cuts.shape[0]
    th_s = np.zeros(ncut)
    ps_s = np.zeros(ncut)
    units = np.cumsum(den == 1)[ends - 1] if pos.shape[0] else np.zeros(ncut, dtype=np.int64)
    units = np.where(ends > 0, units, 0)
    theta_acc, psi_acc = CompensatedSum(), CompensatedSum()
    prev = 0
    for ci, end in enumerate(ends.tolist()):
        theta_acc.add(math.fsum(mean_log[prev:end][prime[prev:end]].tolist()))
        psi_acc.add(math.fsum(psi_terms[prev:end].tolist()))
        th_s[ci] = theta_acc.value
        ps_s[ci] = psi_acc.value
        prev = end
    frac = den > 1
    return (th_s, np.zeros(ncut), ps_s, np.zeros(ncut), units.astype(np.int64),
            pos[frac], den[frac], bad)


def _chebyshev_kernel(lo, mu, exp, offsets, nvals, cuts):
    if use_numba():
        return _chebyshev_numba(np.int64(lo), mu, exp, offsets, np.int64(nvals), cuts)
    return _chebyshev_numpy(lo, mu, exp, offsets, nvals, cuts)


# ---------------------------------------------------------------------------
# pointwise pieces

def lambda_k(n, H, seg=None):
    """prod_j Lambda(n+h_j)/log(n+h_j) as an exact Fraction."""
    n = int(n)
    if n < 2:
        raise InvalidRangeError(f"n must be >= 2, got {n}")
    if seg is None:
        seg = sieve_segment(n, n + H.span, segment_size=H.span + 1)
    value = Fraction(1)
    for h in H:
        value *= von_mangoldt_ratio(n + h, seg)
        if not value:
            break
    return value


def log_geometric_mean(n, H):
    """log((n (n+h_2) ... (n+h_k))**(1/k)), in double precision."""
    total = 0.0
    for h in H:
        total += math.log(n + h)
    return total / H.k


# ---------------------------------------------------------------------------
# summatory functions

def chebyshev_series(checkpoints, H, threads=1, segment_size=None):
    """theta, psi and the prime-power weight sum at every checkpoint."""
    xs = validate_checkpoints(checkpoints, H)
    offsets = H.as_array()
    primes = base_primes(math.isqrt(xs[-1] + H.span))

    def work(job):
        a, b, cuts = job
        mu, exp, _ = sieve_arrays(a, b - a + 1 + H.span, primes)
        return _chebyshev_kernel(a, mu, exp, offsets, b - a + 1, cuts)

    jobs = unit_jobs(xs, H.span, segment_size)
    results = map_ordered(work, jobs, threads)

    theta_acc, psi_acc = CompensatedSum(), CompensatedSum()
    weight = Fraction(0)
    rows = []
    for (a, b, cuts), res in zip(jobs, results):
        th_s, th_c, ps_s, ps_c, units, frac_pos, frac_den, bad = res
        if bad:
            raise ExactnessError(f"{bad} non-integral tuple characteristics in [{a}, {b}]")
        frac_pos = frac_pos.tolist()
        frac_den = frac_den.tolist()
        fi = 0
        seg_frac = Fraction(0)
        for ci, c in enumerate(cuts.tolist()):
            while fi < len(frac_pos) and frac_pos[fi] < c:
                seg_frac += Fraction(1, frac_den[fi])
                fi += 1
            if ci == len(cuts) - 1:
                break
            theta = CompensatedSum()
            theta.add_pair(theta_acc.s, theta_acc.c).add_pair(th_s[ci], th_c[ci])
            psi = CompensatedSum()
            psi.add_pair(psi_acc.s, psi_acc.c).add_pair(ps_s[ci], ps_c[ci])
            rows.append(ChebyshevResult(
                H, a + c - 1, theta.value, psi.value, weight + int(units[ci]) + seg_frac))
        theta_acc.add_pair(th_s[-1], th_c[-1])
        psi_acc.add_pair(ps_s[-1], ps_c[-1])
        weight += int(units[-1]) + seg_frac
    return rows


def _single(x, H, threads, segment_size):
    x = int(x)
    if x < 2:
        raise InvalidRangeError(f"x must be >= 2, got {x}")
    return chebyshev_series([x], H, threads, segment_size)[0]


def psi_k(x, H, threads=1, segment_size=None):
    return _single(x, H, threads, segment_size).psi


def theta_k(x, H, threads=1, segment_size=None):
    return _single(x, H, threads, segment_size).theta


def prime_power_tuple_weight_sum(x, H, threads=1, segment_size=None):
    """sum_{n<=x} prod_j 1/nu_j over prime-power tuples (exact Fraction)."""
    return _single(x, H, threads, segment_size).pp_weight


# ---------------------------------------------------------------------------
# averages over prime doubles (p, p + 2i), 2 <= i <= (x - 2) // 2

def double_offsets(x):
    """The gaps 2i averaged over at cut-off x."""
    x = int(x)
    if x < 8:
        raise InvalidRangeError(f"averaged double functions need x >= 8, got {x}")
    return range(4, 2 * ((x - 2) // 2) + 1, 2)


@dataclass(frozen=True)
class DoubleAverages:
    x: int
    n_offsets: int
    theta_total: float
    pi_total: int

    @property
    def theta(self):
        return self.theta_total / self.n_offsets

    @property
    def pi(self):
        return self.pi_total / self.n_offsets

    @property
    def ratio(self):
        """theta_hat / (log(x) * pi_hat); bounded above by 1."""
        if self.pi_total == 0:
            return None
        return self.theta_total / (math.log(self.x) * self.pi_total)


def averaged_doubles(x, threads=1, segment_size=None):
    """Sums of theta_{0,2i}(x) and pi_{0,2i}(x) over every admissible gap.

    Instead of one pass per gap, each odd prime p <= x is paired with all
    primes q in [p + 4, p + 2I] at once through prefix sums of log q.
    """
    gaps = double_offsets(x)
    top = gaps[-1]
    ps = primes_in_range(2, x + top, threads, segment_size)
    logs = np.log(ps.astype(np.float64))
    prefix = np.concatenate(([0.0], np.cumsum(logs)))
    # ps[0] == 2 pairs with no odd prime at an even distance
    end = np.searchsorted(ps, x, side="right")
    starts = ps[1:end]
    lo = np.searchsorted(ps, starts + 4, side="left")
    hi = np.searchsorted(ps, starts + top, side="right")
    cnt = hi - lo
    own = cnt * logs[1:end]
    partner = prefix[hi] - prefix[lo]
    theta_total = 0.5 * math.fsum(np.concatenate((own, partner)).tolist())
    return DoubleAverages(int(x), len(gaps), theta_total, int(cnt.sum()))


def averaged_theta2(x, threads=1, segment_size=None):
    return averaged_doubles(x, threads, segment_size).theta


def averaged_pi2(x, threads=1, segment_size=None):
    return averaged_doubles(x, threads, segment_size).pi
