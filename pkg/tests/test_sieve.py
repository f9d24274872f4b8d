import numpy as np
import pytest
from fractions import Fraction
from hypothesis import given, settings, strategies as st

from ktuple.errors import InvalidArgumentError, InvalidRangeError, OutOfRangeError
from ktuple.oracle import is_prime_trial
from ktuple.sieve import (
    base_primes, chi_prime, chi_prime_array, plan_units, primes_in_range, sieve_segment,
    von_mangoldt_ratio,
)

from .conftest import factorize


def test_small_segment_mu(backend):
    seg = sieve_segment(2, 10)
    assert seg.mu.tolist() == [-1, -1, 0, -1, 1, -1, 0, 0, 1]


def test_small_segment_prime_powers(backend):
    seg = sieve_segment(2, 10)
    pp = {n: seg.prime_power(n) for n in range(2, 11) if seg.prime_power(n)}
    assert pp == {2: (2, 1), 3: (3, 1), 4: (2, 2), 5: (5, 1), 7: (7, 1), 8: (2, 3), 9: (3, 2)}
    assert seg.prime_power(6) is None and seg.prime_power(10) is None


def test_segmented_matches_monolithic(backend):
    lo, hi = 10 ** 6, 10 ** 6 + 10 ** 5
    seg = sieve_segment(lo, hi)
    mono = sieve_segment(2, hi, segment_size=hi)
    sl = slice(lo - 2, None)
    assert np.array_equal(seg.mu, mono.mu[sl])
    assert np.array_equal(seg.pp_exp, mono.pp_exp[sl])
    assert np.array_equal(seg.pp_base, mono.pp_base[sl])


def test_backends_agree():
    from ktuple import _accel
    previous = _accel.get_backend()
    try:
        _accel.set_backend("numba")
        a = sieve_segment(999_000, 1_050_000)
        _accel.set_backend("numpy")
        b = sieve_segment(999_000, 1_050_000)
    finally:
        _accel.set_backend(previous)
    for name in ("mu", "pp_exp", "pp_base"):
        assert np.array_equal(getattr(a, name), getattr(b, name))


@settings(max_examples=40, deadline=None)
@given(lo=st.integers(2, 5 * 10 ** 4), length=st.integers(1, 400))
def test_segment_matches_factorisation(lo, length):
    hi = lo + length - 1
    seg = sieve_segment(lo, hi)
    for n in range(lo, hi + 1):
        f = factorize(n)
        mu = 0 if any(e > 1 for e in f.values()) else (-1) ** len(f)
        assert seg.mobius(n) == mu
        expected_pp = next(iter(f.items())) if len(f) == 1 else None
        assert seg.prime_power(n) == expected_pp


def test_von_mangoldt_ratio_examples(backend):
    seg = sieve_segment(2, 10)
    assert von_mangoldt_ratio(8, seg) == Fraction(1, 3)
    assert von_mangoldt_ratio(6, seg) == 0
    assert von_mangoldt_ratio(7, seg) == 1


def test_chi_prime_examples(backend):
    seg = sieve_segment(2, 10)
    assert chi_prime(2, seg) == 1
    assert chi_prime(4, seg) == 0
    assert chi_prime(9, seg) == 0


def test_chi_prime_equals_trial_division(backend):
    seg = sieve_segment(2, 10 ** 5)
    chi = chi_prime_array(seg.mu, seg.pp_exp)
    trial = np.array([is_prime_trial(n) for n in range(2, 10 ** 5 + 1)])
    assert np.array_equal(chi == 1, trial)
    assert set(np.unique(chi).tolist()) <= {0, 1}


def test_ratio_times_mu_is_zero_or_minus_one(backend):
    seg = sieve_segment(2, 5000)
    for n in range(2, 5001):
        r = von_mangoldt_ratio(n, seg)
        assert r == 0 or (r.numerator == 1 and r.denominator >= 1)
        assert seg.mobius(n) * r in (0, -1)


def test_segment_is_immutable():
    seg = sieve_segment(2, 100)
    with pytest.raises(ValueError):
        seg.mu[0] = 5


@pytest.mark.parametrize("lo,hi", [(1, 10), (0, 5), (10, 9)])
def test_invalid_range(lo, hi):
    with pytest.raises(InvalidRangeError):
        sieve_segment(lo, hi)


def test_segment_size_bound():
    with pytest.raises(InvalidRangeError):
        sieve_segment(2, 200, segment_size=100)


def test_base_primes_must_reach_root():
    with pytest.raises(InvalidArgumentError):
        sieve_segment(10 ** 6, 10 ** 6 + 10, primes=base_primes(100))


def test_out_of_range_lookup():
    seg = sieve_segment(10, 20)
    with pytest.raises(OutOfRangeError):
        von_mangoldt_ratio(9, seg)
    with pytest.raises(OutOfRangeError):
        chi_prime(21, seg)


def test_env_segment_size(monkeypatch):
    from ktuple.sieve import default_segment_size
    monkeypatch.setenv("KTUPLE_SEGMENT_SIZE", "1024")
    assert default_segment_size() == 1024
    monkeypatch.setenv("KTUPLE_SEGMENT_SIZE", "abc")
    with pytest.raises(InvalidArgumentError):
        default_segment_size()


def test_plan_units_cover_range_without_overlap():
    units = plan_units(2, 10_000, 6, segment_size=1000)
    assert units[0][0] == 2 and units[-1][1] == 10_000
    for (a, b), (c, _) in zip(units, units[1:]):
        assert c == b + 1
    assert all(b - a + 1 + 6 <= 1000 for a, b in units)
    with pytest.raises(InvalidArgumentError):
        plan_units(2, 100, 50, segment_size=40)


def test_primes_in_range(backend):
    ps = primes_in_range(2, 10 ** 6, threads=3, segment_size=65536)
    assert ps.shape[0] == 78498
    assert ps[:5].tolist() == [2, 3, 5, 7, 11]
