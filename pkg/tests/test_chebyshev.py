import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ktuple.chebyshev import (
    averaged_doubles, averaged_pi2, averaged_theta2, chebyshev_series, double_offsets,
    lambda_k, log_geometric_mean, prime_power_tuple_weight_sum, psi_k, theta_k,
)
from ktuple.errors import InvalidRangeError
from ktuple.oracle import (
    chebyshev_direct, classical_psi, classical_theta, count_tuples_direct, theta2_direct,
)
from ktuple.summation import CompensatedSum
from ktuple.summatory import count_tuples
from ktuple.tuples import OffsetSet, parse_offsets

L = math.log
TWIN = parse_offsets("0,2")


def close(a, b, rel=1e-12):
    return abs(a - b) <= rel * max(1.0, abs(b))


@pytest.mark.parametrize("n,H,expected", [
    (3, "0,2", Fraction(1)),
    (7, "0,2", Fraction(1, 2)),
    (6, "0,2", Fraction(0)),
    (2, "0,2", Fraction(1, 2)),
    (8, "0", Fraction(1, 3)),
    (7, "0,2,4", Fraction(1, 2)),
])
def test_lambda_k(backend, n, H, expected):
    assert lambda_k(n, parse_offsets(H)) == expected


@pytest.mark.parametrize("n,H,expected", [
    (3, "0,2", 0.5 * L(15)),
    (2, "0", L(2)),
    (3, "0,2,4", L(105) / 3),
])
def test_log_geometric_mean(n, H, expected):
    assert close(log_geometric_mean(n, parse_offsets(H)), expected)


# psi(10, {0,2}) picks up (2,4), (3,5), (5,7), (7,9), (9,11) with weights
# 1/2, 1, 1, 1/2, 1/2 -- confirmed by chebyshev_direct.
@pytest.mark.parametrize("x,H,expected", [
    (10, "0,2", L(8) / 4 + L(15) / 2 + L(35) / 2 + L(63) / 4 + L(99) / 4),
    (2, "0,2", L(8) / 4),
    (10, "0", L(2520)),
])
def test_psi_examples(backend, table, x, H, expected):
    H = parse_offsets(H)
    assert close(psi_k(x, H), expected)
    assert close(chebyshev_direct(x, H, table)[1], expected)


@pytest.mark.parametrize("x,H,expected", [
    (10, "0,2", 0.5 * L(15 * 35)),
    (2, "0,2", 0.0),
    (10, "0", L(210)),
])
def test_theta_examples(backend, table, x, H, expected):
    H = parse_offsets(H)
    assert close(theta_k(x, H), expected)
    assert close(chebyshev_direct(x, H, table)[0], expected)


@pytest.mark.parametrize("x,i,expected", [
    (10, 1, 0.5 * L(15 * 35)),
    (10, 3, 0.5 * L(55 * 91)),
    (4, 1, 0.5 * L(15)),
])
def test_theta2_direct_examples(table, x, i, expected):
    assert close(theta2_direct(x, i, table), expected)


@pytest.mark.parametrize("x,H,expected", [
    (10, "0,2", Fraction(7, 2)),
    (2, "0,2", Fraction(1, 2)),
    (10, "0,2,4", Fraction(5, 2)),
    (10, "0", Fraction(16, 3)),
])
def test_weight_sum_examples(backend, table, x, H, expected):
    H = parse_offsets(H)
    assert prime_power_tuple_weight_sum(x, H) == expected
    assert chebyshev_direct(x, H, table)[2] == expected


@pytest.mark.parametrize("pattern", ["0", "0,2", "0,4", "0,2,6", "0,2,4", "0,6,12", "0,1"])
def test_series_against_oracle(backend, table, pattern):
    H = parse_offsets(pattern)
    xs = [2, 3, 50, 999, 4096, 30_000]
    rows = chebyshev_series(xs, H, segment_size=1500)
    for row in rows:
        theta, psi, weight = chebyshev_direct(row.x, H, table)
        assert close(row.theta, theta, 1e-12)
        assert close(row.psi, psi, 1e-12)
        assert row.pp_weight == weight
        assert 0 <= row.theta <= row.psi


def test_series_thread_independence(backend):
    H = parse_offsets("0,2,6")
    xs = [1000, 20_000, 70_000]
    a = chebyshev_series(xs, H, threads=1, segment_size=4096)
    b = chebyshev_series(xs, H, threads=4, segment_size=4096)
    assert a == b


def test_backends_agree_on_reals():
    from ktuple import _accel
    H = parse_offsets("0,2")
    previous = _accel.get_backend()
    try:
        _accel.set_backend("numba")
        a = chebyshev_series([10 ** 5], H)[0]
        _accel.set_backend("numpy")
        b = chebyshev_series([10 ** 5], H)[0]
    finally:
        _accel.set_backend(previous)
    assert close(a.theta, b.theta) and close(a.psi, b.psi)
    assert a.pp_weight == b.pp_weight


def test_k1_reduces_to_classical(backend, table):
    H = parse_offsets("0")
    for row in chebyshev_series([10, 1000, 10 ** 5], H):
        assert close(row.theta, classical_theta(row.x, table), 1e-12)
        assert close(row.psi, classical_psi(row.x, table), 1e-12)


def test_upper_sandwich(backend):
    for i in (1, 2, 3, 7):
        H = OffsetSet((0, 2 * i))
        for x in (100, 1000, 10 ** 4):
            assert theta_k(x, H) <= count_tuples(x, H) * L(x + 2 * i)


def test_double_offsets_range():
    assert list(double_offsets(8)) == [4, 6]
    assert list(double_offsets(10)) == [4, 6, 8]
    assert len(double_offsets(1000)) == 1000 // 2 - 2
    with pytest.raises(InvalidRangeError):
        double_offsets(7)


def test_averaged_examples(backend):
    # x = 8: gaps 4 and 6 -> doubles (3,7),(7,11) and (5,11),(7,13)
    expected = (0.5 * L(21 * 77) + 0.5 * L(55 * 91)) / 2
    assert close(averaged_theta2(8), expected)
    assert averaged_pi2(8) == 2.0
    # x = 10 adds gap 8 -> (3,11),(5,13)
    expected = (0.5 * L(21 * 77) + 0.5 * L(55 * 91) + 0.5 * L(33 * 65)) / 3
    assert close(averaged_theta2(10), expected)
    assert averaged_pi2(10) == 2.0


@pytest.mark.parametrize("x", [8, 9, 10, 57, 200, 1001])
def test_averaged_matches_literal_mean(backend, table, x):
    gaps = list(double_offsets(x))
    thetas = [theta2_direct(x, g // 2, table) for g in gaps]
    counts = [count_tuples_direct(x, OffsetSet((0, g)), table) for g in gaps]
    avg = averaged_doubles(x)
    assert close(avg.theta, math.fsum(thetas) / len(gaps), 1e-10)
    assert avg.pi == sum(counts) / len(gaps)
    assert avg.theta <= max(thetas)
    assert avg.pi <= max(counts)


def test_averaged_matches_summatory_mean(backend):
    x = 300
    gaps = list(double_offsets(x))
    thetas = [theta_k(x, OffsetSet((0, g))) for g in gaps]
    assert close(averaged_theta2(x), math.fsum(thetas) / len(gaps), 1e-10)


def test_averaged_ratio_bounded():
    for x in (100, 10 ** 4):
        ratio = averaged_doubles(x).ratio
        assert 0.5 < ratio <= 1.0


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-1e6, 1e6, allow_nan=False), max_size=200))
def test_compensated_sum_tracks_fsum(values):
    acc = CompensatedSum()
    for v in values:
        acc.add(v)
    scale = max([1.0] + [abs(v) for v in values])
    assert abs(acc.value - math.fsum(values)) <= 1e-15 * scale * max(1, len(values))


def test_compensated_sum_recovers_cancellation():
    acc = CompensatedSum()
    for v in (1.0, 1e100, 1.0, -1e100):
        acc.add(v)
    assert acc.value == 2.0


def test_averaged_theta_over_log_grows():
    values = [averaged_theta2(x) / L(x) for x in (10 ** 3, 10 ** 4, 10 ** 5, 10 ** 6)]
    assert all(b >= a for a, b in zip(values, values[1:]))
