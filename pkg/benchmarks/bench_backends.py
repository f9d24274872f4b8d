#!/usr/bin/env python3
"""Time the numba and numpy kernels side by side.

    python benchmarks/bench_backends.py --limit 1e8 --offsets 0,2 --repeat 3

Sieve and counting kernels are timed separately on one full segment, then a
complete count to ``--limit`` is timed end to end.
"""

import argparse
import csv
import sys
import time

import numpy as np

from ktuple import _accel
from ktuple.cli import parse_int
from ktuple.sieve import base_primes, default_segment_size, sieve_arrays
from ktuple.summatory import _count_kernel, count_tuples
from ktuple.tuples import parse_offsets


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - start)
    return min(times), result


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--limit", type=parse_int, default=10 ** 7)
    ap.add_argument("--offsets", type=parse_offsets, default=parse_offsets("0,2"))
    ap.add_argument("--segment-size", type=parse_int, default=default_segment_size())
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    H = args.offsets
    size = args.segment_size
    lo = max(2, args.limit - size)
    primes = base_primes(int((lo + size) ** 0.5) + 1)
    offsets = H.as_array()
    cuts = np.array([size - H.span], dtype=np.int64)

    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["backend", "sieve_s", "count_kernel_s", "end_to_end_s", "count"])
    previous = _accel.get_backend()
    try:
        for name in _accel.BACKENDS:
            if name == "numba" and not _accel.HAVE_NUMBA:
                continue
            _accel.set_backend(name)
            count_tuples(1000, H)  # compile
            sieve_s, (mu, exp, _) = best_of(lambda: sieve_arrays(lo, size, primes), args.repeat)
            kern_s, _ = best_of(lambda: _count_kernel(mu, exp, offsets, size - H.span, cuts),
                                args.repeat)
            total_s, count = best_of(
                lambda: count_tuples(args.limit, H, args.threads, size), 1)
            writer.writerow([name, f"{sieve_s:.4f}", f"{kern_s:.4f}", f"{total_s:.3f}", count])
    finally:
        _accel.set_backend(previous)


if __name__ == "__main__":
    main()
