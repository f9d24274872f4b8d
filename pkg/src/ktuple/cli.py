"""Command-line front end: ``ktuple {count,chebyshev,average,series,verify,bench}``."""

import argparse
import csv
import json
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import _accel, oracle
from .asymptotics import DEFAULT_PRIME_LIMIT, asymptotic_report
from .chebyshev import averaged_doubles, chebyshev_series
from .errors import KTupleError
from .sieve import default_segment_size, plan_units
from .summatory import count_tuples_series
from .tuples import OffsetSet, parse_offsets

COMMANDS = ("count", "chebyshev", "average", "series", "verify", "bench")
COLUMNS = ("x", "count", "theta", "psi", "pp_weight", "empirical_c", "singular_c", "ratio")
AVERAGE_COLUMNS = ("x", "n_offsets", "avg_theta", "avg_pi", "ratio")
VERIFY_COLUMNS = ("x", "count", "oracle_count", "match")
BENCH_COLUMNS = ("backend", "threads", "limit", "segment_size", "segments", "seconds",
                 "segments_per_s", "n_per_s", "count")


class UsageError(KTupleError):
    pass


@dataclass
class RunConfig:
    command: str
    offsets: OffsetSet
    limit: int
    checkpoints: list = field(default_factory=list)
    format: str = "csv"
    threads: int = 1
    prime_limit: int = DEFAULT_PRIME_LIMIT
    oracle_check: bool = False
    segment_size: int = None
    backend: str = None
    full_grid: bool = False


def parse_int(text):
    """Accept ``1000000``, ``1_000_000``, ``1e6`` and ``10^6``."""
    t = text.strip().replace("_", "")
    try:
        if "^" in t:
            b, e = t.split("^")
            return int(b) ** int(e)
        if "e" in t.lower():
            m, e = t.lower().split("e")
            value = Fraction(m) * 10 ** int(e)
            if value.denominator != 1:
                raise ValueError
            return int(value)
        return int(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None


def parse_int_list(text):
    return [parse_int(part) for part in text.split(",") if part.strip()]


def _offsets_arg(text):
    try:
        return parse_offsets(text)
    except KTupleError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--offsets", type=_offsets_arg, default=parse_offsets("0,2"),
                        help="tuple pattern, e.g. 0,2,6 (default: 0,2)")
    common.add_argument("--limit", type=parse_int, help="largest cut-off x")
    common.add_argument("--checkpoints", type=parse_int_list, help="comma-separated cut-offs")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    common.add_argument("--prime-limit", type=parse_int, default=DEFAULT_PRIME_LIMIT,
                        help="Euler product truncation for the singular series")
    common.add_argument("--oracle", action="store_true", help="cross-check against brute force")
    common.add_argument("--segment-size", type=parse_int,
                        help="sieve entries per work unit (overrides KTUPLE_SEGMENT_SIZE)")
    common.add_argument("--backend", choices=_accel.BACKENDS,
                        help="kernel backend (overrides KTUPLE_BACKEND)")

    parser = argparse.ArgumentParser(prog="ktuple", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("count", parents=[common], help="exact k-tuple counts")
    sub.add_parser("chebyshev", parents=[common], help="theta, psi and prime-power weight sums")
    sub.add_parser("average", parents=[common], help="prime-double averages over gaps 2i")
    sub.add_parser("series", parents=[common], help="empirical vs singular-series constant")
    sub.add_parser("verify", parents=[common], help="summatory counts vs brute-force oracle")
    bench = sub.add_parser("bench", parents=[common], help="sieve throughput per backend")
    bench.add_argument("--compare", action="store_true",
                       help="time both backends instead of only the active one")
    return parser


def build_config(args):
    if args.threads < 1:
        raise UsageError("--threads must be >= 1")
    checkpoints = sorted(args.checkpoints) if args.checkpoints else []
    limit = args.limit
    if limit is None:
        if not checkpoints:
            raise UsageError("give --limit or --checkpoints")
        limit = checkpoints[-1]
    if checkpoints and checkpoints[-1] > limit:
        raise UsageError(f"checkpoint {checkpoints[-1]} exceeds --limit {limit}")
    full_grid = args.command == "verify" and not checkpoints
    if not checkpoints:
        checkpoints = [limit]
    segment_size = args.segment_size if args.segment_size else default_segment_size()
    return RunConfig(args.command, args.offsets, limit, checkpoints, args.format, args.threads,
                     args.prime_limit, args.oracle, segment_size, args.backend, full_grid)


# ---------------------------------------------------------------------------
# rendering

class Emitter:
    def __init__(self, fmt, columns, out, extra=None):
        self.fmt = fmt
        self.columns = columns
        self.out = out
        self.extra = extra or {}
        if fmt == "csv":
            self.writer = csv.writer(out, lineterminator="\n")
            self.writer.writerow(columns)

    def row(self, **values):
        if self.fmt == "csv":
            self.writer.writerow([self._csv(values.get(c)) for c in self.columns])
        else:
            record = dict(self.extra)
            record.update({c: self._json(values.get(c)) for c in self.columns})
            self.out.write(json.dumps(record) + "\n")

    @staticmethod
    def _csv(v):
        if v is None:
            return ""
        if isinstance(v, bool):
            return str(v).lower()
        if isinstance(v, Fraction):
            return f"{float(v):.12g}" if v.denominator != 1 else str(v.numerator)
        if isinstance(v, float):
            return f"{v:.12g}"
        return str(v)

    @staticmethod
    def _json(v):
        if isinstance(v, Fraction):
            return f"{v.numerator}/{v.denominator}"
        # floats keep full precision (shortest repr) so JSON round-trips exactly
        return v


# ---------------------------------------------------------------------------
# commands

def cmd_count(cfg, out, err):
    H = cfg.offsets
    result = count_tuples_series(cfg.checkpoints, H, cfg.threads, cfg.segment_size)
    emit = Emitter(cfg.format, COLUMNS, out, {"offsets": list(H.offsets)})
    for x, count in result.checkpoints:
        emit.row(x=x, count=count)
    if cfg.oracle_check:
        table = oracle.primes_up_to(cfg.limit + H.span)
        bad = [(x, c) for x, c in result.checkpoints
               if oracle.count_tuples_direct(x, H, table) != c]
        err.write(f"{len(bad)} mismatches\n")
        return 1 if bad else 0
    return 0


def cmd_chebyshev(cfg, out, err):
    H = cfg.offsets
    rows = chebyshev_series(cfg.checkpoints, H, cfg.threads, cfg.segment_size)
    counts = count_tuples_series(cfg.checkpoints, H, cfg.threads, cfg.segment_size)
    emit = Emitter(cfg.format, COLUMNS, out, {"offsets": list(H.offsets)})
    for row, (_, count) in zip(rows, counts.checkpoints):
        emit.row(x=row.x, count=count, theta=row.theta, psi=row.psi, pp_weight=row.pp_weight)
    if cfg.oracle_check:
        table = oracle.primes_up_to(cfg.limit + H.span)
        bad = 0
        for row in rows:
            theta, psi, weight = oracle.chebyshev_direct(row.x, H, table)
            if (abs(row.theta - theta) > 1e-9 * max(1.0, theta)
                    or abs(row.psi - psi) > 1e-9 * max(1.0, psi) or row.pp_weight != weight):
                bad += 1
        err.write(f"{bad} mismatches\n")
        return 1 if bad else 0
    return 0


def cmd_average(cfg, out, err):
    emit = Emitter(cfg.format, AVERAGE_COLUMNS, out)
    for x in cfg.checkpoints:
        avg = averaged_doubles(x, cfg.threads, cfg.segment_size)
        emit.row(x=x, n_offsets=avg.n_offsets, avg_theta=avg.theta, avg_pi=avg.pi,
                 ratio=avg.ratio)
    return 0


def cmd_series(cfg, out, err):
    H = cfg.offsets
    rows = asymptotic_report(cfg.checkpoints, H, cfg.prime_limit, cfg.threads, cfg.segment_size)
    emit = Emitter(cfg.format, COLUMNS, out, {"offsets": list(H.offsets)})
    for r in rows:
        emit.row(x=r.x, count=r.count, empirical_c=r.empirical_c, singular_c=r.singular_c,
                 ratio=r.ratio)
    return 0


def cmd_verify(cfg, out, err):
    H = cfg.offsets
    table = oracle.primes_up_to(cfg.limit + H.span)
    if cfg.full_grid:
        xs = list(range(2, cfg.limit + 1))
        expected = oracle.count_tuples_direct_all(cfg.limit, H, table).tolist()
    else:
        xs = cfg.checkpoints
        expected = [oracle.count_tuples_direct(x, H, table) for x in xs]
    got = count_tuples_series(xs, H, cfg.threads, cfg.segment_size).counts
    mismatches = sum(1 for g, e in zip(got, expected) if g != e)
    emit = Emitter(cfg.format, VERIFY_COLUMNS, out, {"offsets": list(H.offsets)})
    shown = [len(xs) - 1] if cfg.full_grid else range(len(xs))
    for i in shown:
        emit.row(x=xs[i], count=got[i], oracle_count=expected[i], match=got[i] == expected[i])
    err.write(f"{mismatches} mismatches over {len(xs)} cut-offs\n")
    return 1 if mismatches else 0


def cmd_bench(cfg, out, err, compare=False):
    H = cfg.offsets
    backends = list(_accel.BACKENDS) if compare else [_accel.get_backend()]
    segments = len(plan_units(2, cfg.limit, H.span, cfg.segment_size))
    emit = Emitter(cfg.format, BENCH_COLUMNS, out, {"offsets": list(H.offsets)})
    previous = _accel.get_backend()
    try:
        for name in backends:
            _accel.set_backend(name)
            count_tuples_series([1000], H)  # compile / warm caches
            start = time.perf_counter()
            count = count_tuples_series([cfg.limit], H, cfg.threads, cfg.segment_size).counts[0]
            seconds = time.perf_counter() - start
            emit.row(backend=name, threads=cfg.threads, limit=cfg.limit,
                     segment_size=cfg.segment_size, segments=segments, seconds=seconds,
                     segments_per_s=segments / seconds, n_per_s=cfg.limit / seconds, count=count)
    finally:
        _accel.set_backend(previous)
    return 0


def run(cfg, out=None, err=None, compare=False):
    out = out or sys.stdout
    err = err or sys.stderr
    previous = None
    if cfg.backend:
        previous = _accel.set_backend(cfg.backend)
    try:
        if cfg.command == "bench":
            return cmd_bench(cfg, out, err, compare)
        handler = {
            "count": cmd_count,
            "chebyshev": cmd_chebyshev,
            "average": cmd_average,
            "series": cmd_series,
            "verify": cmd_verify,
        }[cfg.command]
        return handler(cfg, out, err)
    finally:
        if previous is not None:
            _accel.set_backend(previous)


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        cfg = build_config(args)
        return run(cfg, out, err, compare=getattr(args, "compare", False))
    except KTupleError as exc:
        err.write(f"ktuple {args.command}: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
