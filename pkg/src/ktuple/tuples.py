"""Offset patterns H = {0, h_2, ..., h_k} and their residue structure."""

import math
import re
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, MalformedOffsetsError

_INT = re.compile(r"0|[1-9][0-9]*")


@dataclass(frozen=True)
class OffsetSet:
    """Strictly increasing non-negative offsets starting at 0."""

    offsets: tuple

    def __post_init__(self):
        offs = tuple(int(h) for h in self.offsets)
        if not offs:
            raise MalformedOffsetsError("offset set is empty")
        if offs[0] != 0:
            raise MalformedOffsetsError(f"offsets must start at 0, got {offs}")
        if any(b <= a for a, b in zip(offs, offs[1:])):
            raise MalformedOffsetsError(f"offsets must be strictly increasing, got {offs}")
        object.__setattr__(self, "offsets", offs)

    @property
    def k(self):
        return len(self.offsets)

    @property
    def span(self):
        """Largest offset h_k."""
        return self.offsets[-1]

    def __iter__(self):
        return iter(self.offsets)

    def __len__(self):
        return len(self.offsets)

    def __str__(self):
        return ",".join(map(str, self.offsets))

    def as_array(self):
        return np.array(self.offsets, dtype=np.int64)

    @property
    def admissible(self):
        return is_admissible(self)


def parse_offsets(text):
    """Parse ``"0,2,6"`` style input; order is free, duplicates are not."""
    parts = [part.strip() for part in text.split(",")]
    if parts == [""]:
        raise MalformedOffsetsError("offset list is empty")
    values = []
    for part in parts:
        if not _INT.fullmatch(part):
            raise MalformedOffsetsError(f"bad offset {part!r} in {text!r}")
        values.append(int(part))
    if len(set(values)) != len(values):
        raise MalformedOffsetsError(f"duplicate offsets in {text!r}")
    values.sort()
    if values[0] != 0:
        raise MalformedOffsetsError(f"offset list must contain 0, got {text!r}")
    return OffsetSet(tuple(values))


def _is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def residue_coverage(H, p):
    """Number of distinct residues of the offsets modulo the prime ``p``."""
    if not _is_prime(p):
        raise InvalidArgumentError(f"{p} is not prime")
    return len({h % p for h in H.offsets})


def is_admissible(H):
    # a prime p > k can never be fully covered by k residues
    for p in range(2, H.k + 1):
        if _is_prime(p) and residue_coverage(H, p) == p:
            return False
    return True
