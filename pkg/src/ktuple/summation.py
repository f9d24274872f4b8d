"""Compensated (Neumaier) summation with a fixed accumulation order."""

import math


class CompensatedSum:
    """Running sum that carries the rounding error of every addition."""

    __slots__ = ("s", "c")

    def __init__(self, value=0.0):
        self.s = float(value)
        self.c = 0.0

    def add(self, x):
        x = float(x)
        t = self.s + x
        if abs(self.s) >= abs(x):
            self.c += (self.s - t) + x
        else:
            self.c += (x - t) + self.s
        self.s = t
        return self

    def add_pair(self, s, c):
        self.add(s)
        self.add(c)
        return self

    @property
    def value(self):
        return self.s + self.c

    def __float__(self):
        return self.value


def compensated_total(values):
    acc = CompensatedSum()
    for v in values:
        acc.add(v)
    return acc.value


def exact_total(values):
    """Correctly rounded sum (Shewchuk, via math.fsum)."""
    return math.fsum(values)
