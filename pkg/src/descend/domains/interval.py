"""Integer intervals over arbitrary-precision ints extended with ±∞."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Union

from ..lattice import Domain

INF = math.inf
Bound = Union[int, float]  # float only for ±inf


@dataclass(frozen=True)
class Interval:
    """``[lo, hi]``; the empty interval is the single value ``(+inf, -inf)``."""

    lo: Bound
    hi: Bound

    def __post_init__(self):
        if self.lo > self.hi:
            if (self.lo, self.hi) != (INF, -INF):
                raise ValueError(f"empty interval must be BOTTOM, got [{self.lo},{self.hi}]")
        elif self.lo == INF or self.hi == -INF:
            raise ValueError("bounds must be finite on the inner side")
        for b in (self.lo, self.hi):
            if isinstance(b, float) and not math.isinf(b):
                raise ValueError(f"bound {b!r} is not an integer")

    @staticmethod
    def of(lo: Bound, hi: Bound) -> "Interval":
        return BOTTOM if lo > hi else Interval(lo, hi)

    @staticmethod
    def const(n: int) -> "Interval":
        return Interval(n, n)

    @property
    def is_bottom(self) -> bool:
        return self.lo > self.hi

    @property
    def is_singleton(self) -> bool:
        return self.lo == self.hi

    def __contains__(self, n: int) -> bool:
        return self.lo <= n <= self.hi

    def __str__(self) -> str:
        if self.is_bottom:
            return "bot"
        return f"[{_fmt(self.lo)},{_fmt(self.hi)}]"


BOTTOM = Interval(INF, -INF)
TOP = Interval(-INF, INF)


def _fmt(b: Bound) -> str:
    if b == INF:
        return "+inf"
    if b == -INF:
        return "-inf"
    return str(b)


def leq(a: Interval, b: Interval) -> bool:
    return a.is_bottom or (b.lo <= a.lo and a.hi <= b.hi)


def lub(a: Interval, b: Interval) -> Interval:
    return Interval.of(min(a.lo, b.lo), max(a.hi, b.hi))


def glb(a: Interval, b: Interval) -> Interval:
    return Interval.of(max(a.lo, b.lo), min(a.hi, b.hi))


def widen(a: Interval, b: Interval) -> Interval:
    if a.is_bottom:
        return b
    if b.is_bottom:
        return a
    return Interval(-INF if b.lo < a.lo else a.lo, INF if a.hi < b.hi else a.hi)


def narrow(a: Interval, b: Interval) -> Interval:
    if a.is_bottom or b.is_bottom:
        return BOTTOM
    return Interval.of(b.lo if a.lo == -INF else a.lo, b.hi if a.hi == INF else a.hi)


def add(a: Interval, b: Interval) -> Interval:
    if a.is_bottom or b.is_bottom:
        return BOTTOM
    return Interval(a.lo + b.lo, a.hi + b.hi)


def neg(a: Interval) -> Interval:
    if a.is_bottom:
        return BOTTOM
    return Interval(-a.hi, -a.lo)


def sub(a: Interval, b: Interval) -> Interval:
    return add(a, neg(b))


def _mul_bound(x: Bound, y: Bound) -> Bound:
    if x == 0 or y == 0:
        return 0
    return x * y


def mul(a: Interval, b: Interval) -> Interval:
    if a.is_bottom or b.is_bottom:
        return BOTTOM
    products = [_mul_bound(x, y) for x in (a.lo, a.hi) for y in (b.lo, b.hi)]
    return Interval(min(products), max(products))


class IntervalDomain(Domain):
    name = "itv"
    has_narrowing = True

    def bottom(self):
        return BOTTOM

    def top(self):
        return TOP

    def leq(self, a, b):
        return leq(a, b)

    def lub(self, a, b):
        return lub(a, b)

    def glb(self, a, b):
        return glb(a, b)

    def widen(self, a, b):
        return widen(a, b)

    def narrow(self, a, b):
        return narrow(a, b)

    def is_bottom(self, a):
        return a.is_bottom

    def equal(self, a, b):
        return a == b

    def render(self, a):
        return str(a)

    def sort_key(self, a):
        return (a.lo, a.hi)

    # arithmetic used by expression evaluation
    const = staticmethod(Interval.const)
    add = staticmethod(add)
    sub = staticmethod(sub)
    mul = staticmethod(mul)
    neg = staticmethod(neg)

    def contains(self, a: Interval, n: int) -> bool:
        return n in a

    def sample(self, rng: random.Random, span: int = 20) -> Interval:
        r = rng.random()
        if r < 0.05:
            return BOTTOM
        if r < 0.1:
            return TOP
        lo, hi = sorted(rng.randint(-span, span) for _ in range(2))
        if rng.random() < 0.2:
            lo = -INF
        if rng.random() < 0.2:
            hi = INF
        return Interval(lo, hi)
