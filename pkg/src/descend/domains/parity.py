"""The four-point parity lattice."""

from __future__ import annotations

import enum
import random

from ..lattice import Domain


class Parity(enum.Enum):
    BOT = "bot"
    EVEN = "even"
    ODD = "odd"
    TOP = "top"

    def __str__(self) -> str:
        return self.value

    @staticmethod
    def of(n: int) -> "Parity":
        return Parity.EVEN if n % 2 == 0 else Parity.ODD


BOT, EVEN, ODD, TOP = Parity.BOT, Parity.EVEN, Parity.ODD, Parity.TOP


def leq(a: Parity, b: Parity) -> bool:
    return a is BOT or b is TOP or a is b


def lub(a: Parity, b: Parity) -> Parity:
    if leq(a, b):
        return b
    if leq(b, a):
        return a
    return TOP


def glb(a: Parity, b: Parity) -> Parity:
    if leq(a, b):
        return a
    if leq(b, a):
        return b
    return BOT


def add(a: Parity, b: Parity) -> Parity:
    if a is BOT or b is BOT:
        return BOT
    if a is TOP or b is TOP:
        return TOP
    return EVEN if a is b else ODD


def mul(a: Parity, b: Parity) -> Parity:
    if a is BOT or b is BOT:
        return BOT
    if a is EVEN or b is EVEN:
        return EVEN
    if a is ODD and b is ODD:
        return ODD
    return TOP


def neg(a: Parity) -> Parity:
    return a


class ParityDomain(Domain):
    """Finite, so ``lub`` doubles as the widening and ``glb`` as the narrowing."""

    name = "par"

    def bottom(self):
        return BOT

    def top(self):
        return TOP

    def leq(self, a, b):
        return leq(a, b)

    def lub(self, a, b):
        return lub(a, b)

    def glb(self, a, b):
        return glb(a, b)

    def widen(self, a, b):
        return lub(a, b)

    def is_bottom(self, a):
        return a is BOT

    def equal(self, a, b):
        return a is b

    def render(self, a):
        return str(a)

    const = staticmethod(Parity.of)
    add = staticmethod(add)
    sub = staticmethod(add)
    mul = staticmethod(mul)
    neg = staticmethod(neg)

    def contains(self, a: Parity, n: int) -> bool:
        return a is TOP or (a is not BOT and Parity.of(n) is a)

    def sample(self, rng: random.Random) -> Parity:
        return rng.choice(list(Parity))
