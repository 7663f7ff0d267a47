"""Finite disjunctive powerset over a base domain, ordered by the Hoare order.

Values are frozensets of non-bottom, pairwise non-redundant base values.
There is no widening, so a powerset may only drive a descending phase.
"""

from __future__ import annotations

import random
from functools import reduce
from typing import Iterable, Optional

from ..lattice import Domain
from .interval import IntervalDomain

EMPTY: frozenset = frozenset()


class PowersetDomain(Domain):
    has_widening = False
    has_narrowing = False

    def __init__(self, base: Domain, name: Optional[str] = None, max_disjuncts: Optional[int] = None):
        if max_disjuncts is not None and max_disjuncts < 1:
            raise ValueError("max_disjuncts must be at least 1")
        self.base = base
        self.name = name or f"pset({base.name})"
        self.max_disjuncts = max_disjuncts
        self.variables = getattr(base, "variables", ())

    # -- normal form ---------------------------------------------------------

    def normalize(self, raw: Iterable) -> frozenset:
        """Drop bottoms and elements strictly below another; merge duplicates."""
        b = self.base
        items = []
        for x in raw:
            if b.is_bottom(x) or any(b.equal(x, y) for y in items):
                continue
            items.append(x)
        kept = frozenset(
            x for x in items if not any(y is not x and b.leq(x, y) for y in items)
        )
        if self.max_disjuncts is not None and len(kept) > self.max_disjuncts:
            return self.singleton(self.hull(kept))
        return kept

    def singleton(self, a) -> frozenset:
        return EMPTY if self.base.is_bottom(a) else frozenset([a])

    def hull(self, s: Iterable):
        return reduce(self.base.lub, s, self.base.bottom())

    # -- lattice --------------------------------------------------------------

    def bottom(self):
        return EMPTY

    def top(self):
        return frozenset([self.base.top()])

    def is_bottom(self, s):
        return not s

    def leq(self, s1, s2):
        return all(any(self.base.leq(a, b) for b in s2) for a in s1)

    def lub(self, s1, s2):
        return self.normalize(s1 | s2)

    def glb(self, s1, s2):
        return self.normalize(self.base.glb(a, b) for a in s1 for b in s2)

    # -- transfer -------------------------------------------------------------

    def transfer(self, t, s):
        return self.normalize(self.base.transfer(t, a) for a in s)

    def covers(self, s, state, bound: int) -> bool:
        """Whether the union of the disjuncts contains *state*.

        ``None`` entries of *state* range over ``[-bound, bound]``. Such a
        range may be covered only jointly by several disjuncts, so the free
        dimensions are checked with a box-union sweep. This part assumes
        interval environments as disjuncts.
        """
        free = [i for i, n in enumerate(state) if n is None]
        if not free:
            return any(self.base.covers(a, state, bound) for a in s)
        boxes = []
        for a in s:
            if a.values is None:
                continue
            if all(n is None or n in x for x, n in zip(a.values, state)):
                boxes.append([(max(a.values[i].lo, -bound), min(a.values[i].hi, bound)) for i in free])
        return _boxes_cover(boxes, [(-bound, bound)] * len(free))

    # -- rendering -----------------------------------------------------------

    def render(self, s) -> str:
        items = sorted(s, key=self.base.sort_key)
        return "{" + "; ".join(self.base.render(a) for a in items) + "}"

    def sort_key(self, s):
        return tuple(sorted(self.base.sort_key(a) for a in s))

    def sample(self, rng: random.Random, max_size: int = 4):
        return self.normalize(self.base.sample(rng) for _ in range(rng.randint(0, max_size)))


def _boxes_cover(boxes: list, region: list) -> bool:
    """Whether the union of integer *boxes* contains every point of *region*.

    Both are lists of inclusive ``(lo, hi)`` ranges, one per dimension.
    """
    if not region:
        return bool(boxes)
    lo, hi = region[0]
    live = [b for b in boxes if b[0][0] <= hi and b[0][1] >= lo and b[0][0] <= b[0][1]]
    # elementary segments of the first dimension
    cuts = sorted({lo, hi + 1} | {c for b in live for c in (b[0][0], b[0][1] + 1) if lo < c <= hi})
    for a, nxt in zip(cuts, cuts[1:]):
        here = [b[1:] for b in live if b[0][0] <= a and nxt - 1 <= b[0][1]]
        if not _boxes_cover(here, region[1:]):
            return False
    return True


# Plain-interval helpers (sets of intervals over a single anonymous variable)

_ITV = PowersetDomain(IntervalDomain(), name="iset")


def pset_normalize(raw, domain: PowersetDomain = _ITV) -> frozenset:
    return domain.normalize(raw)


def pset_lub(s1, s2, domain: PowersetDomain = _ITV) -> frozenset:
    return domain.lub(s1, s2)


def pset_leq(s1, s2, domain: PowersetDomain = _ITV) -> bool:
    return domain.leq(s1, s2)


def pset_glb(s1, s2, domain: PowersetDomain = _ITV) -> frozenset:
    return domain.glb(s1, s2)


def pset_transfer(s, t, domain: PowersetDomain) -> frozenset:
    return domain.transfer(t, s)
