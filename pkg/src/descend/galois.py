"""Concretization maps from a coarse ascending domain into a finer
descending domain, and the embedding used to compare results."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .domains import POWERSET_IDS, BoxDomain, DomainError, EnvDomain, PowersetDomain, make_domain
from .domains.interval import BOTTOM, Interval
from .domains.interval import lub as itv_lub


def _singleton(a, base) -> frozenset:
    return frozenset() if base.is_bottom(a) else frozenset([a])


def gamma_itv_to_iset(a: Interval) -> frozenset:
    """Embed an interval as the set containing just that interval."""
    return frozenset() if a.is_bottom else frozenset([a])


def gamma_box_to_bset(a, domain: BoxDomain | None = None) -> frozenset:
    """Embed a box as a one-element set of boxes (empty for bottom)."""
    return frozenset() if a.values is None else frozenset([a])


def alpha_collapse(s, base=None):
    """Hull of a set of intervals or boxes; the empty set gives bottom."""
    if base is not None:
        out = base.bottom()
        for a in s:
            out = base.lub(out, a)
        return out
    items = list(s)
    if not items:
        return BOTTOM
    out = items[0]
    for a in items[1:]:
        out = itv_lub(out, a)
    return out


@dataclass(frozen=True)
class DomainPair:
    """Ascending domain, descending domain and the map between them."""

    asc: object
    desc: object
    gamma: Callable

    @property
    def is_identity(self) -> bool:
        return self.asc is self.desc

    @property
    def label(self) -> str:
        if self.is_identity:
            return self.asc.name
        return f"{self.asc.name}:{self.desc.name}"


#: (ascending id, descending id) pairs with a registered concretization.
REGISTERED_PAIRS = {
    ("itv", "iset"),
    ("box", "bset"),
    ("itv", "itv"),
    ("box", "box"),
    ("par", "par"),
}


class PairError(ValueError):
    pass


def make_pair(asc_id: str, desc_id: str, variables, max_disjuncts=None) -> DomainPair:
    if asc_id in POWERSET_IDS:
        raise PairError(f"{asc_id} has no widening: it can only be used in the descending phase")
    asc = make_domain(asc_id, variables)
    if (asc_id, desc_id) not in REGISTERED_PAIRS:
        known = ", ".join(f"{a}:{d}" for a, d in sorted(REGISTERED_PAIRS) if a != d)
        raise PairError(f"no concretization registered from {asc_id} to {desc_id} (known: {known})")
    if asc_id == desc_id:
        return DomainPair(asc, asc, lambda a: a)
    desc = make_domain(desc_id, variables, max_disjuncts=max_disjuncts)
    return DomainPair(asc, desc, lambda a: _singleton(a, asc))


def common_embedding(domain):
    """Map values of *domain* into the set-of-boxes domain over its variables.

    Every shipped domain except parity embeds there; parity compares only
    with itself.
    """
    if isinstance(domain, PowersetDomain):
        target = PowersetDomain(BoxDomain(domain.variables), name="bset")
        return target, lambda s: s
    if isinstance(domain, BoxDomain):
        target = PowersetDomain(BoxDomain(domain.variables), name="bset")
        return target, lambda a: _singleton(a, domain)
    if isinstance(domain, EnvDomain):
        return domain, lambda a: a
    raise DomainError(f"no comparison embedding for {domain.name}")
