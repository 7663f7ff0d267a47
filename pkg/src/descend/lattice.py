"""Order-theoretic contract shared by every abstract domain, plus checkers
for the widening/narrowing axioms."""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from itertools import islice
from typing import Any, Hashable, Iterable

#: Descending iterations before a glb-based narrowing freezes.
DEFAULT_K = 3


class Domain(ABC):
    """An abstract domain: a lattice with widening and (optional) narrowing.

    Values are immutable and every operation is a pure function of its
    arguments, so a domain instance may be shared freely.
    """

    name: str = "?"
    #: Domains without a widening may only be used for descending.
    has_widening: bool = True
    #: Domains without a native narrowing fall back to :class:`GlbNarrowing`.
    has_narrowing: bool = False

    @abstractmethod
    def bottom(self) -> Any: ...

    @abstractmethod
    def top(self) -> Any: ...

    @abstractmethod
    def leq(self, a, b) -> bool: ...

    @abstractmethod
    def lub(self, a, b): ...

    @abstractmethod
    def glb(self, a, b): ...

    def widen(self, a, b):
        raise NotImplementedError(f"{self.name} has no widening")

    def narrow(self, a, b):
        raise NotImplementedError(f"{self.name} has no narrowing")

    def is_bottom(self, a) -> bool:
        return self.leq(a, self.bottom())

    def equal(self, a, b) -> bool:
        return self.leq(a, b) and self.leq(b, a)

    def render(self, a) -> str:
        return repr(a)

    def sort_key(self, a):
        """Key giving a deterministic, human-friendly order of values."""
        return self.render(a)


class GlbNarrowing:
    """Narrowing by glb, frozen after ``threshold_k`` applications.

    Applications are counted per *key* (typically the CFG node), so one
    instance serves a whole descending run. Once a key has used up its
    budget, ``narrow(a, b)`` returns ``a`` unchanged.
    """

    def __init__(self, domain: Domain, threshold_k: int):
        if threshold_k < 0:
            raise ValueError("threshold_k must be non-negative")
        self.domain = domain
        self.threshold_k = threshold_k
        self._used: dict[Hashable, int] = {}

    def narrow(self, a, b, key: Hashable = None):
        used = self._used.get(key, 0)
        if used >= self.threshold_k:
            return a
        self._used[key] = used + 1
        return self.domain.glb(a, b)

    def reset(self) -> None:
        self._used.clear()


class NativeNarrowing:
    def __init__(self, domain: Domain):
        self.domain = domain

    def narrow(self, a, b, key: Hashable = None):
        return self.domain.narrow(a, b)


def narrowing_for(domain: Domain, k: int, force_glb: bool = False):
    """The narrowing used by a descending run on *domain*."""
    if domain.has_narrowing and not force_glb:
        return NativeNarrowing(domain)
    return GlbNarrowing(domain, k)


@dataclass(frozen=True)
class Violation:
    a: Any
    b: Any
    result: Any
    reason: str


def check_widening_axioms(domain: Domain, samples: Iterable[tuple]) -> list[Violation]:
    """Pairs on which ``a ⊑ a∇b`` or ``b ⊑ a∇b`` fails."""
    out = []
    for a, b in samples:
        w = domain.widen(a, b)
        if not domain.leq(a, w):
            out.append(Violation(a, b, w, "first argument not below widening"))
        if not domain.leq(b, w):
            out.append(Violation(a, b, w, "second argument not below widening"))
    return out


def check_narrowing_axioms(
    domain: Domain, samples: Iterable[tuple], narrowing=None
) -> list[Violation]:
    """Pairs on which ``a ⊒ aΔb ⊒ a⊓b`` fails.

    Domains without a native narrowing are checked with a fresh glb-based
    narrowing per pair (before its threshold it is exactly the glb).
    """
    out = []
    for a, b in samples:
        op = narrowing or narrowing_for(domain, 1)
        n = op.narrow(a, b)
        if not domain.leq(n, a):
            out.append(Violation(a, b, n, "narrowing above first argument"))
        if not domain.leq(domain.glb(a, b), n):
            out.append(Violation(a, b, n, "narrowing below glb"))
    return out


def stabilizes(domain: Domain, op: str, chain: Iterable, max_steps: int = 64, narrowing=None) -> bool:
    """Whether ``x0 = a0, x(i+1) = x(i) op a(i+1)`` repeats a value within
    *max_steps* applications.

    *chain* should be ascending for ``"widen"`` and descending for
    ``"narrow"``; it may be an infinite iterator. A chain that runs out
    before stabilizing counts as a failure, since nothing was proved.
    """
    if op == "widen":
        if not domain.has_widening:
            raise ValueError(f"{domain.name} has no widening")
        step = domain.widen
    elif op == "narrow":
        nar = narrowing or narrowing_for(domain, DEFAULT_K)
        step = nar.narrow
    else:
        raise ValueError(f"unknown operator {op!r}")
    it = iter(chain)
    try:
        x = next(it)
    except StopIteration:
        return False
    for a in islice(it, max_steps):
        nxt = step(x, a)
        if domain.equal(nxt, x):
            return True
        x = nxt
    return False
