"""Bounded collecting semantics: every reachable state at every CFG node.

All variables are confined to ``[-bound, bound]``; successors leaving that
box are dropped, so the result under-approximates the real reachable set.
A variable with no known value (at entry, or after ``havoc``) is kept as
the marker ``ANY`` and expanded only when an expression reads it.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import Optional

from .frontend.ast import Compare, Neg, Num, Var, cond_vars, expr_vars
from .frontend.cfg import AssignT, AssumeT, Cfg, HavocT

ANY = None
DEFAULT_BOUND = 128
DEFAULT_CAP = 10**6


class OracleInfeasible(RuntimeError):
    """The bounded state space is larger than the configured cap."""


def evaluate(e, env: dict) -> int:
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        return env[e.name]
    if isinstance(e, Neg):
        return -evaluate(e.operand, env)
    a, b = evaluate(e.left, env), evaluate(e.right, env)
    if e.op == "+":
        return a + b
    if e.op == "-":
        return a - b
    return a * b


_TESTS = {
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
    "==": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
}


def holds(c: Compare, env: dict) -> bool:
    return _TESTS[c.op](evaluate(c.left, env), evaluate(c.right, env))


@dataclass
class ConcreteStates:
    """Reachable states per node; a state is a tuple aligned with ``variables``
    whose entries are ints or ``ANY``."""

    variables: tuple
    bound: int
    states: dict

    def at(self, node: int) -> set:
        return self.states[node]

    def project(self, node: int, names) -> set:
        idx = [self.variables.index(v) for v in names]
        return {tuple(s[i] for i in idx) for s in self.states[node]}

    def total(self) -> int:
        return sum(len(s) for s in self.states.values())


def _expand(state: tuple, reads, index, bound):
    """All concrete instantiations of the ``ANY`` variables in *reads*."""
    free = [index[v] for v in sorted(reads) if state[index[v]] is ANY]
    if not free:
        yield state
        return
    for values in product(range(-bound, bound + 1), repeat=len(free)):
        s = list(state)
        for i, n in zip(free, values):
            s[i] = n
        yield tuple(s)


def successors(t, state: tuple, variables: tuple, index: dict, bound: int):
    if isinstance(t, HavocT):
        s = list(state)
        s[index[t.var]] = ANY
        yield tuple(s)
        return
    if isinstance(t, AssignT):
        for s in _expand(state, expr_vars(t.expr), index, bound):
            v = evaluate(t.expr, dict(zip(variables, s)))
            if -bound <= v <= bound:
                s = list(s)
                s[index[t.var]] = v
                yield tuple(s)
        return
    if isinstance(t, AssumeT):
        for s in _expand(state, cond_vars(t.cond), index, bound):
            if holds(t.cond, dict(zip(variables, s))):
                yield s
        return
    yield state


def collect(cfg: Cfg, bound: int = DEFAULT_BOUND, cap: int = DEFAULT_CAP) -> ConcreteStates:
    """Least fixpoint of the bounded transition system, by worklist."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    variables = cfg.variables
    index = {v: i for i, v in enumerate(variables)}
    states = {n: set() for n in cfg.nodes}
    init = tuple(ANY for _ in variables)
    states[cfg.entry].add(init)
    work = deque([(cfg.entry, init)])
    count = 1
    while work:
        node, s = work.popleft()
        for e in cfg.succs[node]:
            for nxt in successors(e.transfer, s, variables, index, bound):
                bucket = states[e.dst]
                if nxt not in bucket:
                    bucket.add(nxt)
                    count += 1
                    if count > cap:
                        raise OracleInfeasible(
                            f"more than {cap} states within bound {bound}"
                        )
                    work.append((e.dst, nxt))
    return ConcreteStates(variables, bound, states)


@dataclass(frozen=True)
class SoundnessViolation:
    node: int
    state: tuple
    value: str

    def __str__(self):
        shown = ", ".join("*" if n is ANY else str(n) for n in self.state)
        return f"x{self.node}: state ({shown}) escapes {self.value}"


def check_soundness(final: dict, domain, concrete: ConcreteStates, limit: Optional[int] = None) -> list:
    """Every (node, state) whose state lies outside the abstract value."""
    out = []
    for node, bucket in concrete.states.items():
        value = final[node]
        for s in sorted(bucket, key=_state_key):
            if not domain.covers(value, s, concrete.bound):
                out.append(SoundnessViolation(node, s, domain.render(value)))
                if limit is not None and len(out) >= limit:
                    return out
    return out


def _state_key(s):
    return tuple((0, 0) if n is ANY else (1, n) for n in s)
