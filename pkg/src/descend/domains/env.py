"""Non-relational environments: one base value per program variable.

``BoxDomain`` (intervals) and ``ParityEnvDomain`` both smash a bottom
component into a bottom environment, so a non-bottom environment never
carries an unreachable variable.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from ..frontend.ast import Compare, Expr, Neg, Num, Var
from ..frontend.cfg import AssignT, AssumeT, HavocT, SkipT
from ..lattice import Domain
from . import interval as itv
from .interval import INF, Interval, IntervalDomain
from .parity import ParityDomain


@dataclass(frozen=True)
class Env:
    names: tuple[str, ...]
    values: Optional[tuple]  # None is the bottom environment

    @property
    def is_bottom(self) -> bool:
        return self.values is None

    def __getitem__(self, var: str):
        return self.values[self.names.index(var)]

    def items(self):
        return zip(self.names, self.values)


class EnvDomain(Domain):
    """Pointwise lifting of a scalar domain to variable environments."""

    base: Domain

    def __init__(self, variables: Sequence[str], name: str, scalar_view: bool = False):
        self.variables = tuple(variables)
        self.index = {v: i for i, v in enumerate(self.variables)}
        self.name = name
        # render a one-variable environment as its only value
        self.scalar_view = scalar_view and len(self.variables) == 1
        self.has_narrowing = self.base.has_narrowing
        self._bottom = Env(self.variables, None)
        self._top = Env(self.variables, tuple(self.base.top() for _ in self.variables))

    # -- construction -------------------------------------------------------

    def make(self, values) -> Env:
        if isinstance(values, Mapping):
            values = [values.get(v, self.base.top()) for v in self.variables]
        values = tuple(values)
        if any(self.base.is_bottom(x) for x in values):
            return self._bottom
        return Env(self.variables, values)

    def bottom(self):
        return self._bottom

    def top(self):
        return self._top

    def is_bottom(self, a):
        return a.values is None

    # -- lattice --------------------------------------------------------------

    def leq(self, a, b):
        if a.values is None:
            return True
        if b.values is None:
            return False
        return all(self.base.leq(x, y) for x, y in zip(a.values, b.values))

    def equal(self, a, b):
        return a == b

    def lub(self, a, b):
        if a.values is None:
            return b
        if b.values is None:
            return a
        return Env(self.variables, tuple(self.base.lub(x, y) for x, y in zip(a.values, b.values)))

    def glb(self, a, b):
        if a.values is None or b.values is None:
            return self._bottom
        return self.make(self.base.glb(x, y) for x, y in zip(a.values, b.values))

    def widen(self, a, b):
        if a.values is None:
            return b
        if b.values is None:
            return a
        return self.make(self.base.widen(x, y) for x, y in zip(a.values, b.values))

    def narrow(self, a, b):
        if a.values is None or b.values is None:
            return self._bottom
        return self.make(self.base.narrow(x, y) for x, y in zip(a.values, b.values))

    # -- transfer functions ------------------------------------------------

    def eval(self, env: Env, e: Expr):
        b = self.base
        if isinstance(e, Num):
            return b.const(e.value)
        if isinstance(e, Var):
            return env.values[self.index[e.name]]
        if isinstance(e, Neg):
            return b.neg(self.eval(env, e.operand))
        left, right = self.eval(env, e.left), self.eval(env, e.right)
        if e.op == "+":
            return b.add(left, right)
        if e.op == "-":
            return b.sub(left, right)
        return b.mul(left, right)

    def assign(self, env: Env, var: str, e: Expr) -> Env:
        if env.values is None:
            return env
        values = list(env.values)
        values[self.index[var]] = self.eval(env, e)
        return self.make(values)

    def havoc(self, env: Env, var: str) -> Env:
        if env.values is None:
            return env
        values = list(env.values)
        values[self.index[var]] = self.base.top()
        return Env(self.variables, tuple(values))

    def assume(self, env: Env, cond: Compare) -> Env:
        return env

    def transfer(self, t, env):
        if isinstance(t, AssignT):
            return self.assign(env, t.var, t.expr)
        if isinstance(t, AssumeT):
            return self.assume(env, t.cond)
        if isinstance(t, HavocT):
            return self.havoc(env, t.var)
        if isinstance(t, SkipT):
            return env
        raise TypeError(t)

    # -- concretization ------------------------------------------------------

    def covers(self, env: Env, state: Sequence, bound: int) -> bool:
        """Whether *state* lies in the concretization of *env*.

        ``None`` in *state* stands for every integer in ``[-bound, bound]``.
        """
        if env.values is None:
            return False
        for x, n in zip(env.values, state):
            if n is None:
                if not self._covers_range(x, bound):
                    return False
            elif not self.base.contains(x, n):
                return False
        return True

    def _covers_range(self, x, bound: int) -> bool:
        raise NotImplementedError

    # -- rendering -----------------------------------------------------------

    def render(self, a) -> str:
        if a.values is None:
            return "bot"
        if self.scalar_view:
            return self.base.render(a.values[0])
        return ", ".join(self.render_binding(v, x) for v, x in sorted(a.items()))

    def render_binding(self, var, x) -> str:
        return f"{var}: {self.base.render(x)}"

    def sort_key(self, a):
        return tuple(self.base.render(x) for x in a.values) if a.values else ()

    def sample(self, rng: random.Random) -> Env:
        if rng.random() < 0.05:
            return self._bottom
        return self.make(self.base.sample(rng) for _ in self.variables)


class ParityEnvDomain(EnvDomain):
    base = ParityDomain()

    def __init__(self, variables, name="par", scalar_view=True):
        super().__init__(variables, name, scalar_view)

    def _covers_range(self, x, bound):
        return self.base.leq(self.base.top(), x)


class BoxDomain(EnvDomain):
    base = IntervalDomain()

    def __init__(self, variables, name="box", scalar_view=False):
        super().__init__(variables, name, scalar_view)

    def render_binding(self, var, x) -> str:
        return f"{var} in {x}"

    def sort_key(self, a):
        return tuple((x.lo, x.hi) for x in a.values) if a.values else ()

    def _covers_range(self, x, bound):
        return x.lo <= -bound and bound <= x.hi

    def assume(self, env: Env, cond: Compare) -> Env:
        """Refine *env* by *cond*.

        Each side is constrained by the half-line (or point) the comparison
        implies given the other side's range, then pushed backwards through
        ``+``, ``-`` and unary minus down to the variables. Products are not
        inverted.
        """
        if env.values is None:
            return env
        values = list(env.values)
        left = self.eval(env, cond.left)
        right = self.eval(env, cond.right)
        op = cond.op
        if op == "!=":
            return self._assume_ne(env, values, cond, left, right)
        if not self._refine(values, cond.left, _implied(op, right)):
            return self._bottom
        right = self.eval(Env(self.variables, tuple(values)), cond.right)
        left = self.eval(Env(self.variables, tuple(values)), cond.left)
        if not self._refine(values, cond.right, _implied(_FLIP[op], left)):
            return self._bottom
        return self.make(values)

    def _assume_ne(self, env, values, cond, left, right):
        if left.is_singleton and right.is_singleton:
            return self._bottom if left == right else env
        for side, other in ((cond.left, right), (cond.right, left)):
            if isinstance(side, Var) and other.is_singleton:
                i = self.index[side.name]
                x, c = values[i], other.lo
                if x.lo == c:
                    values[i] = Interval.of(c + 1, x.hi)
                elif x.hi == c:
                    values[i] = Interval.of(x.lo, c - 1)
        return self.make(values)

    def _refine(self, values: list, e: Expr, target: Interval) -> bool:
        """Constrain *e* to *target*, narrowing variables in place.

        Returns False when the constraint is unsatisfiable.
        """
        cur = self.eval(Env(self.variables, tuple(values)), e)
        if cur.is_bottom:
            return False
        target = itv.glb(cur, target)
        if target.is_bottom:
            return False
        if isinstance(e, Var):
            values[self.index[e.name]] = target
            return True
        if isinstance(e, Num):
            return True
        if isinstance(e, Neg):
            return self._refine(values, e.operand, itv.neg(target))
        if e.op == "*":
            return True
        env = Env(self.variables, tuple(values))
        lv, rv = self.eval(env, e.left), self.eval(env, e.right)
        if e.op == "+":
            if not self._refine(values, e.left, itv.sub(target, rv)):
                return False
            lv = self.eval(Env(self.variables, tuple(values)), e.left)
            return self._refine(values, e.right, itv.sub(target, lv))
        # e.op == "-": left - right ∈ target
        if not self._refine(values, e.left, itv.add(target, rv)):
            return False
        lv = self.eval(Env(self.variables, tuple(values)), e.left)
        return self._refine(values, e.right, itv.sub(lv, target))


_FLIP = {"<": ">", "<=": ">=", ">": "<", ">=": "<=", "==": "=="}


def _implied(op: str, other: Interval) -> Interval:
    """Values ``v`` may take so that ``v op w`` holds for some ``w`` in *other*."""
    if other.is_bottom:
        return itv.BOTTOM
    if op == "<":
        return Interval.of(-INF, other.hi - 1)
    if op == "<=":
        return Interval.of(-INF, other.hi)
    if op == ">":
        return Interval.of(other.lo + 1, INF)
    if op == ">=":
        return Interval.of(other.lo, INF)
    return other  # ==
