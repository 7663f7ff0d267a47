"""Control-flow graph construction and widening-point selection."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Union

from .ast import Assign, Compare, Havoc, If, Program, Skip, While, render_cond, render_expr


@dataclass(frozen=True)
class AssignT:
    var: str
    expr: object

    def label(self) -> str:
        return f"{self.var} = {render_expr(self.expr)}"


@dataclass(frozen=True)
class HavocT:
    var: str

    def label(self) -> str:
        return f"havoc {self.var}"


@dataclass(frozen=True)
class AssumeT:
    cond: Compare

    def label(self) -> str:
        return f"assume {render_cond(self.cond)}"


@dataclass(frozen=True)
class SkipT:
    def label(self) -> str:
        return "skip"


Transfer = Union[AssignT, HavocT, AssumeT, SkipT]


@dataclass(frozen=True)
class Edge:
    src: int
    dst: int
    transfer: Transfer


@dataclass(frozen=True, order=True)
class Loop:
    head: int
    body: int  # first node inside the loop, target of the guard edge


@dataclass
class Cfg:
    """Nodes are ``1..n`` in reverse postorder from the entry."""

    variables: tuple[str, ...]
    nodes: list[int]
    edges: list[Edge]
    entry: int
    exit: int
    loops: list[Loop] = field(default_factory=list)

    def __post_init__(self):
        self.preds: dict[int, list[Edge]] = {n: [] for n in self.nodes}
        self.succs: dict[int, list[Edge]] = {n: [] for n in self.nodes}
        for e in self.edges:
            self.preds[e.dst].append(e)
            self.succs[e.src].append(e)

    def label(self, node: int) -> str:
        return f"x{node}"

    def to_dot(self, wp: Iterable[int] = ()) -> str:
        wp = set(wp)
        out = ["digraph cfg {", "  node [shape=circle];"]
        for n in self.nodes:
            attrs = [f'label="{self.label(n)}"']
            if n in wp:
                attrs.append("shape=doublecircle")
            out.append(f"  n{n} [{', '.join(attrs)}];")
        for e in self.edges:
            text = e.transfer.label().replace('"', '\\"')
            out.append(f'  n{e.src} -> n{e.dst} [label="{text}"];')
        out.append("}")
        return "\n".join(out) + "\n"


class _Builder:
    def __init__(self):
        self.count = 0
        self.edges: list[Edge] = []
        self.loops: list[Loop] = []
        self.entry = self.new()

    def new(self) -> int:
        self.count += 1
        return self.count

    def edge(self, src, dst, t):
        self.edges.append(Edge(src, dst, t))

    def seq(self, stmts, entry: int, target: int | None = None) -> int:
        """Thread *stmts* from *entry*; end at *target* (fresh when None)."""
        if not stmts:
            if target is None:
                return entry
            self.edge(entry, target, SkipT())
            return target
        cur = entry
        for i, s in enumerate(stmts):
            last = i == len(stmts) - 1
            cur = self.stmt(s, cur, target if last else None)
        return cur

    def stmt(self, s, entry: int, target: int | None) -> int:
        if isinstance(s, (Assign, Havoc, Skip)):
            dst = self.new() if target is None else target
            if isinstance(s, Assign):
                t = AssignT(s.var, s.expr)
            elif isinstance(s, Havoc):
                t = HavocT(s.var)
            else:
                t = SkipT()
            self.edge(entry, dst, t)
            return dst
        if isinstance(s, If):
            branches = []
            for cond, block in ((s.cond, s.then), (s.cond.negate(), s.orelse)):
                node = self.new() if block else None
                branches.append((cond, block, node))
            join = self.new() if target is None else target
            for cond, block, node in branches:
                self.edge(entry, node if block else join, AssumeT(cond))
            for _, block, node in branches:
                if block:
                    self.seq(block, node, join)
            return join
        if isinstance(s, While):
            head = entry
            if entry == self.entry:
                # the program entry must keep no predecessors
                head = self.new()
                self.edge(entry, head, SkipT())
            body = self.new()
            self.edge(head, body, AssumeT(s.cond))
            out = self.new() if target is None else target
            self.edge(head, out, AssumeT(s.cond.negate()))
            self.loops.append(Loop(head, body))
            self.seq(s.body, body, head)
            return out
        raise TypeError(f"unknown statement {s!r}")


def build_cfg(program: Program) -> Cfg:
    """Build the CFG of *program*.

    Straight-line statements become edges; ``while`` reuses the node it is
    entered from as its head; an ``if`` at the end of a loop body joins
    directly into the loop head.
    """
    b = _Builder()
    exit_ = b.seq(list(program.body), b.entry)

    succs: dict[int, list[int]] = {}
    for e in b.edges:
        succs.setdefault(e.src, []).append(e.dst)
    # DFS visiting later-created successors first, so that in reverse
    # postorder earlier source positions get smaller numbers
    order: list[int] = []
    seen = {b.entry}
    stack = [(b.entry, iter(reversed(succs.get(b.entry, []))))]
    while stack:
        node, it = stack[-1]
        for nxt in it:
            if nxt not in seen:
                seen.add(nxt)
                stack.append((nxt, iter(reversed(succs.get(nxt, [])))))
                break
        else:
            stack.pop()
            order.append(node)
    order.reverse()
    renum = {old: new for new, old in enumerate(order, start=1)}

    edges = [Edge(renum[e.src], renum[e.dst], e.transfer) for e in b.edges]
    edges.sort(key=lambda e: (e.src, e.dst))
    loops = sorted(Loop(renum[lp.head], renum[lp.body]) for lp in b.loops)
    return Cfg(
        variables=tuple(program.variables),
        nodes=list(range(1, len(order) + 1)),
        edges=edges,
        entry=renum[b.entry],
        exit=renum[exit_],
        loops=loops,
    )


def back_edges(cfg: Cfg) -> list[Edge]:
    """Edges closing a cycle in a depth-first search from the entry."""
    state: dict[int, int] = {}  # 1 = on stack, 2 = done
    result = []
    stack = [(cfg.entry, iter(cfg.succs[cfg.entry]))]
    state[cfg.entry] = 1
    while stack:
        node, it = stack[-1]
        for e in it:
            s = state.get(e.dst)
            if s == 1:
                result.append(e)
            elif s is None:
                state[e.dst] = 1
                stack.append((e.dst, iter(cfg.succs[e.dst])))
                break
        else:
            state[node] = 2
            stack.pop()
    return result


def select_widening_points(cfg: Cfg, strategy: str = "body") -> frozenset[int]:
    """Pick one node per CFG cycle.

    ``body`` (the default) takes the first node inside every loop body, the
    position where the widening point sits in the worked examples. ``head``
    takes the targets of depth-first back edges, i.e. the loop-join nodes.
    Both cut every cycle.
    """
    if strategy == "body":
        return frozenset(lp.body for lp in cfg.loops)
    if strategy == "head":
        return frozenset(e.dst for e in back_edges(cfg))
    raise ValueError(f"unknown widening-point strategy {strategy!r}")
