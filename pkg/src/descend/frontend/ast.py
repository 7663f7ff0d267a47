"""Syntax tree of the mini-language.

Positions are carried for diagnostics but excluded from equality, so two
trees parsed from differently formatted sources compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Tuple, Union

RELOPS = ("<", "<=", ">", ">=", "==", "!=")

NEGATED = {"<": ">=", "<=": ">", ">": "<=", ">=": "<", "==": "!=", "!=": "=="}
FLIPPED = {"<": ">", "<=": ">=", ">": "<", ">=": "<=", "==": "==", "!=": "!="}


@dataclass(frozen=True)
class Pos:
    line: int
    col: int


def _pos() -> Pos | None:
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Num:
    value: int
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class Var:
    name: str
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class Neg:
    operand: "Expr"
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - *
    left: "Expr"
    right: "Expr"
    pos: Pos | None = _pos()


Expr = Union[Num, Var, Neg, BinOp]


@dataclass(frozen=True)
class Compare:
    op: str
    left: Expr
    right: Expr
    pos: Pos | None = _pos()

    def negate(self) -> "Compare":
        return Compare(NEGATED[self.op], self.left, self.right, self.pos)


@dataclass(frozen=True)
class Assign:
    var: str
    expr: Expr
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class Havoc:
    var: str
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class Skip:
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class If:
    cond: Compare
    then: Tuple["Stmt", ...]
    orelse: Tuple["Stmt", ...]
    pos: Pos | None = _pos()


@dataclass(frozen=True)
class While:
    cond: Compare
    body: Tuple["Stmt", ...]
    pos: Pos | None = _pos()


Stmt = Union[Assign, Havoc, Skip, If, While]


@dataclass(frozen=True)
class Program:
    variables: Tuple[str, ...]
    body: Tuple[Stmt, ...]


def expr_vars(e: Expr) -> set[str]:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Num):
        return set()
    if isinstance(e, Neg):
        return expr_vars(e.operand)
    return expr_vars(e.left) | expr_vars(e.right)


def cond_vars(c: Compare) -> set[str]:
    return expr_vars(c.left) | expr_vars(c.right)


# ---------------------------------------------------------------------------
# Rendering back to source

_PREC = {"+": 1, "-": 1, "*": 2}


def render_expr(e: Expr, prec: int = 0) -> str:
    if isinstance(e, Num):
        return str(e.value) if e.value >= 0 or prec == 0 else f"({e.value})"
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        if isinstance(e.operand, (Num, Neg)):
            # "-5" would reparse as a literal and "--x" as a decrement
            return f"-({render_expr(e.operand)})"
        return f"-{render_expr(e.operand, 3)}"
    p = _PREC[e.op]
    # left-associative: the right operand needs parens at equal precedence
    text = f"{render_expr(e.left, p)} {e.op} {render_expr(e.right, p + 1)}"
    return f"({text})" if p < prec else text


def render_cond(c: Compare) -> str:
    return f"{render_expr(c.left)} {c.op} {render_expr(c.right)}"


def render_program(p: Program) -> str:
    lines = []
    if p.variables:
        lines.append(f"int {', '.join(p.variables)};")
    _render_block(p.body, 0, lines)
    return "\n".join(lines) + "\n"


def _render_block(stmts, depth, lines):
    ind = "    " * depth
    for s in stmts:
        if isinstance(s, Assign):
            lines.append(f"{ind}{s.var} = {render_expr(s.expr)};")
        elif isinstance(s, Havoc):
            lines.append(f"{ind}havoc {s.var};")
        elif isinstance(s, Skip):
            lines.append(f"{ind}skip;")
        elif isinstance(s, If):
            lines.append(f"{ind}if ({render_cond(s.cond)}) {{")
            _render_block(s.then, depth + 1, lines)
            if s.orelse:
                lines.append(f"{ind}}} else {{")
                _render_block(s.orelse, depth + 1, lines)
            lines.append(f"{ind}}}")
        elif isinstance(s, While):
            lines.append(f"{ind}while ({render_cond(s.cond)}) {{")
            _render_block(s.body, depth + 1, lines)
            lines.append(f"{ind}}}")
        else:  # pragma: no cover
            raise TypeError(s)
