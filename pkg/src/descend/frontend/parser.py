"""Lexer and recursive-descent parser for the ``.mini`` language.

The surface syntax is a small C subset: ``int`` declarations (with optional
initializers, hoisted to program scope), assignments including ``+=``/``-=``/
``*=`` and ``++``/``--``, ``if``/``else``, ``while``, ``for``, ``havoc x;``
and ``skip;``. Conditions are a single comparison between expressions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .ast import (
    RELOPS,
    Assign,
    BinOp,
    Compare,
    Havoc,
    If,
    Neg,
    Num,
    Pos,
    Program,
    Skip,
    Var,
    While,
)


class ParseError(Exception):
    """A diagnostic tied to a source position."""

    kind = "error"

    def __init__(self, message: str, line: int, col: int):
        super().__init__(message)
        self.message = message
        self.line = line
        self.col = col

    def format(self, filename: str = "<input>") -> str:
        return f"{filename}:{self.line}:{self.col}: {self.kind}: {self.message}"


class LexicalError(ParseError):
    kind = "lexical error"


class GrammarError(ParseError):
    kind = "syntax error"


class UndeclaredVariableError(ParseError):
    kind = "undeclared variable"


class NonIntegerError(ParseError):
    kind = "non-integer construct"


KEYWORDS = {"int", "if", "else", "while", "for", "havoc", "skip"}
NON_INTEGER_TYPES = {"float", "double", "char", "bool", "long", "unsigned", "void"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>//[^\n]*)
  | (?P<block>/\*(?:.|\n)*?\*/)
  | (?P<open>/\*)
  | (?P<float>\d+\.\d*|\.\d+)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>\+\+|--|\+=|-=|\*=|==|!=|<=|>=|[-+*/%=<>(){};,])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # num, ident, kw, op, eof
    text: str
    line: int
    col: int

    @property
    def pos(self) -> Pos:
        return Pos(self.line, self.col)


def tokenize(source: str) -> list[Token]:
    tokens = []
    line, line_start, i = 1, 0, 0
    while i < len(source):
        m = _TOKEN_RE.match(source, i)
        col = i - line_start + 1
        if m is None:
            raise LexicalError(f"unexpected character {source[i]!r}", line, col)
        kind = m.lastgroup
        text = m.group()
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "block":
            nls = text.count("\n")
            if nls:
                line += nls
                line_start = i + text.rindex("\n") + 1
        elif kind == "open":
            raise LexicalError("unterminated comment", line, col)
        elif kind == "float":
            raise NonIntegerError(f"floating-point literal {text!r}", line, col)
        elif kind == "num":
            tokens.append(Token("num", text, line, col))
        elif kind == "ident":
            if text in NON_INTEGER_TYPES:
                raise NonIntegerError(f"type {text!r} is not supported", line, col)
            tokens.append(Token("kw" if text in KEYWORDS else "ident", text, line, col))
        elif kind == "op":
            tokens.append(Token("op", text, line, col))
        i = m.end()
    tokens.append(Token("eof", "", line, i - line_start + 1))
    return tokens


class Parser:
    def __init__(self, source: str):
        self.tokens = tokenize(source)
        self.i = 0
        self.declared: list[str] = []

    # -- token helpers ------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("op", "kw") and t.text == text

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}")
        return self.advance()

    def expect_ident(self) -> Token:
        if self.tok.kind != "ident":
            self.fail("expected identifier")
        return self.advance()

    def fail(self, message: str):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise GrammarError(f"{message}, found {found}", t.line, t.col)

    def use(self, t: Token) -> str:
        if t.text not in self.declared:
            raise UndeclaredVariableError(f"{t.text!r} is not declared", t.line, t.col)
        return t.text

    # -- grammar -------------------------------------------------------------

    def program(self) -> Program:
        body = []
        while self.tok.kind != "eof":
            body.extend(self.item())
        return Program(tuple(self.declared), tuple(body))

    def item(self) -> list:
        if self.at("int"):
            stmts = self.declaration()
            self.expect(";")
            return stmts
        return self.statement()

    def declaration(self) -> list:
        self.expect("int")
        stmts = []
        while True:
            t = self.expect_ident()
            if t.text in self.declared:
                raise GrammarError(f"{t.text!r} is already declared", t.line, t.col)
            if self.at("="):
                self.advance()
                expr = self.expr()
                self.declared.append(t.text)
                stmts.append(Assign(t.text, expr, t.pos))
            else:
                self.declared.append(t.text)
            if not self.at(","):
                return stmts
            self.advance()

    def block(self) -> list:
        self.expect("{")
        stmts = []
        while not self.at("}"):
            if self.tok.kind == "eof":
                self.fail("expected '}'")
            stmts.extend(self.item())
        self.advance()
        return stmts

    def statement(self) -> list:
        t = self.tok
        if self.at("{"):
            return self.block()
        if self.at(";"):
            self.advance()
            return []
        if self.at("skip"):
            self.advance()
            self.expect(";")
            return [Skip(t.pos)]
        if self.at("havoc"):
            self.advance()
            var = self.use(self.expect_ident())
            self.expect(";")
            return [Havoc(var, t.pos)]
        if self.at("if"):
            self.advance()
            cond = self.paren_cond()
            then = self.statement()
            orelse = []
            if self.at("else"):
                self.advance()
                orelse = self.statement()
            return [If(cond, tuple(then), tuple(orelse), t.pos)]
        if self.at("while"):
            self.advance()
            cond = self.paren_cond()
            body = self.statement()
            return [While(cond, tuple(body), t.pos)]
        if self.at("for"):
            return self.for_loop()
        if self.at("int"):
            self.fail("declaration not allowed here")
        stmts = self.simple()
        self.expect(";")
        return stmts

    def for_loop(self) -> list:
        t = self.expect("for")
        self.expect("(")
        init = []
        if self.at("int"):
            init = self.declaration()
        elif not self.at(";"):
            init = self.simple()
        self.expect(";")
        cond = self.cond()
        self.expect(";")
        step = [] if self.at(")") else self.simple()
        self.expect(")")
        body = self.statement()
        return init + [While(cond, tuple(body) + tuple(step), t.pos)]

    def simple(self) -> list:
        t = self.tok
        if self.at("++") or self.at("--"):
            op = self.advance().text
            v = self.expect_ident()
            return [self._bump(v, op)]
        v = self.expect_ident()
        name = self.use(v)
        if self.at("++") or self.at("--"):
            return [self._bump(v, self.advance().text)]
        if self.at("="):
            self.advance()
            return [Assign(name, self.expr(), v.pos)]
        for compound in ("+=", "-=", "*="):
            if self.at(compound):
                self.advance()
                rhs = self.expr()
                return [Assign(name, BinOp(compound[0], Var(name, v.pos), rhs, v.pos), v.pos)]
        if t.kind == "ident":
            self.fail("expected assignment")
        self.fail("expected statement")  # pragma: no cover

    def _bump(self, v: Token, op: str) -> Assign:
        name = self.use(v)
        return Assign(name, BinOp(op[0], Var(name, v.pos), Num(1, v.pos), v.pos), v.pos)

    def paren_cond(self) -> Compare:
        self.expect("(")
        c = self.cond()
        self.expect(")")
        return c

    def cond(self) -> Compare:
        t = self.tok
        left = self.expr()
        if not (self.tok.kind == "op" and self.tok.text in RELOPS):
            self.fail("expected comparison operator")
        op = self.advance().text
        right = self.expr()
        return Compare(op, left, right, t.pos)

    def expr(self):
        e = self.term()
        while self.at("+") or self.at("-"):
            t = self.advance()
            e = BinOp(t.text, e, self.term(), t.pos)
        return e

    def term(self):
        e = self.factor()
        while self.at("*") or self.at("/") or self.at("%"):
            t = self.advance()
            if t.text != "*":
                raise GrammarError(f"operator {t.text!r} is not supported", t.line, t.col)
            e = BinOp("*", e, self.factor(), t.pos)
        return e

    def factor(self):
        t = self.tok
        if self.at("-"):
            self.advance()
            if self.tok.kind == "num":
                return Num(-int(self.advance().text), t.pos)
            return Neg(self.factor(), t.pos)
        if self.at("+"):
            self.advance()
            return self.factor()
        if t.kind == "num":
            self.advance()
            return Num(int(t.text), t.pos)
        if t.kind == "ident":
            self.advance()
            return Var(self.use(t), t.pos)
        if self.at("("):
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        self.fail("expected expression")


def parse(source: str) -> Program:
    """Parse *source* into a :class:`Program`, raising :class:`ParseError`."""
    return Parser(source).program()
