"""Expression trees and a recursive-descent parser for polynomial text.

Grammar (whitespace-insensitive, no implicit multiplication)::

    poly     := term (('+' | '-') term)*
    term     := ['-'] factor ('*' factor)*
    factor   := base ('^' uint)?
    base     := var | rational | '(' poly ')'
    rational := int ('/' uint)?
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import ParseError


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class Sum:
    # (sign, node) pairs, sign is +1 or -1
    terms: tuple


@dataclass(frozen=True)
class Product:
    factors: tuple


@dataclass(frozen=True)
class Power:
    base: "Node"
    exp: int


Node = Union[Num, Var, Neg, Sum, Product, Power]

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))")


class _Parser:
    def __init__(self, text: str, line: int = 0, col0: int = 0):
        self.text = text
        self.line = line
        self.col0 = col0
        self.tokens = self._tokenize(text)
        self.i = 0

    def _tokenize(self, text):
        toks = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m:
                col = pos + len(text[pos:]) - len(text[pos:].lstrip())
                raise ParseError(f"unexpected character {text[col]!r}", self.line, self.col0 + col + 1)
            kind = m.lastgroup
            start = m.start(kind)
            toks.append((kind, m.group(kind), self.col0 + start + 1))
            pos = m.end()
        toks.append(("end", "", self.col0 + len(text) + 1))
        return toks

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.line, tok[2])

    def expect_op(self, op):
        tok = self.take()
        if tok[0] != "op" or tok[1] != op:
            self.fail(f"expected {op!r}", tok)

    def parse(self) -> Node:
        node = self.poly()
        if self.peek()[0] != "end":
            tok = self.peek()
            if tok[0] in ("name", "int") or tok[1] == "(":
                self.fail("implicit multiplication is not allowed; use '*'")
            self.fail(f"unexpected {tok[1]!r}")
        return node

    def poly(self) -> Node:
        terms = [(1, self.term())]
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            sign = 1 if self.take()[1] == "+" else -1
            terms.append((sign, self.term()))
        if len(terms) == 1:
            return terms[0][1]
        return Sum(tuple(terms))

    def term(self) -> Node:
        negate = False
        if self.peek()[0] == "op" and self.peek()[1] == "-":
            self.take()
            negate = True
        factors = [self.factor()]
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            factors.append(self.factor())
        node = factors[0] if len(factors) == 1 else Product(tuple(factors))
        return Neg(node) if negate else node

    def factor(self) -> Node:
        base = self.base()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            tok = self.take()
            if tok[0] != "int":
                self.fail("exponent must be a nonnegative integer literal", tok)
            return Power(base, int(tok[1]))
        return base

    def base(self) -> Node:
        tok = self.take()
        kind, text = tok[0], tok[1]
        if kind == "name":
            return Var(text)
        if kind == "int":
            value = int(text)
            if self.peek()[0] == "op" and self.peek()[1] == "/":
                self.take()
                den = self.take()
                if den[0] != "int":
                    self.fail("denominator must be an integer literal", den)
                if int(den[1]) == 0:
                    self.fail("zero denominator", den)
                return Num(Fraction(value, int(den[1])))
            return Num(Fraction(value))
        if kind == "op" and text == "(":
            node = self.poly()
            self.expect_op(")")
            return node
        if kind == "end":
            self.fail("unexpected end of input", tok)
        self.fail(f"unexpected {text!r}", tok)


def parse_poly(text: str, line: int = 0, column: int = 0) -> Node:
    """Parse polynomial text into an expression tree.

    ``line``/``column`` only offset the positions reported in ``ParseError``.
    """
    return _Parser(text, line, column).parse()


def variables(node: Node) -> set:
    if isinstance(node, Var):
        return {node.name}
    if isinstance(node, Num):
        return set()
    if isinstance(node, Neg):
        return variables(node.arg)
    if isinstance(node, Power):
        return variables(node.base)
    if isinstance(node, Sum):
        return set().union(*(variables(t) for _, t in node.terms))
    return set().union(*(variables(f) for f in node.factors))
