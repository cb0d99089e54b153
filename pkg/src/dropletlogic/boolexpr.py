"""Boolean expressions over named inputs.

Grammar used by expected-function declarations and CLI flags: identifiers,
`*` for AND, `+` for OR, `^` for XOR, and parentheses. Binding strength is
`*` over `^` over `+`, all left-associative. str() of an expression is the
canonical spelling (no whitespace, minimal parentheses) and reparses to an
equal tree.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

__all__ = [
    "ExpressionError",
    "BoolExpr",
    "Var",
    "And",
    "Xor",
    "Or",
    "parse_expression",
    "expression_variables",
]


class ExpressionError(ValueError):
    """Malformed expression; column is 1-based within the expression text."""

    def __init__(self, message: str, column: int):
        self.column = column
        super().__init__(message)


@dataclass(frozen=True)
class Var:
    name: str

    def evaluate(self, env: dict[str, bool]) -> bool:
        if self.name not in env:
            raise KeyError(self.name)
        return bool(env[self.name])

    @property
    def precedence(self) -> int:
        return 4

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class _BinOp:
    left: "BoolExpr"
    right: "BoolExpr"

    _symbol = "?"
    _prec = 0

    def _apply(self, a: bool, b: bool) -> bool:
        raise NotImplementedError

    def evaluate(self, env: dict[str, bool]) -> bool:
        return self._apply(self.left.evaluate(env), self.right.evaluate(env))

    @property
    def precedence(self) -> int:
        return self._prec

    def __str__(self) -> str:
        left = str(self.left)
        if self.left.precedence < self._prec:
            left = f"({left})"
        right = str(self.right)
        if self.right.precedence <= self._prec:
            right = f"({right})"
        return f"{left}{self._symbol}{right}"


class And(_BinOp):
    _symbol = "*"
    _prec = 3

    def _apply(self, a: bool, b: bool) -> bool:
        return a and b


class Xor(_BinOp):
    _symbol = "^"
    _prec = 2

    def _apply(self, a: bool, b: bool) -> bool:
        return a != b


class Or(_BinOp):
    _symbol = "+"
    _prec = 1

    def _apply(self, a: bool, b: bool) -> bool:
        return a or b


BoolExpr = Var | And | Xor | Or

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens: list[tuple[str, int]] = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _IDENT.match(text, pos)
        if m:
            tokens.append((m.group(0), pos + 1))
            pos = m.end()
        elif text[pos] in "*^+()":
            tokens.append((text[pos], pos + 1))
            pos += 1
        else:
            raise ExpressionError(f"unexpected character {text[pos]!r}", pos + 1)
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def _peek(self) -> str | None:
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def _column(self) -> int:
        if self.pos < len(self.tokens):
            return self.tokens[self.pos][1]
        return len(self.text) + 1

    def _advance(self) -> str:
        tok = self.tokens[self.pos][0]
        self.pos += 1
        return tok

    def parse(self) -> BoolExpr:
        if not self.tokens:
            raise ExpressionError("empty expression", 1)
        expr = self._or_expr()
        if self.pos < len(self.tokens):
            raise ExpressionError(
                f"unexpected token {self._peek()!r}", self._column()
            )
        return expr

    def _or_expr(self) -> BoolExpr:
        node = self._xor_expr()
        while self._peek() == "+":
            self._advance()
            node = Or(node, self._xor_expr())
        return node

    def _xor_expr(self) -> BoolExpr:
        node = self._and_expr()
        while self._peek() == "^":
            self._advance()
            node = Xor(node, self._and_expr())
        return node

    def _and_expr(self) -> BoolExpr:
        node = self._factor()
        while self._peek() == "*":
            self._advance()
            node = And(node, self._factor())
        return node

    def _factor(self) -> BoolExpr:
        tok = self._peek()
        if tok is None:
            raise ExpressionError("expression ends unexpectedly", self._column())
        if tok == "(":
            self._advance()
            node = self._or_expr()
            if self._peek() != ")":
                raise ExpressionError("missing closing parenthesis", self._column())
            self._advance()
            return node
        if tok in ("*", "^", "+", ")"):
            raise ExpressionError(f"unexpected token {tok!r}", self._column())
        self._advance()
        return Var(tok)


def parse_expression(text: str) -> BoolExpr:
    """Parse an expression; raises ExpressionError with a 1-based column."""
    return _Parser(text).parse()


def expression_variables(expr: BoolExpr) -> frozenset[str]:
    """Every variable name appearing in the expression."""
    if isinstance(expr, Var):
        return frozenset((expr.name,))
    return expression_variables(expr.left) | expression_variables(expr.right)
