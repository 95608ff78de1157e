"""A small arithmetic language in one variable ``t``.

Grammar (``^`` is right-associative, unary minus covers a whole factor so
``-t^2`` is ``-(t^2)``)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | atom ('^' factor)?
    atom   := number | 't' | '(' expr ')'
    number := digits ['.' digits] [('e' | 'E') ['+' | '-'] digits]
            | '.' digits [exponent]

Whitespace between tokens is ignored. There are no function calls.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from qfrac.jackson import Integrand

__all__ = [
    "Add",
    "Div",
    "EvaluationError",
    "Expr",
    "Mul",
    "Neg",
    "Number",
    "ParseError",
    "Pow",
    "Sub",
    "Variable",
    "evaluate",
    "parse",
    "to_integrand",
    "to_string",
]

#: the indented grammar block of the module docstring, for ``--help``
GRAMMAR = "\n".join(line for line in __doc__.splitlines() if line.startswith("    "))


class ParseError(ValueError):
    """Syntax error at byte offset ``position`` of the input."""

    def __init__(self, position: int, message: str) -> None:
        super().__init__(f"{message} at offset {position}")
        self.position = position
        self.message = message


class EvaluationError(ArithmeticError):
    """Division by zero or a non-finite intermediate value."""


# {{{ tree


@dataclass(frozen=True)
class Number:
    value: float


@dataclass(frozen=True)
class Variable:
    name: str = "t"


@dataclass(frozen=True)
class Neg:
    operand: Expr


@dataclass(frozen=True)
class Add:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow:
    base: Expr
    exponent: Expr


Expr = Union[Number, Variable, Neg, Add, Sub, Mul, Div, Pow]

_BINARY = {"+": Add, "-": Sub, "*": Mul, "/": Div}

# }}}


# {{{ tokenizer

_NUMBER = re.compile(r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")


@dataclass(frozen=True)
class _Token:
    kind: str  # "num", "t", one of "+-*/^()", or "eof"
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    try:
        text.encode("ascii")
    except UnicodeEncodeError as exc:
        raise ParseError(exc.start, "non-ASCII character") from None

    tokens = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "+-*/^()":
            tokens.append(_Token(c, c, i))
            i += 1
        elif c == "t":
            tokens.append(_Token("t", c, i))
            i += 1
        elif c.isdigit() or c == ".":
            m = _NUMBER.match(text, i)
            if m is None:
                raise ParseError(i, "malformed number")
            tokens.append(_Token("num", m.group(), i))
            i = m.end()
        else:
            raise ParseError(i, f"unexpected character {c!r}")
    tokens.append(_Token("eof", "", len(text)))
    return tokens


# }}}


# {{{ parser


class _Parser:
    def __init__(self, text: str) -> None:
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expr(self) -> Expr:
        node = self.term()
        while self.tok.kind in ("+", "-"):
            op = self.advance().kind
            node = _BINARY[op](node, self.term())
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.tok.kind in ("*", "/"):
            op = self.advance().kind
            node = _BINARY[op](node, self.factor())
        return node

    def factor(self) -> Expr:
        if self.tok.kind == "-":
            self.advance()
            return Neg(self.factor())
        base = self.atom()
        if self.tok.kind == "^":
            self.advance()
            return Pow(base, self.factor())
        return base

    def atom(self) -> Expr:
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            return Number(float(tok.text))
        if tok.kind == "t":
            self.advance()
            return Variable()
        if tok.kind == "(":
            self.advance()
            node = self.expr()
            if self.tok.kind != ")":
                raise ParseError(self.tok.pos, "expected ')'")
            self.advance()
            return node
        if tok.kind == "eof":
            raise ParseError(tok.pos, "unexpected end of input")
        raise ParseError(tok.pos, f"unexpected {tok.text!r}")


def parse(text: str) -> Expr:
    """Parse ``text`` into an expression tree, raising :class:`ParseError`."""
    p = _Parser(text)
    node = p.expr()
    if p.tok.kind != "eof":
        raise ParseError(p.tok.pos, f"unexpected {p.tok.text!r}")
    return node


# }}}


# {{{ printing

# binding strength: sums < products < unary minus < powers < atoms
_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2, Neg: 3, Pow: 4, Number: 5, Variable: 5}


def _prec(e: Expr) -> int:
    # a negative literal prints with a leading minus and binds like Neg
    if isinstance(e, Number) and math.copysign(1.0, e.value) < 0:
        return _PREC[Neg]
    return _PREC[type(e)]


def _wrap(e: Expr, min_prec: int) -> str:
    s = to_string(e)
    return f"({s})" if _prec(e) < min_prec else s


def to_string(e: Expr) -> str:
    """Canonical text of ``e`` with only the parentheses the grammar needs."""
    if isinstance(e, Number):
        return repr(e.value)
    if isinstance(e, Variable):
        return "t"
    if isinstance(e, Neg):
        return "-" + _wrap(e.operand, 3)
    if isinstance(e, Pow):
        # the base is an atom; the exponent is a factor (right-associative)
        return f"{_wrap(e.base, 5)}^{_wrap(e.exponent, 3)}"
    op = {Add: "+", Sub: "-", Mul: "*", Div: "/"}[type(e)]
    prec = _PREC[type(e)]
    # left-associative: the right operand needs strictly higher binding
    return f"{_wrap(e.left, prec)} {op} {_wrap(e.right, prec + 1)}"


# }}}


# {{{ evaluation


def _eval(e: Expr, t: np.ndarray) -> np.ndarray:
    if isinstance(e, Number):
        return np.full_like(t, e.value)
    if isinstance(e, Variable):
        return t
    if isinstance(e, Neg):
        return -_eval(e.operand, t)
    left = _eval(e.left if not isinstance(e, Pow) else e.base, t)
    right = _eval(e.right if not isinstance(e, Pow) else e.exponent, t)
    if isinstance(e, Add):
        return left + right
    if isinstance(e, Sub):
        return left - right
    if isinstance(e, Mul):
        return left * right
    if isinstance(e, Div):
        if np.any(right == 0.0):
            raise EvaluationError("division by zero")
        return left / right
    return left**right


def evaluate(e: Expr, t: float | np.ndarray) -> float | np.ndarray:
    """Value of ``e`` at ``t`` (scalar or array).

    Powers with non-integer exponents follow ``exp(r log b)`` and so need a
    positive base; any NaN or infinity raises :class:`EvaluationError`.
    """
    arr = np.asarray(t, dtype=np.float64)
    with np.errstate(all="ignore"):
        out = _eval(e, arr)
    if not np.all(np.isfinite(out)):
        raise EvaluationError(f"expression {to_string(e)!r} is not finite at the given point")
    return float(out) if out.ndim == 0 else out


def to_integrand(text: str) -> Integrand:
    """Parse ``text`` and wrap it as a vectorized :class:`Integrand`."""
    e = parse(text)
    return Integrand(lambda t: evaluate(e, t), to_string(e), True)


# }}}
