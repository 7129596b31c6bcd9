"""Tiny arithmetic-expression evaluator for position-dependent rates.

Scenario files may give a rate as a formula over the local coordinates,
e.g. "0.02*x + 5" or "6*s^(x+16)". Supported: + - * / ^ (right
associative), unary minus, parentheses, exp(...), numeric literals, the
variables x and y, and any single constants supplied by the scenario.
There is no implicit multiplication: "6s" is a parse error, "6*s" works.
"""

from __future__ import annotations

import math
from collections.abc import Callable

from .errors import ExpressionError

_OPS = set("+-*/^()")


def _tokenize(src: str) -> list[tuple[str, str | float, int]]:
    tokens: list[tuple[str, str | float, int]] = []
    i, n = 0, len(src)
    while i < n:
        ch = src[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _OPS:
            tokens.append(("op", ch, i))
            i += 1
            continue
        if ch.isdigit() or ch == ".":
            j = i
            seen_e = False
            while j < n and (src[j].isdigit() or src[j] == "." or
                             (src[j] in "eE" and not seen_e and j + 1 < n and
                              (src[j + 1].isdigit() or src[j + 1] in "+-")) or
                             (src[j] in "+-" and j > i and src[j - 1] in "eE")):
                if src[j] in "eE":
                    seen_e = True
                j += 1
            text = src[i:j]
            try:
                value = float(text)
            except ValueError:
                raise ExpressionError(f"bad number '{text}' at column {i + 1}") from None
            tokens.append(("num", value, i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            tokens.append(("name", src[i:j], i))
            i = j
            continue
        raise ExpressionError(f"unexpected character '{ch}' at column {i + 1}")
    return tokens


class _Parser:
    def __init__(self, src: str, names: frozenset[str]):
        self.src = src
        self.tokens = _tokenize(src)
        self.pos = 0
        self.names = names

    def peek(self) -> tuple[str, str | float, int] | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> tuple[str, str | float, int]:
        tok = self.peek()
        if tok is None:
            raise ExpressionError(f"unexpected end of expression '{self.src}'")
        self.pos += 1
        return tok

    def expect_op(self, op: str) -> None:
        tok = self.take()
        if tok[0] != "op" or tok[1] != op:
            raise ExpressionError(
                f"expected '{op}' at column {tok[2] + 1} in '{self.src}', got '{tok[1]}'"
            )

    def parse(self) -> Callable[[dict[str, float]], float]:
        fn = self.expr()
        tok = self.peek()
        if tok is not None:
            hint = ""
            if tok[0] == "name":
                hint = " (implicit multiplication is not supported; write '*')"
            raise ExpressionError(
                f"unexpected '{tok[1]}' at column {tok[2] + 1} in '{self.src}'{hint}"
            )
        return fn

    def expr(self) -> Callable[[dict[str, float]], float]:
        left = self.term()
        while True:
            tok = self.peek()
            if tok is None or tok[0] != "op" or tok[1] not in "+-":
                return left
            self.pos += 1
            right = self.term()
            if tok[1] == "+":
                left = (lambda a, b: lambda env: a(env) + b(env))(left, right)
            else:
                left = (lambda a, b: lambda env: a(env) - b(env))(left, right)

    def term(self) -> Callable[[dict[str, float]], float]:
        left = self.unary()
        while True:
            tok = self.peek()
            if tok is None or tok[0] != "op" or tok[1] not in "*/":
                return left
            self.pos += 1
            right = self.unary()
            if tok[1] == "*":
                left = (lambda a, b: lambda env: a(env) * b(env))(left, right)
            else:
                left = (lambda a, b: lambda env: _div(a(env), b(env)))(left, right)

    def unary(self) -> Callable[[dict[str, float]], float]:
        tok = self.peek()
        if tok is not None and tok[0] == "op" and tok[1] == "-":
            self.pos += 1
            inner = self.unary()
            return lambda env: -inner(env)
        return self.power()

    def power(self) -> Callable[[dict[str, float]], float]:
        base = self.atom()
        tok = self.peek()
        if tok is not None and tok[0] == "op" and tok[1] == "^":
            self.pos += 1
            exponent = self.unary()  # right associative, allows 2^-3
            return lambda env: _pow(base(env), exponent(env))
        return base

    def atom(self) -> Callable[[dict[str, float]], float]:
        tok = self.take()
        kind, value, col = tok
        if kind == "num":
            v = float(value)
            return lambda env: v
        if kind == "name":
            name = str(value)
            nxt = self.peek()
            if nxt is not None and nxt[0] == "op" and nxt[1] == "(":
                if name != "exp":
                    raise ExpressionError(
                        f"unknown function '{name}' at column {col + 1}; only exp() is supported"
                    )
                self.pos += 1
                arg = self.expr()
                self.expect_op(")")
                return lambda env: _exp(arg(env))
            if name not in self.names:
                raise ExpressionError(
                    f"unknown name '{name}' at column {col + 1}; "
                    f"known names: {', '.join(sorted(self.names))}"
                )
            return lambda env: env[name]
        if kind == "op" and value == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise ExpressionError(f"unexpected '{value}' at column {col + 1} in '{self.src}'")


def _div(a: float, b: float) -> float:
    if b == 0.0:
        raise ExpressionError("division by zero while evaluating a rate expression")
    return a / b


def _pow(a: float, b: float) -> float:
    try:
        r = a**b
    except (OverflowError, ValueError, ZeroDivisionError) as exc:
        raise ExpressionError(f"cannot raise {a} to power {b}: {exc}") from exc
    if isinstance(r, complex):
        raise ExpressionError(f"{a}^{b} is not a real number")
    return r


def _exp(a: float) -> float:
    try:
        return math.exp(a)
    except OverflowError as exc:
        raise ExpressionError(f"exp({a}) overflows") from exc


def compile_expression(src: str,
                       constants: dict[str, float] | None = None) -> Callable[[float, float], float]:
    """Parse once, evaluate many times as f(x, y).

    `constants` adds scenario-supplied named values; x and y are always
    available. Evaluation errors (division by zero, overflow, non-finite
    results) raise ExpressionError.
    """
    constants = dict(constants or {})
    for bad in ("x", "y"):
        if bad in constants:
            raise ExpressionError(f"'{bad}' is a coordinate variable and cannot be a constant")
    names = frozenset(constants) | {"x", "y"}
    fn = _Parser(src, names).parse()

    def evaluate(x: float, y: float) -> float:
        env = dict(constants)
        env["x"] = x
        env["y"] = y
        result = fn(env)
        if not math.isfinite(result):
            raise ExpressionError(f"expression '{src}' produced non-finite value at ({x}, {y})")
        return float(result)

    return evaluate


def evaluate_expression(src: str, x: float = 0.0, y: float = 0.0,
                        constants: dict[str, float] | None = None) -> float:
    """One-shot convenience wrapper around compile_expression."""
    return compile_expression(src, constants)(x, y)
