"""Tiny expression language for symbols on C^n.

Grammar (whitespace-insensitive)::

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*
    factor := base ("^" UINT)?
    base   := NUMBER | "i" | VAR | FUNC "(" expr ")" | "(" expr ")" | "-" factor
    VAR    := "z" DIGITS          (z1, z2, ... up to the declared dimension)
    FUNC   := conj | re | im | sin | cos | exp
    NUMBER := DIGITS ("." DIGITS)?   (exact rational, no floats)

Expressions denote functions of (z_1, ..., z_n); `conj` is complex
conjugation, `re`/`im` take real and imaginary parts.  `lower_formal`
produces an exact polynomial symbol and rejects transcendental functions
and non-constant denominators; `lower_sampled` compiles any expression to
vectorized numpy evaluation with exact Wirtinger derivatives derived on
the syntax tree.
"""

from __future__ import annotations

import re as _re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Union

import numpy as np

from .numeric import SampledSymbol
from .symbolic import FormalSymbol, GR_I, GaussianRational

FUNCTIONS = ("conj", "re", "im", "sin", "cos", "exp")
TRANSCENDENTAL = ("sin", "cos", "exp")


class SymbolError(ValueError):
    """Base error for the symbol language."""


class SymbolSyntaxError(SymbolError):
    """Malformed source text; `position` is the character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class NotPolynomialError(SymbolError):
    """Expression is valid but does not denote a polynomial symbol."""


# ----- syntax tree -----------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class ImagUnit:
    pass


@dataclass(frozen=True)
class Var:
    index: int  # 1-based


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str  # "+", "-", "*", "/"
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int


Node = Union[Num, ImagUnit, Var, Call, Neg, BinOp, Pow]


# ----- tokenizer --------------------------------------------------------------

_TOKEN_RE = _re.compile(
    r"\s*(?:(?P<number>\d+(?:\.\d+)?)|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))"
)


@dataclass(frozen=True)
class _Token:
    kind: str  # "number", "ident", "op", "end"
    text: str
    position: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise SymbolSyntaxError(
                f"unexpected character {stripped[0]!r}", len(text) - len(stripped)
            )
        kind = match.lastgroup
        tokens.append(_Token(kind, match.group(kind), match.start(kind)))
        pos = match.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


# ----- parser ------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str, n: int):
        if n < 1:
            raise SymbolError("dimension must be >= 1")
        self.tokens = _tokenize(text)
        self.n = n
        self.index = 0

    def peek(self) -> _Token:
        return self.tokens[self.index]

    def advance(self) -> _Token:
        tok = self.tokens[self.index]
        self.index += 1
        return tok

    def expect_op(self, op: str) -> _Token:
        tok = self.peek()
        if tok.kind != "op" or tok.text != op:
            raise SymbolSyntaxError(f"expected {op!r}", tok.position)
        return self.advance()

    def parse(self) -> Node:
        node = self.parse_expr()
        tok = self.peek()
        if tok.kind != "end":
            raise SymbolSyntaxError(f"unexpected trailing input {tok.text!r}", tok.position)
        return node

    def parse_expr(self) -> Node:
        node = self.parse_term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.advance().text
            right = self.parse_term()
            node = _fold_binop(op, node, right, self.peek().position)
        return node

    def parse_term(self) -> Node:
        node = self.parse_factor()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.advance().text
            right = self.parse_factor()
            node = _fold_binop(op, node, right, self.peek().position)
        return node

    def parse_factor(self) -> Node:
        node = self.parse_base()
        if self.peek().kind == "op" and self.peek().text == "^":
            caret = self.advance()
            tok = self.peek()
            if tok.kind != "number" or "." in tok.text:
                raise SymbolSyntaxError("exponent must be an unsigned integer", tok.position)
            self.advance()
            node = Pow(node, int(tok.text))
        return node

    def parse_base(self) -> Node:
        tok = self.peek()
        if tok.kind == "number":
            self.advance()
            return Num(_number_value(tok.text))
        if tok.kind == "op" and tok.text == "-":
            self.advance()
            operand = self.parse_factor()
            return _fold_neg(operand)
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            node = self.parse_expr()
            self.expect_op(")")
            return node
        if tok.kind == "ident":
            self.advance()
            name = tok.text
            if name == "i":
                return ImagUnit()
            if name in FUNCTIONS:
                self.expect_op("(")
                arg = self.parse_expr()
                self.expect_op(")")
                return Call(name, arg)
            var_match = _re.fullmatch(r"z(\d+)", name)
            if var_match:
                index = int(var_match.group(1))
                if not 1 <= index <= self.n:
                    raise SymbolSyntaxError(
                        f"variable {name} out of range for dimension {self.n}", tok.position
                    )
                return Var(index)
            raise SymbolSyntaxError(f"unknown identifier {name!r}", tok.position)
        raise SymbolSyntaxError(
            "expected a number, variable, function, or parenthesized expression", tok.position
        )


def _number_value(text: str) -> Fraction:
    if "." in text:
        whole, frac = text.split(".")
        scale = 10 ** len(frac)
        return Fraction(int(whole) * scale + int(frac), scale)
    return Fraction(int(text))


def _fold_neg(operand: Node) -> Node:
    """Literal negation folds into the literal so printing round-trips."""
    if isinstance(operand, Num):
        return Num(-operand.value)
    return Neg(operand)


def _fold_binop(op: str, left: Node, right: Node, position: int) -> Node:
    """Division of two literals folds to a literal so printing round-trips."""
    if op == "/" and isinstance(left, Num) and isinstance(right, Num):
        if right.value == 0:
            raise SymbolSyntaxError("division by zero", position)
        return Num(left.value / right.value)
    return BinOp(op, left, right)


def parse(text: str, n: int) -> Node:
    """Parse source text over variables z1..zn into a syntax tree."""
    return _Parser(text, n).parse()


# ----- printing ----------------------------------------------------------------

_PREC_ADD = 1
_PREC_MUL = 2
_PREC_NEG = 3
_PREC_POW = 4
_PREC_ATOM = 5


def _decimal_repr(value: Fraction) -> Optional[str]:
    """Exact decimal string when the denominator is 2^a * 5^b, else None."""
    q = value.denominator
    twos = 0
    while q % 2 == 0:
        q //= 2
        twos += 1
    fives = 0
    while q % 5 == 0:
        q //= 5
        fives += 1
    if q != 1:
        return None
    digits = max(twos, fives)
    scaled = abs(value.numerator) * 10**digits // value.denominator
    sign = "-" if value < 0 else ""
    if digits == 0:
        return f"{sign}{scaled}"
    text = str(scaled).rjust(digits + 1, "0")
    return f"{sign}{text[:-digits]}.{text[-digits:]}"


def _num_text(value: Fraction) -> tuple[str, int]:
    decimal = _decimal_repr(value)
    if decimal is not None:
        prec = _PREC_ATOM if value >= 0 else _PREC_NEG
        return decimal, prec
    text = f"{value.numerator}/{value.denominator}"
    return text, _PREC_MUL


def _render(node: Node, context: int) -> str:
    if isinstance(node, Num):
        text, prec = _num_text(node.value)
    elif isinstance(node, ImagUnit):
        text, prec = "i", _PREC_ATOM
    elif isinstance(node, Var):
        text, prec = f"z{node.index}", _PREC_ATOM
    elif isinstance(node, Call):
        text, prec = f"{node.func}({_render(node.arg, 0)})", _PREC_ATOM
    elif isinstance(node, Neg):
        text, prec = "-" + _render(node.operand, _PREC_NEG), _PREC_NEG
    elif isinstance(node, Pow):
        text, prec = f"{_render(node.base, _PREC_POW + 1)}^{node.exponent}", _PREC_POW
    elif isinstance(node, BinOp):
        if node.op in "+-":
            prec = _PREC_ADD
        else:
            prec = _PREC_MUL
        left = _render(node.left, prec)
        right = _render(node.right, prec + 1)
        text = f"{left} {node.op} {right}"
    else:
        raise TypeError(f"not a syntax node: {type(node).__name__}")
    if prec < context:
        return f"({text})"
    return text


def to_text(node: Node) -> str:
    """Render a syntax tree to source text; parsing the result reproduces the tree."""
    return _render(node, 0)


# ----- exact lowering ----------------------------------------------------------


def _constant_value(symbol: FormalSymbol) -> Optional[GaussianRational]:
    terms = symbol.canonical_terms()
    if not terms:
        return GaussianRational.of(0)
    if len(terms) > 1:
        return None
    (ze, zb, spow), coeff = terms[0]
    if any(ze) or any(zb) or spow != 0:
        return None
    return coeff


def lower_formal(node: Node, n: int) -> FormalSymbol:
    """Lower a syntax tree to an exact polynomial symbol.

    `re` and `im` expand through conjugation; `sin`, `cos`, `exp` and
    division by anything but a nonzero constant raise NotPolynomialError.
    """
    if isinstance(node, Num):
        return FormalSymbol.constant(n, GaussianRational.of(node.value))
    if isinstance(node, ImagUnit):
        return FormalSymbol.constant(n, GR_I)
    if isinstance(node, Var):
        return FormalSymbol.z(n, node.index)
    if isinstance(node, Neg):
        return lower_formal(node.operand, n).scaled(GaussianRational.of(-1))
    if isinstance(node, Pow):
        base = lower_formal(node.base, n)
        out = FormalSymbol.one(n)
        for _ in range(node.exponent):
            out = out * base
        return out
    if isinstance(node, Call):
        if node.func in TRANSCENDENTAL:
            raise NotPolynomialError(f"{node.func} is not a polynomial symbol")
        inner = lower_formal(node.arg, n)
        if node.func == "conj":
            return inner.conjugate()
        if node.func == "re":
            return (inner + inner.conjugate()).scaled(GaussianRational.of(Fraction(1, 2)))
        if node.func == "im":
            return (inner - inner.conjugate()).scaled(
                GaussianRational.of(0, Fraction(-1, 2))
            )
        raise SymbolError(f"unknown function {node.func!r}")
    if isinstance(node, BinOp):
        left = lower_formal(node.left, n)
        right = lower_formal(node.right, n)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        if node.op == "/":
            value = _constant_value(right)
            if value is None:
                raise NotPolynomialError(
                    "division by a non-constant is not a polynomial symbol"
                )
            if value.is_zero():
                raise SymbolError("division by zero")
            return left.scaled(GaussianRational.of(1) / value)
        raise SymbolError(f"unknown operator {node.op!r}")
    raise TypeError(f"not a syntax node: {type(node).__name__}")


# ----- Wirtinger differentiation on the tree ------------------------------------

_ZERO = Num(Fraction(0))
_ONE = Num(Fraction(1))


def _is_zero(node: Node) -> bool:
    return isinstance(node, Num) and node.value == 0


def _is_one(node: Node) -> bool:
    return isinstance(node, Num) and node.value == 1


def _add(a: Node, b: Node) -> Node:
    if _is_zero(a):
        return b
    if _is_zero(b):
        return a
    return BinOp("+", a, b)


def _sub(a: Node, b: Node) -> Node:
    if _is_zero(b):
        return a
    if _is_zero(a):
        return _fold_neg(b) if isinstance(b, Num) else Neg(b)
    return BinOp("-", a, b)


def _mul(a: Node, b: Node) -> Node:
    if _is_zero(a) or _is_zero(b):
        return _ZERO
    if _is_one(a):
        return b
    if _is_one(b):
        return a
    return BinOp("*", a, b)


def _div(a: Node, b: Node) -> Node:
    if _is_zero(a):
        return _ZERO
    if _is_one(b):
        return a
    return BinOp("/", a, b)


def _conj(node: Node) -> Node:
    if isinstance(node, Num):
        return node
    return Call("conj", node)


def _expand_reim(node: Node) -> Node:
    """Rewrite re/im through conjugation so differentiation sees core ops only."""
    if isinstance(node, (Num, ImagUnit, Var)):
        return node
    if isinstance(node, Neg):
        return Neg(_expand_reim(node.operand))
    if isinstance(node, Pow):
        return Pow(_expand_reim(node.base), node.exponent)
    if isinstance(node, BinOp):
        return BinOp(node.op, _expand_reim(node.left), _expand_reim(node.right))
    if isinstance(node, Call):
        arg = _expand_reim(node.arg)
        if node.func == "re":
            return BinOp("/", BinOp("+", arg, Call("conj", arg)), Num(Fraction(2)))
        if node.func == "im":
            return BinOp(
                "/",
                BinOp("-", arg, Call("conj", arg)),
                BinOp("*", Num(Fraction(2)), ImagUnit()),
            )
        return Call(node.func, arg)
    raise TypeError(f"not a syntax node: {type(node).__name__}")


def _wirtinger(node: Node, axis: int, conjugated: bool) -> Node:
    """d/dz_axis (or d/dzbar_axis when conjugated) of an re/im-free tree."""
    if isinstance(node, (Num, ImagUnit)):
        return _ZERO
    if isinstance(node, Var):
        if node.index == axis and not conjugated:
            return _ONE
        return _ZERO
    if isinstance(node, Neg):
        inner = _wirtinger(node.operand, axis, conjugated)
        return _ZERO if _is_zero(inner) else _sub(_ZERO, inner)
    if isinstance(node, Pow):
        if node.exponent == 0:
            return _ZERO
        du = _wirtinger(node.base, axis, conjugated)
        factor = _mul(Num(Fraction(node.exponent)), Pow(node.base, node.exponent - 1))
        return _mul(factor, du)
    if isinstance(node, BinOp):
        du = _wirtinger(node.left, axis, conjugated)
        dv = _wirtinger(node.right, axis, conjugated)
        if node.op == "+":
            return _add(du, dv)
        if node.op == "-":
            return _sub(du, dv)
        if node.op == "*":
            return _add(_mul(du, node.right), _mul(node.left, dv))
        if node.op == "/":
            first = _div(du, node.right)
            second = _div(_mul(node.left, dv), _mul(node.right, node.right))
            return _sub(first, second)
        raise SymbolError(f"unknown operator {node.op!r}")
    if isinstance(node, Call):
        if node.func == "conj":
            inner = _wirtinger(node.arg, axis, not conjugated)
            return _ZERO if _is_zero(inner) else _conj(inner)
        du = _wirtinger(node.arg, axis, conjugated)
        if node.func == "sin":
            return _mul(Call("cos", node.arg), du)
        if node.func == "cos":
            return _sub(_ZERO, _mul(Call("sin", node.arg), du))
        if node.func == "exp":
            return _mul(Call("exp", node.arg), du)
        raise SymbolError(f"unknown function {node.func!r} in differentiation")
    raise TypeError(f"not a syntax node: {type(node).__name__}")


# ----- sampled lowering ----------------------------------------------------------


def _compile(node: Node) -> Callable[[np.ndarray], np.ndarray]:
    if isinstance(node, Num):
        value = complex(node.value)
        return lambda X: value
    if isinstance(node, ImagUnit):
        return lambda X: 1j
    if isinstance(node, Var):
        index = node.index - 1
        return lambda X: X[index]
    if isinstance(node, Neg):
        inner = _compile(node.operand)
        return lambda X: -inner(X)
    if isinstance(node, Pow):
        base = _compile(node.base)
        exponent = node.exponent
        return lambda X: base(X) ** exponent
    if isinstance(node, Call):
        inner = _compile(node.arg)
        if node.func == "conj":
            return lambda X: np.conjugate(inner(X))
        if node.func == "re":
            return lambda X: (inner(X) + np.conjugate(inner(X))) / 2.0
        if node.func == "im":
            return lambda X: (inner(X) - np.conjugate(inner(X))) / 2.0j
        if node.func == "sin":
            return lambda X: np.sin(inner(X))
        if node.func == "cos":
            return lambda X: np.cos(inner(X))
        if node.func == "exp":
            return lambda X: np.exp(inner(X))
        raise SymbolError(f"unknown function {node.func!r}")
    if isinstance(node, BinOp):
        left = _compile(node.left)
        right = _compile(node.right)
        if node.op == "+":
            return lambda X: left(X) + right(X)
        if node.op == "-":
            return lambda X: left(X) - right(X)
        if node.op == "*":
            return lambda X: left(X) * right(X)
        if node.op == "/":
            return lambda X: left(X) / right(X)
        raise SymbolError(f"unknown operator {node.op!r}")
    raise TypeError(f"not a syntax node: {type(node).__name__}")


def lower_sampled(node: Node, n: int) -> SampledSymbol:
    """Compile a syntax tree to vectorized evaluation with exact derivatives.

    Wirtinger derivatives of any order are produced symbolically on the
    tree (conjugation swaps the holomorphic and antiholomorphic slots),
    then compiled like the expression itself.
    """
    expanded = _expand_reim(node)
    cache: dict[tuple[tuple[int, ...], tuple[int, ...]], Callable] = {}

    def derivative(hol: tuple[int, ...], anti: tuple[int, ...]) -> Callable:
        key = (tuple(hol), tuple(anti))
        if key not in cache:
            tree = expanded
            for axis0, order in enumerate(key[0]):
                for _ in range(order):
                    tree = _wirtinger(tree, axis0 + 1, False)
            for axis0, order in enumerate(key[1]):
                for _ in range(order):
                    tree = _wirtinger(tree, axis0 + 1, True)
            cache[key] = _compile(tree)
        return cache[key]

    return SampledSymbol(
        n=n,
        value=_compile(expanded),
        derivative=derivative,
        sup_bound=None,
        label=to_text(node),
    )
