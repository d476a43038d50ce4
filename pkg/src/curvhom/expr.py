"""Scalar-field expression language: parser, printer, and program compiler.

Grammar (whitespace insignificant)::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-' factor | base ('^' integer)?
    base   := number | var | '(' expr ')' | func '(' expr ')'
    func   := 'sin' | 'cos' | 'exp' | 'log'
    var    := 'x' digits

Unary minus binds at factor level, so ``-x1^2`` means ``-(x1^2)``.  The
exponent after ``^`` is a (possibly negative) integer.  Canonicalization is
constant folding only; no algebraic rewriting, so print -> parse is stable.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ExprSyntaxError


class Expr:
    """Base class for expression-tree nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class Const(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    index: int  # 1-based: x1 .. xp


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr


@dataclass(frozen=True)
class Call(Expr):
    func: str  # 'sin' | 'cos' | 'exp' | 'log'
    arg: Expr


FUNCS = ("sin", "cos", "exp", "log")

_TOKEN_RE = re.compile(
    r"""
    (?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)
  | (?P<var>x\d+)
  | (?P<name>[A-Za-z_]+)
  | (?P<op>[-+*/^()])
  | (?P<ws>\s+)
""",
    re.VERBOSE,
)


def _tokenize(source):
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {source[pos]!r}", pos)
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, source, p):
        self.source = source
        self.p = p
        self.tokens = _tokenize(source)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, text, pos = self.next()
        if kind != "op" or text != op:
            raise ExprSyntaxError(f"expected {op!r}, found {text!r}", pos)

    def parse(self):
        node = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected trailing input {text!r}", pos)
        return node

    def expr(self):
        node = self.term()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "+-":
                self.next()
                rhs = self.term()
                node = Add(node, rhs) if text == "+" else Sub(node, rhs)
            else:
                return node

    def term(self):
        node = self.factor()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "*/":
                self.next()
                rhs = self.factor()
                node = Mul(node, rhs) if text == "*" else Div(node, rhs)
            else:
                return node

    def factor(self):
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.next()
            return Neg(self.factor())
        node = self.base()
        kind, text, _ = self.peek()
        if kind == "op" and text == "^":
            self.next()
            node = Pow(node, self.integer())
        return node

    def integer(self):
        sign = 1
        kind, text, pos = self.peek()
        if kind == "op" and text == "-":
            self.next()
            sign = -1
        kind, text, pos = self.next()
        if kind != "num" or not re.fullmatch(r"\d+", text):
            raise ExprSyntaxError("exponent must be an integer", pos)
        return sign * int(text)

    def base(self):
        kind, text, pos = self.next()
        if kind == "num":
            return Const(float(text))
        if kind == "var":
            index = int(text[1:])
            if index < 1 or index > self.p:
                raise ExprSyntaxError(
                    f"variable {text} out of range for dimension {self.p}", pos
                )
            return Var(index)
        if kind == "name":
            if text not in FUNCS:
                raise ExprSyntaxError(f"unknown function {text!r}", pos)
            self.expect_op("(")
            arg = self.expr()
            self.expect_op(")")
            return Call(text, arg)
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise ExprSyntaxError(f"unexpected token {text!r}", pos)


def _ipow(u, n):
    """Integer power by left-to-right multiplication (backends mirror this)."""
    if n < 0:
        if u == 0.0:
            raise DomainError("zero raised to a negative power")
        return 1.0 / _ipow(u, -n)
    r = 1.0
    for _ in range(n):
        r = r * u
    return r


def fold_constants(node):
    """Bottom-up constant folding.  Domain errors in constant subtrees are
    left unfolded so parsing stays total; they surface at evaluation."""
    if isinstance(node, (Const, Var)):
        return node
    if isinstance(node, Neg):
        inner = fold_constants(node.operand)
        if isinstance(inner, Const):
            return Const(-inner.value)
        return Neg(inner)
    if isinstance(node, Pow):
        base = fold_constants(node.base)
        if isinstance(base, Const):
            try:
                return Const(_ipow(base.value, node.exponent))
            except DomainError:
                pass
        return Pow(base, node.exponent)
    if isinstance(node, Call):
        arg = fold_constants(node.arg)
        if isinstance(arg, Const):
            try:
                if node.func == "log" and arg.value <= 0.0:
                    raise DomainError("log of non-positive constant")
                return Const(getattr(math, node.func)(arg.value))
            except (DomainError, OverflowError, ValueError):
                pass
        return Call(node.func, arg)
    left = fold_constants(node.left)
    right = fold_constants(node.right)
    kind = type(node)
    if isinstance(left, Const) and isinstance(right, Const):
        if kind is Add:
            return Const(left.value + right.value)
        if kind is Sub:
            return Const(left.value - right.value)
        if kind is Mul:
            return Const(left.value * right.value)
        if right.value != 0.0:  # Div; fold only when defined
            return Const(left.value / right.value)
    return kind(left, right)


def parse(source, p):
    """Parse ``source`` against dimension ``p`` and fold constants."""
    if p < 1:
        raise ValueError("dimension p must be >= 1")
    return fold_constants(_Parser(source, p).parse())


_PREC_ADD, _PREC_MUL, _PREC_NEG, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _prec(node):
    if isinstance(node, (Add, Sub)):
        return _PREC_ADD
    if isinstance(node, (Mul, Div)):
        return _PREC_MUL
    if isinstance(node, Neg):
        return _PREC_NEG
    if isinstance(node, Const) and node.value < 0:
        return _PREC_NEG
    if isinstance(node, Pow):
        return _PREC_POW
    return _PREC_ATOM


def to_source(node):
    """Canonical text form; ``parse(to_source(e), p) == e`` for folded trees."""

    def wrap(child, minimum):
        text = to_source(child)
        if _prec(child) < minimum:
            return f"({text})"
        return text

    if isinstance(node, Const):
        return repr(node.value)
    if isinstance(node, Var):
        return f"x{node.index}"
    if isinstance(node, Add):
        return f"{wrap(node.left, _PREC_ADD)}+{wrap(node.right, _PREC_MUL)}"
    if isinstance(node, Sub):
        return f"{wrap(node.left, _PREC_ADD)}-{wrap(node.right, _PREC_MUL)}"
    if isinstance(node, Mul):
        return f"{wrap(node.left, _PREC_MUL)}*{wrap(node.right, _PREC_NEG)}"
    if isinstance(node, Div):
        return f"{wrap(node.left, _PREC_MUL)}/{wrap(node.right, _PREC_NEG)}"
    if isinstance(node, Neg):
        return f"-{wrap(node.operand, _PREC_NEG)}"
    if isinstance(node, Pow):
        return f"{wrap(node.base, _PREC_ATOM)}^{node.exponent}"
    if isinstance(node, Call):
        return f"{node.func}({to_source(node.arg)})"
    raise TypeError(f"not an expression node: {node!r}")


def max_var_index(node):
    if isinstance(node, Var):
        return node.index
    if isinstance(node, Const):
        return 0
    if isinstance(node, Neg):
        return max_var_index(node.operand)
    if isinstance(node, Pow):
        return max_var_index(node.base)
    if isinstance(node, Call):
        return max_var_index(node.arg)
    return max(max_var_index(node.left), max_var_index(node.right))


# Opcodes shared with both evaluation backends (see backends/_jetkernel.pyx,
# which hardcodes the same numbering).
OP_CONST = 0
OP_VAR = 1
OP_ADD = 2
OP_SUB = 3
OP_MUL = 4
OP_DIV = 5
OP_NEG = 6
OP_POW = 7
OP_SIN = 8
OP_COS = 9
OP_EXP = 10
OP_LOG = 11

_FUNC_OPS = {"sin": OP_SIN, "cos": OP_COS, "exp": OP_EXP, "log": OP_LOG}


@dataclass(frozen=True)
class Program:
    """Flat register program: row i of ``code`` writes register i; the last
    register holds the result.  Columns are (opcode, a, b): a/b are operand
    registers, except CONST (b = constant-pool index), VAR (b = 0-based
    variable index), POW (b = integer exponent)."""

    p: int
    code: np.ndarray    # (n, 3) intc
    consts: np.ndarray  # (m,) float64


def compile_program(node, p):
    code = []
    consts = []
    const_index = {}

    def emit(op, a, b):
        code.append((op, a, b))
        return len(code) - 1

    def walk(n):
        if isinstance(n, Const):
            key = (n.value, math.copysign(1.0, n.value))
            if key not in const_index:
                const_index[key] = len(consts)
                consts.append(n.value)
            return emit(OP_CONST, -1, const_index[key])
        if isinstance(n, Var):
            return emit(OP_VAR, -1, n.index - 1)
        if isinstance(n, Neg):
            return emit(OP_NEG, walk(n.operand), -1)
        if isinstance(n, Pow):
            return emit(OP_POW, walk(n.base), n.exponent)
        if isinstance(n, Call):
            return emit(_FUNC_OPS[n.func], walk(n.arg), -1)
        a = walk(n.left)
        b = walk(n.right)
        op = {Add: OP_ADD, Sub: OP_SUB, Mul: OP_MUL, Div: OP_DIV}[type(n)]
        return emit(op, a, b)

    walk(node)
    return Program(
        p=p,
        code=np.ascontiguousarray(code, dtype=np.intc),
        consts=np.ascontiguousarray(consts if consts else [0.0], dtype=np.float64),
    )
