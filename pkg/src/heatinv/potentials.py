"""Small expression language for concrete potentials V(x).

Grammar (standard precedence, left-associative binary operators):

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := "-" unary | power
    power   := atom ("^" exponent)?          exponent must fold to an integer
    atom    := number | "pi" | variable | call | "(" expr ")"
    call    := name "(" expr ("," expr)* ")"

Variables are x1..xn.  Functions: exp, sin, cos, tanh, sqrt, and
powr(base, p, q) for the rational power base^(p/q) with base > 0 at
evaluation time.  `^` takes integer exponents only; rational powers must go
through powr, which keeps symbolic differentiation total.

ASTs are immutable; differentiation is exact with light constant folding and
evaluation supports both scalars and numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .diffpoly import MultiIndex

DERIVATIVE_CAP = 12

FUNCTIONS = ("exp", "sin", "cos", "tanh", "sqrt")


class PotentialSyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class PotentialEvalError(ValueError):
    pass


class DerivativeCapError(ValueError):
    pass


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Expr:
    pass


@dataclass(frozen=True)
class Const(Expr):
    value: Fraction


@dataclass(frozen=True)
class Pi(Expr):
    pass


@dataclass(frozen=True)
class Var(Expr):
    index: int  # zero-based axis


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
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int


@dataclass(frozen=True)
class Powr(Expr):
    base: Expr
    num: int
    den: int


@dataclass(frozen=True)
class Call(Expr):
    name: str
    arg: Expr


@dataclass(frozen=True)
class PotentialExpr:
    """A parsed potential: expression AST plus ambient dimension."""

    root: Expr
    dim: int

    def to_text(self) -> str:
        return _print(self.root)


# smart constructors with constant folding -----------------------------------

ZERO = Const(Fraction(0))
ONE = Const(Fraction(1))


def _add(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    if a == ZERO:
        return b
    if b == ZERO:
        return a
    return Add(a, b)


def _sub(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value - b.value)
    if b == ZERO:
        return a
    if a == ZERO:
        return _neg(b)
    return Sub(a, b)


def _mul(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    if a == ZERO or b == ZERO:
        return ZERO
    if a == ONE:
        return b
    if b == ONE:
        return a
    return Mul(a, b)


def _div(a: Expr, b: Expr) -> Expr:
    if isinstance(b, Const) and b.value != 0:
        if isinstance(a, Const):
            return Const(a.value / b.value)
        if b == ONE:
            return a
    if a == ZERO and not (isinstance(b, Const) and b.value == 0):
        return ZERO
    return Div(a, b)


def _neg(a: Expr) -> Expr:
    if isinstance(a, Const):
        return Const(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def _pow(a: Expr, k: int) -> Expr:
    if k == 0:
        return ONE
    if k == 1:
        return a
    if isinstance(a, Const):
        return Const(a.value ** k)
    return Pow(a, k)


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


class _Parser:
    def __init__(self, src: str, dim: int):
        self.src = src
        self.dim = dim
        self.pos = 0

    def error(self, message: str):
        raise PotentialSyntaxError(message, self.pos)

    def skip_ws(self):
        while self.pos < len(self.src) and self.src[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.src[self.pos] if self.pos < len(self.src) else ""

    def accept(self, ch: str) -> bool:
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def expect(self, ch: str):
        if not self.accept(ch):
            self.error(f"expected {ch!r}")

    def parse(self) -> Expr:
        e = self.expr()
        self.skip_ws()
        if self.pos != len(self.src):
            self.error("unexpected trailing input")
        return e

    def expr(self) -> Expr:
        e = self.term()
        while True:
            if self.accept("+"):
                e = _add(e, self.term())
            elif self.accept("-"):
                e = _sub(e, self.term())
            else:
                return e

    def term(self) -> Expr:
        e = self.unary()
        while True:
            if self.accept("*"):
                e = _mul(e, self.unary())
            elif self.accept("/"):
                e = _div(e, self.unary())
            else:
                return e

    def unary(self) -> Expr:
        if self.accept("-"):
            return _neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if not self.accept("^"):
            return base
        at = self.pos
        exponent = self.unary()  # parenthesized or signed exponents allowed
        if not isinstance(exponent, Const) or exponent.value.denominator != 1:
            raise PotentialSyntaxError(
                "exponent of '^' must be an integer; use powr(base, p, q)"
                " for rational powers", at)
        return _pow(base, int(exponent.value))

    def number(self) -> Expr:
        start = self.pos
        while self.pos < len(self.src) and (self.src[self.pos].isdigit()
                                            or self.src[self.pos] == "."):
            self.pos += 1
        text = self.src[start:self.pos]
        try:
            return Const(Fraction(text))
        except (ValueError, ZeroDivisionError):
            self.pos = start
            self.error(f"bad numeric literal {text!r}")

    def identifier(self) -> str:
        start = self.pos
        while self.pos < len(self.src) and (self.src[self.pos].isalnum()
                                            or self.src[self.pos] == "_"):
            self.pos += 1
        return self.src[start:self.pos]

    def atom(self) -> Expr:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            e = self.expr()
            self.expect(")")
            return e
        if ch.isdigit() or ch == ".":
            return self.number()
        if ch.isalpha() or ch == "_":
            at = self.pos
            name = self.identifier()
            if name == "pi":
                return Pi()
            if name.startswith("x") and name[1:].isdigit():
                index = int(name[1:])
                if not 1 <= index <= self.dim:
                    self.pos = at
                    self.error(f"variable {name} out of range for dimension {self.dim}")
                return Var(index - 1)
            if name == "powr":
                self.expect("(")
                base = self.expr()
                self.expect(",")
                p = self.int_literal()
                self.expect(",")
                q = self.int_literal()
                self.expect(")")
                if q <= 0:
                    self.pos = at
                    self.error("powr denominator must be a positive integer")
                return Powr(base, p, q)
            if name in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(name, arg)
            self.pos = at
            self.error(f"unknown identifier {name!r}")
        self.error("expected a number, variable, function, or '('")

    def int_literal(self) -> int:
        at = self.pos
        e = self.expr()
        if not isinstance(e, Const) or e.value.denominator != 1:
            self.pos = at
            self.error("expected an integer literal")
        return int(e.value)


def parse_potential(src: str, n: int) -> PotentialExpr:
    """Parse a potential expression in variables x1..xn."""
    if not src or src.isspace():
        raise PotentialSyntaxError("empty potential expression", 0)
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    return PotentialExpr(_Parser(src, n).parse(), n)


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------


def _print(e: Expr) -> str:
    # Fully parenthesized below the top level; deterministic, reparseable.
    if isinstance(e, Const):
        v = e.value
        if v.denominator == 1:
            return str(v.numerator) if v >= 0 else f"(-{-v.numerator})"
        return f"({v.numerator}/{v.denominator})" if v >= 0 else f"(-{-v.numerator}/{v.denominator})"
    if isinstance(e, Pi):
        return "pi"
    if isinstance(e, Var):
        return f"x{e.index + 1}"
    if isinstance(e, Add):
        return f"({_print(e.left)} + {_print(e.right)})"
    if isinstance(e, Sub):
        return f"({_print(e.left)} - {_print(e.right)})"
    if isinstance(e, Mul):
        return f"({_print(e.left)} * {_print(e.right)})"
    if isinstance(e, Div):
        return f"({_print(e.left)} / {_print(e.right)})"
    if isinstance(e, Neg):
        return f"(-{_print(e.arg)})"
    if isinstance(e, Pow):
        k = e.exponent
        exp_txt = str(k) if k >= 0 else f"({k})"
        return f"{_print(e.base)}^{exp_txt}"
    if isinstance(e, Powr):
        return f"powr({_print(e.base)}, {e.num}, {e.den})"
    if isinstance(e, Call):
        return f"{e.name}({_print(e.arg)})"
    raise TypeError(f"unknown node {e!r}")


# ---------------------------------------------------------------------------
# Differentiation
# ---------------------------------------------------------------------------


def _d(e: Expr, axis: int) -> Expr:
    if isinstance(e, (Const, Pi)):
        return ZERO
    if isinstance(e, Var):
        return ONE if e.index == axis else ZERO
    if isinstance(e, Add):
        return _add(_d(e.left, axis), _d(e.right, axis))
    if isinstance(e, Sub):
        return _sub(_d(e.left, axis), _d(e.right, axis))
    if isinstance(e, Mul):
        return _add(_mul(_d(e.left, axis), e.right), _mul(e.left, _d(e.right, axis)))
    if isinstance(e, Div):
        num = _sub(_mul(_d(e.left, axis), e.right), _mul(e.left, _d(e.right, axis)))
        return _div(num, _pow(e.right, 2))
    if isinstance(e, Neg):
        return _neg(_d(e.arg, axis))
    if isinstance(e, Pow):
        inner = _d(e.base, axis)
        return _mul(_mul(Const(Fraction(e.exponent)), _pow(e.base, e.exponent - 1)), inner)
    if isinstance(e, Powr):
        inner = _d(e.base, axis)
        factor = _mul(Const(Fraction(e.num, e.den)), Powr(e.base, e.num - e.den, e.den))
        return _mul(factor, inner)
    if isinstance(e, Call):
        inner = _d(e.arg, axis)
        if e.name == "exp":
            outer = Call("exp", e.arg)
        elif e.name == "sin":
            outer = Call("cos", e.arg)
        elif e.name == "cos":
            outer = _neg(Call("sin", e.arg))
        elif e.name == "tanh":
            outer = _sub(ONE, _pow(Call("tanh", e.arg), 2))
        elif e.name == "sqrt":
            return _div(inner, _mul(Const(Fraction(2)), Call("sqrt", e.arg)))
        else:
            raise TypeError(f"unknown function {e.name!r}")
        return _mul(outer, inner)
    raise TypeError(f"unknown node {e!r}")


def differentiate(e: PotentialExpr, nu: MultiIndex,
                  cap: int = DERIVATIVE_CAP) -> PotentialExpr:
    """Exact symbolic derivative D^nu of the potential."""
    if len(nu) != e.dim:
        raise ValueError(f"multi-index {nu} has wrong length for dimension {e.dim}")
    if sum(nu) > cap:
        raise DerivativeCapError(
            f"derivative order {sum(nu)} exceeds the cap {cap}")
    root = e.root
    for axis, count in enumerate(nu):
        for _ in range(count):
            root = _d(root, axis)
    return PotentialExpr(root, e.dim)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

_SCALAR_FUNCS = {"exp": math.exp, "sin": math.sin, "cos": math.cos,
                 "tanh": math.tanh}


def _eval(e: Expr, point) -> float:
    if isinstance(e, Const):
        return float(e.value)
    if isinstance(e, Pi):
        return math.pi
    if isinstance(e, Var):
        return float(point[e.index])
    if isinstance(e, Add):
        return _eval(e.left, point) + _eval(e.right, point)
    if isinstance(e, Sub):
        return _eval(e.left, point) - _eval(e.right, point)
    if isinstance(e, Mul):
        return _eval(e.left, point) * _eval(e.right, point)
    if isinstance(e, Div):
        denom = _eval(e.right, point)
        if denom == 0.0:
            raise PotentialEvalError("division by zero")
        return _eval(e.left, point) / denom
    if isinstance(e, Neg):
        return -_eval(e.arg, point)
    if isinstance(e, Pow):
        base = _eval(e.base, point)
        if base == 0.0 and e.exponent < 0:
            raise PotentialEvalError("zero raised to a negative power")
        return base ** e.exponent
    if isinstance(e, Powr):
        base = _eval(e.base, point)
        if base <= 0.0:
            raise PotentialEvalError(
                f"powr base must be positive, got {base}")
        return base ** (e.num / e.den)
    if isinstance(e, Call):
        arg = _eval(e.arg, point)
        if e.name == "sqrt":
            if arg < 0.0:
                raise PotentialEvalError(f"sqrt of negative value {arg}")
            return math.sqrt(arg)
        try:
            return _SCALAR_FUNCS[e.name](arg)
        except OverflowError as exc:
            raise PotentialEvalError(f"overflow in {e.name}") from exc
    raise TypeError(f"unknown node {e!r}")


def evaluate(e: PotentialExpr, point) -> float:
    """Evaluate at a point (sequence of dim floats); non-finite results are
    reported as errors rather than propagated silently."""
    if len(point) != e.dim:
        raise ValueError(f"point of length {len(point)} for dimension {e.dim}")
    value = _eval(e.root, point)
    if not math.isfinite(value):
        raise PotentialEvalError(f"non-finite value {value}")
    return value


def _eval_array(e: Expr, coords: list[np.ndarray]) -> np.ndarray:
    if isinstance(e, Const):
        return np.asarray(float(e.value))
    if isinstance(e, Pi):
        return np.asarray(math.pi)
    if isinstance(e, Var):
        return coords[e.index]
    if isinstance(e, Add):
        return _eval_array(e.left, coords) + _eval_array(e.right, coords)
    if isinstance(e, Sub):
        return _eval_array(e.left, coords) - _eval_array(e.right, coords)
    if isinstance(e, Mul):
        return _eval_array(e.left, coords) * _eval_array(e.right, coords)
    if isinstance(e, Div):
        return _eval_array(e.left, coords) / _eval_array(e.right, coords)
    if isinstance(e, Neg):
        return -_eval_array(e.arg, coords)
    if isinstance(e, Pow):
        return _eval_array(e.base, coords) ** e.exponent
    if isinstance(e, Powr):
        return _eval_array(e.base, coords) ** (e.num / e.den)
    if isinstance(e, Call):
        return getattr(np, e.name)(_eval_array(e.arg, coords))
    raise TypeError(f"unknown node {e!r}")


def evaluate_array(e: PotentialExpr, coords: list[np.ndarray]) -> np.ndarray:
    """Vectorized evaluation on numpy coordinate arrays (one per axis, equal
    shapes).  Non-finite entries raise, matching scalar evaluate()."""
    if len(coords) != e.dim:
        raise ValueError(f"{len(coords)} coordinate arrays for dimension {e.dim}")
    with np.errstate(all="ignore"):
        out = np.broadcast_to(_eval_array(e.root, coords),
                              np.broadcast(*coords).shape if e.dim > 1 else coords[0].shape)
        out = np.array(out, dtype=float)
    if not np.all(np.isfinite(out)):
        raise PotentialEvalError("non-finite values in array evaluation")
    return out
