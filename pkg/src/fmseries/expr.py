"""Expression trees and truncated-series (jet) differentiation.

``taylor_at(e, x, N)`` propagates whole :class:`TaylorSeries` through the tree:
sums and products use series arithmetic, unary primitives are expanded as
univariate series around the inner value and composed with the inner series.
Over exact fields the result is exact for expressions built from field
operations; ``exp`` and ``log`` are admitted over the reals only.
"""
from __future__ import annotations

import ast
import math
import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DimensionError, DomainError, FieldMismatchError, ParseError, UsageError
from .scalars import RATIONAL, Field
from .taylor import (
    DerivativeSequence, TaylorSeries, constant_series, coordinate_series, stack_series,
    ts_add, ts_compose, ts_mul, ts_scale, ts_sub, univariate_series,
)


class Expr:
    """Base node. Supports ``+ - * / **`` with other nodes and numbers."""

    def __add__(self, other):
        return Add(self, as_expr(other))

    def __radd__(self, other):
        return Add(as_expr(other), self)

    def __sub__(self, other):
        return Sub(self, as_expr(other))

    def __rsub__(self, other):
        return Sub(as_expr(other), self)

    def __mul__(self, other):
        return Mul(self, as_expr(other))

    def __rmul__(self, other):
        return Mul(as_expr(other), self)

    def __truediv__(self, other):
        return Div(self, as_expr(other))

    def __rtruediv__(self, other):
        return Div(as_expr(other), self)

    def __pow__(self, n):
        return Pow(self, int(n))

    def __neg__(self):
        return Neg(self)

    def children(self) -> tuple:
        return ()


@dataclass(frozen=True, eq=True)
class Var(Expr):
    index: int  # zero-based

    def __str__(self):
        return f"x{self.index + 1}"


@dataclass(frozen=True, eq=True)
class Const(Expr):
    value: Fraction

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True, eq=True)
class Neg(Expr):
    arg: Expr

    def children(self):
        return (self.arg,)

    def __str__(self):
        return f"(-{self.arg})"


@dataclass(frozen=True, eq=True)
class Add(Expr):
    left: Expr
    right: Expr

    def children(self):
        return (self.left, self.right)

    def __str__(self):
        return f"({self.left} + {self.right})"


@dataclass(frozen=True, eq=True)
class Sub(Expr):
    left: Expr
    right: Expr

    def children(self):
        return (self.left, self.right)

    def __str__(self):
        return f"({self.left} - {self.right})"


@dataclass(frozen=True, eq=True)
class Mul(Expr):
    left: Expr
    right: Expr

    def children(self):
        return (self.left, self.right)

    def __str__(self):
        return f"({self.left}*{self.right})"


@dataclass(frozen=True, eq=True)
class Div(Expr):
    left: Expr
    right: Expr

    def children(self):
        return (self.left, self.right)

    def __str__(self):
        return f"({self.left}/{self.right})"


@dataclass(frozen=True, eq=True)
class Pow(Expr):
    base: Expr
    exponent: int

    def children(self):
        return (self.base,)

    def __str__(self):
        return f"({self.base}**{self.exponent})"


@dataclass(frozen=True, eq=True)
class Exp(Expr):
    arg: Expr

    def children(self):
        return (self.arg,)

    def __str__(self):
        return f"exp({self.arg})"


@dataclass(frozen=True, eq=True)
class Log(Expr):
    arg: Expr

    def children(self):
        return (self.arg,)

    def __str__(self):
        return f"log({self.arg})"


@dataclass(frozen=True, eq=True)
class Recip1m(Expr):
    """``u -> 1 / (1 - u)``."""

    arg: Expr

    def children(self):
        return (self.arg,)

    def __str__(self):
        return f"recip1m({self.arg})"


TRANSCENDENTAL = (Exp, Log)


def as_expr(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, Fraction)):
        return Const(Fraction(x))
    if isinstance(x, float):
        return Const(Fraction(x))
    raise TypeError(f"cannot use {x!r} in an expression")


def variables(d: int) -> tuple[Var, ...]:
    return tuple(Var(i) for i in range(d))


def walk(e: Expr):
    yield e
    for c in e.children():
        yield from walk(c)


def is_rational_expr(e: Expr) -> bool:
    """True when only field operations occur (analytic over every field)."""
    return not any(isinstance(n, TRANSCENDENTAL) for n in walk(e))


def max_variable(e: Expr) -> int:
    """Number of variables referenced (highest index + 1)."""
    return max((n.index + 1 for n in walk(e) if isinstance(n, Var)), default=0)


def substitute(e: Expr, replacements) -> Expr:
    """Replace ``Var(i)`` by ``replacements[i]``."""
    if isinstance(e, Var):
        return replacements[e.index]
    if isinstance(e, Const):
        return e
    if isinstance(e, Pow):
        return Pow(substitute(e.base, replacements), e.exponent)
    kids = [substitute(c, replacements) for c in e.children()]
    return type(e)(*kids)


# -- parsing -----------------------------------------------------------------

_VAR_RE = re.compile(r"^x(\d*)$")
_FUNCS = {"exp": Exp, "log": Log, "recip1m": Recip1m}


def parse_expr(text: str) -> Expr:
    """Parse infix text with variables ``x1..xd`` (``x`` means ``x1``),
    ``+ - * / **`` (``^`` also means power), integer or decimal literals and the
    functions ``exp``, ``log``, ``recip1m``."""
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse {text!r}: {exc.msg}") from exc
    return _convert(tree.body, text)


def _convert(node, text) -> Expr:
    if isinstance(node, ast.BinOp):
        left = _convert(node.left, text)
        if isinstance(node.op, ast.Pow):
            exponent = _int_literal(node.right, text)
            return Pow(left, exponent)
        right = _convert(node.right, text)
        ops = {ast.Add: Add, ast.Sub: Sub, ast.Mult: Mul, ast.Div: Div}
        for op_type, cls in ops.items():
            if isinstance(node.op, op_type):
                return cls(left, right)
        raise ParseError(f"unsupported operator in {text!r}")
    if isinstance(node, ast.UnaryOp):
        arg = _convert(node.operand, text)
        if isinstance(node.op, ast.USub):
            return Neg(arg)
        if isinstance(node.op, ast.UAdd):
            return arg
        raise ParseError(f"unsupported unary operator in {text!r}")
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) \
            and not isinstance(node.value, bool):
        # exact value of the literal as written, not of the parsed float
        src = ast.get_source_segment(text.replace("^", "**"), node)
        return Const(Fraction(src) if src else Fraction(node.value))
    if isinstance(node, ast.Name):
        m = _VAR_RE.match(node.id)
        if m:
            idx = int(m.group(1)) if m.group(1) else 1
            if idx < 1:
                raise ParseError("variables are numbered from x1")
            return Var(idx - 1)
        raise ParseError(f"unknown name {node.id!r}")
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) \
            and node.func.id in _FUNCS and len(node.args) == 1 and not node.keywords:
        return _FUNCS[node.func.id](_convert(node.args[0], text))
    raise ParseError(f"unsupported syntax in {text!r}")


def _int_literal(node, text) -> int:
    sign = 1
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        sign, node = -1, node.operand
    if isinstance(node, ast.Constant) and isinstance(node.value, int) \
            and not isinstance(node.value, bool):
        return sign * node.value
    raise ParseError(f"exponents must be integer literals in {text!r}")


# -- direct evaluation ---------------------------------------------------------

def evaluate(e: Expr, x, field: Field = RATIONAL):
    """Evaluate ``e`` at the point ``x`` in ``field`` (no series involved)."""
    return _eval(e, [field.coerce(v) for v in x], field)


def _eval(e, x, field):
    if isinstance(e, Var):
        if e.index >= len(x):
            raise DimensionError(f"variable x{e.index + 1} but point has dimension {len(x)}")
        return x[e.index]
    if isinstance(e, Const):
        return field.from_fraction(e.value)
    if isinstance(e, Neg):
        return -_eval(e.arg, x, field)
    if isinstance(e, Add):
        return _eval(e.left, x, field) + _eval(e.right, x, field)
    if isinstance(e, Sub):
        return _eval(e.left, x, field) - _eval(e.right, x, field)
    if isinstance(e, Mul):
        return _eval(e.left, x, field) * _eval(e.right, x, field)
    if isinstance(e, Div):
        den = _eval(e.right, x, field)
        if field.is_zero(den, atol=0.0):
            raise DomainError(f"division by zero in {e}")
        return _eval(e.left, x, field) / den
    if isinstance(e, Pow):
        b = _eval(e.base, x, field)
        if e.exponent < 0:
            if field.is_zero(b, atol=0.0):
                raise DomainError(f"negative power of zero in {e}")
            return (field.one() / b) ** (-e.exponent)
        return b ** e.exponent
    if isinstance(e, Recip1m):
        u = _eval(e.arg, x, field)
        den = field.one() - u
        if field.is_zero(den, atol=0.0):
            raise DomainError(f"recip1m at 1 in {e}")
        return field.one() / den
    _require_real(e, field)
    u = float(_eval(e.arg, x, field))
    if isinstance(e, Exp):
        return math.exp(u)
    if u <= 0:
        raise DomainError(f"log of non-positive value in {e}")
    return math.log(u)


def _require_real(e, field):
    if not field.is_real:
        raise FieldMismatchError(f"{type(e).__name__.lower()} is only available over the reals")


# -- jets ----------------------------------------------------------------------

def exp_coefficients(u0: float, N: int) -> list:
    """``exp(u0 + h) = exp(u0) * sum h**k / k!``."""
    e0 = math.exp(u0)
    return [e0 * float(Fraction(1, math.factorial(k))) for k in range(N + 1)]


def log_coefficients(u0: float, N: int) -> list:
    """``log(u0 + h) = log(u0) + sum_{k>=1} (-1)**(k+1) h**k / (k u0**k)``."""
    out = [math.log(u0)]
    for k in range(1, N + 1):
        out.append(float(Fraction((-1) ** (k + 1), k)) / u0**k)
    return out


def geometric_coefficients(field: Field, u0, N: int) -> list:
    """``1 / (1 - u0 - h) = sum h**k / (1 - u0)**(k+1)``."""
    r = field.one() / (field.one() - u0)
    out, c = [], r
    for _ in range(N + 1):
        out.append(c)
        c = c * r
    return out


def reciprocal_coefficients(field: Field, b0, N: int) -> list:
    """``1 / (b0 + h) = sum (-1)**k h**k / b0**(k+1)``."""
    r = field.one() / b0
    out, c = [], r
    for _ in range(N + 1):
        out.append(c)
        c = -c * r
    return out


def _apply_univariate(coeffs, inner: TaylorSeries) -> TaylorSeries:
    outer = univariate_series(inner.field, inner.value()[0], coeffs)
    return ts_compose(outer, inner)


def taylor_at(e, x, N: int, field: Field = RATIONAL) -> TaylorSeries:
    """Order-``N`` series of the scalar expression ``e`` at ``x``.

    A sequence of expressions yields a vector-valued series.
    """
    if N < 0:
        raise UsageError("order must be >= 0")
    if isinstance(e, (list, tuple)):
        return stack_series([taylor_at(c, x, N, field) for c in e])
    if isinstance(e, str):
        e = parse_expr(e)
    base = field.array([field.coerce(v) for v in x])
    if max_variable(e) > len(base):
        raise DimensionError(f"expression uses {max_variable(e)} variables, point has {len(base)}")
    return _jet(e, base, N, field, {})


def _jet(e, base, N, field, memo) -> TaylorSeries:
    # structurally equal subtrees share one series
    if e not in memo:
        memo[e] = _jet_node(e, base, N, field, memo)
    return memo[e]


def _jet_node(e, base, N, field, memo) -> TaylorSeries:
    if isinstance(e, Var):
        return coordinate_series(field, base, e.index, N)
    if isinstance(e, Const):
        return constant_series(field, base, [field.from_fraction(e.value)], N)
    if isinstance(e, Neg):
        return ts_scale(_jet(e.arg, base, N, field, memo), -1)
    if isinstance(e, Add):
        return ts_add(_jet(e.left, base, N, field, memo), _jet(e.right, base, N, field, memo))
    if isinstance(e, Sub):
        return ts_sub(_jet(e.left, base, N, field, memo), _jet(e.right, base, N, field, memo))
    if isinstance(e, Mul):
        return ts_mul(_jet(e.left, base, N, field, memo), _jet(e.right, base, N, field, memo))
    if isinstance(e, Div):
        num = _jet(e.left, base, N, field, memo)
        return ts_mul(num, _reciprocal(_jet(e.right, base, N, field, memo), e))
    if isinstance(e, Pow):
        s = _jet(e.base, base, N, field, memo)
        if e.exponent < 0:
            s = _reciprocal(s, e)
        return _power(s, abs(e.exponent), base, N, field)
    inner = _jet(e.arg, base, N, field, memo)
    u0 = inner.value()[0]
    if isinstance(e, Recip1m):
        if field.is_zero(field.one() - u0, atol=0.0):
            raise DomainError(f"recip1m singular at {e}")
        return _apply_univariate(geometric_coefficients(field, u0, N), inner)
    _require_real(e, field)
    if isinstance(e, Exp):
        return _apply_univariate(exp_coefficients(float(u0), N), inner)
    if isinstance(e, Log):
        if float(u0) <= 0:
            raise DomainError(f"log of non-positive value at {e}")
        return _apply_univariate(log_coefficients(float(u0), N), inner)
    raise UsageError(f"unknown node {e!r}")


def _reciprocal(s: TaylorSeries, node) -> TaylorSeries:
    b0 = s.value()[0]
    if s.field.is_zero(b0, atol=0.0):
        raise DomainError(f"division by zero at the base point in {node}")
    return _apply_univariate(reciprocal_coefficients(s.field, b0, s.order), s)


def _power(s: TaylorSeries, n: int, base, N, field) -> TaylorSeries:
    result = constant_series(field, base, [field.one()], N)
    sq = s
    while n:
        if n & 1:
            result = ts_mul(result, sq)
        n >>= 1
        if n:
            sq = ts_mul(sq, sq)
    return result


# -- reading off derivatives --------------------------------------------------

def partial_derivative(seq: DerivativeSequence, alpha):
    """``D^|alpha| f(x)(e_1 x alpha_1, ..., e_d x alpha_d)``; a scalar when the
    function is scalar valued, else the vector of component partials."""
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != seq.in_dim or any(a < 0 for a in alpha):
        raise DimensionError(f"multi-index {alpha} does not fit dimension {seq.in_dim}")
    n = sum(alpha)
    if n > seq.order:
        raise UsageError(f"|alpha| = {n} exceeds available order {seq.order}")
    idx = tuple(i for i, a in enumerate(alpha) for _ in range(a))
    col = seq.tensors[n].coeffs[(slice(None),) + idx]
    return col[0] if seq.out_dim == 1 else np.array(col)


def deriv1(seq: DerivativeSequence, n: int):
    """``f^(n)(x) = D^n f(x)(1, ..., 1)`` for functions of one variable."""
    if seq.in_dim != 1:
        raise DimensionError("deriv1 needs a function of one variable")
    return partial_derivative(seq, (n,))
