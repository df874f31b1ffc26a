"""Finite-difference oracles, symmetry checks and the p-adic counterexample.

The oracles treat a function as a black box and only ever evaluate it. Over
archimedean fields the first-order probe is a central difference; over Q_p it
is a forward quotient with a step ``p**a``.

The p-adic function

    f(sum x_k p^k, sum y_l p^l) = sum_{k < l} x_k y_l p^(k+l)

on Z_p^2 has derivative ``M(x, y) = (0, x)`` everywhere, so ``df/dx = 0`` and
``df/dy = x``: differentiating in ``y`` then ``x`` gives 1, in the other order
0. Mixed second differences at the origin with steps ``p**a`` (first slot) and
``p**b`` (second slot) equal exactly ``[a < b]``.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .errors import DimensionError, DomainError, MinSmoothnessError, PrecisionError, UsageError
from .expr import evaluate, is_rational_expr, parse_expr
from .multilinear import MultilinearMap
from .padic import PAdic, PadicField
from .scalars import REAL, Field
from .taylor import DerivativeSequence

#: default real step ladder
DEFAULT_STEPS = (1e-2, 1e-3, 1e-4, 1e-5)


@dataclass(frozen=True)
class BlackBoxFn:
    """A pure map ``k^d -> k^m`` defined on the open ball ``|z - center| < radius``
    (sup norm); ``radius=None`` means everywhere."""

    fn: Callable
    in_dim: int
    out_dim: int
    field: Field
    center: tuple | None = None
    radius: float | None = None

    def contains(self, z) -> bool:
        if self.radius is None:
            return True
        c = self.center if self.center is not None else [self.field.zero()] * self.in_dim
        diff = [a - self.field.coerce(b) for a, b in zip(z, c)]
        return self.field.vec_norm(diff) < self.radius

    def __call__(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=self.field.dtype)
        if z.shape != (self.in_dim,):
            raise DimensionError(f"point of shape {z.shape}, expected ({self.in_dim},)")
        if not self.contains(z):
            raise DomainError(f"probe point {list(z)} outside the domain")
        out = np.asarray(self.fn(z), dtype=self.field.dtype).reshape(-1)
        if out.shape != (self.out_dim,):
            raise DimensionError(f"function returned shape {out.shape}")
        return out


def from_expr(e, in_dim: int, field: Field = REAL) -> BlackBoxFn:
    """Wrap one expression (or a list of them) as a black box evaluated directly."""
    exprs = [parse_expr(x) if isinstance(x, str) else x
             for x in (e if isinstance(e, (list, tuple)) else [e])]

    def fn(z):
        return [evaluate(x, list(z), field) for x in exprs]

    return BlackBoxFn(fn, in_dim, len(exprs), field)


def _vec(field, v):
    return np.asarray([field.coerce(c) for c in v], dtype=field.dtype)


def _check_step(field, t):
    if field.is_zero(t, atol=0.0):
        raise UsageError("step must be nonzero")


# -- first and second differences ----------------------------------------------

def fd_directional(f: BlackBoxFn, x, v, t) -> np.ndarray:
    """Difference quotient for ``Df(x) v``: central over archimedean fields,
    forward ``(f(x + t v) - f(x)) / t`` otherwise."""
    field = f.field
    t = field.coerce(t)
    _check_step(field, t)
    x, v = _vec(field, x), _vec(field, v)
    if field.archimedean:
        return (f(x + v * t) - f(x - v * t)) / (t + t)
    return (f(x + v * t) - f(x)) / t


def second_quotient(f: BlackBoxFn, x, v, w, t) -> np.ndarray:
    """``(f(x + tv + tw) - f(x + tv) - f(x + tw) + f(x)) / t**2``.

    Evaluated so that swapping ``v`` and ``w`` gives bit-identical results.
    """
    field = f.field
    t = field.coerce(t)
    _check_step(field, t)
    x, v, w = _vec(field, x), _vec(field, v), _vec(field, w)
    tv, tw = v * t, w * t
    outer = f(x + (tv + tw)) + f(x)
    inner = f(x + tv) + f(x + tw)
    return (outer - inner) / (t * t)


def mixed_quotient(f: BlackBoxFn, x, v, w, t, s) -> np.ndarray:
    """``(f(x + tv + sw) - f(x + tv) - f(x + sw) + f(x)) / (t s)``."""
    field = f.field
    t, s = field.coerce(t), field.coerce(s)
    _check_step(field, t)
    _check_step(field, s)
    x, v, w = _vec(field, x), _vec(field, v), _vec(field, w)
    tv, sw = v * t, w * s
    return (f(x + tv + sw) - f(x + tv) - f(x + sw) + f(x)) / (t * s)


def basis(field: Field, d: int, i: int) -> np.ndarray:
    e = field.zeros(d)
    e[i] = field.one()
    return e


def fd_second_derivative(f: BlackBoxFn, x, t, s=None) -> MultilinearMap:
    """Assemble ``H[o, i, j] = mixed_quotient(f, x, e_i, e_j, t, s)``.

    With ``s`` different from ``t`` the table is not symmetric by construction,
    so its asymmetry is informative.
    """
    field, d = f.field, f.in_dim
    s = t if s is None else s
    H = field.zeros((f.out_dim, d, d))
    for i in range(d):
        for j in range(d):
            H[:, i, j] = mixed_quotient(f, x, basis(field, d, i), basis(field, d, j), t, s)
    return MultilinearMap(field, H, d)


def symmetry_check(seq) -> dict:
    """Largest ``|D2(e_i, e_j) - D2(e_j, e_i)|`` over basis pairs.

    Accepts a :class:`DerivativeSequence` (uses its order-2 tensor) or an
    order-2 :class:`MultilinearMap` such as a finite-difference table.
    """
    if isinstance(seq, DerivativeSequence):
        if seq.order < 2:
            raise UsageError("need order >= 2")
        T = seq.tensors[2]
    else:
        T = seq
    if T.order != 2:
        raise UsageError("symmetry check needs an order-2 tensor")
    field = T.field
    worst, pair = 0, None
    for i in range(T.in_dim):
        for j in range(i + 1, T.in_dim):
            gap = field.vec_norm(T.coeffs[:, i, j] - T.coeffs[:, j, i])
            if pair is None or gap > worst:
                worst, pair = gap, (i, j)
    return {"max_asymmetry": worst, "pair": pair}


# -- convergence ladders -------------------------------------------------------

def convergence_order(steps, errors) -> float:
    """Slope of ``log(error)`` against ``log(step)`` by least squares."""
    steps = np.asarray(steps, dtype=float)
    errors = np.asarray(errors, dtype=float)
    if np.any(errors <= 0):
        return math.inf
    slope, _ = np.polyfit(np.log(steps), np.log(errors), 1)
    return float(slope)


def fd_ladder(f: BlackBoxFn, x, v, reference, steps=DEFAULT_STEPS) -> dict:
    """Directional quotients along a step ladder compared with ``reference``."""
    field = f.field
    ref = np.asarray(reference, dtype=field.dtype).reshape(-1)
    rows = []
    for t in steps:
        q = fd_directional(f, x, v, t)
        rows.append({
            "probe": [field.format(c) for c in x],
            "quotient": [field.format(c) for c in q],
            "reference": [field.format(c) for c in ref],
            "error_norm": float(field.vec_norm(q - ref)),
            "step": float(t) if field.is_real else field.format(field.coerce(t)),
        })
    order = convergence_order([float(t) for t in steps], [r["error_norm"] for r in rows]) \
        if field.is_real else None
    return {"rows": rows, "order": order}


def ladder_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["step", "error_norm", "quotient", "reference", "probe"])
    for r in rows:
        writer.writerow([r["step"], r["error_norm"], " ".join(r["quotient"]),
                         " ".join(r["reference"]), " ".join(r["probe"])])
    return buf.getvalue()


# -- smoothness policy ---------------------------------------------------------

@dataclass(frozen=True)
class SmoothnessPolicy:
    """Requirement for results that rely on symmetric second derivatives:
    order ``n`` smoothness over the reals, analyticity over any other field."""

    field: Field
    order: int = 2

    @property
    def requirement(self):
        return self.order if self.field.is_real else "analytic"

    def admits(self, exprs) -> bool:
        if self.field.is_real:
            return True
        return all(is_rational_expr(e) for e in exprs)

    def check(self, exprs, what: str = "operation"):
        exprs = list(exprs)
        if not self.admits(exprs):
            raise MinSmoothnessError(
                f"{what} over {self.field.name} requires analytic input; "
                "only rational-operation expressions are certified analytic")


# -- p-adic counterexample -------------------------------------------------------

def _padic_mod(p: int, value: int, absprec: int) -> PAdic:
    """The integer ``value`` known modulo ``p**absprec``."""
    value %= p**absprec
    if value == 0:
        return PAdic.zero(p, absprec)
    v = 0
    u = value
    while u % p == 0:
        u //= p
        v += 1
    return PAdic(p, v, u, absprec - v)


def zp_digits(z: PAdic, n: int) -> list[int]:
    """First ``n`` digits of a p-adic integer."""
    if not z.is_zero() and z.valuation < 0:
        raise DomainError(f"{z} is not in Z_p")
    if z.absolute_precision < n:
        raise PrecisionError(f"need {n} digits, value known to {z.absolute_precision}")
    return [z.digit(k) for k in range(n)]


def counterexample_value(x: PAdic, y: PAdic, precision: int) -> PAdic:
    """``sum_{k<l, k+l<N} x_k y_l p^(k+l)``, exact modulo ``p**N``."""
    p = x.prime
    xd = zp_digits(x, precision)
    yd = zp_digits(y, precision)
    total = 0
    prefix = 0  # sum_{k<l} x_k p^k, maintained as l increases
    for l in range(precision):
        total += prefix * yd[l] * p**l
        prefix += xd[l] * p**l
    return _padic_mod(p, total, precision)


def build_padic_counterexample(p: int, precision: int = 16) -> BlackBoxFn:
    """The C^1 function on Z_p^2 with derivative ``(0, x)`` everywhere."""
    field = PadicField(p, precision)

    def fn(z):
        return [counterexample_value(field.coerce(z[0]), field.coerce(z[1]), precision)]

    # Z_p is the open ball of radius p around 0
    return BlackBoxFn(fn, 2, 1, field, center=(0, 0), radius=p)


def ball_center_function(p: int, precision: int, M: Callable) -> BlackBoxFn:
    """Build ``f`` on Z_p^2 from a derivative field ``M`` by the ball-center
    recursion ``f(c_{n+1}) = f(c_n) + M(c_n) . (c_{n+1} - c_n)``, where ``c_n``
    is the point truncated to its first ``n`` digits and ``f(0) = 0``.

    ``M`` receives the truncated point as a pair of ints and returns two values
    in Q_p (ints, Fractions or PAdic).
    """
    field = PadicField(p, precision)

    def fn(z):
        xd = zp_digits(field.coerce(z[0]), precision)
        yd = zp_digits(field.coerce(z[1]), precision)
        total = PAdic.zero(p, precision)
        cx = cy = 0
        for n in range(precision):
            mx, my = M(cx, cy)
            step = p**n
            total = total + field.coerce(mx) * (xd[n] * step) + field.coerce(my) * (yd[n] * step)
            cx += xd[n] * step
            cy += yd[n] * step
        return [_truncate_abs(total, precision)]

    return BlackBoxFn(fn, 2, 1, field, center=(0, 0), radius=p)


def _truncate_abs(z: PAdic, absprec: int) -> PAdic:
    if z.absolute_precision <= absprec:
        return z
    return z + PAdic.zero(z.prime, absprec)


def lookup_table_counterexample(p: int, precision: int, depth: int, table) -> BlackBoxFn:
    """Ball-center construction for a locally constant ``M`` that depends on
    ``(x mod p**depth, y mod p**depth)`` via ``table[(xr, yr)] = (m_x, m_y)``.

    The caller chooses ``depth``; missing entries are treated as ``(0, 0)``.
    """
    mod = p**depth

    def M(cx, cy):
        return table.get((cx % mod, cy % mod), (0, 0))

    return ball_center_function(p, precision, M)


def padic_mixed_quotients(p: int, a: int, b: int, precision: int = 16):
    """Mixed quotients of the counterexample at the origin with steps
    ``(p**a, p**b)``: first with ``(e1, e2)``, then with roles swapped."""
    if precision < a + b + 2:
        raise PrecisionError(f"precision {precision} < a + b + 2 = {a + b + 2}")
    f = build_padic_counterexample(p, precision)
    field = f.field
    t, s = field.power(a), field.power(b)
    origin = [field.zero(), field.zero()]
    e1, e2 = basis(field, 2, 0), basis(field, 2, 1)
    q_xy = mixed_quotient(f, origin, e1, e2, t, s)[0]
    q_yx = mixed_quotient(f, origin, e2, e1, t, s)[0]
    return q_xy, q_yx


def counterexample_derivative_report(f: BlackBoxFn, point, a: int) -> dict:
    """Forward quotients in ``e1`` and ``e2`` against ``M(x, y) = (0, x)``.

    The quotient error in ``e2`` is at most ``max(p**-a, p**-(N - a))``: the
    step hides digits of ``x`` from position ``a`` on, and dividing by
    ``p**a`` costs ``a`` digits of absolute precision.
    """
    field = f.field
    p, N = field.prime, field.precision
    x, y = (field.coerce(c) for c in point)
    t = field.power(a)
    qx = fd_directional(f, [x, y], basis(field, 2, 0), t)[0]
    qy = fd_directional(f, [x, y], basis(field, 2, 1), t)[0]
    err_x = qx - 0
    err_y = qy - x
    return {
        "probe": [field.format(x), field.format(y)],
        "step": field.format(t),
        "quotient": [field.format(qx), field.format(qy)],
        "reference": [field.format(field.zero()), field.format(x)],
        "error_norm": max(_norm_bound(err_x), _norm_bound(err_y)),
        "intrinsic_bound": max(_pow_neg(p, a), _pow_neg(p, N - a)),
    }


def _pow_neg(p, k):
    return Fraction(1, p**k) if k >= 0 else Fraction(p ** (-k))


def _norm_bound(z: PAdic):
    """Largest possible norm of the true value: ``|z|`` if nonzero, else the
    size of the unknown tail ``p**-absprec``."""
    if z.is_zero():
        return _pow_neg(z.prime, z.absolute_precision)
    return z.norm()
