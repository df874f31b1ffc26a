"""Truncated formal multilinear series.

A :class:`TaylorSeries` at ``x`` stores ``p_0, ..., p_N`` with the expansion
convention ``f(x + y) ~ sum_n p_n(y, ..., y)``. Terms need not be symmetric.

Iterated derivatives ``D^n f(x)`` live only in :class:`DerivativeSequence`;
the two conventions differ by symmetrization and a factor ``n!`` and are
bridged by :func:`to_derivatives`, :func:`from_derivatives` and
:func:`faa_di_bruno`. Every operation returns order ``min`` of the meaningful
input orders and never extrapolates.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

from .errors import BasePointError, DimensionError, UsageError
from .linalg import mat_inverse
from .multilinear import (
    MultilinearMap, compose_slots, contract_slots, identity_map, ml_eval_diag,
    ml_norm_bound, permutation_sum,
)
from .partitions import enumerate_partitions, ordered_compositions
from .scalars import Field, field_from_name

#: tolerance on base-point agreement over the reals
BASE_ATOL = 1e-9


class TaylorSeries:
    __slots__ = ("field", "base_point", "terms")

    def __init__(self, field: Field, base_point, terms):
        base_point = field.array(list(base_point)) if not isinstance(base_point, np.ndarray) \
            else base_point
        terms = list(terms)
        if not terms:
            raise UsageError("a series needs at least the constant term")
        d = base_point.shape[0]
        m = terms[0].out_dim
        for n, t in enumerate(terms):
            if t.order != n:
                raise DimensionError(f"term {n} has order {t.order}")
            if t.in_dim != d or t.out_dim != m:
                raise DimensionError(f"term {n} has dims ({t.in_dim}, {t.out_dim}), expected ({d}, {m})")
        self.field = field
        self.base_point = base_point
        self.terms = terms

    @property
    def order(self) -> int:
        return len(self.terms) - 1

    @property
    def in_dim(self) -> int:
        return self.base_point.shape[0]

    @property
    def out_dim(self) -> int:
        return self.terms[0].out_dim

    def value(self) -> np.ndarray:
        return self.terms[0].coeffs

    def jacobian(self) -> np.ndarray:
        """``p_1`` as an ``out_dim x in_dim`` matrix."""
        if self.order < 1:
            raise UsageError("series of order 0 has no linear term")
        return self.terms[1].coeffs

    def __getitem__(self, n: int) -> MultilinearMap:
        return self.terms[n]

    def __add__(self, other):
        return ts_add(self, other)

    def __sub__(self, other):
        return ts_sub(self, other)

    def __neg__(self):
        return ts_scale(self, -1)

    def __mul__(self, other):
        return ts_mul(self, other)

    def __call__(self, y):
        return ts_eval(self, y)

    def equals(self, other: "TaylorSeries", atol=None, rtol=None) -> bool:
        if self.order != other.order or self.in_dim != other.in_dim:
            return False
        if not self.field.vec_eq(self.base_point, other.base_point, atol, rtol):
            return False
        return all(a.equals(b, atol, rtol) for a, b in zip(self.terms, other.terms))

    def to_json(self) -> dict:
        return {
            "field": self.field.name,
            "base_point": _vec_json(self.field, self.base_point),
            "order": self.order,
            "terms": [t.to_json() for t in self.terms],
        }

    @classmethod
    def from_json(cls, data: dict, field: Field | None = None) -> "TaylorSeries":
        field = field or field_from_name(data["field"])
        base = field.array(data["base_point"])
        terms = [MultilinearMap.from_json(field, t) for t in data["terms"]]
        if len(terms) != data["order"] + 1:
            raise DimensionError("order does not match number of terms")
        return cls(field, base, terms)

    def __repr__(self):
        return (f"TaylorSeries(order={self.order}, in_dim={self.in_dim}, "
                f"out_dim={self.out_dim}, field={self.field.name})")


class DerivativeSequence:
    """``D^0 f(x), ..., D^N f(x)`` as symmetric multilinear maps."""

    __slots__ = ("field", "base_point", "tensors")

    def __init__(self, field: Field, base_point, tensors):
        self.field = field
        self.base_point = base_point
        self.tensors = list(tensors)

    @property
    def order(self) -> int:
        return len(self.tensors) - 1

    @property
    def in_dim(self) -> int:
        return self.base_point.shape[0]

    @property
    def out_dim(self) -> int:
        return self.tensors[0].out_dim

    def __getitem__(self, n: int) -> MultilinearMap:
        return self.tensors[n]

    def equals(self, other: "DerivativeSequence", atol=None, rtol=None) -> bool:
        if self.order != other.order:
            return False
        return all(a.equals(b, atol, rtol) for a, b in zip(self.tensors, other.tensors))

    def to_json(self) -> dict:
        return {
            "field": self.field.name,
            "base_point": _vec_json(self.field, self.base_point),
            "order": self.order,
            "tensors": [t.to_json() for t in self.tensors],
        }


def _vec_json(field, v):
    if field.dtype is object:
        return [field.format(x) for x in v]
    return [float(x) for x in v]


# -- constructors ------------------------------------------------------------

def _as_vector(field: Field, v) -> np.ndarray:
    if isinstance(v, np.ndarray) and (v.dtype == field.dtype):
        return v
    return field.array(list(v))


def constant_series(field: Field, base_point, value, order: int) -> TaylorSeries:
    base = _as_vector(field, base_point)
    value = _as_vector(field, value)
    d, m = base.shape[0], value.shape[0]
    terms = [MultilinearMap(field, value, d)]
    terms += [MultilinearMap.zero(field, n, d, m) for n in range(1, order + 1)]
    return TaylorSeries(field, base, terms)


def identity_series(field: Field, base_point, order: int) -> TaylorSeries:
    base = _as_vector(field, base_point)
    d = base.shape[0]
    terms = [MultilinearMap(field, base.copy(), d)]
    if order >= 1:
        terms.append(identity_map(field, d))
    terms += [MultilinearMap.zero(field, n, d, d) for n in range(2, order + 1)]
    return TaylorSeries(field, base, terms)


def coordinate_series(field: Field, base_point, i: int, order: int) -> TaylorSeries:
    """Series of ``x -> x[i]``."""
    base = _as_vector(field, base_point)
    d = base.shape[0]
    if not 0 <= i < d:
        raise DimensionError(f"coordinate {i} out of range for d={d}")
    terms = [MultilinearMap(field, base[i:i + 1].copy(), d)]
    if order >= 1:
        row = field.zeros((1, d))
        row[0, i] = field.one()
        terms.append(MultilinearMap(field, row, d))
    terms += [MultilinearMap.zero(field, n, d, 1) for n in range(2, order + 1)]
    return TaylorSeries(field, base, terms)


def univariate_series(field: Field, base, coeffs) -> TaylorSeries:
    """``d = m = 1`` series with ``p_n(y..y) = coeffs[n] * y**n``."""
    base = _as_vector(field, [base])
    terms = []
    for n, c in enumerate(coeffs):
        t = field.zeros((1,) + (1,) * n)
        t[(0,) * (n + 1)] = field.coerce(c)
        terms.append(MultilinearMap(field, t, 1))
    return TaylorSeries(field, base, terms)


def ts_truncate(s: TaylorSeries, order: int) -> TaylorSeries:
    if order > s.order:
        raise UsageError(f"cannot extend a series of order {s.order} to {order}")
    return TaylorSeries(s.field, s.base_point, s.terms[:order + 1])


def stack_series(parts) -> TaylorSeries:
    """Concatenate the outputs of several series sharing base point and input."""
    parts = list(parts)
    first = parts[0]
    N = min(p.order for p in parts)
    terms = [MultilinearMap(first.field, np.concatenate([p.terms[n].coeffs for p in parts], axis=0),
                            first.in_dim)
             for n in range(N + 1)]
    return TaylorSeries(first.field, first.base_point, terms)


def component_series(s: TaylorSeries, i: int) -> TaylorSeries:
    terms = [MultilinearMap(s.field, t.coeffs[i:i + 1], s.in_dim) for t in s.terms]
    return TaylorSeries(s.field, s.base_point, terms)


# -- evaluation and linear structure ------------------------------------------

def ts_eval(s: TaylorSeries, y) -> np.ndarray:
    """``sum_n p_n(y - x, ..., y - x)`` where ``x`` is the base point."""
    y = _as_vector(s.field, y)
    if y.shape != s.base_point.shape:
        raise DimensionError(f"point of shape {y.shape}, expected {s.base_point.shape}")
    h = y - s.base_point
    total = s.terms[0].coeffs
    for t in s.terms[1:]:
        total = total + ml_eval_diag(t, h)
    return total


def check_same_base(a, b, atol: float = BASE_ATOL):
    if a.in_dim != b.in_dim:
        raise DimensionError(f"input dimensions {a.in_dim} and {b.in_dim} differ")
    if not a.field.vec_eq(a.base_point, b.base_point, atol=atol, rtol=0.0):
        raise BasePointError("series are based at different points")


def ts_add(a: TaylorSeries, b: TaylorSeries) -> TaylorSeries:
    check_same_base(a, b)
    if a.out_dim != b.out_dim:
        raise DimensionError("output dimensions differ")
    N = min(a.order, b.order)
    return TaylorSeries(a.field, a.base_point, [a.terms[n] + b.terms[n] for n in range(N + 1)])


def ts_sub(a: TaylorSeries, b: TaylorSeries) -> TaylorSeries:
    check_same_base(a, b)
    if a.out_dim != b.out_dim:
        raise DimensionError("output dimensions differ")
    N = min(a.order, b.order)
    return TaylorSeries(a.field, a.base_point, [a.terms[n] - b.terms[n] for n in range(N + 1)])


def ts_scale(s: TaylorSeries, c) -> TaylorSeries:
    return TaylorSeries(s.field, s.base_point, [t.scale(c) for t in s.terms])


# -- products ----------------------------------------------------------------

def _block_product(A: np.ndarray, B: np.ndarray, rows: int, cols: int):
    """``A(v_1..v_a) . B(v_{a+1}..v_n)``: the matrix from the leading slots
    contracted with the vector from the trailing ones.

    ``A`` has shape ``(rows*cols, d^a)`` and ``B`` has shape ``(cols, d^b)``.
    Consecutive blocks are enough in the series convention, where only the
    diagonal ``p_n(y, ..., y)`` is meaningful.
    """
    A = A.reshape((rows, cols) + A.shape[1:])
    return np.tensordot(A, B, axes=([1], [0]))


def ts_matvec(A: TaylorSeries, u: TaylorSeries, rows: int, cols: int) -> TaylorSeries:
    """Series of ``x -> A(x) u(x)`` where ``A`` is matrix valued with outputs
    flattened row-major as ``rows*cols`` and ``u`` has ``cols`` outputs."""
    check_same_base(A, u)
    if A.out_dim != rows * cols or u.out_dim != cols:
        raise DimensionError("matrix/vector output dimensions do not fit")
    N = min(A.order, u.order)
    d = A.in_dim
    field = A.field
    terms = []
    for n in range(N + 1):
        acc = field.zeros((rows,) + (d,) * n)
        for a in range(n + 1):
            t = _block_product(A.terms[a].coeffs, u.terms[n - a].coeffs, rows, cols)
            acc = acc + t
        terms.append(MultilinearMap(field, acc, d))
    return TaylorSeries(field, A.base_point, terms)


def ts_mul(a: TaylorSeries, b: TaylorSeries) -> TaylorSeries:
    """Pointwise product of scalar-valued series.

    ``r_n(v_1..v_n) = sum_a p_a(v_1..v_a) q_{n-a}(v_{a+1}..v_n)``.
    """
    if a.out_dim != 1 or b.out_dim != 1:
        raise DimensionError("ts_mul needs scalar-valued series")
    return ts_matvec(a, b, 1, 1)


def ts_scalar_times(c: TaylorSeries, u: TaylorSeries) -> TaylorSeries:
    """Product of a scalar series with a vector series."""
    if c.out_dim != 1:
        raise DimensionError("first factor must be scalar valued")
    m = u.out_dim
    # diag(c) as a flattened m x m matrix series
    terms = []
    for t in c.terms:
        table = c.field.zeros((m * m,) + t.shape[1:])
        for i in range(m):
            table[i * m + i] = t.coeffs[0]
        terms.append(MultilinearMap(c.field, table, c.in_dim))
    return ts_matvec(TaylorSeries(c.field, c.base_point, terms), u, m, m)


# -- composition -------------------------------------------------------------

def _compose_term(g_terms, f_terms, n: int, field: Field, d: int, m: int) -> np.ndarray:
    acc = field.zeros((m,) + (d,) * n)
    for comp in ordered_compositions(n):
        k = len(comp)
        if k >= len(g_terms):
            continue
        inner = [f_terms[ni] for ni in comp]
        acc = acc + compose_slots(g_terms[k], inner).coeffs
    return acc


def ts_compose(g: TaylorSeries, f: TaylorSeries, atol: float = BASE_ATOL) -> TaylorSeries:
    """Series of ``g o f`` at ``f``'s base point.

    ``g`` must be based at ``f(x) = p_0``. The order-``n`` term sums
    ``q_k(p_{n_1}(...), ..., p_{n_k}(...))`` over ordered compositions
    ``n_1 + ... + n_k = n`` with consecutive argument blocks.
    """
    if g.in_dim != f.out_dim:
        raise DimensionError(f"outer input dim {g.in_dim} != inner output dim {f.out_dim}")
    if not f.field.vec_eq(g.base_point, f.value(), atol=atol, rtol=0.0):
        raise BasePointError("outer series is not based at the inner series' value")
    field = f.field
    N = min(g.order, f.order)
    d, m = f.in_dim, g.out_dim
    terms = [MultilinearMap(field, g.terms[0].coeffs, d)]
    for n in range(1, N + 1):
        terms.append(MultilinearMap(field, _compose_term(g.terms, f.terms, n, field, d, m), d))
    return TaylorSeries(field, f.base_point, terms)


def faa_di_bruno(Dg: DerivativeSequence, Df: DerivativeSequence,
                 atol: float = BASE_ATOL) -> DerivativeSequence:
    """Iterated derivatives of ``g o f`` from those of ``g`` (at ``f(x)``) and ``f``.

    ``D^n(g o f)(v_0..v_{n-1}) = sum over partitions I of
    D^k g(D^{i_0} f(v_{I_0}), ..., D^{i_{k-1}} f(v_{I_{k-1}}))``.
    """
    if Dg.in_dim != Df.out_dim:
        raise DimensionError("outer input dim does not match inner output dim")
    if not Df.field.vec_eq(Dg.base_point, Df.tensors[0].coeffs, atol=atol, rtol=0.0):
        raise BasePointError("outer derivatives are not taken at the inner value")
    field = Df.field
    N = min(Dg.order, Df.order)
    d, m = Df.in_dim, Dg.out_dim
    tensors = [MultilinearMap(field, Dg.tensors[0].coeffs, d)]
    for n in range(1, N + 1):
        acc = field.zeros((m,) + (d,) * n)
        for P in enumerate_partitions(n):
            inner = [Df.tensors[len(part)] for part in P.parts]
            t = compose_slots(Dg.tensors[P.num_parts], inner).coeffs
            flat = [i for part in P.parts for i in part]
            pos = {i: k for k, i in enumerate(flat)}
            acc = acc + np.transpose(t, (0,) + tuple(1 + pos[i] for i in range(n)))
        tensors.append(MultilinearMap(field, acc, d))
    return DerivativeSequence(field, Df.base_point, tensors)


# -- conventions -------------------------------------------------------------

def to_derivatives(s: TaylorSeries) -> DerivativeSequence:
    """``D^n f(x)(v_1..v_n) = sum over permutations s of p_n(v_s(1), ..., v_s(n))``."""
    return DerivativeSequence(s.field, s.base_point, [permutation_sum(t) for t in s.terms])


def from_derivatives(seq: DerivativeSequence) -> TaylorSeries:
    """Symmetric series ``p_n = D^n f(x) / n!``."""
    field = seq.field
    terms = [t.scale(field.from_fraction(Fraction(1, math.factorial(n))))
             for n, t in enumerate(seq.tensors)]
    return TaylorSeries(field, seq.base_point, terms)


def ts_derivative(s: TaylorSeries) -> TaylorSeries:
    """Series of ``x -> Df(x)``, order ``N - 1``.

    The output is the Jacobian flattened row-major: component ``o * d + j``
    is ``Df(x)(e_j)[o]``. The degree-``k`` term sums ``p_{k+1}`` over the
    slot that receives the direction.
    """
    if s.order < 1:
        raise UsageError("need order >= 1 to differentiate")
    field, d, m = s.field, s.in_dim, s.out_dim
    terms = []
    for k in range(s.order):
        p = s.terms[k + 1].coeffs
        acc = None
        for i in range(k + 1):
            t = np.moveaxis(p, 1 + i, 1).reshape((m * d,) + (d,) * k)
            acc = t if acc is None else acc + t
        terms.append(MultilinearMap(field, acc, d))
    return TaylorSeries(field, s.base_point, terms)


# -- change of base point ----------------------------------------------------

def ts_rebase(s: TaylorSeries, y) -> TaylorSeries:
    """Re-expand at ``x + y``: ``q_k = sum_n sum_{|I| = k} p_n`` with the slots
    outside ``I`` filled by ``y``."""
    field = s.field
    y = _as_vector(field, y)
    if y.shape != s.base_point.shape:
        raise DimensionError(f"offset of shape {y.shape}, expected {s.base_point.shape}")
    d, m, N = s.in_dim, s.out_dim, s.order
    new_terms = []
    for k in range(N + 1):
        acc = field.zeros((m,) + (d,) * k)
        for n in range(k, N + 1):
            p = s.terms[n]
            for I in itertools.combinations(range(n), k):
                fixed = {i: y for i in range(n) if i not in I}
                acc = acc + contract_slots(p, fixed).coeffs
        new_terms.append(MultilinearMap(field, acc, d))
    return TaylorSeries(field, s.base_point + y, new_terms)


# -- reversion ---------------------------------------------------------------

def ts_reversion(p: TaylorSeries, order: int | None = None) -> TaylorSeries:
    """Compositional inverse of ``p`` through ``order``.

    The result is based at ``p``'s value and maps back to ``p``'s base point;
    ``q_1 = p_1^{-1}`` and each higher ``q_n`` cancels the degree-``n`` part of
    ``q o p``.
    """
    if p.in_dim != p.out_dim:
        raise DimensionError("reversion needs a square series")
    N = p.order if order is None else order
    if N > p.order:
        raise UsageError(f"requested order {N} exceeds series order {p.order}")
    if N < 1:
        raise UsageError("reversion needs order >= 1")
    field, d = p.field, p.in_dim
    Linv = MultilinearMap(field, mat_inverse(field, p.jacobian()), d)
    q_terms = [MultilinearMap(field, p.base_point.copy(), d), Linv]
    for n in range(2, N + 1):
        trial = q_terms + [MultilinearMap.zero(field, n, d, d)]
        rest = MultilinearMap(field, _compose_term(trial, p.terms, n, field, d, d), d)
        q_terms.append(compose_slots(-rest, [Linv] * n))
    base = p.value().copy()
    return TaylorSeries(field, base, q_terms)


# -- radius ------------------------------------------------------------------

def radius_estimate(s: TaylorSeries) -> float:
    """``1 / max_n bound(p_n)**(1/n)`` over ``1 <= n <= N``.

    A heuristic from finitely many terms using the coefficient-sum norm bound;
    it is not the true radius of convergence.
    """
    if s.order < 1:
        raise UsageError("need order >= 1")
    worst = 0.0
    for n in range(1, s.order + 1):
        b = float(ml_norm_bound(s.terms[n]))
        if b > 0:
            worst = max(worst, b ** (1.0 / n))
    return math.inf if worst == 0 else 1.0 / worst
