"""Dense multilinear maps ``(k^d)^n -> k^m``.

Coefficients live in an ndarray of shape ``(m, d, ..., d)`` (``n`` copies of
``d``); entry ``[o, j1, ..., jn]`` is the coefficient of ``v1[j1] * ... *
vn[jn]`` in output component ``o``. An order-0 map is a constant vector.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DimensionError, UsageError
from .scalars import Field


class MultilinearMap:
    __slots__ = ("field", "order", "in_dim", "out_dim", "coeffs")

    def __init__(self, field: Field, coeffs, in_dim: int | None = None):
        coeffs = np.asarray(coeffs)
        if coeffs.ndim < 1:
            raise DimensionError("coefficient table needs an output axis")
        order = coeffs.ndim - 1
        if order == 0:
            if in_dim is None:
                raise UsageError("order-0 maps need an explicit in_dim")
        else:
            dims = set(coeffs.shape[1:])
            if len(dims) != 1:
                raise DimensionError(f"ragged input axes {coeffs.shape[1:]}")
            d = dims.pop()
            if in_dim is not None and in_dim != d:
                raise DimensionError(f"in_dim {in_dim} does not match table {coeffs.shape}")
            in_dim = d
        if in_dim < 1 or coeffs.shape[0] < 1:
            raise DimensionError("dimensions must be positive")
        self.field = field
        self.order = order
        self.in_dim = in_dim
        self.out_dim = coeffs.shape[0]
        self.coeffs = coeffs
        coeffs.flags.writeable = False

    @classmethod
    def zero(cls, field: Field, order: int, in_dim: int, out_dim: int) -> "MultilinearMap":
        return cls(field, field.zeros((out_dim,) + (in_dim,) * order), in_dim)

    @classmethod
    def constant(cls, field: Field, value, in_dim: int) -> "MultilinearMap":
        return cls(field, field.array(list(value)), in_dim)

    @classmethod
    def from_matrix(cls, field: Field, matrix) -> "MultilinearMap":
        return cls(field, field.array(matrix))

    @classmethod
    def from_function(cls, field, order, in_dim, out_dim, fn) -> "MultilinearMap":
        """Tabulate ``fn(o, j1, ..., jn)``."""
        table = field.zeros((out_dim,) + (in_dim,) * order)
        for idx in np.ndindex(*table.shape):
            table[idx] = field.coerce(fn(*idx))
        return cls(field, table, in_dim)

    @property
    def shape(self):
        return self.coeffs.shape

    def __call__(self, *vs):
        return ml_eval(self, list(vs))

    def __add__(self, other: "MultilinearMap") -> "MultilinearMap":
        _check_same_kind(self, other)
        return MultilinearMap(self.field, self.coeffs + other.coeffs, self.in_dim)

    def __sub__(self, other: "MultilinearMap") -> "MultilinearMap":
        _check_same_kind(self, other)
        return MultilinearMap(self.field, self.coeffs - other.coeffs, self.in_dim)

    def __neg__(self):
        return MultilinearMap(self.field, -self.coeffs, self.in_dim)

    def scale(self, c) -> "MultilinearMap":
        return MultilinearMap(self.field, self.coeffs * self.field.coerce(c), self.in_dim)

    def permute_slots(self, perm) -> "MultilinearMap":
        """Map ``(v_1..v_n) -> T(v_perm[0], ..., v_perm[n-1])``."""
        inv = np.argsort(perm)
        axes = (0,) + tuple(1 + int(i) for i in inv)
        return MultilinearMap(self.field, np.transpose(self.coeffs, axes), self.in_dim)

    def equals(self, other: "MultilinearMap", atol=None, rtol=None) -> bool:
        if self.shape != other.shape or self.in_dim != other.in_dim:
            return False
        return self.field.vec_eq(self.coeffs, other.coeffs, atol, rtol)

    def is_zero(self, atol=None) -> bool:
        return all(self.field.is_zero(c, atol) for c in self.coeffs.reshape(-1))

    def to_json(self) -> dict:
        if self.field.dtype is object:
            flat = [self.field.format(c) for c in self.coeffs.reshape(-1)]
        else:
            flat = [float(c) for c in self.coeffs.reshape(-1)]
        return {"order": self.order, "in_dim": self.in_dim, "out_dim": self.out_dim,
                "coeffs": flat}

    @classmethod
    def from_json(cls, field: Field, data: dict) -> "MultilinearMap":
        shape = (data["out_dim"],) + (data["in_dim"],) * data["order"]
        flat = data["coeffs"]
        if len(flat) != math.prod(shape):
            raise DimensionError(f"expected {math.prod(shape)} coefficients, got {len(flat)}")
        table = field.array(flat).reshape(shape)
        return cls(field, table, data["in_dim"])

    def __repr__(self):
        return (f"MultilinearMap(order={self.order}, in_dim={self.in_dim}, "
                f"out_dim={self.out_dim}, field={self.field.name})")


def _check_same_kind(a: MultilinearMap, b: MultilinearMap):
    if a.order != b.order or a.in_dim != b.in_dim or a.out_dim != b.out_dim:
        raise DimensionError(f"incompatible maps {a!r} and {b!r}")


def ml_eval(T: MultilinearMap, vs) -> np.ndarray:
    """Evaluate ``T(v_1, ..., v_n)``; returns a vector of length ``out_dim``."""
    if len(vs) != T.order:
        raise DimensionError(f"order-{T.order} map given {len(vs)} arguments")
    out = T.coeffs
    for v in reversed(vs):
        v = np.asarray(v, dtype=T.coeffs.dtype)
        if v.shape != (T.in_dim,):
            raise DimensionError(f"argument of shape {v.shape}, expected ({T.in_dim},)")
        out = out @ v
    return out


def ml_eval_diag(T: MultilinearMap, y) -> np.ndarray:
    """``T(y, ..., y)``."""
    return ml_eval(T, [y] * T.order)


@dataclass(frozen=True)
class CurriedMap:
    """A linear map ``k^d -> (order-n multilinear maps)``, stored by its values
    on the standard basis."""

    components: tuple

    @property
    def in_dim(self) -> int:
        return len(self.components)

    def __call__(self, v) -> MultilinearMap:
        first = self.components[0]
        acc = first.field.zeros(first.shape)
        for c, comp in zip(v, self.components):
            acc = acc + comp.coeffs * c
        return MultilinearMap(first.field, acc, first.in_dim)

    def matrix(self):
        """For order-0 components: the ``out_dim x in_dim`` matrix."""
        return np.stack([c.coeffs for c in self.components], axis=1)


def curry_left(T: MultilinearMap) -> CurriedMap:
    """Split off the first slot: ``T(v, w_1..w_n) = curry_left(T)(v)(w_1..w_n)``."""
    if T.order < 1:
        raise UsageError("cannot curry an order-0 map")
    comps = tuple(MultilinearMap(T.field, np.ascontiguousarray(T.coeffs[:, j]), T.in_dim)
                  for j in range(T.in_dim))
    return CurriedMap(comps)


def uncurry_left(C: CurriedMap) -> MultilinearMap:
    field = C.components[0].field
    table = np.stack([c.coeffs for c in C.components], axis=1)
    return MultilinearMap(field, table, C.in_dim)


def symmetrize(T: MultilinearMap) -> MultilinearMap:
    """Average of ``T`` over all slot permutations (characteristic 0 only)."""
    n = T.order
    if n < 2:
        return T
    return permutation_sum(T).scale(Fraction(1, math.factorial(n)))


def permutation_sum(T: MultilinearMap) -> MultilinearMap:
    """``sum over permutations s of T(v_s(1), ..., v_s(n))``.

    Entries are grouped by the multiset of their indices, so the cost is
    ``d**n`` rather than ``n!`` transposes.
    """
    n, d = T.order, T.in_dim
    if n < 2:
        return T
    field = T.field
    sums: dict = {}
    for idx in itertools.product(range(d), repeat=n):
        key = tuple(sorted(idx))
        col = T.coeffs[(slice(None),) + idx]
        sums[key] = col if key not in sums else sums[key] + col
    out = field.zeros(T.coeffs.shape)
    for idx in itertools.product(range(d), repeat=n):
        key = tuple(sorted(idx))
        stab = math.prod(math.factorial(c) for c in Counter(key).values())
        out[(slice(None),) + idx] = sums[key] * field.from_int(stab)
    return MultilinearMap(field, out, d)


def is_symmetric(T: MultilinearMap, atol=None) -> bool:
    n = T.order
    for i in range(1, n):
        perm = list(range(n))
        perm[0], perm[i] = perm[i], perm[0]
        if not T.equals(T.permute_slots(perm), atol=atol):
            return False
    return True


def ml_norm_bound(T: MultilinearMap):
    """Sum of coefficient norms: an upper bound for the operator norm of ``T``
    with the sup norm on ``k^d`` and ``k^m``."""
    norm = T.field.norm
    return sum((norm(c) for c in T.coeffs.reshape(-1)), start=0)


def contract_slots(T: MultilinearMap, slot_values: dict) -> MultilinearMap:
    """Fill the slots listed in ``slot_values`` with fixed vectors, keeping the
    remaining slots in their original relative order."""
    keep = [i for i in range(T.order) if i not in slot_values]
    fixed = sorted(slot_values)
    axes = (0,) + tuple(1 + i for i in keep) + tuple(1 + i for i in fixed)
    table = np.transpose(T.coeffs, axes)
    for i in reversed(fixed):
        table = table @ np.asarray(slot_values[i], dtype=T.coeffs.dtype)
    return MultilinearMap(T.field, table, T.in_dim)


def compose_slots(Q: MultilinearMap, inner: list) -> MultilinearMap:
    """``Q(P_1(block_1), ..., P_k(block_k))`` with consecutive argument blocks.

    ``inner[i]`` must have ``out_dim == Q.in_dim``; the result has order
    ``sum(P.order)`` and input dimension shared by the ``P``.
    """
    if len(inner) != Q.order:
        raise DimensionError(f"order-{Q.order} map given {len(inner)} inner maps")
    if not inner:
        return Q
    d = inner[0].in_dim
    table = Q.coeffs
    for P in inner:
        if P.out_dim != Q.in_dim or P.in_dim != d:
            raise DimensionError("inner map dimensions do not fit")
        # contract axis 1 (the next unfilled slot of Q) with P's output axis;
        # P's input axes are appended at the end, keeping block order
        table = np.tensordot(table, P.coeffs, axes=([1], [0]))
    return MultilinearMap(Q.field, table, d)


def identity_map(field: Field, d: int) -> MultilinearMap:
    eye = field.zeros((d, d))
    for i in range(d):
        eye[i, i] = field.one()
    return MultilinearMap(field, eye, d)


def random_map(rng, field: Field, order: int, in_dim: int, out_dim: int,
               lo: int = -5, hi: int = 5, denom: int = 4) -> MultilinearMap:
    """Random map with small rational coefficients (``num/den``, ``den <= denom``)."""
    shape = (out_dim,) + (in_dim,) * order
    nums = rng.integers(lo, hi + 1, size=shape)
    dens = rng.integers(1, denom + 1, size=shape)
    table = field.zeros(shape)
    for idx in np.ndindex(*shape):
        table[idx] = field.from_fraction(Fraction(int(nums[idx]), int(dens[idx])))
    return MultilinearMap(field, table, in_dim)


__all__ = [
    "MultilinearMap", "CurriedMap", "ml_eval", "ml_eval_diag", "curry_left",
    "uncurry_left", "symmetrize", "permutation_sum", "is_symmetric",
    "ml_norm_bound", "contract_slots", "compose_slots", "identity_map",
    "random_map",
]
