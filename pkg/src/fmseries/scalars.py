"""Normed fields used as scalars throughout the package.

A :class:`Field` bundles construction, comparison and norm for one kind of
scalar. Elements themselves are ordinary Python objects supporting ``+ - * /``
(``Fraction``, ``float`` or :class:`~fmseries.padic.PAdic`), so tensors can be
stored in numpy arrays and contracted with the usual numpy machinery.

All provided fields have characteristic 0, so averaging over slot permutations
(symmetrization) is always available. Over a field of characteristic 2 such as
F_2((t)) a bilinear map need not have a symmetric representative; no such field
is provided.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational

import numpy as np

from .errors import FieldMismatchError, ParseError


class Field:
    """Abstract normed field of characteristic 0."""

    name: str = "abstract"
    characteristic = 0
    exact = True
    archimedean = True
    #: True for the real numbers (complete archimedean); gates exp/log and the
    #: finite-order smoothness policy.
    is_real = False
    dtype = object

    def zero(self):
        return self.from_int(0)

    def one(self):
        return self.from_int(1)

    def from_int(self, n: int):
        raise NotImplementedError

    def from_fraction(self, q: Fraction):
        raise NotImplementedError

    def coerce(self, x):
        """Convert ints, Fractions or decimal strings into this field."""
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, int):
            return self.from_int(x)
        if isinstance(x, Rational):
            return self.from_fraction(Fraction(x))
        return self._coerce_other(x)

    def _coerce_other(self, x):
        raise FieldMismatchError(f"cannot convert {x!r} into {self.name}")

    def parse(self, text: str):
        raise NotImplementedError

    def format(self, x) -> str:
        return str(x)

    def norm(self, x):
        raise NotImplementedError

    def eq(self, a, b, atol=None, rtol=None) -> bool:
        return a == b

    def is_zero(self, x, atol=None) -> bool:
        return self.eq(x, self.zero(), atol=atol, rtol=0.0)

    def array(self, values) -> np.ndarray:
        """Coerce a nested sequence into an ndarray of field elements."""
        arr = np.asarray(values, dtype=object)
        out = np.empty(arr.shape, dtype=self.dtype)
        flat_in = arr.reshape(-1)
        flat_out = out.reshape(-1)
        for i, v in enumerate(flat_in):
            flat_out[i] = self.coerce(v)
        return out

    def zeros(self, shape) -> np.ndarray:
        out = np.empty(shape, dtype=self.dtype)
        # one shared object is fine: elements are immutable
        out.fill(self.zero())
        return out

    def vec_norm(self, v) -> float:
        """Sup norm on k^d."""
        v = np.asarray(v, dtype=object).reshape(-1)
        if v.size == 0:
            return 0
        return max(self.norm(x) for x in v)

    def vec_eq(self, a, b, atol=None, rtol=None) -> bool:
        a = np.asarray(a, dtype=object).reshape(-1)
        b = np.asarray(b, dtype=object).reshape(-1)
        if a.shape != b.shape:
            return False
        return all(self.eq(x, y, atol, rtol) for x, y in zip(a, b))

    def __eq__(self, other):
        return type(self) is type(other) and self.__dict__ == other.__dict__

    def __hash__(self):
        return hash((type(self), tuple(sorted(self.__dict__.items()))))

    def __repr__(self):
        return f"{type(self).__name__}()"


class RationalField(Field):
    """Exact rationals backed by :class:`fractions.Fraction`, archimedean norm."""

    name = "rational"

    def from_int(self, n):
        return Fraction(n)

    def from_fraction(self, q):
        return Fraction(q)

    def _coerce_other(self, x):
        if isinstance(x, float):
            return Fraction(x)
        return super()._coerce_other(x)

    def parse(self, text):
        """Parse ``"n/d"``, an integer, or a finite decimal, exactly."""
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad rational literal {text!r}") from exc

    def format(self, x):
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def norm(self, x):
        return abs(Fraction(x))


class RealField(Field):
    """IEEE binary64 reals with a mixed absolute/relative equality test."""

    name = "real"
    exact = False
    is_real = True
    dtype = np.float64

    def __init__(self, atol: float = 1e-9, rtol: float = 1e-9):
        self.atol = atol
        self.rtol = rtol

    def from_int(self, n):
        return float(n)

    def from_fraction(self, q):
        return float(q)

    def _coerce_other(self, x):
        if isinstance(x, (float, np.floating)):
            return float(x)
        return super()._coerce_other(x)

    def parse(self, text):
        try:
            if "/" in text:
                return float(Fraction(text.strip()))
            return float(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad real literal {text!r}") from exc

    def format(self, x):
        return repr(float(x))

    def norm(self, x):
        return abs(float(x))

    def eq(self, a, b, atol=None, rtol=None):
        atol = self.atol if atol is None else atol
        rtol = self.rtol if rtol is None else rtol
        a, b = float(a), float(b)
        return abs(a - b) <= atol + rtol * max(abs(a), abs(b))

    def array(self, values):
        return np.array(values, dtype=np.float64)

    def zeros(self, shape):
        return np.zeros(shape)

    def vec_norm(self, v):
        v = np.asarray(v, dtype=np.float64)
        return float(np.max(np.abs(v))) if v.size else 0.0

    def __repr__(self):
        return f"RealField(atol={self.atol}, rtol={self.rtol})"


RATIONAL = RationalField()
REAL = RealField()


def field_from_name(selector: str, precision: int | None = None) -> Field:
    """Build a field from a selector: ``rational``, ``real`` or ``padic:p``."""
    selector = selector.strip().lower()
    if selector in ("rational", "q", "qq"):
        return RATIONAL
    if selector in ("real", "r", "float"):
        return REAL
    if selector.startswith("padic"):
        from .padic import PadicField, DEFAULT_PRECISION

        parts = selector.split(":")
        if len(parts) < 2 or not parts[1]:
            raise ParseError("padic selector needs a prime, e.g. padic:7")
        try:
            p = int(parts[1])
            if len(parts) > 2:
                precision = int(parts[2])
        except ValueError as exc:
            raise ParseError(f"bad padic selector {selector!r}") from exc
        return PadicField(p, DEFAULT_PRECISION if precision is None else precision)
    raise ParseError(f"unknown field {selector!r}")
