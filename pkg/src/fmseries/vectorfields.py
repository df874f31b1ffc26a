"""Vector fields, Lie brackets and pullbacks computed from truncated series.

Every field can produce its own Taylor series at a point, so brackets and
pullbacks are again fields and can be nested (Jacobi identity, chain rule).
Jacobians always come from series data, never from finite differences.
"""
from __future__ import annotations

import numpy as np

from .calculus import SmoothnessPolicy
from .errors import DimensionError
from .expr import evaluate, parse_expr, substitute, taylor_at
from .linalg import REAL_COND_LIMIT, mat_inverse
from .multilinear import MultilinearMap
from .scalars import RATIONAL, Field
from .taylor import (
    TaylorSeries, to_derivatives, ts_compose, ts_derivative, ts_matvec, ts_sub,
)


class VectorField:
    """A map ``k^d -> k^d`` that can expand itself as a series at any point."""

    dim: int

    def series(self, x, order: int, field: Field) -> TaylorSeries:
        raise NotImplementedError

    def __call__(self, x, field: Field = RATIONAL) -> np.ndarray:
        return self.series(x, 0, field).value()

    def expressions(self) -> list:
        """Every expression this field is built from (for the smoothness gate)."""
        raise NotImplementedError


class ExprField(VectorField):
    def __init__(self, components):
        comps = [parse_expr(c) if isinstance(c, str) else c for c in components]
        self.components = tuple(comps)
        self.dim = len(comps)

    def series(self, x, order, field):
        if len(x) != self.dim:
            raise DimensionError(f"point of dimension {len(x)} for a field on k^{self.dim}")
        return taylor_at(list(self.components), x, order, field)

    def __call__(self, x, field=RATIONAL):
        return field.array([evaluate(c, list(x), field) for c in self.components])

    def expressions(self):
        return list(self.components)

    def __repr__(self):
        return "ExprField(" + ", ".join(str(c) for c in self.components) + ")"


class BracketField(VectorField):
    """``[V, W](x) = DW(x) V(x) - DV(x) W(x)``."""

    def __init__(self, V: VectorField, W: VectorField):
        if V.dim != W.dim:
            raise DimensionError("fields live on different spaces")
        self.V, self.W = V, W
        self.dim = V.dim

    def series(self, x, order, field):
        d = self.dim
        V1 = self.V.series(x, order + 1, field)
        W1 = self.W.series(x, order + 1, field)
        dW_V = ts_matvec(ts_derivative(W1), V1, d, d)
        dV_W = ts_matvec(ts_derivative(V1), W1, d, d)
        return ts_sub(dW_V, dV_W)

    def expressions(self):
        return self.V.expressions() + self.W.expressions()


class PulledBackField(VectorField):
    """``x -> Df(x)^{-1} V(f(x))`` for a local diffeomorphism ``f``."""

    def __init__(self, f, V: VectorField, cond_limit: float = REAL_COND_LIMIT):
        self.f = ExprField(f) if not isinstance(f, ExprField) else f
        if self.f.dim != V.dim:
            raise DimensionError("diffeomorphism and field dimensions differ")
        self.V = V
        self.dim = V.dim
        self.cond_limit = cond_limit

    def series(self, x, order, field):
        d = self.dim
        fs = self.f.series(x, order + 1, field)
        J = ts_derivative(fs)  # order `order`
        Jinv = mat_inverse(field, J.value().reshape(d, d), self.cond_limit)
        fx = fs.value()
        Vf = ts_compose(self.V.series(fx, order, field), _truncate(fs, order))
        return _solve_series(J, Vf, Jinv)

    def expressions(self):
        return self.f.expressions() + self.V.expressions()


def _truncate(s: TaylorSeries, order: int) -> TaylorSeries:
    return TaylorSeries(s.field, s.base_point, s.terms[:order + 1])


def _solve_series(J: TaylorSeries, b: TaylorSeries, Jinv) -> TaylorSeries:
    """Series ``u`` with ``J(x) u(x) = b(x)``, solved degree by degree."""
    field, d = b.field, b.out_dim
    N = min(J.order, b.order)
    terms = []
    for n in range(N + 1):
        zero_n = MultilinearMap.zero(field, n, b.in_dim, d)
        trial = TaylorSeries(field, b.base_point, terms + [zero_n])
        JU = ts_matvec(_truncate(J, n), trial, d, d)
        residual = b.terms[n] - JU.terms[n]
        table = np.tensordot(Jinv, residual.coeffs, axes=([1], [0]))
        terms.append(MultilinearMap(field, table, b.in_dim))
    return TaylorSeries(field, b.base_point, terms)


def lie_bracket(V: VectorField, W: VectorField, x, field: Field = RATIONAL) -> np.ndarray:
    """``DW(x) V(x) - DV(x) W(x)`` with Jacobians from order-1 series."""
    sV = V.series(x, 1, field)
    sW = W.series(x, 1, field)
    return sW.jacobian() @ sV.value() - sV.jacobian() @ sW.value()


def pullback(f, V: VectorField, x, field: Field = RATIONAL,
             cond_limit: float = REAL_COND_LIMIT) -> np.ndarray:
    """``Df(x)^{-1} V(f(x))``; raises if ``Df(x)`` is singular."""
    return PulledBackField(f, V, cond_limit).series(x, 0, field).value()


def compose_maps(f, g) -> ExprField:
    """The map ``f o g`` as expressions (substitutes ``g`` into ``f``)."""
    f = f if isinstance(f, ExprField) else ExprField(f)
    g = g if isinstance(g, ExprField) else ExprField(g)
    return ExprField([substitute(c, g.components) for c in f.components])


def check_pullback_bracket(f, V: VectorField, W: VectorField, x,
                           field: Field = RATIONAL) -> dict:
    """Compare ``pullback(f, [V, W])`` with ``[pullback f V, pullback f W]`` at ``x``.

    Also reports ``D2f(x)(a, b) - D2f(x)(b, a)`` for the pulled-back vectors
    ``a, b``, the second-order term whose vanishing makes the two agree.
    """
    f = f if isinstance(f, ExprField) else ExprField(f)
    policy = SmoothnessPolicy(field, order=2)
    policy.check(f.expressions() + V.expressions() + W.expressions(),
                 "pullback/bracket check")
    lhs = pullback(f, BracketField(V, W), x, field)
    PV, PW = PulledBackField(f, V), PulledBackField(f, W)
    rhs = lie_bracket(PV, PW, x, field)
    a, b = PV(x, field), PW(x, field)
    D2 = to_derivatives(f.series(x, 2, field)).tensors[2]
    # (D2 - D2^T)(a, b) rather than two evaluations, so float rounding in the
    # contractions is not mistaken for asymmetry of the tensor
    skew = MultilinearMap(field, D2.coeffs - np.swapaxes(D2.coeffs, 1, 2), D2.in_dim)
    residual = skew(a, b)
    return {
        "lhs": [field.format(c) for c in lhs],
        "rhs": [field.format(c) for c in rhs],
        "error_norm": float(field.vec_norm(lhs - rhs)),
        "cancel_symm_residual": float(field.vec_norm(residual)),
        "exact_match": bool(field.vec_eq(lhs, rhs, atol=0.0, rtol=0.0)),
    }


def as_field(components) -> VectorField:
    if isinstance(components, VectorField):
        return components
    return ExprField(components)


__all__ = [
    "VectorField", "ExprField", "BracketField", "PulledBackField", "lie_bracket",
    "pullback", "compose_maps", "check_pullback_bracket", "as_field",
]
