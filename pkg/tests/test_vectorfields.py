from fractions import Fraction

import numpy as np
import pytest

from fmseries.errors import DimensionError, MinSmoothnessError, NonInvertibleDerivativeError
from fmseries.padic import PadicField
from fmseries.scalars import RATIONAL, REAL
from fmseries.vectorfields import (
    BracketField, ExprField, PulledBackField, check_pullback_bracket, compose_maps,
    lie_bracket, pullback,
)
from fmseries.verify import random_polynomial, random_vector, random_vector_field

F = Fraction


def rpoint(rng, d):
    return [F(int(rng.integers(-3, 4)), int(rng.integers(1, 3))) for _ in range(d)]


def test_bracket_with_itself_vanishes():
    V = ExprField(["x1*x2 + 1", "x1^2 - x2/3"])
    assert np.all(lie_bracket(V, V, [F(2), F(5)]) == 0)


def test_hand_computed_bracket():
    V, W = ExprField(["1", "0"]), ExprField(["0", "x1"])
    for x in ([0.0, 0.0], [1.5, -2.0]):
        assert np.allclose(lie_bracket(V, W, x, REAL), [0.0, 1.0], atol=0, rtol=0)


def test_bracket_matches_explicit_jacobians():
    # V = (x2^2, x1 x2), W = (x1, x1 + x2^3)
    V = ExprField(["x2^2", "x1*x2"])
    W = ExprField(["x1", "x1 + x2^3"])
    x1, x2 = F(2, 3), F(-1, 2)
    DV = np.array([[0, 2 * x2], [x2, x1]], dtype=object)
    DW = np.array([[1, 0], [1, 3 * x2**2]], dtype=object)
    Vx = np.array([x2**2, x1 * x2], dtype=object)
    Wx = np.array([x1, x1 + x2**3], dtype=object)
    assert np.array_equal(lie_bracket(V, W, [x1, x2]), DW @ Vx - DV @ Wx)


def test_bilinearity():
    rng = np.random.default_rng(0)
    for _ in range(15):
        d = int(rng.integers(1, 4))
        U, V, W = (random_vector_field(rng, d) for _ in range(3))
        a, b = F(int(rng.integers(-3, 4)), 2), F(int(rng.integers(-3, 4)), 3)
        comb = ExprField([u * a + v * b for u, v in zip(U.components, V.components)])
        x = rpoint(rng, d)
        assert np.array_equal(lie_bracket(comb, W, x),
                              lie_bracket(U, W, x) * a + lie_bracket(V, W, x) * b)
        assert np.array_equal(lie_bracket(W, comb, x),
                              lie_bracket(W, U, x) * a + lie_bracket(W, V, x) * b)


def test_antisymmetry_and_jacobi():
    rng = np.random.default_rng(1)
    for _ in range(20):
        d = int(rng.integers(1, 4))
        U, V, W = (random_vector_field(rng, d) for _ in range(3))
        x = rpoint(rng, d)
        assert np.all(lie_bracket(U, V, x) + lie_bracket(V, U, x) == 0)
        total = (BracketField(U, BracketField(V, W))(x) + BracketField(V, BracketField(W, U))(x)
                 + BracketField(W, BracketField(U, V))(x))
        assert np.all(total == 0)


def test_bracket_field_value_equals_lie_bracket():
    rng = np.random.default_rng(2)
    V, W = random_vector_field(rng, 2), random_vector_field(rng, 2)
    x = rpoint(rng, 2)
    assert np.array_equal(BracketField(V, W)(x), lie_bracket(V, W, x))


# -- pullback --------------------------------------------------------------------

def test_pullback_identity():
    V = ExprField(["x1^2 + x2", "x1 - 3*x2"])
    x = [F(1, 2), F(2)]
    assert np.array_equal(pullback(["x1", "x2"], V, x), V(x))


def test_pullback_linear_map():
    A = np.array([[F(2), F(1)], [F(1), F(1)]], dtype=object)
    Ainv = np.array([[F(1), F(-1)], [F(-1), F(2)]], dtype=object)
    f = ["2*x1 + x2", "x1 + x2"]
    V = ExprField(["x1*x2", "x2^2 - x1"])
    x = np.array([F(1, 3), F(-2)], dtype=object)
    assert np.array_equal(pullback(f, V, x), Ainv @ V(A @ x))


def test_pullback_singular_jacobian():
    V = ExprField(["1", "1"])
    with pytest.raises(NonInvertibleDerivativeError):
        pullback(["x1^2", "x2"], V, [0, 1])
    with pytest.raises(NonInvertibleDerivativeError):
        pullback(["x1^2", "x2"], V, [0.0, 1.0], REAL)


def test_pullback_dimension_check():
    with pytest.raises(DimensionError):
        PulledBackField(["x1", "x2"], ExprField(["1"]))


def _diffeo(rng, d):
    xs = [f"x{i + 1}" for i in range(d)]
    return ExprField([f"{xs[i]} + ({random_polynomial(rng, d)}) / 8" for i in range(d)])


def test_pullback_chain_rule_reals():
    rng = np.random.default_rng(3)
    checked = 0
    while checked < 15:
        d = int(rng.integers(1, 4))
        f, g = _diffeo(rng, d), _diffeo(rng, d)
        V = random_vector_field(rng, d)
        x = rng.uniform(-0.5, 0.5, size=d)
        try:
            lhs = pullback(compose_maps(f, g), V, x, REAL)
            rhs = PulledBackField(g, PulledBackField(f, V))(x, REAL)
        except NonInvertibleDerivativeError:
            continue
        assert REAL.vec_norm(lhs - rhs) <= 1e-8 * max(1.0, REAL.vec_norm(lhs))
        checked += 1


def test_pullback_chain_rule_exact():
    rng = np.random.default_rng(4)
    checked = 0
    while checked < 10:
        d = int(rng.integers(1, 3))
        f, g = _diffeo(rng, d), _diffeo(rng, d)
        V = random_vector_field(rng, d)
        x = rpoint(rng, d)
        try:
            lhs = pullback(compose_maps(f, g), V, x)
            rhs = PulledBackField(g, PulledBackField(f, V))(x)
        except NonInvertibleDerivativeError:
            continue
        assert np.array_equal(lhs, rhs)
        checked += 1


# -- pullback commutes with the bracket ------------------------------------------

def test_check_linear_f_exact():
    V, W = ExprField(["x1*x2", "x1 - x2^2"]), ExprField(["x2", "x1^3"])
    rep = check_pullback_bracket(["3*x1 - x2", "x1 + 2*x2"], V, W, [F(1), F(-1, 2)])
    assert rep["exact_match"] and rep["error_norm"] == 0 and rep["cancel_symm_residual"] == 0


def test_check_random_polynomial_exact():
    rng = np.random.default_rng(5)
    checked = 0
    while checked < 15:
        f = _diffeo(rng, 2)
        V, W = random_vector_field(rng, 2, degree=3), random_vector_field(rng, 2, degree=3)
        x = rpoint(rng, 2)
        try:
            rep = check_pullback_bracket(f, V, W, x)
        except NonInvertibleDerivativeError:
            continue
        assert rep["exact_match"] and rep["cancel_symm_residual"] == 0
        checked += 1


def test_check_real_example():
    V = ExprField(["x1*x2 + exp(x2)", "x1 - x2^3"])
    W = ExprField(["x2^2 + 1", "log(2 + x1)"])
    rep = check_pullback_bracket(["x1 + x2^2", "x2"], V, W, [0.3, 0.7], REAL)
    assert rep["error_norm"] <= 1e-8
    assert rep["cancel_symm_residual"] <= 1e-12
    assert set(rep) >= {"lhs", "rhs", "error_norm", "cancel_symm_residual"}


def test_policy_gate_padic():
    P = PadicField(5, 20)
    V, W = ExprField(["x1*x2", "x1 - x2^3"]), ExprField(["x2^2 + 1", "x1"])
    with pytest.raises(MinSmoothnessError):
        check_pullback_bracket(["exp(x1)", "x2"], V, W, [1, 2], P)
    with pytest.raises(MinSmoothnessError):
        check_pullback_bracket(["x1 + x2^2", "x2"], ExprField(["exp(x1)", "1"]), W, [1, 2], P)
    rep = check_pullback_bracket(["x1 + x2^2", "x2/(1 + 5*x1)"], V, W, [1, 2], P)
    assert rep["exact_match"] and rep["cancel_symm_residual"] == 0


def test_real_field_admits_transcendental():
    V, W = ExprField(["exp(x1)", "x2"]), ExprField(["1", "x1*x2"])
    rep = check_pullback_bracket(["exp(x1) + x2", "x2 - x1^2"], V, W, [0.1, 0.2], REAL)
    assert rep["error_norm"] <= 1e-8
