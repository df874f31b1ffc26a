import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fmseries.errors import DimensionError, DomainError, FieldMismatchError, ParseError, UsageError
from fmseries.expr import (
    Const, Exp, Recip1m, Var, deriv1, evaluate, is_rational_expr, parse_expr,
    partial_derivative, substitute, taylor_at, variables,
)
from fmseries.multilinear import symmetrize
from fmseries.padic import PadicField
from fmseries.scalars import RATIONAL, REAL
from fmseries.taylor import to_derivatives, ts_add, ts_compose, ts_mul
from fmseries.verify import random_polynomial

from oracles import poly_eval, poly_partial, random_poly

F = Fraction


def poly_to_expr(P: dict, d: int):
    xs = variables(d)
    e = Const(F(0))
    for exps, c in P.items():
        term = Const(F(c))
        for i, k in enumerate(exps):
            for _ in range(k):
                term = term * xs[i]
        e = e + term
    return e


def test_parse_basic_syntax():
    e = parse_expr("x1*x2 + exp(x1)")
    assert e == Var(0) * Var(1) + Exp(Var(0))
    assert parse_expr("x^2") == parse_expr("x1**2")
    assert parse_expr("0.1").value == F(1, 10)
    assert parse_expr("-x1").__class__.__name__ == "Neg"
    assert parse_expr("recip1m(x1)") == Recip1m(Var(0))


@pytest.mark.parametrize("bad", ["x1*(", "y1", "x0", "sin(x1)", "x1**x2", "x1 if x2 else 0",
                                 "x1**0.5", ""])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_expr(bad)


def test_mixed_partial_of_product():
    s = taylor_at("x1*x2", [0, 0], 2)
    S = symmetrize(s.terms[2])
    u, w = [F(2), F(3)], [F(5), F(7)]
    assert S(u, w)[0] == (u[0] * w[1] + u[1] * w[0]) / 2
    D = to_derivatives(s)
    assert partial_derivative(D, (1, 1)) == 1
    assert partial_derivative(D, (0, 0)) == 0


def test_recip1m_geometric():
    s = taylor_at(Recip1m(Var(0)), [0], 6)
    assert [t.coeffs.reshape(-1)[0] for t in s.terms] == [1] * 7


def test_exp_maclaurin_over_reals():
    s = taylor_at("exp(x1)", [0.0], 8, REAL)
    for n, t in enumerate(s.terms):
        assert abs(t.coeffs.reshape(-1)[0] - 1 / math.factorial(n)) <= 1e-12


def test_partial_derivative_examples():
    D = to_derivatives(taylor_at("x1^2*x2", [F(1, 2), 3], 3))
    assert partial_derivative(D, (2, 1)) == 2
    assert partial_derivative(D, (0, 0)) == F(3, 4)
    with pytest.raises(UsageError):
        partial_derivative(D, (2, 2))
    with pytest.raises(DimensionError):
        partial_derivative(D, (1,))


def test_deriv1_examples():
    D = to_derivatives(taylor_at("1/(1-x)", [0], 10))
    assert [deriv1(D, n) for n in range(11)] == [math.factorial(n) for n in range(11)]
    C = to_derivatives(taylor_at("7/3", [F(2)], 4))
    assert [deriv1(C, n) for n in range(1, 5)] == [0] * 4
    for base in (F(0), F(-2, 3), F(5)):
        assert deriv1(to_derivatives(taylor_at("x^3", [base], 4)), 3) == 6
    with pytest.raises(DimensionError):
        deriv1(to_derivatives(taylor_at("x1*x2", [0, 0], 2)), 1)


def test_partials_match_polynomial_oracle():
    rng = np.random.default_rng(0)
    for _ in range(20):
        d = int(rng.integers(1, 4))
        P = random_poly(rng, d, 4)
        x = [F(int(rng.integers(-3, 4)), int(rng.integers(1, 3))) for _ in range(d)]
        D = to_derivatives(taylor_at(poly_to_expr(P, d), x, 4))
        for n in range(5):
            for alpha in np.ndindex(*(n + 1,) * d):
                if sum(alpha) != n:
                    continue
                assert partial_derivative(D, alpha) == poly_eval(poly_partial(P, alpha), x)


def test_rational_function_series_exact():
    # 1/(1 - x1 - x2) has p_n(y..y) = (y1 + y2)^n
    s = taylor_at("1/(1 - x1 - x2)", [0, 0], 5)
    y = [F(1, 3), F(1, 5)]
    for n, t in enumerate(s.terms):
        assert t(*[y] * n)[0] == (y[0] + y[1]) ** n


def test_homomorphism_add_mul():
    rng = np.random.default_rng(1)
    for _ in range(20):
        d = int(rng.integers(1, 3))
        a, b = random_polynomial(rng, d), random_polynomial(rng, d)
        x = [F(int(rng.integers(-3, 4)), 2) for _ in range(d)]
        sa, sb = taylor_at(a, x, 3), taylor_at(b, x, 3)
        assert taylor_at(a + b, x, 3).equals(ts_add(sa, sb))
        assert taylor_at(a * b, x, 3).equals(ts_mul(sa, sb))


def test_chain_agreement():
    rng = np.random.default_rng(2)
    for _ in range(15):
        f = random_polynomial(rng, 2)
        x = [F(int(rng.integers(-3, 4)), 3) for _ in range(2)]
        fx = evaluate(f, x)
        if fx == 1:
            continue
        g = Recip1m(Var(0)) * Var(0) + Var(0) ** 2
        lhs = taylor_at(substitute(g, [f]), x, 4)
        rhs = ts_compose(taylor_at(g, [fx], 4), taylor_at(f, x, 4))
        assert lhs.equals(rhs)


def test_padic_rational_expressions_exact():
    P = PadicField(5, 20)
    s = taylor_at("1/(1 - x1)", [0], 5, P)
    assert all(t.coeffs.reshape(-1)[0] == P.one() for t in s.terms)
    q = taylor_at("x1^2 + 3*x1*x2", [F(1, 5), 2], 2, P)
    assert q.value()[0] == P.from_fraction(F(1, 25) + F(6, 5))


def test_transcendental_rejected_off_reals():
    assert not is_rational_expr(parse_expr("exp(x1) + 1"))
    assert is_rational_expr(parse_expr("1/(1 + x1^2)"))
    with pytest.raises(FieldMismatchError):
        taylor_at("exp(x1)", [0], 2)
    with pytest.raises(FieldMismatchError):
        taylor_at("log(1 + x1)", [0], 2, PadicField(3))


def test_domain_errors():
    with pytest.raises(DomainError):
        taylor_at("1/x1", [0], 2)
    with pytest.raises(DomainError):
        taylor_at("log(x1)", [-1.0], 2, REAL)
    with pytest.raises(DomainError):
        taylor_at("recip1m(x1)", [1], 2)
    with pytest.raises(DomainError):
        evaluate(parse_expr("1/(x1 - 2)"), [2])
    with pytest.raises(DimensionError):
        taylor_at("x3", [0, 0], 1)


def test_evaluate_matches_series_value():
    for text, x in [("x1/(2 + x2) - x1^3", [F(1, 2), F(3)]), ("(x1 - x2)^-2", [F(1), F(4)])]:
        assert evaluate(parse_expr(text), x) == taylor_at(text, x, 0).value()[0]
    v = evaluate(parse_expr("exp(x1)*log(x2)"), [0.5, 2.0], REAL)
    assert v == pytest.approx(math.exp(0.5) * math.log(2.0), rel=1e-15)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_series_of_polynomial_evaluates_exactly(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(1, 3))
    P = random_poly(rng, d, 3)
    x = [F(int(rng.integers(-3, 4)), int(rng.integers(1, 3))) for _ in range(d)]
    y = [F(int(rng.integers(-3, 4)), int(rng.integers(1, 3))) for _ in range(d)]
    s = taylor_at(poly_to_expr(P, d), x, 3)
    assert s(y)[0] == poly_eval(P, y)
