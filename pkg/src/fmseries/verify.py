"""Seeded property suites shared by the CLI and the test-suite.

Each suite returns a list of case records ``{"case", "passed", ...}``; the
records for a fixed seed are identical across runs.
"""
from __future__ import annotations

from collections import Counter
from fractions import Fraction

import numpy as np

from .calculus import fd_ladder, from_expr, second_quotient
from .errors import UsageError
from .expr import Const, taylor_at, variables
from .multilinear import MultilinearMap, random_map
from .partitions import bell_number, enumerate_partitions, extend_partition
from .scalars import RATIONAL, REAL, Field
from .taylor import (
    TaylorSeries, faa_di_bruno, identity_series, to_derivatives, ts_compose, ts_eval,
    ts_rebase, ts_reversion,
)
from .vectorfields import BracketField, ExprField, check_pullback_bracket

DEFAULT_SEED = 42

#: real expressions with their probe points for the finite-difference oracle
ORACLE_CASES = (
    ("x1*x2 + exp(x1)", (0.3, 0.7)),
    ("exp(x1*x2)", (0.5, 0.4)),
    ("log(1 + x1^2 + x2^2)", (0.6, 0.2)),
    ("1/(1 - x1*x2)", (0.2, 0.3)),
    ("x1^3/6 - x1*x2^2/3 + x2", (0.8, -0.4)),
    ("exp(x1) * log(2 + x2)", (0.2, 0.3)),
    ("x1/(1 + x2^2)", (0.7, 0.5)),
    ("(x1 + x2)^4 / 10", (0.4, 0.3)),
    ("exp(-x1^2 - x2^2)", (0.5, 0.5)),
    ("log(x1) + log(x2)", (1.2, 0.8)),
    ("x1*exp(x2) - x2*exp(x1)", (0.3, -0.2)),
    ("1/(x1^2 + x2^2)", (1.5, 1.2)),
    ("exp(x1 - x2/2)", (0.1, 0.2)),
    ("log(1 + exp(x1 - x2))", (0.4, 0.9)),
    ("(1 + x1)^5 * x2^2 / 20", (0.2, 0.6)),
    ("x1^2*x2^3/10", (0.5, 0.6)),
    ("exp(x1)/(1 + x2)", (0.6, 0.5)),
    ("log(3 + x1*x2 - x2^2)", (0.5, 0.5)),
    ("(x1 - x2)^3/6 + exp(x2/2)", (0.4, 0.1)),
    ("x1*x2/(2 + x1 + x2)", (0.7, 0.9)),
)
ORACLE_V = (0.6, -0.8)
ORACLE_W = (0.8, 0.6)
ORACLE_T2 = 1e-4


# -- random generators ---------------------------------------------------------

def random_vector(rng, field: Field, d: int, lo: int = -3, hi: int = 3, denom: int = 3):
    return field.array([field.from_fraction(Fraction(int(rng.integers(lo, hi + 1)),
                                                     int(rng.integers(1, denom + 1))))
                        for _ in range(d)])


def random_series(rng, field: Field, base, out_dim: int, order: int,
                  value=None) -> TaylorSeries:
    """Random series at ``base``; its constant term is ``value`` when given."""
    base = field.array(list(base))
    d = base.shape[0]
    terms = [random_map(rng, field, n, d, out_dim) for n in range(order + 1)]
    if value is not None:
        terms[0] = MultilinearMap(field, field.array(list(value)), d)
    return TaylorSeries(field, base, terms)


def random_polynomial(rng, d: int, degree: int = 2, density: float = 0.5):
    """Random polynomial expression in ``x1..xd`` with small rational coefficients."""
    xs = variables(d)
    poly = Const(Fraction(int(rng.integers(-2, 3))))
    for deg in range(1, degree + 1):
        for _ in range(d * deg):
            if rng.random() > density:
                continue
            mono = Const(Fraction(int(rng.integers(-3, 4)), int(rng.integers(1, 3))))
            for i in rng.integers(0, d, size=deg):
                mono = mono * xs[int(i)]
            poly = poly + mono
    return poly


def random_vector_field(rng, d: int, degree: int = 2) -> ExprField:
    return ExprField([random_polynomial(rng, d, degree) for _ in range(d)])


# -- suites ----------------------------------------------------------------------

def suite_partitions(seed: int = DEFAULT_SEED, max_n: int = 7) -> list[dict]:
    cases = []
    for n in range(max_n + 1):
        count = len(enumerate_partitions(n))
        cases.append({"case": f"bell[{n}]", "count": count, "expected": bell_number(n),
                      "passed": count == bell_number(n)})
    for n in range(max_n):
        produced = Counter(Q.as_frozenset() for P in enumerate_partitions(n)
                           for Q in extend_partition(P))
        target = Counter(Q.as_frozenset() for Q in enumerate_partitions(n + 1))
        ok = produced == target and all(c == 1 for c in produced.values())
        cases.append({"case": f"extension[{n}->{n + 1}]", "produced": sum(produced.values()),
                      "passed": ok})
    return cases


def _random_pair(rng, field, order):
    d = int(rng.integers(1, 4))
    m = int(rng.integers(1, 4))
    k = int(rng.integers(1, 3))
    x = random_vector(rng, field, d)
    f = random_series(rng, field, x, m, order)
    g = random_series(rng, field, f.value(), k, order)
    return g, f


def suite_compose(seed: int = DEFAULT_SEED, cases: int = 100, max_order: int = 4) -> list[dict]:
    """Derivatives of ``ts_compose`` agree with the partition formula."""
    rng = np.random.default_rng(seed)
    out = []
    for c in range(cases):
        order = int(rng.integers(1, max_order + 1))
        g, f = _random_pair(rng, RATIONAL, order)
        lhs = to_derivatives(ts_compose(g, f))
        rhs = faa_di_bruno(to_derivatives(g), to_derivatives(f))
        out.append({"case": c, "order": order, "in_dim": f.in_dim,
                    "passed": lhs.equals(rhs)})
    return out


def suite_reversion(seed: int = DEFAULT_SEED, cases: int = 50, max_order: int = 4) -> list[dict]:
    rng = np.random.default_rng(seed)
    out = []
    c = 0
    while len(out) < cases:
        d = int(rng.integers(1, 3))
        order = int(rng.integers(1, max_order + 1))
        x = random_vector(rng, RATIONAL, d)
        p = random_series(rng, RATIONAL, x, d, order)
        if _det(p.jacobian()) == 0:
            continue
        q = ts_reversion(p)
        qp = ts_compose(q, p)
        pq = ts_compose(p, q)
        ok = (qp.equals(identity_series(RATIONAL, p.base_point, order))
              and pq.equals(identity_series(RATIONAL, q.base_point, order)))
        out.append({"case": c, "order": order, "dim": d, "passed": ok})
        c += 1
    return out


def _det(A) -> Fraction:
    A = [[Fraction(v) for v in row] for row in A]
    if len(A) == 1:
        return A[0][0]
    return A[0][0] * A[1][1] - A[0][1] * A[1][0]


def suite_rebase(seed: int = DEFAULT_SEED, cases: int = 100, points: int = 10,
                 max_order: int = 5) -> list[dict]:
    """Polynomial series evaluate identically before and after a change of base."""
    rng = np.random.default_rng(seed)
    out = []
    for c in range(cases):
        d = int(rng.integers(1, 3))
        m = int(rng.integers(1, 3))
        order = int(rng.integers(0, max_order + 1))
        s = random_series(rng, RATIONAL, random_vector(rng, RATIONAL, d), m, order)
        y = random_vector(rng, RATIONAL, d)
        r = ts_rebase(s, y)
        ok = True
        for _ in range(points):
            z = random_vector(rng, RATIONAL, d)
            ok &= bool(np.all(ts_eval(s, z) == ts_eval(r, z)))
        out.append({"case": c, "order": order, "dim": d, "passed": ok})
    return out


def suite_symmetry(seed: int = DEFAULT_SEED, cases: int = 50) -> list[dict]:
    """Derivative tensors are symmetric, and ``D^2`` is the two-term permutation sum."""
    rng = np.random.default_rng(seed)
    out = []
    for c in range(cases):
        d = int(rng.integers(1, 4))
        order = int(rng.integers(2, 5))
        s = random_series(rng, RATIONAL, random_vector(rng, RATIONAL, d), 1, order)
        seq = to_derivatives(s)
        u, v = random_vector(rng, RATIONAL, d), random_vector(rng, RATIONAL, d)
        p2 = s.terms[2]
        ok = bool(np.all(seq.tensors[2](u, v) == p2(u, v) + p2(v, u)))
        for T in seq.tensors[2:]:
            ok &= _symmetric_exact(T)
        out.append({"case": c, "order": order, "dim": d, "passed": ok})
    return out


def _symmetric_exact(T: MultilinearMap) -> bool:
    n = T.order
    for i in range(1, n):
        perm = list(range(n))
        perm[0], perm[i] = perm[i], perm[0]
        if not T.permute_slots(perm).equals(T, atol=0.0, rtol=0.0):
            return False
    return True


def suite_lie(seed: int = DEFAULT_SEED, cases: int = 50) -> list[dict]:
    """Antisymmetry, Jacobi identity and the pullback identity over the rationals."""
    rng = np.random.default_rng(seed)
    out = []
    for c in range(cases):
        d = int(rng.integers(1, 4))
        U, V, W = (random_vector_field(rng, d) for _ in range(3))
        x = random_vector(rng, RATIONAL, d)
        uv = BracketField(U, V)(x, RATIONAL)
        vu = BracketField(V, U)(x, RATIONAL)
        antisym = bool(np.all(uv + vu == 0))
        jac = (BracketField(BracketField(U, V), W)(x, RATIONAL)
               + BracketField(BracketField(V, W), U)(x, RATIONAL)
               + BracketField(BracketField(W, U), V)(x, RATIONAL))
        jacobi = bool(np.all(jac == 0))
        f = _random_diffeo(rng, d)
        try:
            report = check_pullback_bracket(f, V, W, x, RATIONAL)
            pull = report["exact_match"] and report["cancel_symm_residual"] == 0
        except ArithmeticError:
            pull = None  # singular Jacobian at x; skip this part
        out.append({"case": c, "dim": d, "antisymmetry": antisym, "jacobi": jacobi,
                    "pullback": pull, "passed": antisym and jacobi and pull is not False})
    return out


def _random_diffeo(rng, d: int) -> ExprField:
    """``x -> x + (small quadratic)``: a diffeomorphism near most points."""
    xs = variables(d)
    comps = []
    for i in range(d):
        q = random_polynomial(rng, d, degree=2, density=0.4)
        comps.append(xs[i] + q * Const(Fraction(1, 8)))
    return ExprField(comps)


def suite_oracle(seed: int = DEFAULT_SEED) -> list[dict]:
    """Central differences against series Jacobians over the reals.

    ``seed`` is accepted for a uniform interface; the case list is fixed.
    """
    v, w = np.array(ORACLE_V), np.array(ORACLE_W)
    out = []
    for c, (text, x) in enumerate(ORACLE_CASES):
        s = taylor_at(text, x, 2, REAL)
        f = from_expr(text, 2, REAL)
        ladder = fd_ladder(f, x, v, s.jacobian() @ v)
        final = ladder["rows"][-1]["error_norm"]
        D2 = to_derivatives(s).tensors[2]
        sq = second_quotient(f, x, v, w, ORACLE_T2)
        err2 = float(np.max(np.abs(sq - D2(v, w))))
        ok = abs(ladder["order"] - 2.0) <= 0.3 and final <= 1e-8 and err2 <= 1e-4
        out.append({"case": c, "expr": text, "order": ladder["order"], "final_error": final,
                    "second_error": err2, "passed": bool(ok)})
    return out


SUITES = {
    "partitions": suite_partitions,
    "compose": suite_compose,
    "reversion": suite_reversion,
    "rebase": suite_rebase,
    "symmetry": suite_symmetry,
    "lie": suite_lie,
    "oracle": suite_oracle,
}


def run_suite(name: str, seed: int = DEFAULT_SEED) -> dict:
    if name not in SUITES:
        raise UsageError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    cases = SUITES[name](seed)
    passed = sum(1 for c in cases if c["passed"])
    return {"suite": name, "seed": seed, "total": len(cases), "passed": passed,
            "failed": len(cases) - passed, "cases": cases}


__all__ = [
    "DEFAULT_SEED", "ORACLE_CASES", "SUITES", "run_suite", "random_series", "random_vector",
    "random_polynomial", "random_vector_field",
] + [f"suite_{n}" for n in SUITES]
