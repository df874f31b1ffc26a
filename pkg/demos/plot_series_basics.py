"""
Truncated series and their derivatives
======================================

Expand an expression at a point, read off derivatives, compose and invert.
"""

from fractions import Fraction

import numpy as np

from fmseries import RATIONAL, deriv1, taylor_at, to_derivatives, ts_compose, ts_reversion
from fmseries.taylor import univariate_series

# geometric series at 0: every coefficient is 1, so the n-th derivative is n!
s = taylor_at("1/(1-x1)", [0], 8, RATIONAL)
seq = to_derivatives(s)
print("f^(n)(0):", [int(deriv1(seq, n)) for n in range(9)])

# two variables; the series stores x1*x2 on a single slot, the derivative
# tensor is its permutation sum
s = taylor_at("x1*x2 + x1^3", [Fraction(1, 2), 1], 3, RATIONAL)
print("p_2 table:\n", s.terms[2].coeffs)
print("D^2 table:\n", to_derivatives(s).tensors[2].coeffs)

# composition with an outer series based at the inner value
inner = taylor_at(["x1 + x2^2", "x1*x2"], [0, 0], 4, RATIONAL)
outer = taylor_at("1/(1 - x1 - x2)", [0, 0], 4, RATIONAL)
both = ts_compose(outer, inner)
direct = taylor_at("1/(1 - x1 - x2^2 - x1*x2)", [0, 0], 4, RATIONAL)
print("composition matches direct expansion:", both.equals(direct))

# reversion of x + x^2: Catalan numbers with alternating signs
q = ts_reversion(univariate_series(RATIONAL, 0, [0, 1, 1, 0, 0, 0]))
print("inverse coefficients:", [int(np.ravel(t.coeffs)[0]) for t in q.terms])
