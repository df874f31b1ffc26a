"""
Lie brackets and pullbacks
==========================

The bracket of pulled-back fields is the pullback of the bracket. Over Q the
two sides agree exactly; over R to rounding.
"""

from fractions import Fraction

from fmseries import REAL, ExprField, check_pullback_bracket, lie_bracket
from fmseries.errors import MinSmoothnessError
from fmseries.padic import PadicField

V = ExprField(["1", "0"])
W = ExprField(["0", "x1"])
print("[e1, x1 e2] at (2, 3):", lie_bracket(V, W, [2, 3]))

f = ["x1 + x2^2", "x2"]
V = ExprField(["x1*x2", "x1 - x2^3"])
W = ExprField(["x2^2 + 1", "x1"])

rep = check_pullback_bracket(f, V, W, [Fraction(1, 3), Fraction(-1, 2)])
print("rational:", rep["exact_match"], rep["lhs"])

rep = check_pullback_bracket(f, V, W, [0.3, 0.7], REAL)
print("real error:", rep["error_norm"])

# over Q_p only rational operations are accepted
try:
    check_pullback_bracket(["exp(5*x1)", "x2"], V, W, [1, 2], PadicField(5, 20))
except MinSmoothnessError as exc:
    print("rejected:", exc)
