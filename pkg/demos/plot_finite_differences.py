"""
Checking series derivatives with finite differences
===================================================

Central differences converge at order two to the series Jacobian; the
second-difference quotient approaches D^2 f(x)(v, w).
"""

import numpy as np

from fmseries import REAL, taylor_at, to_derivatives
from fmseries.calculus import fd_ladder, from_expr, ladder_to_csv, second_quotient

text, x = "exp(x1*x2)", (0.5, 0.4)
v, w = np.array([0.6, -0.8]), np.array([0.8, 0.6])

s = taylor_at(text, x, 2, REAL)
f = from_expr(text, 2, REAL)

ladder = fd_ladder(f, x, v, s.jacobian() @ v)
print(ladder_to_csv(ladder["rows"]))
print("observed order:", round(ladder["order"], 3))

D2 = to_derivatives(s).tensors[2]
for t in (1e-2, 1e-3, 1e-4):
    gap = abs(second_quotient(f, x, v, w, t) - D2(v, w))[0]
    print(f"t={t:g}  |second quotient - D2(v, w)| = {gap:.2e}")
