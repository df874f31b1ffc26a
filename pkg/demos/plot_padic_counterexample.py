"""
A C^1 function on Z_p^2 with non-symmetric mixed partials
=========================================================

f(x, y) = sum over k < l of x_k y_l p^(k+l), with x_k, y_l the p-adic digits.
Its derivative is (0, x) everywhere, yet the two mixed quotients disagree.
"""

from fmseries.calculus import (
    build_padic_counterexample, counterexample_derivative_report, padic_mixed_quotients,
)
from fmseries.padic import format_literal

p, N = 5, 16

# mixed quotient with steps (p^a, p^b): 1 when a < b, else 0
for a, b in [(1, 3), (3, 1), (2, 2)]:
    q_xy, q_yx = padic_mixed_quotients(p, a, b, N)
    print(f"a={a} b={b}:", q_xy.to_fraction(), q_yx.to_fraction())

# forward quotients track M(x, y) = (0, x) up to the digits the step hides
f = build_padic_counterexample(p, N)
for a in (2, 6, 10):
    rep = counterexample_derivative_report(f, (123456, 7891), a)
    print(f"step 5^{a}: error {float(rep['error_norm']):.2e}"
          f"  bound {float(rep['intrinsic_bound']):.2e}")

x = f.field.coerce(123456)
print("x as a literal:", format_literal(x))
