"""Truncated formal multilinear series over Q, R and Q_p.

Series are stored in the series convention ``f(x + y) = sum_n p_n(y, ..., y)``
with dense, not necessarily symmetric, coefficient tensors. Iterated
derivatives are recovered as permutation sums of those tensors.
"""
from .errors import (
    BasePointError, DimensionError, DomainError, FieldMismatchError, FmseriesError,
    MinSmoothnessError, NonInvertibleDerivativeError, ParseError, PrecisionError, UsageError,
)
from .scalars import RATIONAL, REAL, Field, RationalField, RealField, field_from_name
from .padic import PAdic, PadicField, format_literal, parse_literal
from .multilinear import (
    MultilinearMap, compose_slots, contract_slots, ml_eval, ml_norm_bound, permutation_sum,
    symmetrize,
)
from .partitions import SetPartition, bell_number, enumerate_partitions, extend_partition
from .taylor import (
    DerivativeSequence, TaylorSeries, faa_di_bruno, from_derivatives, radius_estimate,
    to_derivatives, ts_compose, ts_derivative, ts_eval, ts_rebase, ts_reversion,
)
from .expr import deriv1, evaluate, parse_expr, partial_derivative, taylor_at
from .calculus import (
    BlackBoxFn, SmoothnessPolicy, build_padic_counterexample, fd_directional, fd_ladder,
    mixed_quotient, second_quotient, symmetry_check,
)
from .vectorfields import (
    BracketField, ExprField, PulledBackField, check_pullback_bracket, lie_bracket, pullback,
)

__version__ = "0.1.0"
