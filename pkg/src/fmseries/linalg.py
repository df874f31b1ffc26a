"""Small dense linear algebra over any provided field."""
from __future__ import annotations

import numpy as np

from .errors import DimensionError, NonInvertibleDerivativeError
from .scalars import Field

#: condition-number ceiling before a real matrix is declared singular
REAL_COND_LIMIT = 1e12


def mat_inverse(field: Field, A, cond_limit: float = REAL_COND_LIMIT) -> np.ndarray:
    """Inverse of a square matrix.

    Reals go through LAPACK with a condition-number gate; exact fields use
    Gauss-Jordan elimination with largest-norm pivoting.
    """
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {A.shape}")
    n = A.shape[0]
    if field.is_real:
        A = A.astype(np.float64)
        cond = np.linalg.cond(A)
        if not np.isfinite(cond) or cond > cond_limit:
            raise NonInvertibleDerivativeError(f"matrix condition number {cond:.3g} exceeds {cond_limit:g}")
        return np.linalg.inv(A)
    M = np.empty((n, 2 * n), dtype=object)
    M[:, :n] = A
    M[:, n:] = field.zeros((n, n))
    for i in range(n):
        M[i, n + i] = field.one()
    for col in range(n):
        pivot = max(range(col, n), key=lambda r: field.norm(M[r, col]))
        if field.is_zero(M[pivot, col]):
            raise NonInvertibleDerivativeError("singular matrix")
        if pivot != col:
            M[[col, pivot]] = M[[pivot, col]]
        inv = field.one() / M[col, col]
        M[col] = M[col] * inv
        for r in range(n):
            if r != col and not field.is_zero(M[r, col]):
                M[r] = M[r] - M[col] * M[r, col]
    return M[:, n:].copy()
