"""The normalized matrix product prod_i (I + X_i/n), its exact expectation
(I + mu/n)^n, and the deviation statistic ||product - exp(mu)||.

A product instance is an (n,d,d) complex stack of the factors X_1..X_n; the
product is accumulated strictly left-to-right in index order, which is the
convention the martingale closed form depends on.
"""

import numpy as np

from ._backend import get_backend
from .errors import InvalidMatrixError
from .linalg import as_matrix, matrix_exp, matrix_power, op_norm


def as_instance(samples):
    """Validate samples as an (n,d,d) complex128 stack with n >= 1."""
    xs = np.ascontiguousarray(samples, dtype=np.complex128)
    if xs.ndim != 3 or xs.shape[1] != xs.shape[2] or xs.shape[0] < 1:
        raise InvalidMatrixError(
            f"expected an (n,d,d) stack of square matrices, got shape {xs.shape}"
        )
    if not np.isfinite(xs.view(np.float64)).all():
        raise InvalidMatrixError("sample stack has non-finite entries")
    return xs


def normalized_product(samples):
    """((I+X_1/n)(I+X_2/n))...(I+X_n/n) with n = len(samples)."""
    xs = as_instance(samples)
    n = xs.shape[0]
    return get_backend().chain_product(xs, 1.0 / n)


def expected_product(mu, n):
    """(I + mu/n)^n, the exact expectation of the normalized product of n
    i.i.d. factors with mean mu."""
    m = as_matrix(mu)
    if n < 1:
        raise InvalidMatrixError(f"n must be >= 1, got {n!r}")
    d = m.shape[0]
    return matrix_power(np.eye(d, dtype=np.complex128) + m / n, int(n))


def deviation(samples, mu):
    """op_norm(normalized_product(samples) - exp(mu))."""
    xs = as_instance(samples)
    m = as_matrix(mu)
    if m.shape[0] != xs.shape[1]:
        raise InvalidMatrixError(
            f"mean dimension {m.shape[0]} does not match samples dimension {xs.shape[1]}"
        )
    return op_norm(normalized_product(xs) - matrix_exp(m))
