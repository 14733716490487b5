"""Dense complex matrix primitives: operator norm, matrix exponential,
matrix powers, and the Loewner order check.

All functions take and return square complex128 numpy arrays. A matrix is
well-formed when it is square, at least 1x1, and every entry is finite.
"""

import math

import numpy as np

from ._backend import get_backend
from .errors import DomainError, InvalidMatrixError

# Power-iteration settings (operator norm): deterministic start vector,
# Rayleigh-quotient change test at 1e-12, residual guard, and a full
# Hermitian eigensolve of M*M as fallback after 10*d iterations.
OP_NORM_TOL_CHANGE = 1e-12
OP_NORM_TOL_RESID = 1e-10
_START_SEED = 0x5EEDBA5E
_start_vectors = {}


def as_matrix(m):
    """Validate and return m as a (d,d) complex128 array.

    Raises InvalidMatrixError for non-square shapes or non-finite entries.
    """
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise InvalidMatrixError(f"expected a square matrix, got shape {a.shape}")
    if not np.isfinite(a.view(np.float64)).all():
        raise InvalidMatrixError("matrix has non-finite entries")
    return a


def _start_vector(d):
    # Fixed pseudo-random unit vector per dimension: deterministic across
    # runs, no alignment with structured test matrices.
    v = _start_vectors.get(d)
    if v is None:
        rng = np.random.default_rng(_START_SEED)
        v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        v /= np.linalg.norm(v)
        _start_vectors[d] = v
    return v


def _eigh_norm(m):
    lam = np.linalg.eigvalsh(m.conj().T @ m)[-1]
    return math.sqrt(max(float(lam), 0.0))


def op_norm(m):
    """Operator (spectral) norm: the largest singular value of m."""
    a = as_matrix(m)
    d = a.shape[0]
    value, converged = get_backend().spectral_norm(
        a, _start_vector(d), 10 * d, OP_NORM_TOL_CHANGE, OP_NORM_TOL_RESID
    )
    if converged:
        return value
    return _eigh_norm(a)


def op_norms(stack):
    """Operator norms of an (m,d,d) stack, with the same algorithm and
    fallback as op_norm applied per matrix."""
    stack = np.ascontiguousarray(stack, dtype=np.complex128)
    d = stack.shape[-1]
    values, converged = get_backend().spectral_norms(
        stack, _start_vector(d), 10 * d, OP_NORM_TOL_CHANGE, OP_NORM_TOL_RESID
    )
    if not converged.all():
        for i in np.flatnonzero(~converged):
            values[i] = _eigh_norm(stack[i])
    return values


def matrix_exp(m):
    """Matrix exponential by scaling-and-squaring of a truncated Taylor
    series; the scaled norm is brought at or below 0.5 and the series is
    truncated once a term's norm drops under 1e-16."""
    a = as_matrix(m)
    d = a.shape[0]
    nrm = op_norm(a)
    squarings = max(0, math.ceil(math.log2(nrm / 0.5))) if nrm > 0.5 else 0
    a = a / (2.0**squarings)
    eye = np.eye(d, dtype=np.complex128)
    term = eye.copy()
    acc = eye.copy()
    k = 1
    while True:
        term = term @ a / k
        acc += term
        # 1-norm dominates the operator norm, so this is a conservative cut.
        if np.abs(term).sum(axis=0).max() < 1e-16:
            break
        k += 1
        if k > 128:  # unreachable for scaled norm <= 0.5; guards stagnation
            break
    for _ in range(squarings):
        acc = acc @ acc
    return acc


def matrix_power(m, k):
    """m**k by repeated squaring; m**0 is the identity."""
    a = as_matrix(m)
    if not isinstance(k, (int, np.integer)) or k < 0:
        raise InvalidMatrixError(f"exponent must be a nonnegative integer, got {k!r}")
    d = a.shape[0]
    result = np.eye(d, dtype=np.complex128)
    base = a.copy()
    e = int(k)
    while e > 0:
        if e & 1:
            result = result @ base
        e >>= 1
        if e:
            base = base @ base
    return result


def hermitian_defect(m):
    """op_norm(m - m*): zero iff m is exactly Hermitian."""
    a = as_matrix(m)
    return op_norm(a - a.conj().T)


def loewner_leq(a, b, tol):
    """True iff a <= b in the Loewner order, within tol.

    Both inputs must be Hermitian within tol (measured as op_norm(m - m*)),
    otherwise DomainError: the order is only meaningful for Hermitian
    matrices. The check is min-eigenvalue(b - a) >= -tol.
    """
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise InvalidMatrixError("Loewner comparison needs equal shapes")
    if tol < 0:
        raise InvalidMatrixError("tol must be nonnegative")
    for name, m in (("a", a), ("b", b)):
        if hermitian_defect(m) > tol:
            raise DomainError(f"matrix {name} is not Hermitian within tol={tol}")
    diff = b - a
    diff = 0.5 * (diff + diff.conj().T)
    lam_min = float(np.linalg.eigvalsh(diff)[0])
    return lam_min >= -tol


def matrix_to_json(m):
    """Serialize to the canonical JSON object {"d", "re", "im"} with
    row-major entry order."""
    a = as_matrix(m)
    return {
        "d": int(a.shape[0]),
        "re": [float(x) for x in a.real.ravel()],
        "im": [float(x) for x in a.imag.ravel()],
    }


def matrix_from_json(obj):
    """Inverse of matrix_to_json."""
    try:
        d = int(obj["d"])
        re = np.asarray(obj["re"], dtype=np.float64)
        im = np.asarray(obj["im"], dtype=np.float64)
    except (KeyError, TypeError) as exc:
        raise InvalidMatrixError(f"malformed matrix object: {exc}") from exc
    if d < 1 or re.shape != (d * d,) or im.shape != (d * d,):
        raise InvalidMatrixError(
            f"matrix object inconsistent: d={d}, {re.size} re / {im.size} im entries"
        )
    return as_matrix((re + 1j * im).reshape(d, d))
