# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled hot kernels: chain products, Doob increments, spectral norms.

Contracts match matconc._py_kernels; d is assumed small (<= a few hundred),
matrices are C-contiguous complex128.
"""

from libc.math cimport INFINITY, fabs, sqrt

import numpy as np

cimport numpy as cnp

cnp.import_array()

NAME = "compiled"

ctypedef double complex zdouble


cdef inline void _matmul(const zdouble* a, const zdouble* b, zdouble* out,
                         Py_ssize_t d) noexcept nogil:
    cdef Py_ssize_t i, j, k
    cdef zdouble acc
    for i in range(d):
        for j in range(d):
            acc = 0
            for k in range(d):
                acc = acc + a[i * d + k] * b[k * d + j]
            out[i * d + j] = acc


cdef inline void _factor(const zdouble* x, double scale, zdouble* out,
                         Py_ssize_t d) noexcept nogil:
    # out = I + scale * x
    cdef Py_ssize_t i, j
    for i in range(d):
        for j in range(d):
            out[i * d + j] = scale * x[i * d + j]
        out[i * d + i] = out[i * d + i] + 1.0


def chain_product(xs, double scale):
    """Left-to-right product prod_i (I + scale*xs[i]) for an (n,d,d) stack."""
    cdef cnp.ndarray[zdouble, ndim=3, mode="c"] stack = np.ascontiguousarray(
        xs, dtype=np.complex128
    )
    cdef Py_ssize_t n = stack.shape[0], d = stack.shape[1]
    out_arr = np.eye(d, dtype=np.complex128)
    cdef cnp.ndarray[zdouble, ndim=2, mode="c"] out = out_arr
    work_arr = np.empty((2, d, d), dtype=np.complex128)
    cdef cnp.ndarray[zdouble, ndim=3, mode="c"] work = work_arr
    cdef zdouble* acc = &out[0, 0]
    cdef zdouble* fac = &work[0, 0, 0]
    cdef zdouble* tmp = &work[1, 0, 0]
    cdef Py_ssize_t i, j
    with nogil:
        for i in range(n):
            _factor(&stack[i, 0, 0], scale, fac, d)
            _matmul(acc, fac, tmp, d)
            for j in range(d * d):
                acc[j] = tmp[j]
    return out_arr


def doob_increments(xs, mu, double scale):
    """All martingale increments: increments[k] = P_{k-1} @ (scale*(xs[k]-mu))
    @ (I + scale*mu)^(n-1-k), prefix accumulated left-to-right."""
    cdef cnp.ndarray[zdouble, ndim=3, mode="c"] stack = np.ascontiguousarray(
        xs, dtype=np.complex128
    )
    cdef cnp.ndarray[zdouble, ndim=2, mode="c"] mean = np.ascontiguousarray(
        mu, dtype=np.complex128
    )
    cdef Py_ssize_t n = stack.shape[0], d = stack.shape[1]
    out_arr = np.empty((n, d, d), dtype=np.complex128)
    suffix_arr = np.empty((n, d, d), dtype=np.complex128)
    work_arr = np.empty((4, d, d), dtype=np.complex128)
    cdef cnp.ndarray[zdouble, ndim=3, mode="c"] out = out_arr
    cdef cnp.ndarray[zdouble, ndim=3, mode="c"] suffix = suffix_arr
    cdef cnp.ndarray[zdouble, ndim=3, mode="c"] work = work_arr
    cdef zdouble* step = &work[0, 0, 0]
    cdef zdouble* prefix = &work[1, 0, 0]
    cdef zdouble* mid = &work[2, 0, 0]
    cdef zdouble* tmp = &work[3, 0, 0]
    cdef zdouble* mu_ptr = &mean[0, 0]
    cdef Py_ssize_t i, j, k
    if n == 0:
        return out_arr
    with nogil:
        _factor(mu_ptr, scale, step, d)
        # suffix[j] = step**j
        for j in range(d * d):
            (&suffix[0, 0, 0])[j] = 0
        for i in range(d):
            suffix[0, i, i] = 1.0
        for k in range(1, n):
            _matmul(&suffix[k - 1, 0, 0], step, &suffix[k, 0, 0], d)
        # prefix = I
        for j in range(d * d):
            prefix[j] = 0
        for i in range(d):
            prefix[i * d + i] = 1.0
        for k in range(n):
            for j in range(d * d):
                mid[j] = scale * ((&stack[k, 0, 0])[j] - mu_ptr[j])
            _matmul(prefix, mid, tmp, d)
            _matmul(tmp, &suffix[n - 1 - k, 0, 0], &out[k, 0, 0], d)
            _factor(&stack[k, 0, 0], scale, mid, d)
            _matmul(prefix, mid, tmp, d)
            for j in range(d * d):
                prefix[j] = tmp[j]
    return out_arr


cdef double _spectral_norm_impl(const zdouble* m, const zdouble* v0,
                                Py_ssize_t d, int max_iter, double tol_change,
                                double tol_resid, zdouble* v, zdouble* w,
                                zdouble* u, bint* converged) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef int it
    cdef double rho = 0.0, rho_prev = INFINITY, resid2, nu2, nu
    cdef zdouble acc, diff
    for i in range(d):
        v[i] = v0[i]
    converged[0] = False
    for it in range(max_iter):
        # w = m v;  rho = ||w||^2
        rho = 0.0
        for i in range(d):
            acc = 0
            for j in range(d):
                acc = acc + m[i * d + j] * v[j]
            w[i] = acc
            rho = rho + acc.real * acc.real + acc.imag * acc.imag
        if rho == 0.0:
            return 0.0
        # u = m^H w
        for j in range(d):
            acc = 0
            for i in range(d):
                acc = acc + m[i * d + j].conjugate() * w[i]
            u[j] = acc
        resid2 = 0.0
        for i in range(d):
            diff = u[i] - rho * v[i]
            resid2 = resid2 + diff.real * diff.real + diff.imag * diff.imag
        if fabs(rho - rho_prev) <= tol_change * rho and sqrt(resid2) <= tol_resid * rho:
            converged[0] = True
            return sqrt(rho)
        rho_prev = rho
        nu2 = 0.0
        for i in range(d):
            nu2 = nu2 + u[i].real * u[i].real + u[i].imag * u[i].imag
        if nu2 == 0.0:
            return 0.0
        nu = sqrt(nu2)
        for i in range(d):
            v[i] = u[i] / nu
    return sqrt(rho)


def spectral_norm(m, v0, int max_iter, double tol_change, double tol_resid):
    """Power iteration on m*m; returns (sigma, converged)."""
    cdef cnp.ndarray[zdouble, ndim=2, mode="c"] mat = np.ascontiguousarray(
        m, dtype=np.complex128
    )
    cdef cnp.ndarray[zdouble, ndim=1, mode="c"] start = np.ascontiguousarray(
        v0, dtype=np.complex128
    )
    cdef Py_ssize_t d = mat.shape[0]
    work_arr = np.empty((3, d), dtype=np.complex128)
    cdef cnp.ndarray[zdouble, ndim=2, mode="c"] work = work_arr
    cdef bint conv = False
    cdef double value
    with nogil:
        value = _spectral_norm_impl(
            &mat[0, 0], &start[0], d, max_iter, tol_change, tol_resid,
            &work[0, 0], &work[1, 0], &work[2, 0], &conv,
        )
    return value, bool(conv)


def spectral_norms(stack, v0, int max_iter, double tol_change, double tol_resid):
    """Per-matrix spectral_norm over an (m,d,d) stack; returns (values, converged)."""
    cdef cnp.ndarray[zdouble, ndim=3, mode="c"] mats = np.ascontiguousarray(
        stack, dtype=np.complex128
    )
    cdef cnp.ndarray[zdouble, ndim=1, mode="c"] start = np.ascontiguousarray(
        v0, dtype=np.complex128
    )
    cdef Py_ssize_t count = mats.shape[0], d = mats.shape[1]
    values_arr = np.empty(count, dtype=np.float64)
    conv_arr = np.empty(count, dtype=np.bool_)
    cdef cnp.ndarray[double, ndim=1, mode="c"] values = values_arr
    cdef cnp.ndarray[cnp.uint8_t, ndim=1, mode="c", cast=True] conv = conv_arr
    work_arr = np.empty((3, d), dtype=np.complex128)
    cdef cnp.ndarray[zdouble, ndim=2, mode="c"] work = work_arr
    cdef Py_ssize_t i
    cdef bint ok
    with nogil:
        for i in range(count):
            ok = False
            values[i] = _spectral_norm_impl(
                &mats[i, 0, 0], &start[0], d, max_iter, tol_change, tol_resid,
                &work[0, 0], &work[1, 0], &work[2, 0], &ok,
            )
            conv[i] = ok
    return values_arr, conv_arr
