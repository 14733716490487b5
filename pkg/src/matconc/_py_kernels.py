"""Pure-numpy reference implementations of the hot kernels.

Same contracts as the compiled ``matconc._kernels`` extension; used as the
fallback backend when the extension is not built (or when forced via
``MATCONC_BACKEND=python``).
"""

import math

import numpy as np

NAME = "python"


def chain_product(xs, scale):
    """Left-to-right product prod_i (I + scale*xs[i]) for an (n,d,d) stack."""
    n, d = xs.shape[0], xs.shape[1]
    eye = np.eye(d, dtype=np.complex128)
    factors = eye + scale * xs
    acc = eye.copy()
    for i in range(n):
        acc = acc @ factors[i]
    return acc


def doob_increments(xs, mu, scale):
    """All martingale increments for an (n,d,d) stack.

    increments[k] = P_{k-1} @ (scale*(xs[k]-mu)) @ S^(n-1-k), where P_j is the
    running prefix product of (I + scale*xs[i]) and S = I + scale*mu.
    """
    n, d = xs.shape[0], xs.shape[1]
    eye = np.eye(d, dtype=np.complex128)
    step = eye + scale * mu
    suffix = np.empty((n, d, d), dtype=np.complex128)  # suffix[j] = step**j
    suffix[0] = eye
    for j in range(1, n):
        suffix[j] = suffix[j - 1] @ step
    factors = eye + scale * xs
    mids = scale * (xs - mu)
    out = np.empty_like(xs)
    prefix = eye.copy()
    for k in range(n):
        out[k] = prefix @ mids[k] @ suffix[n - 1 - k]
        prefix = prefix @ factors[k]
    return out


def spectral_norm(m, v0, max_iter, tol_change, tol_resid):
    """Power iteration on m*m.

    Returns (sigma, converged). Convergence requires both a relative
    Rayleigh-quotient change <= tol_change and a relative residual
    ||(m*m)v - rho v|| <= tol_resid * rho; callers fall back to a full
    Hermitian eigensolve when converged is False.
    """
    v = v0
    rho_prev = math.inf
    rho = 0.0
    for _ in range(max_iter):
        w = m @ v
        rho = np.vdot(w, w).real
        if rho == 0.0:
            return 0.0, False
        u = m.conj().T @ w
        resid = np.linalg.norm(u - rho * v)
        if abs(rho - rho_prev) <= tol_change * rho and resid <= tol_resid * rho:
            return math.sqrt(rho), True
        rho_prev = rho
        nu = np.linalg.norm(u)
        if nu == 0.0:
            return 0.0, False
        v = u / nu
    return math.sqrt(rho), False


def spectral_norms(stack, v0, max_iter, tol_change, tol_resid):
    """Vector of spectral_norm results for an (m,d,d) stack.

    All matrices iterate simultaneously; a matrix's value is frozen at its
    own convergence step, and every per-matrix operation is a gufunc slice,
    so results do not depend on how the stack was batched.
    """
    count, d = stack.shape[0], stack.shape[1]
    values = np.zeros(count, dtype=np.float64)
    converged = np.zeros(count, dtype=np.bool_)
    if count == 0:
        return values, converged
    idx = np.arange(count)
    mats = stack
    mats_h = stack.conj().swapaxes(1, 2)
    v = np.broadcast_to(v0, (count, d)).copy()
    rho_prev = np.full(count, np.inf)
    for _ in range(max_iter):
        w = (mats @ v[..., None])[..., 0]
        rho = np.einsum("ij,ij->i", w.real, w.real) + np.einsum(
            "ij,ij->i", w.imag, w.imag
        )
        dead = rho == 0.0
        if dead.any():
            # zero Rayleigh quotient: hand over to the eigensolve fallback
            values[idx[dead]] = 0.0
            converged[idx[dead]] = False
        u = (mats_h @ w[..., None])[..., 0]
        resid = np.linalg.norm(u - rho[:, None] * v, axis=1)
        done = (
            (np.abs(rho - rho_prev) <= tol_change * rho)
            & (resid <= tol_resid * rho)
            & ~dead
        )
        if done.any():
            values[idx[done]] = np.sqrt(rho[done])
            converged[idx[done]] = True
        keep = ~(done | dead)
        if not keep.any():
            return values, converged
        idx = idx[keep]
        mats = mats[keep]
        mats_h = mats_h[keep]
        rho_prev = rho[keep]
        u = u[keep]
        nu = np.linalg.norm(u, axis=1)
        zero_u = nu == 0.0
        if zero_u.any():
            sub = ~zero_u
            values[idx[zero_u]] = 0.0
            idx, mats, mats_h = idx[sub], mats[sub], mats_h[sub]
            rho_prev, u, nu = rho_prev[sub], u[sub], nu[sub]
            if idx.size == 0:
                return values, converged
        v = u / nu[:, None]
    values[idx] = np.sqrt(rho_prev)  # rho from the last evaluated iteration
    return values, converged
