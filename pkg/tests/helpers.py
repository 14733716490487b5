"""Shared test utilities and independent oracles.

Oracles here deliberately avoid the library code paths they check:
the operator-norm oracle runs LAPACK SVD on the 2d x 2d real embedding,
scalar products are accumulated with plain Python floats, and conditional
expectations are enumerated suffix-by-suffix.
"""

import itertools
import math

import numpy as np


def rng_for(seed):
    return np.random.default_rng(seed)


def random_complex(rng, d, scale=1.0):
    return scale * (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)))


def random_hermitian(rng, d, norm=None):
    a = random_complex(rng, d)
    h = 0.5 * (a + a.conj().T)
    if norm is not None:
        current = np.linalg.norm(h, 2)
        h = h * (norm / current)
    return h


def householder_unitary(rng, d, reflections=2):
    """Unitary built from random complex Householder reflectors."""
    u = np.eye(d, dtype=np.complex128)
    for _ in range(reflections):
        v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        v /= np.linalg.norm(v)
        u = u @ (np.eye(d) - 2.0 * np.outer(v, v.conj()))
    return u


def real_embedding_norm(m):
    """Largest singular value via SVD of the [[Re,-Im],[Im,Re]] embedding."""
    emb = np.block([[m.real, -m.imag], [m.imag, m.real]])
    return float(np.linalg.svd(emb, compute_uv=False)[0])


def scalar_product(values, n):
    """prod (1 + v/n) with plain float arithmetic."""
    acc = 1.0
    for v in values:
        acc *= 1.0 + v / n
    return acc


class ScalarConditionalOracle:
    """E[f | X_1..X_j] for a scalar distribution with finite support,
    computed by exhaustive suffix enumeration (memoized on the prefix)."""

    def __init__(self, values, probs, n):
        self.values = values
        self.probs = probs
        self.n = n
        self._cache = {}

    def cond_exp(self, prefix):
        key = tuple(prefix)
        if key in self._cache:
            return self._cache[key]
        n = self.n
        base = scalar_product(prefix, n)
        j = len(prefix)
        total = 0.0
        for combo in itertools.product(range(len(self.values)), repeat=n - j):
            p = math.prod(self.probs[i] for i in combo)
            f = base
            for i in combo:
                f *= 1.0 + self.values[i] / n
            total += p * f
        self._cache[key] = total
        return total

    def increment(self, prefix, x_k):
        """E[f | prefix, x_k] - E[f | prefix]."""
        return self.cond_exp(list(prefix) + [x_k]) - self.cond_exp(prefix)
