"""Doob martingale decomposition of the normalized matrix product.

With f = prod_i (I + X_i/n) and mu = E[X], the increments of the Doob
martingale E[f | X_1..X_k] have the closed form

    Y_k = [prod_{i<k} (I + X_i/n)] (X_k - mu)/n (I + mu/n)^(n-k),

they telescope to f - (I + mu/n)^n, and under ||X_i|| <= L, ||mu|| <= L they
satisfy ||Y_k|| <= (2L/n)(1+L/n)^(n-1) <= 2Le^L/n and a predictable
quadratic variation bound ||sum_{i<=k} E[Y_i Y_i* | past]|| <= 4L^2 e^{2L}/n.
This module computes the increments, exact conditional variations for
finitely supported distributions, and certifies both bounds.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._backend import get_backend
from .errors import ConfigError, HypothesisError, UnsupportedDistributionError
from .linalg import as_matrix, matrix_power, op_norm, op_norms
from .products import as_instance
from ._csvio import fmt_float, write_csv

# Relative grace for the norm-hypothesis check; certified samplers guarantee
# op_norm <= L + 1e-12, comfortably inside.
HYPOTHESIS_RTOL = 1e-9


def increment_norm_bound(n, L):
    """2Le^L/n, the almost-sure increment bound."""
    return 2.0 * L * math.exp(L) / n


def variation_norm_bound(n, L):
    """4L^2 e^{2L}/n, the predictable quadratic variation bound."""
    return 4.0 * L * L * math.exp(2.0 * L) / n


@dataclass
class MartingaleTrace:
    n: int
    d: int
    L: float
    increments: np.ndarray        # (n,d,d) Y_k
    partial_sums: np.ndarray      # (n,d,d) running sums of Y_k
    increment_norms: np.ndarray   # (n,)
    r_bound: float                # 2Le^L/n
    sigma2_bound: float           # 4L^2 e^{2L}/n
    w1_norms: np.ndarray | None = None  # ||sum_{i<=k} E[Y_i Y_i* | past]||
    w2_norms: np.ndarray | None = None  # same with Y* Y
    w1_step_norm_sum: float | None = None  # sum_k ||E[Y_k Y_k* | past]||
    w2_step_norm_sum: float | None = None


@dataclass
class CertificationReport:
    n: int
    L: float
    r_bound: float
    max_increment_norm: float
    increment_ok: bool
    increment_slack: float
    sigma2_bound: float
    max_w1_norm: float | None = None
    max_w2_norm: float | None = None
    w1_step_norm_sum: float | None = None
    w2_step_norm_sum: float | None = None
    variation_ok: bool | None = None
    variation_slack: float | None = None

    @property
    def ok(self):
        return self.increment_ok and self.variation_ok is not False

    def violations(self):
        out = []
        if not self.increment_ok:
            out.append(
                f"max increment norm {self.max_increment_norm:.17g} exceeds "
                f"bound {self.r_bound:.17g}"
            )
        if self.variation_ok is False:
            out.append(
                "predictable variation exceeds bound "
                f"{self.sigma2_bound:.17g} (max W1 {self.max_w1_norm:.17g}, "
                f"max W2 {self.max_w2_norm:.17g}, step-norm sums "
                f"{self.w1_step_norm_sum:.17g}/{self.w2_step_norm_sum:.17g})"
            )
        return out


def _check_hypotheses(xs, mu, L):
    grace = HYPOTHESIS_RTOL * max(1.0, L)
    mu_norm = op_norm(mu)
    if mu_norm > L + grace:
        raise HypothesisError(
            f"op_norm(mu)={mu_norm:.6g} exceeds the hypothesis bound L={L:.6g}"
        )
    norms = op_norms(xs)
    bad = int(np.argmax(norms)) if norms.size else 0
    if norms.size and norms[bad] > L + grace:
        raise HypothesisError(
            f"sample {bad} has op_norm {norms[bad]:.6g} > L={L:.6g}; "
            "the concentration hypotheses do not apply"
        )


def doob_increment(k, samples, mu):
    """Closed-form k-th increment (k is 1-based).

    Y_k = [prod_{i<k}(I+X_i/n)] (X_k - mu)/n (I + mu/n)^(n-k).
    """
    xs = as_instance(samples)
    m = as_matrix(mu)
    n, d = xs.shape[0], xs.shape[1]
    if m.shape[0] != d:
        raise ConfigError("mean dimension does not match samples")
    if not 1 <= k <= n:
        raise IndexError(f"k={k} outside 1..{n}")
    backend = get_backend()
    eye = np.eye(d, dtype=np.complex128)
    prefix = backend.chain_product(xs[: k - 1], 1.0 / n) if k > 1 else eye
    suffix = matrix_power(eye + m / n, n - k)
    return prefix @ ((xs[k - 1] - m) / n) @ suffix


def decompose(samples, mu, L, dist=None):
    """Full martingale trace for one product instance.

    Requires op_norm(X_i) <= L and op_norm(mu) <= L (HypothesisError
    otherwise). When `dist` is given and finitely supported, the exact
    per-step predictable variations E[Y_k Y_k* | X_1..X_{k-1}] (and the
    Y*Y form) are accumulated along the sampled path and their running
    norms recorded; for continuous distributions only the theoretical
    bound certification applies.
    """
    xs = as_instance(samples)
    m = as_matrix(mu)
    n, d = xs.shape[0], xs.shape[1]
    if m.shape[0] != d:
        raise ConfigError("mean dimension does not match samples")
    if not (math.isfinite(L) and L > 0):
        raise ConfigError(f"L must be a positive real, got {L!r}")
    _check_hypotheses(xs, m, L)

    backend = get_backend()
    increments = backend.doob_increments(xs, m, 1.0 / n)
    partial_sums = np.cumsum(increments, axis=0)
    increment_norms = op_norms(increments)
    trace = MartingaleTrace(
        n=n,
        d=d,
        L=L,
        increments=increments,
        partial_sums=partial_sums,
        increment_norms=increment_norms,
        r_bound=increment_norm_bound(n, L),
        sigma2_bound=variation_norm_bound(n, L),
    )
    if dist is not None and dist.is_finitely_supported():
        if not np.allclose(m, dist.mean(), atol=1e-12):
            raise ConfigError("exact variation mode needs mu == dist.mean()")
        _attach_exact_variations(trace, xs, m, dist)
    return trace


def _attach_exact_variations(trace, xs, mu, dist):
    n, d = trace.n, trace.d
    eye = np.eye(d, dtype=np.complex128)
    step = eye + mu / n
    support = dist.support()
    # suffix[j] = step**j, built once; prefix accumulated along the path.
    suffix = np.empty((n, d, d), dtype=np.complex128)
    suffix[0] = eye
    for j in range(1, n):
        suffix[j] = suffix[j - 1] @ step
    w1 = np.zeros((d, d), dtype=np.complex128)
    w2 = np.zeros((d, d), dtype=np.complex128)
    w1_norms = np.empty(n)
    w2_norms = np.empty(n)
    sum1 = 0.0
    sum2 = 0.0
    prefix = eye.copy()
    for k in range(n):
        s = suffix[n - 1 - k]
        e1 = np.zeros((d, d), dtype=np.complex128)
        e2 = np.zeros((d, d), dtype=np.complex128)
        for prob, x in support:
            y = prefix @ ((x - mu) / n) @ s
            e1 += prob * (y @ y.conj().T)
            e2 += prob * (y.conj().T @ y)
        w1 += e1
        w2 += e2
        w1_norms[k] = op_norm(w1)
        w2_norms[k] = op_norm(w2)
        sum1 += op_norm(e1)
        sum2 += op_norm(e2)
        prefix = prefix @ (eye + xs[k] / n)
    trace.w1_norms = w1_norms
    trace.w2_norms = w2_norms
    trace.w1_step_norm_sum = sum1
    trace.w2_step_norm_sum = sum2


def predictable_variation(k, prefix, dist, n, side="left"):
    """Exact E[Y_k Y_k* | X_1..X_{k-1}] (side="left") or E[Y_k* Y_k | ...]
    (side="right") for a finitely supported distribution.

    `prefix` is the (k-1,d,d) stack of conditioning samples X_1..X_{k-1}.
    """
    if side not in ("left", "right"):
        raise ConfigError(f"side must be 'left' or 'right', got {side!r}")
    if not dist.is_finitely_supported():
        raise UnsupportedDistributionError(
            "exact conditional variations need a finitely supported "
            "distribution; use certify_bounds for the theoretical bound"
        )
    if not 1 <= k <= n:
        raise IndexError(f"k={k} outside 1..{n}")
    mu = dist.mean()
    d = dist.d
    eye = np.eye(d, dtype=np.complex128)
    prefix = np.asarray(prefix, dtype=np.complex128).reshape(k - 1, d, d)
    backend = get_backend()
    p = backend.chain_product(prefix, 1.0 / n) if k > 1 else eye
    s = matrix_power(eye + mu / n, n - k)
    acc = np.zeros((d, d), dtype=np.complex128)
    for prob, x in dist.support():
        y = p @ ((x - mu) / n) @ s
        acc += prob * (y @ y.conj().T if side == "left" else y.conj().T @ y)
    return acc


def certify_bounds(trace, rtol=1e-12):
    """Check the trace against the theoretical increment and variation
    bounds; violations are reported in the result, never raised."""
    max_inc = float(trace.increment_norms.max()) if trace.n else 0.0
    inc_ok = max_inc <= trace.r_bound * (1.0 + rtol)
    report = CertificationReport(
        n=trace.n,
        L=trace.L,
        r_bound=trace.r_bound,
        max_increment_norm=max_inc,
        increment_ok=inc_ok,
        increment_slack=trace.r_bound - max_inc,
        sigma2_bound=trace.sigma2_bound,
    )
    if trace.w1_norms is not None:
        report.max_w1_norm = float(trace.w1_norms.max())
        report.max_w2_norm = float(trace.w2_norms.max())
        report.w1_step_norm_sum = float(trace.w1_step_norm_sum)
        report.w2_step_norm_sum = float(trace.w2_step_norm_sum)
        cap = trace.sigma2_bound * (1.0 + rtol)
        worst = max(
            report.max_w1_norm,
            report.max_w2_norm,
            report.w1_step_norm_sum,
            report.w2_step_norm_sum,
        )
        report.variation_ok = worst <= cap
        report.variation_slack = trace.sigma2_bound - worst
    return report


def trace_to_csv(trace, path):
    """Write the per-step trace (columns k, increment_norm,
    partial_sum_norm, w1_norm, w2_norm, r_bound, sigma2_bound)."""
    partial_norms = op_norms(trace.partial_sums)
    header = [
        "k",
        "increment_norm",
        "partial_sum_norm",
        "w1_norm",
        "w2_norm",
        "r_bound",
        "sigma2_bound",
    ]
    rows = []
    for k in range(trace.n):
        rows.append(
            [
                str(k + 1),
                fmt_float(trace.increment_norms[k]),
                fmt_float(partial_norms[k]),
                fmt_float(trace.w1_norms[k]) if trace.w1_norms is not None else "",
                fmt_float(trace.w2_norms[k]) if trace.w2_norms is not None else "",
                fmt_float(trace.r_bound),
                fmt_float(trace.sigma2_bound),
            ]
        )
    write_csv(path, header, rows)
