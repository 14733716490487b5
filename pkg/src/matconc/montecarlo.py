"""Monte Carlo tail estimation for ||prod(I + X_i/n) - exp(mu)||, the
bound-comparison harness, and the scalar two-point lower-bound experiment.

Trials are independent tasks: trial i derives its stream from
(seed, trial_index=i), per-threshold exceedance counts merge by integer
addition, so results are identical for any worker count or chunking.
"""

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._backend import get_backend
from ._csvio import fmt_flag, fmt_float, write_csv
from .bounds import (
    BoundParams,
    bernstein_tail,
    freedman_tail,
    hw19_deviation,
    main_tail,
)
from .distributions import RandomStream, distribution_to_config, sample_stack
from .errors import ConfigError
from .exactbinom import binom_half_tail, ceil_threshold, clopper_pearson
from .linalg import matrix_exp, op_norm
from .martingale import increment_norm_bound, variation_norm_bound

CI_ALPHA = 0.05  # Clopper-Pearson level is fixed at 95%
DEFAULT_GRID_POINTS = 26


@dataclass
class TailEstimate:
    """Empirical exceedance probabilities of the deviation on a t-grid,
    with exact binomial confidence intervals."""

    t_grid: np.ndarray
    counts: np.ndarray
    trials: int
    p_hat: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray
    config: dict = field(default_factory=dict)


@dataclass
class BoundComparison:
    """Per-threshold juxtaposition of the estimate with every bound, plus
    the largest constant c for which the main bound dominates ci_high on
    the valid range (math.inf when no threshold is binding)."""

    estimate: TailEstimate
    params: BoundParams
    bernstein: np.ndarray
    bernstein_valid: np.ndarray
    main: np.ndarray
    main_valid: np.ndarray
    hw19: float
    freedman: np.ndarray
    fitted_c: float


@dataclass
class LowerBoundReport:
    """Scalar two-point lower-bound experiment results.

    empirical_probs: Monte Carlo Pr[prod(1 + X_i/n) - e^L >= c L e^L];
    exp_form_probs : exact Pr[exp(sum X_i/n) - e^L >= c L e^L] via the
                     binomial tail at threshold ceil(n/2 (1 + log(1+cL)/L));
    rademacher_floor: exact Pr[sum Y_i / n >= c], independent of L.
    """

    L_values: list
    c: float
    n: int
    trials: int
    seed: int
    empirical_probs: np.ndarray
    exp_form_probs: np.ndarray
    rademacher_floor: float


def default_t_grid(n, d, L):
    """26 points spanning [0, 2 L e^L sqrt(log d / n)] (log 2 replaces
    log d when d = 1, where the window formula degenerates)."""
    edge = 2.0 * L * math.exp(L) * math.sqrt(math.log(max(d, 2)) / n)
    return np.linspace(0.0, edge, DEFAULT_GRID_POINTS)


def _validate_grid(t_grid):
    grid = np.asarray(t_grid, dtype=np.float64)
    if grid.ndim != 1 or grid.size < 1:
        raise ConfigError("t_grid must be a nonempty 1-d sequence")
    if not np.isfinite(grid).all() or (grid < 0).any():
        raise ConfigError("t_grid entries must be finite and nonnegative")
    if (np.diff(grid) < 0).any():
        raise ConfigError("t_grid must be ascending")
    return grid


def _chunk_counts(dist, n, t_grid, seed, start, stop, exp_mu):
    """Exceedance counts for trials start..stop-1 (>= comparison per the
    closed-tail convention)."""
    backend = get_backend()
    scale = 1.0 / n
    devs = np.empty(stop - start)
    for i in range(start, stop):
        xs = sample_stack(dist, RandomStream(seed, i), n)
        prod = backend.chain_product(xs, scale)
        devs[i - start] = op_norm(prod - exp_mu)
    return (devs[:, None] >= t_grid[None, :]).sum(axis=0).astype(np.int64)


def estimate_tail(dist, n, trials, t_grid, seed, workers=None):
    """Monte Carlo exceedance estimate of the deviation over a t-grid.

    Fully determined by (dist, n, trials, t_grid, seed); worker count only
    affects wall time.
    """
    if trials < 1:
        raise ConfigError("trials must be >= 1")
    if n < 1:
        raise ConfigError("n must be >= 1")
    grid = _validate_grid(t_grid)
    exp_mu = matrix_exp(dist.mean())
    if workers is None or workers < 1:
        workers = os.cpu_count() or 1
    chunk = max(1, min(2048, math.ceil(trials / (4 * workers))))
    ranges = [(s, min(s + chunk, trials)) for s in range(0, trials, chunk)]
    counts = np.zeros(grid.size, dtype=np.int64)
    if workers == 1 or len(ranges) == 1:
        for start, stop in ranges:
            counts += _chunk_counts(dist, n, grid, seed, start, stop, exp_mu)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_chunk_counts, dist, n, grid, seed, start, stop, exp_mu)
                for start, stop in ranges
            ]
            for fut in futures:
                counts += fut.result()
    ci = np.array([clopper_pearson(int(k), trials, CI_ALPHA) for k in counts])
    return TailEstimate(
        t_grid=grid,
        counts=counts,
        trials=trials,
        p_hat=counts / trials,
        ci_low=ci[:, 0],
        ci_high=ci[:, 1],
        config={
            "distribution": distribution_to_config(dist),
            "n": int(n),
            "d": int(dist.d),
            "trials": int(trials),
            "seed": int(seed),
            "t_grid": [float(t) for t in grid],
        },
    )


def compare_bounds(est, params):
    """Evaluate every bound on the estimate's grid and fit the admissible
    constant: the largest c with main_tail >= ci_high at every valid t."""
    cfg = est.config
    if cfg:
        if cfg.get("n") != params.n or cfg.get("d") != params.d:
            raise ConfigError(
                "BoundParams (n,d) do not match the estimate's configuration"
            )
    bern = np.empty(est.t_grid.size)
    bern_ok = np.empty(est.t_grid.size, dtype=bool)
    main = np.empty(est.t_grid.size)
    main_ok = np.empty(est.t_grid.size, dtype=bool)
    freed = np.empty(est.t_grid.size)
    for i, t in enumerate(est.t_grid):
        p = params.with_(t=float(t))
        bern[i], bern_ok[i] = bernstein_tail(p)
        main[i], main_ok[i] = main_tail(p)
        freed[i] = freedman_tail(p)
    hw = hw19_deviation(params).value

    # main_tail(c) >= ci_high(t) iff c <= L^2 e^{2L}/(n t^2) * log(2d/ci_high);
    # minimize over the binding (valid, t>0) thresholds.
    fitted = math.inf
    scale = params.L * params.L * math.exp(2.0 * params.L) / params.n
    for i, t in enumerate(est.t_grid):
        if t <= 0.0 or not main_ok[i]:
            continue
        cap = scale / float(t * t) * math.log(2.0 * params.d / est.ci_high[i])
        fitted = min(fitted, cap)
    return BoundComparison(
        estimate=est,
        params=params,
        bernstein=bern,
        bernstein_valid=bern_ok,
        main=main,
        main_valid=main_ok,
        hw19=hw,
        freedman=freed,
        fitted_c=fitted,
    )


def bound_params_for(dist, n, delta, c, hw_constant):
    """BoundParams for an experiment on `dist`: L is the certified sample
    bound and (R, sigma2) the martingale constants it implies."""
    L = dist.norm_bound()
    if L <= 0:
        raise ConfigError("bound evaluation needs a positive norm bound L")
    return BoundParams(
        n=int(n),
        d=int(dist.d),
        L=L,
        delta=delta,
        c=c,
        hw_constant=hw_constant,
        R=increment_norm_bound(n, L),
        sigma2=variation_norm_bound(n, L),
    )


def lower_bound_experiment(L_values, c, n, trials, seed):
    """Two-point scalar lower-bound experiment across L values.

    Per trial the count m of 2L-valued factors is Binomial(n, 1/2) and the
    product equals (1 + 2L/n)^m exactly, so m is sampled directly (stream
    (seed, L-index)) and the product-form event evaluated from it. The
    exp-form and Rademacher-floor probabilities are exact binomial tails;
    thresholds use the documented ceiling convention (ceil_threshold).
    """
    if not (math.isfinite(c) and c > 0):
        raise ConfigError(f"c must be a positive real, got {c!r}")
    if n < 1 or trials < 1:
        raise ConfigError("n and trials must be >= 1")
    L_values = [float(L) for L in L_values]
    if not L_values or any(not (math.isfinite(L) and L > 0) for L in L_values):
        raise ConfigError("L_values must be positive reals")
    empirical = np.empty(len(L_values))
    exp_form = np.empty(len(L_values))
    for idx, L in enumerate(L_values):
        gen = RandomStream(seed, idx).generator()
        m = gen.binomial(n, 0.5, size=trials)
        prods = np.power(1.0 + 2.0 * L / n, m.astype(np.float64))
        threshold = (1.0 + c * L) * math.exp(L)
        empirical[idx] = int((prods >= threshold).sum()) / trials
        k_exp = ceil_threshold(0.5 * n * (1.0 + math.log1p(c * L) / L))
        exp_form[idx] = binom_half_tail(n, k_exp)
    floor = binom_half_tail(n, ceil_threshold(0.5 * n * (1.0 + c)))
    return LowerBoundReport(
        L_values=L_values,
        c=float(c),
        n=int(n),
        trials=int(trials),
        seed=int(seed),
        empirical_probs=empirical,
        exp_form_probs=exp_form,
        rademacher_floor=floor,
    )


def write_tail_csv(comparison, path):
    """Tail CSV: t, count, trials, p_hat, ci_low, ci_high, bernstein,
    bernstein_valid, main, main_valid, hw19, freedman."""
    est = comparison.estimate
    header = [
        "t",
        "count",
        "trials",
        "p_hat",
        "ci_low",
        "ci_high",
        "bernstein",
        "bernstein_valid",
        "main",
        "main_valid",
        "hw19",
        "freedman",
    ]
    rows = []
    for i, t in enumerate(est.t_grid):
        rows.append(
            [
                fmt_float(t),
                str(int(est.counts[i])),
                str(est.trials),
                fmt_float(est.p_hat[i]),
                fmt_float(est.ci_low[i]),
                fmt_float(est.ci_high[i]),
                fmt_float(comparison.bernstein[i]),
                fmt_flag(comparison.bernstein_valid[i]),
                fmt_float(comparison.main[i]),
                fmt_flag(comparison.main_valid[i]),
                fmt_float(comparison.hw19),
                fmt_float(comparison.freedman[i]),
            ]
        )
    write_csv(path, header, rows)


def write_lower_bound_csv(reports, path):
    """Lower-bound CSV (one report or a list, one row per (c, L)):
    L, c, n, empirical_product_prob, exact_exp_form_prob, rademacher_floor."""
    if isinstance(reports, LowerBoundReport):
        reports = [reports]
    header = [
        "L",
        "c",
        "n",
        "empirical_product_prob",
        "exact_exp_form_prob",
        "rademacher_floor",
    ]
    rows = []
    for report in reports:
        for i, L in enumerate(report.L_values):
            rows.append(
                [
                    fmt_float(L),
                    fmt_float(report.c),
                    str(report.n),
                    fmt_float(report.empirical_probs[i]),
                    fmt_float(report.exp_form_probs[i]),
                    fmt_float(report.rademacher_floor),
                ]
            )
    write_csv(path, header, rows)
