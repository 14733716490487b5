"""Exact symmetric-binomial tails and Clopper-Pearson intervals.

Tails are summed in log space from log-binomial coefficients, so they stay
exact to ~1e-14 relative up to n ~ 1e4 without overflow.
"""

import math

from scipy.stats import beta as _beta

from .errors import ConfigError

#: Event thresholds like n(1+c)/2 are mathematically integers for round
#: parameter choices but land 1ulp above the integer in floats; values
#: within this grace of an integer snap to it before the ceiling.
THRESHOLD_GRACE = 1e-9


def ceil_threshold(x):
    """Smallest integer >= x, snapping values within THRESHOLD_GRACE."""
    r = round(x)
    if abs(x - r) <= THRESHOLD_GRACE:
        return int(r)
    return int(math.ceil(x))


def log_binom(n, k):
    """log C(n,k) via lgamma."""
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def binom_half_tail(n, k0):
    """P[Binomial(n, 1/2) >= k0], exact log-space summation."""
    if n < 0:
        raise ConfigError(f"n must be nonnegative, got {n}")
    if k0 <= 0:
        return 1.0
    if k0 > n:
        return 0.0
    nlog2 = n * math.log(2.0)
    terms = [log_binom(n, k) - nlog2 for k in range(k0, n + 1)]
    m = max(terms)
    return math.exp(m) * math.fsum(math.exp(t - m) for t in terms)


def clopper_pearson(count, trials, alpha=0.05):
    """Exact binomial (1-alpha) confidence interval for count/trials."""
    if not 0 <= count <= trials:
        raise ConfigError(f"count {count} outside 0..{trials}")
    if trials < 1:
        raise ConfigError("trials must be >= 1")
    if count == 0:
        lo = 0.0
    else:
        lo = float(_beta.ppf(alpha / 2.0, count, trials - count + 1))
    if count == trials:
        hi = 1.0
    else:
        hi = float(_beta.ppf(1.0 - alpha / 2.0, count + 1, trials - count))
    return lo, hi
