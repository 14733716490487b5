"""Closed-form tail and deviation bounds for the normalized matrix product.

Four evaluators, natural logarithms throughout, values returned un-clamped
(they may exceed 1; use clamp_probability for a probability-scale value):

bernstein_tail    2d exp(-n t^2 / 2L^2), the sum-of-matrices benchmark;
                  valid for t <= L sqrt(log d / n) and n >= log d.
main_tail         2d exp(-c n t^2 / L^2 e^{2L}); valid for
                  t <= L e^L sqrt(log d / n). c is an absolute constant the
                  theory does not pin down; the default 1/8 is a
                  conventional choice, not a derived value.
main_deviation    the t solving main_tail = delta:
                  (L e^L / sqrt(c n)) sqrt(log(2d/delta)).
hw19_deviation    the earlier log-factor-carrying deviation bound
                  hw_constant * L e^L log(n)/sqrt(n) *
                  (sqrt(log(d/delta) + log(n)^2) + log(n)/sqrt(n))
                  + L^2 e^L / n, with validity flag
                  max{3, L e^2} <= log(n)+1 <= (16n / log(d n e/delta))^(1/3).
                  hw_constant stands for an unspecified O(L e^L) prefactor;
                  default 1, equally conventional.
freedman_tail     2d exp(-c t^2 / (R t + sigma^2)) for a matrix martingale
                  with increment bound R and predictable-variation bound
                  sigma^2.
"""

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

from .errors import ConfigError

#: Conventional default for the unspecified absolute constant c; not a
#: derived value.
DEFAULT_C = 0.125
DEFAULT_HW_CONSTANT = 1.0
DEFAULT_DELTA = 0.05


@dataclass(frozen=True)
class BoundParams:
    """Symbol bundle consumed by the bound evaluators.

    n: sample count; d: dimension; L: almost-sure operator-norm bound;
    t: deviation threshold; delta: failure probability in (0,1);
    c: absolute constant in the exponents (default DEFAULT_C, conventional);
    hw_constant: prefactor of the log-carrying deviation bound;
    R, sigma2: martingale increment/variation bounds for freedman_tail
    (None until supplied; see martingale_freedman_params).
    """

    n: int
    d: int
    L: float
    t: float = 0.0
    delta: float = DEFAULT_DELTA
    c: float = DEFAULT_C
    hw_constant: float = DEFAULT_HW_CONSTANT
    R: float | None = None
    sigma2: float | None = None

    def __post_init__(self):
        if not (isinstance(self.n, (int,)) and self.n >= 1):
            raise ConfigError(f"n must be a positive integer, got {self.n!r}")
        if not (isinstance(self.d, (int,)) and self.d >= 1):
            raise ConfigError(f"d must be a positive integer, got {self.d!r}")
        for name in ("L", "c", "hw_constant"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ConfigError(f"{name} must be a positive real, got {v!r}")
        if not (math.isfinite(self.t) and self.t >= 0):
            raise ConfigError(f"t must be a nonnegative real, got {self.t!r}")
        if not (0.0 < self.delta < 1.0):
            raise ConfigError(f"delta must lie in (0,1), got {self.delta!r}")
        for name in ("R", "sigma2"):
            v = getattr(self, name)
            if v is not None and not (math.isfinite(v) and v >= 0):
                raise ConfigError(f"{name} must be nonnegative, got {v!r}")

    def with_(self, **kw):
        return replace(self, **kw)


class BoundValue(NamedTuple):
    value: float
    valid: bool


def martingale_freedman_params(n, L):
    """(R, sigma2) = (2Le^L/n, 4L^2 e^{2L}/n), the certified martingale
    constants for the normalized product under the norm-L hypothesis."""
    return 2.0 * L * math.exp(L) / n, 4.0 * L * L * math.exp(2.0 * L) / n


def bernstein_tail(p):
    """Matrix Bernstein benchmark for the averaged sum: 2d exp(-n t^2/2L^2)."""
    value = 2.0 * p.d * math.exp(-p.n * p.t * p.t / (2.0 * p.L * p.L))
    logd = math.log(p.d)
    valid = p.t <= p.L * math.sqrt(logd / p.n) and p.n >= logd
    return BoundValue(value, valid)


def main_tail(p):
    """Product concentration tail: 2d exp(-c n t^2 / L^2 e^{2L})."""
    value = 2.0 * p.d * math.exp(-p.c * p.n * p.t * p.t / (p.L * p.L * math.exp(2.0 * p.L)))
    valid = p.t <= p.L * math.exp(p.L) * math.sqrt(math.log(p.d) / p.n)
    return BoundValue(value, valid)


def main_deviation(p):
    """Invert main_tail at delta: t = (L e^L/sqrt(c n)) sqrt(log(2d/delta))."""
    return (
        p.L
        * math.exp(p.L)
        / math.sqrt(p.c * p.n)
        * math.sqrt(math.log(2.0 * p.d / p.delta))
    )


def hw19_deviation(p):
    """Log-factor-carrying deviation bound at confidence 1 - 2*delta."""
    logn = math.log(p.n)
    sqrtn = math.sqrt(p.n)
    lead = p.hw_constant * p.L * math.exp(p.L) * logn / sqrtn
    value = (
        lead * (math.sqrt(math.log(p.d / p.delta) + logn * logn) + logn / sqrtn)
        + p.L * p.L * math.exp(p.L) / p.n
    )
    lower = max(3.0, p.L * math.e * math.e)
    upper = (16.0 * p.n / math.log(p.d * p.n * math.e / p.delta)) ** (1.0 / 3.0)
    valid = lower <= logn + 1.0 <= upper
    return BoundValue(value, valid)


def freedman_tail(p):
    """Matrix martingale tail 2d exp(-c t^2/(R t + sigma^2)).

    Degenerate case R*t + sigma^2 = 0 with t > 0 (a deterministic
    martingale) returns 0.
    """
    if p.R is None or p.sigma2 is None:
        raise ConfigError("freedman_tail needs R and sigma2")
    if p.t == 0.0:
        return 2.0 * p.d
    denom = p.R * p.t + p.sigma2
    if denom == 0.0:
        return 0.0
    return 2.0 * p.d * math.exp(-p.c * p.t * p.t / denom)


def clamp_probability(x):
    """Probability-scale accessor for a (possibly > 1) bound value."""
    return min(float(x), 1.0)
