"""Enumeration-oracle equivalence checks.

Each check recomputes a closed-form quantity through an independent route
(exhaustive outcome enumeration or exact binomial summation) and reports the
worst discrepancy. These back the `oracle-check` CLI command; the test suite
additionally holds fully independent scalar reimplementations.
"""

import math
from dataclasses import dataclass

import numpy as np

from .distributions import diagonal_rademacher, enumerate_outcomes, two_point_scalar
from .exactbinom import binom_half_tail, ceil_threshold
from .martingale import doob_increment
from .products import expected_product, normalized_product


@dataclass
class OracleResult:
    name: str
    passed: bool
    max_error: float
    tolerance: float
    detail: str = ""


def _conditional_expectation(outcomes, fixed):
    """E[f | X_1..X_j = fixed] by averaging the product over all outcome
    sequences extending `fixed`."""
    j = len(fixed)
    total = np.zeros_like(outcomes[0][1][0])
    mass = 0.0
    for prob, stack in outcomes:
        if all(np.array_equal(stack[i], fixed[i]) for i in range(j)):
            total = total + prob * normalized_product(stack)
            mass += prob
    return total / mass


def check_doob_closed_form(n_max=6, tol=1e-13):
    """Closed-form Y_k vs the enumeration-computed conditional-expectation
    difference, for every k and every prefix of the two finite kinds."""
    worst = 0.0
    for dist in (two_point_scalar(1.0), diagonal_rademacher(1, 1.0)):
        mu = dist.mean()
        for n in range(1, n_max + 1):
            outcomes = enumerate_outcomes(dist, n)
            for _, stack in outcomes:
                for k in range(1, n + 1):
                    closed = doob_increment(k, stack, mu)
                    e_k = _conditional_expectation(outcomes, stack[:k])
                    e_km1 = _conditional_expectation(outcomes, stack[: k - 1])
                    worst = max(worst, float(np.abs(closed - (e_k - e_km1)).max()))
    return OracleResult("doob_closed_form_vs_enumeration", worst <= tol, worst, tol)


def check_martingale_property(n_max=6, tol=1e-13):
    """Conditional mean of Y_k given any prefix is the zero matrix."""
    worst = 0.0
    for dist in (two_point_scalar(1.0), diagonal_rademacher(1, 1.0)):
        mu = dist.mean()
        support = dist.support()
        for n in range(1, n_max + 1):
            for _, stack in enumerate_outcomes(dist, n):
                for k in range(1, n + 1):
                    mean_inc = np.zeros_like(mu)
                    for prob, x in support:
                        path = stack.copy()
                        path[k - 1] = x
                        mean_inc = mean_inc + prob * doob_increment(k, path, mu)
                    worst = max(worst, float(np.abs(mean_inc).max()))
    return OracleResult("doob_conditional_mean_zero", worst <= tol, worst, tol)


def check_exact_expectation(n=8, tol=1e-12):
    """sum_outcomes p * f(outcome) == (I + mu/n)^n for the finite kinds."""
    worst = 0.0
    for dist in (two_point_scalar(1.0), diagonal_rademacher(1, 1.0)):
        mu = dist.mean()
        acc = np.zeros_like(mu)
        for prob, stack in enumerate_outcomes(dist, n):
            acc = acc + prob * normalized_product(stack)
        worst = max(worst, float(np.abs(acc - expected_product(mu, n)).max()))
    return OracleResult("exact_expectation_vs_enumeration", worst <= tol, worst, tol)


def check_scalar_chain(n=200, tol=0.0):
    """The two-point probability chain: with thresholds in count space,
    P[exp-form event] = P[shifted-count tail] >= P[Rademacher floor], every
    side an exact binomial tail."""
    ok = True
    detail = []
    for c in (0.05, 0.1, 0.2):
        floor = binom_half_tail(n, ceil_threshold(0.5 * n * (1.0 + c)))
        for L in (0.5, 1.0, 2.0, 4.0):
            k_exp = ceil_threshold(0.5 * n * (1.0 + math.log1p(c * L) / L))
            exp_form = binom_half_tail(n, k_exp)
            if exp_form + tol < floor:
                ok = False
                detail.append(f"exp_form({L=},{c=})={exp_form} < floor={floor}")
    return OracleResult(
        "scalar_lower_bound_chain", ok, 0.0, tol, detail="; ".join(detail)
    )


def run_all(n_max=6):
    return [
        check_doob_closed_form(n_max),
        check_martingale_property(n_max),
        check_exact_expectation(),
        check_scalar_chain(),
    ]
