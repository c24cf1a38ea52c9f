"""Error-probability bounds and estimates for Monte Carlo action-value search.

Everything here consumes per-action sufficient statistics collected after a
search and returns probabilities. Two families are provided:

* general bounds -- valid for any bounded-return problem; built from a
  Chernoff tail and an empirical-Bernstein upper bound on the return
  variance at significance ``alpha``.
* CLT bounds -- tighter, valid when the estimator is asymptotically normal;
  Gaussian tail plus the same variance penalty plus a Berry-Esseen
  finite-sample correction of 0.4748/n.

A third path gives plain t-distribution estimates of the same two error
probabilities, with no upper-bound guarantee.

All bound outputs are clamped to [0, 1]: anything above 1 is vacuous as a
probability, and downstream aggregation and plotting want proper values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize

from .stats import normal_cdf, student_t_cdf

__all__ = [
    "BERRY_ESSEEN_CONSTANT",
    "InsufficientSamplesError",
    "ActionSampleSummary",
    "BoundReport",
    "variance_upper_bound",
    "general_value_error_bound",
    "general_action_error_bound",
    "clt_value_error_bound",
    "clt_action_error_bound",
    "t_value_error_estimate",
    "welch_dof",
    "t_action_error_estimate",
    "optimize_alpha",
    "full_report",
]

# Smallest constant known to satisfy the Berry-Esseen theorem (Shevtsova's
# value); enters the CLT bounds as an additive 0.4748/n penalty.
BERRY_ESSEEN_CONSTANT = 0.4748


class InsufficientSamplesError(ValueError):
    """Raised when a bound needs at least two samples and has fewer."""


@dataclass(frozen=True)
class ActionSampleSummary:
    """Per-action sufficient statistics for the bounds.

    Fields:
        n: number of sampled trajectories for the action.
        mean: Monte Carlo action-value estimate (average return).
        variance_vn: 1/n-denominator sample variance of the returns.
        range_b: boundedness constant b. Defaults to the observed sample
            range upstream; callers may substitute a theoretical range
            when the environment provides one.
        zeta: upper bound on the expected bias introduced by truncating
            rollouts and bootstrapping with a baseline leaf estimate.
            Zero when returns are sampled from the true distribution.
        value_floor / value_ceiling: admissible value range carried for
            bookkeeping (the range used for the leaf-error worst case).
    """

    n: int
    mean: float
    variance_vn: float
    range_b: float
    zeta: float = 0.0
    value_floor: float = -math.inf
    value_ceiling: float = math.inf

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.variance_vn < 0.0:
            raise ValueError(f"variance_vn must be >= 0, got {self.variance_vn}")
        if self.range_b <= 0.0:
            raise ValueError(f"range_b must be > 0, got {self.range_b}")
        if self.zeta < 0.0:
            raise ValueError(f"zeta must be >= 0, got {self.zeta}")
        if not (self.value_floor <= self.mean <= self.value_ceiling):
            raise ValueError(
                f"mean {self.mean} outside value range "
                f"[{self.value_floor}, {self.value_ceiling}]"
            )

    @property
    def variance_unbiased(self) -> float:
        if self.n < 2:
            raise InsufficientSamplesError("unbiased variance needs n >= 2")
        return self.variance_vn * self.n / (self.n - 1)


@dataclass(frozen=True)
class BoundReport:
    """The three series computed for one error metric of one search."""

    general_bound: float
    clt_bound: float
    t_estimate: float
    alpha_general: float
    alpha_clt: float
    epsilon: float

    def __post_init__(self) -> None:
        for name in ("general_bound", "clt_bound", "t_estimate"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {p}")
        for name in ("alpha_general", "alpha_clt"):
            a = getattr(self, name)
            if not 0.0 < a < 1.0:
                raise ValueError(f"{name} must be in (0, 1), got {a}")


def _clamp01(p: float) -> float:
    return min(1.0, max(0.0, p))


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")


def _check_n(summary: ActionSampleSummary) -> None:
    if summary.n < 2:
        raise InsufficientSamplesError(
            f"bounds need at least 2 samples per action, got n={summary.n}"
        )


def variance_upper_bound(summary: ActionSampleSummary, alpha: float) -> float:
    """Empirical-Bernstein upper bound on the return variance.

    sigma^2 <= b^2 * (sqrt(V_n)/b + sqrt(-ln(alpha) / (n-1)))^2 with
    probability at least 1 - alpha. Always >= V_n; shrinks toward V_n as
    alpha -> 1 or n grows.
    """
    _check_n(summary)
    _check_alpha(alpha)
    b = summary.range_b
    penalty = math.sqrt(-math.log(alpha) / (summary.n - 1))
    return b * b * (math.sqrt(summary.variance_vn) / b + penalty) ** 2


def general_value_error_bound(
    summary: ActionSampleSummary, epsilon: float, alpha: float
) -> float:
    """Bound on P(estimate >= true optimal value + epsilon).

    exp(-n * max(0, eps - zeta)^2 / (2 sigma_hat^2)) + alpha, clamped.
    """
    sigma2 = variance_upper_bound(summary, alpha)
    margin = max(0.0, epsilon - summary.zeta)
    return _clamp01(math.exp(-summary.n * margin * margin / (2.0 * sigma2)) + alpha)


def general_action_error_bound(
    summary_i: ActionSampleSummary,
    summary_j: ActionSampleSummary,
    epsilon: float,
    alpha: float,
) -> float:
    """Bound on P(true value of a_j >= true value of a_i + epsilon).

    a_i is the recommended action, a_j the challenger; delta is the
    estimate gap mean_i - mean_j. The single alpha is spent once even
    though both per-action variance bounds use it.
    """
    sigma2_i = variance_upper_bound(summary_i, alpha)
    sigma2_j = variance_upper_bound(summary_j, alpha)
    delta = summary_i.mean - summary_j.mean
    margin = max(0.0, delta + epsilon - summary_i.zeta - summary_j.zeta)
    n_i, n_j = summary_i.n, summary_j.n
    exponent = -n_i * n_j * margin * margin / (2.0 * (n_i * sigma2_i + n_j * sigma2_j))
    return _clamp01(math.exp(exponent) + alpha)


def clt_value_error_bound(
    summary: ActionSampleSummary, epsilon: float, alpha: float
) -> float:
    """CLT bound on P(estimate >= true optimal value + epsilon).

    1 - Phi(eps - zeta; 0, sigma_hat^2 / n) + alpha + 0.4748/n, clamped.
    """
    sigma2 = variance_upper_bound(summary, alpha)
    tail = 1.0 - normal_cdf(epsilon - summary.zeta, 0.0, sigma2 / summary.n)
    return _clamp01(tail + alpha + BERRY_ESSEEN_CONSTANT / summary.n)


def clt_action_error_bound(
    summary_i: ActionSampleSummary,
    summary_j: ActionSampleSummary,
    epsilon: float,
    alpha: float,
) -> float:
    """CLT bound on P(true value of a_j >= true value of a_i + epsilon)."""
    sigma2_i = variance_upper_bound(summary_i, alpha)
    sigma2_j = variance_upper_bound(summary_j, alpha)
    delta = summary_i.mean - summary_j.mean
    margin = delta + epsilon - summary_i.zeta - summary_j.zeta
    pooled = sigma2_i / summary_i.n + sigma2_j / summary_j.n
    tail = 1.0 - normal_cdf(margin, 0.0, pooled)
    penalty = BERRY_ESSEEN_CONSTANT / (summary_i.n + summary_j.n)
    return _clamp01(tail + alpha + penalty)


def _degenerate_tail(margin: float) -> float:
    # point-mass sample: the estimate sits exactly on its mean
    if margin > 0.0:
        return 0.0
    if margin < 0.0:
        return 1.0
    return 0.5


def t_value_error_estimate(summary: ActionSampleSummary, epsilon: float) -> float:
    """t-distribution estimate of the value-error probability (no guarantee).

    1 - T_{n-1}((eps - zeta) / SE) with SE = s / sqrt(n), s^2 the unbiased
    sample variance.
    """
    _check_n(summary)
    margin = epsilon - summary.zeta
    se = math.sqrt(summary.variance_unbiased / summary.n)
    if se == 0.0:
        return _degenerate_tail(margin)
    return _clamp01(1.0 - student_t_cdf(margin / se, summary.n - 1))


def welch_dof(
    v_i: float, n_i: int, v_j: float, n_j: int, *, bias_corrected: bool = True
) -> float:
    """Effective degrees of freedom for a difference of two means.

    Default is the Welch-Satterthwaite form with n-1 denominators. With
    ``bias_corrected=False`` the large-sample variant
    (V_i/n_i + V_j/n_j)^2 / (V_i^2/n_i^2 + V_j^2/n_j^2) is used instead.
    """
    if n_i < 2 or n_j < 2:
        raise InsufficientSamplesError("welch_dof needs n >= 2 on both sides")
    if v_i < 0.0 or v_j < 0.0:
        raise ValueError("variances must be >= 0")
    if v_i == 0.0 and v_j == 0.0:
        raise ValueError("welch_dof is undefined when both variances are zero")
    a, b = v_i / n_i, v_j / n_j
    if bias_corrected:
        return (a + b) ** 2 / (a * a / (n_i - 1) + b * b / (n_j - 1))
    return (a + b) ** 2 / (a * a + b * b)


def t_action_error_estimate(
    summary_i: ActionSampleSummary,
    summary_j: ActionSampleSummary,
    epsilon: float,
    *,
    bias_corrected: bool = True,
) -> float:
    """t-distribution estimate of the action-error probability.

    1 - T_nu((delta + eps - zeta_i - zeta_j) / SE) with
    SE^2 = s_i^2/n_i + s_j^2/n_j and nu from :func:`welch_dof`.
    """
    _check_n(summary_i)
    _check_n(summary_j)
    delta = summary_i.mean - summary_j.mean
    margin = delta + epsilon - summary_i.zeta - summary_j.zeta
    s2_i = summary_i.variance_unbiased
    s2_j = summary_j.variance_unbiased
    se = math.sqrt(s2_i / summary_i.n + s2_j / summary_j.n)
    if se == 0.0:
        return _degenerate_tail(margin)
    nu = welch_dof(s2_i, summary_i.n, s2_j, summary_j.n, bias_corrected=bias_corrected)
    return _clamp01(1.0 - student_t_cdf(margin / se, nu))


_ALPHA_LO = 1e-6
_ALPHA_HI = 1.0 - 1e-6
# coarse scan used to seed the simplex; includes 0.05 so the optimized value
# never exceeds the conventional fixed-significance bound
_ALPHA_SCAN = tuple(np.geomspace(1e-4, 0.5, 24)) + (
    0.05,
    0.6,
    0.7,
    0.8,
    0.9,
    0.97,
)


def optimize_alpha(
    bound_fn: Callable[[float], float]
) -> tuple[float, float]:
    """Minimize a bound over its significance level.

    ``bound_fn`` must be total on (0, 1). A coarse scan seeds a
    Nelder-Mead refinement; the best point seen anywhere is returned as
    ``(alpha, bound_fn(alpha))``.
    """

    def clipped(a: float) -> float:
        return bound_fn(min(_ALPHA_HI, max(_ALPHA_LO, a)))

    best_alpha = 0.05
    best_value = math.inf
    for a in _ALPHA_SCAN:
        v = bound_fn(a)
        if v < best_value:
            best_alpha, best_value = a, v
    result = minimize(
        lambda x: clipped(x[0]),
        [best_alpha],
        method="Nelder-Mead",
        options={"xatol": 1e-7, "fatol": 1e-10, "maxiter": 120},
    )
    refined = min(_ALPHA_HI, max(_ALPHA_LO, float(result.x[0])))
    refined_value = bound_fn(refined)
    if refined_value < best_value:
        best_alpha, best_value = refined, refined_value
    return best_alpha, best_value


def full_report(
    summaries: Sequence[ActionSampleSummary],
    best_index: int,
    runner_up_index: int,
    epsilon: float,
    *,
    fixed_alpha: float | None = None,
) -> tuple[BoundReport, BoundReport]:
    """Bounds and estimates for the two top-ranked actions of one search.

    Returns a pair: the value-error report for the best action and the
    action-error report for best vs runner-up. When ``fixed_alpha`` is
    None each bound is minimized over alpha independently.
    """
    if len(summaries) < 2:
        raise ValueError("full_report needs at least two action summaries")
    if best_index == runner_up_index:
        raise ValueError("best and runner-up must be distinct actions")
    best = summaries[best_index]
    runner = summaries[runner_up_index]
    if best is None or runner is None:
        raise ValueError("both chosen actions need at least one sample")
    for summary in (best, runner):
        _check_n(summary)

    def optimized(fn: Callable[[float], float]) -> tuple[float, float]:
        if fixed_alpha is not None:
            _check_alpha(fixed_alpha)
            return fixed_alpha, fn(fixed_alpha)
        return optimize_alpha(fn)

    a_gen_v, gen_v = optimized(lambda a: general_value_error_bound(best, epsilon, a))
    a_clt_v, clt_v = optimized(lambda a: clt_value_error_bound(best, epsilon, a))
    value_report = BoundReport(
        general_bound=gen_v,
        clt_bound=clt_v,
        t_estimate=t_value_error_estimate(best, epsilon),
        alpha_general=a_gen_v,
        alpha_clt=a_clt_v,
        epsilon=epsilon,
    )

    a_gen_a, gen_a = optimized(
        lambda a: general_action_error_bound(best, runner, epsilon, a)
    )
    a_clt_a, clt_a = optimized(
        lambda a: clt_action_error_bound(best, runner, epsilon, a)
    )
    action_report = BoundReport(
        general_bound=gen_a,
        clt_bound=clt_a,
        t_estimate=t_action_error_estimate(best, runner, epsilon),
        alpha_general=a_gen_a,
        alpha_clt=a_clt_a,
        epsilon=epsilon,
    )
    return value_report, action_report
