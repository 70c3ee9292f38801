"""Hypothesis tests and confidence intervals for quantile measures.

Variances come from the delta method applied to the joint covariance of
the quantile estimators involved.  For a linear combination theta = b'Q
the variance is b' Sigma b.  For a ratio R = theta1/theta2,

    var(R) = R^2 (v1/theta1^2 + v2/theta2^2 - 2 v12/(theta1 theta2)),

and on the log scale var(log R) = var(R)/R^2, which generally yields
better-calibrated intervals for ratio measures.  Tests are Wald tests
against a normal reference distribution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtr, ndtri

from .measures import MeasureSpec
from .qcov import QuantileCov, qcov
from .qdensity import QdMethod
from .quantiles import as_sample, sample_quantiles

__all__ = [
    "TestOptions",
    "TestResult",
    "lincomb_stats",
    "ratio_variance",
    "wald_interval",
    "p_value",
    "q_test_one",
    "q_test_two",
]

_ALTERNATIVES = ("two_sided", "less", "greater")

RATIO_WARNING = ("estimate is a ratio; intervals and tests are usually better "
                 "behaved on the log scale (log_transf, with back_transf to "
                 "report on the ratio scale)")


@dataclass(frozen=True)
class TestOptions:
    """Options shared by the one- and two-sample tests."""

    __test__ = False  # not a pytest test class

    alternative: str = "two_sided"
    conf_level: float = 0.95
    true_q: float = 0.0
    log_transf: bool = False
    back_transf: bool = False
    min_q: float = -math.inf
    quantile_type: int = 8
    var_method: QdMethod = field(default_factory=QdMethod)

    def __post_init__(self):
        if self.alternative not in _ALTERNATIVES:
            raise ValueError(f"alternative must be one of {_ALTERNATIVES}")
        if not 0.0 < self.conf_level < 1.0:
            raise ValueError("conf_level must lie in (0, 1)")
        if self.back_transf and not self.log_transf:
            raise ValueError("back_transf requires log_transf")


@dataclass(frozen=True)
class TestResult:
    """Wald test summary, the analogue of an htest record.

    estimate, se and conf_int are reported on the scale named by
    ``scale``: "identity", "log" (a log or log-ratio estimate), or
    "back_transformed_ratio" (exponentiated back from the log scale; se
    stays on the log scale in that case).
    """

    __test__ = False  # not a pytest test class

    estimate: float
    se: float
    statistic_Z: float
    p_value: float
    conf_int: tuple
    null_value: float
    alternative: str
    scale: str
    description: str
    warnings: tuple = ()
    estimate_label: str = "estimate"
    conf_level: float = 0.95
    data_name: str = "x"


def lincomb_stats(cov: QuantileCov, xhat, b1, b2=None):
    """Point estimates and (co)variances of the coefficient combinations.

    Returns (est1, est2, v1, v2, v12); the entries for the second
    combination are None when b2 is absent.  Coefficients must already
    be aligned with cov.probs (zero-padded onto the union grid).
    """
    b1 = np.asarray(b1, dtype=float)
    xhat = np.asarray(xhat, dtype=float)
    d = len(cov.probs)
    if b1.shape != (d,) or xhat.shape != (d,):
        raise ValueError("coefficient/quantile vectors must match the covariance dimension")
    sigma = cov.matrix
    est1 = float(b1 @ xhat)
    v1 = float(b1 @ sigma @ b1)
    if b2 is None:
        return est1, None, v1, None, None
    b2 = np.asarray(b2, dtype=float)
    if b2.shape != (d,):
        raise ValueError("coefficient/quantile vectors must match the covariance dimension")
    est2 = float(b2 @ xhat)
    v2 = float(b2 @ sigma @ b2)
    v12 = float(b1 @ sigma @ b2)
    return est1, est2, v1, v2, v12


def ratio_variance(est1, est2, v1, v2, v12, log_scale: bool = False):
    """Delta-method variance of a ratio and, optionally, of its log.

    Returns (R, varR, varLogR); varLogR is None unless log_scale is
    requested.  The expanded form of var(R) is used so est1 = 0 is safe.
    """
    if est2 == 0.0:
        raise ValueError("zero denominator")
    r = est1 / est2
    var_r = (v1 / est2**2 + est1**2 * v2 / est2**4 - 2.0 * est1 * v12 / est2**3)
    var_log = None
    if log_scale:
        if r <= 0.0:
            raise ValueError("log of non-positive ratio")
        var_log = var_r / r**2
    return r, var_r, var_log


def wald_interval(est, se, level, alternative="two_sided", min_q=-math.inf):
    """Normal-theory interval; one-sided forms use z at 1 - alpha.

    The lower bound is clamped at min_q, which supports measures with a
    known lower limit such as the IQR at zero.
    """
    if se < 0:
        raise ValueError("negative standard error")
    if alternative == "two_sided":
        z = float(ndtri(1.0 - (1.0 - level) / 2.0))
        lo, hi = est - z * se, est + z * se
    elif alternative == "less":
        z = float(ndtri(level))
        lo, hi = -math.inf, est + z * se
    elif alternative == "greater":
        z = float(ndtri(level))
        lo, hi = est - z * se, math.inf
    else:
        raise ValueError(f"alternative must be one of {_ALTERNATIVES}")
    return max(lo, min_q), hi


def p_value(z, alternative="two_sided"):
    """Normal-reference p-value for the Wald statistic."""
    if alternative == "two_sided":
        return float(2.0 * ndtr(-abs(z)))
    if alternative == "less":
        return float(ndtr(z))
    if alternative == "greater":
        return float(1.0 - ndtr(z))
    raise ValueError(f"alternative must be one of {_ALTERNATIVES}")


def _union_grid(spec: MeasureSpec):
    """Merged probability grid with coefficient vectors re-indexed onto it."""
    all_ps = np.asarray(spec.u + (spec.u2 if spec.is_ratio else ()), dtype=float)
    grid = np.unique(all_ps)
    b1 = np.zeros(grid.size)
    for p, c in zip(spec.u, spec.coef):
        b1[int(np.searchsorted(grid, p))] += c
    b2 = None
    if spec.is_ratio:
        b2 = np.zeros(grid.size)
        for p, c in zip(spec.u2, spec.coef2):
            b2[int(np.searchsorted(grid, p))] += c
    return grid, b1, b2


def _working_stats(s, spec: MeasureSpec, opts: TestOptions):
    """One sample's estimate and variance on the working scale.

    Returns (raw_estimate, working_estimate, working_variance, warnings).
    The working scale is the log scale when log_transf is set.
    """
    grid, b1, b2 = _union_grid(spec)
    cov = qcov(s, grid, opts.var_method, opts.quantile_type)
    xhat = sample_quantiles(s, grid, opts.quantile_type)
    est1, est2, v1, v2, v12 = lincomb_stats(cov, xhat, b1, b2)
    warnings = []
    if cov.floored:
        warnings.append(
            "nonpositive quantile-density estimate floored at probabilities "
            + ", ".join(f"{p:g}" for p in cov.floored))
    if spec.is_ratio:
        raw, var_r, var_log = ratio_variance(est1, est2, v1, v2, v12,
                                             log_scale=opts.log_transf)
        if opts.log_transf:
            return raw, math.log(raw), var_log, warnings
        return raw, raw, var_r, warnings
    if opts.log_transf:
        if est1 <= 0.0:
            raise ValueError("log of nonpositive estimate")
        return est1, math.log(est1), v1 / est1**2, warnings
    return est1, est1, v1, warnings


def _finish(working_est, working_var, null_working, opts, scale, description,
            estimate_label, null_value, warnings, data_name):
    se = math.sqrt(max(working_var, 0.0))
    if se > 0.0:
        z = (working_est - null_working) / se
    else:
        z = 0.0 if working_est == null_working else math.copysign(math.inf,
                                                                  working_est - null_working)
    p = p_value(z, opts.alternative)
    # the log-scale interval is clamped only after any back-transform, so
    # min_q always refers to the reported scale
    clamp_now = -math.inf if opts.log_transf else opts.min_q
    lo, hi = wald_interval(working_est, se, opts.conf_level, opts.alternative, clamp_now)
    estimate = working_est
    if opts.back_transf:
        estimate = math.exp(working_est)
        lo, hi = math.exp(lo), math.exp(hi)
        scale = "back_transformed_ratio"
    lo = max(lo, opts.min_q)
    return TestResult(estimate=estimate, se=se, statistic_Z=z, p_value=p,
                      conf_int=(lo, hi), null_value=null_value,
                      alternative=opts.alternative, scale=scale,
                      description=description, warnings=tuple(warnings),
                      estimate_label=estimate_label, conf_level=opts.conf_level,
                      data_name=data_name)


def q_test_one(x, spec: MeasureSpec, opts: TestOptions = TestOptions()) -> TestResult:
    """One-sample Wald test of a quantile measure.

    true_q is interpreted on the working scale: with log_transf it is the
    null value of the log measure (so the default 0 tests a ratio of 1),
    and back_transf merely reports the estimate, interval and null on the
    exponentiated scale.
    """
    s = as_sample(x)
    raw, working_est, working_var, warnings = _working_stats(s, spec, opts)
    if spec.is_ratio and not opts.log_transf:
        warnings.append(RATIO_WARNING)
    scale = "log" if opts.log_transf else "identity"
    null_value = math.exp(opts.true_q) if opts.back_transf else opts.true_q
    label = spec.label or "estimate"
    description = f"One sample test of the {label}"
    return _finish(working_est, working_var, opts.true_q, opts, scale,
                   description, label, null_value, warnings, "x")


def q_test_two(x, y, spec: MeasureSpec, opts: TestOptions = TestOptions()) -> TestResult:
    """Two independent-sample comparison of a quantile measure.

    On the identity scale the difference of the per-sample estimates is
    tested against true_q (default 0).  With log_transf the difference of
    logs is used; with back_transf the result is reported as a ratio, the
    null true_q is interpreted on the ratio scale, and a true_q left at 0
    is reset to 1 (equal measures).
    """
    sx, sy = as_sample(x), as_sample(y)
    raw_x, wx, vx, warn_x = _working_stats(sx, spec, opts)
    raw_y, wy, vy, warn_y = _working_stats(sy, spec, opts)
    warnings = warn_x + [w for w in warn_y if w not in warn_x]
    if spec.is_ratio and not opts.log_transf:
        warnings.append(RATIO_WARNING)

    working_est = wx - wy
    working_var = vx + vy
    if opts.back_transf:
        null_ratio = 1.0 if opts.true_q == 0.0 else opts.true_q
        if null_ratio <= 0.0:
            raise ValueError("back-transformed null value must be positive")
        null_working = math.log(null_ratio)
        null_value = null_ratio
        label = f"ratio of {spec.plural}"
    elif opts.log_transf:
        null_working = opts.true_q
        null_value = opts.true_q
        label = f"log ratio of {spec.plural}"
    else:
        null_working = opts.true_q
        null_value = opts.true_q
        label = f"difference in {spec.plural}"
    scale = "log" if opts.log_transf else "identity"
    description = f"Two sample test of the {spec.label or 'measure'}"
    return _finish(working_est, working_var, null_working, opts, scale,
                   description, label, null_value, warnings, "x and y")
