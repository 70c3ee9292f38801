"""Quantile density estimation.

The quantile density q(p) = Q'(p) = 1/f(Q(p)) drives the sampling
variability of quantile estimators: n var(x_p) is approximately
p(1-p) q(p)^2.  Two estimators are provided.

The direct kernel estimator smooths the order statistics,

    q_hat(p) = sum_i X_(i) [K_b(p - (i-1)/n) - K_b(p - i/n)],

with K_b(y) = K(y/b)/b.  Its mean-squared-error-optimal bandwidth is

    b = (R(K)/mu2(K)^2)^(1/5) |q(p)/q''(p)|^(2/5) n^(-1/5),

where R(K) is the kernel roughness and mu2 its second moment.  The ratio
QOR(p) = q(p)/q''(p) is unknown, so it is evaluated under a lognormal
working model, either with a fixed shape parameter (sigma = 1 by default)
or with sigma fitted from the data.

The alternative inverts a Gaussian kernel density estimate at the
estimated quantile: q_hat(p) = 1/f_hat(x_p).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from .quantiles import Sample, as_sample, sample_quantile

__all__ = [
    "Kernel",
    "EPANECHNIKOV",
    "GAUSSIAN",
    "QdMethod",
    "qor_lognormal",
    "fit_lognormal_sigma",
    "optimal_bandwidth",
    "qdens_kernel",
    "qdens_inversion",
]

_SQRT_2PI = math.sqrt(2.0 * math.pi)


def _epanechnikov(u: np.ndarray) -> np.ndarray:
    out = np.zeros_like(u)
    inside = np.abs(u) <= 1.0
    out[inside] = 0.75 * (1.0 - u[inside] ** 2)
    return out


def _gaussian(u: np.ndarray) -> np.ndarray:
    # truncated at |u| <= 5 when used through Kernel.support
    return np.exp(-0.5 * u * u) / _SQRT_2PI


@dataclass(frozen=True)
class Kernel:
    """Symmetric density K with the constants the bandwidth rule needs.

    roughness is R(K) = integral of K^2, second_moment is mu2(K), and
    support is the radius (in units of the bandwidth) outside which K is
    treated as zero.
    """

    name: str
    fn: callable
    roughness: float
    second_moment: float
    support: float

    def __call__(self, u: np.ndarray) -> np.ndarray:
        return self.fn(np.asarray(u, dtype=float))

    @property
    def bandwidth_constant(self) -> float:
        return (self.roughness / self.second_moment**2) ** 0.2


EPANECHNIKOV = Kernel("epanechnikov", _epanechnikov, roughness=0.6,
                      second_moment=0.2, support=1.0)
GAUSSIAN = Kernel("gaussian", _gaussian, roughness=1.0 / (2.0 * math.sqrt(math.pi)),
                  second_moment=1.0, support=5.0)


@dataclass(frozen=True)
class QdMethod:
    """How to estimate q(p) for variance construction.

    kind "qor" uses the direct kernel estimator with the QOR-optimal
    bandwidth under a lognormal working model; kind "density" inverts a
    Gaussian KDE at the quantile.  sigma is the lognormal shape used by
    the QOR rule: the default 1.0 reproduces the standard behaviour, and
    None requests a fit from the data via fit_lognormal_sigma.
    """

    kind: str = "qor"
    qor_model: str = "lognormal"
    bw_correct: bool = True
    sigma: float | None = 1.0
    kernel: Kernel = EPANECHNIKOV

    def __post_init__(self):
        if self.kind not in ("qor", "density"):
            raise ValueError(f"unknown quantile-density method {self.kind!r}")
        if self.kind == "qor" and self.qor_model != "lognormal":
            raise ValueError(f"unknown QOR model {self.qor_model!r}")
        if self.sigma is not None and self.sigma <= 0:
            raise ValueError("sigma must be positive")


def qor_lognormal(sigma: float, p: float) -> float:
    """QOR(p) = q(p)/q''(p) for a lognormal with shape sigma.

    The location parameter cancels, leaving

        QOR(p) = phi(z_p)^2 / ((sigma + z_p)^2 + z_p (sigma + z_p) + 1)

    with z_p the standard normal quantile and phi its density.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    p = float(p)
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie strictly inside (0, 1)")
    z = float(ndtri(p))
    phi = math.exp(-0.5 * z * z) / _SQRT_2PI
    return phi * phi / ((sigma + z) ** 2 + z * (sigma + z) + 1.0)


def fit_lognormal_sigma(s) -> tuple[float, float]:
    """Lognormal shape fitted on the log scale, shifting nonpositive data.

    Returns (sigma_hat, shift).  shift is 0 when all values are positive,
    otherwise -min + (max - min)/n, chosen so the shifted data are
    strictly positive.  sigma_hat is the n-1 divisor standard deviation
    of log(values + shift).  Shifting is legitimate preprocessing here
    because q(p) is invariant to location.
    """
    s = as_sample(s)
    if s.n < 2:
        raise ValueError("need at least two observations to fit sigma")
    lo, hi = s.min(), s.max()
    if hi == lo:
        raise ValueError("degenerate sample")
    shift = 0.0 if lo > 0 else -lo + (hi - lo) / s.n
    sigma = float(np.std(np.log(s.values + shift), ddof=1))
    return sigma, shift


def optimal_bandwidth(qor_value: float, p: float, n: int,
                      bw_correct: bool = True, kernel: Kernel = EPANECHNIKOV) -> float:
    """MSE-optimal bandwidth for the direct kernel estimator.

    b_raw = (R(K)/mu2^2)^(1/5) |qor_value|^(2/5) n^(-1/5); for the
    Epanechnikov kernel the leading constant is 15^(1/5).  With
    bw_correct the bandwidth is clamped to min(b_raw, p, 1-p) so the
    kernel window stays inside (0, 1), floored at 1/n.
    """
    if n < 2:
        raise ValueError("need at least two observations")
    p = float(p)
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie strictly inside (0, 1)")
    b = kernel.bandwidth_constant * abs(qor_value) ** 0.4 * n ** -0.2
    if bw_correct:
        b = max(min(b, p, 1.0 - p), 1.0 / n)
    return b


def qdens_kernel(s, p: float, b: float, kernel: Kernel = EPANECHNIKOV) -> float:
    """Direct kernel estimate of q(p) at bandwidth b.

    Evaluates the literal sum over order statistics; only the indices
    whose kernel arguments fall inside the support are touched.
    """
    s = as_sample(s)
    p = float(p)
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie strictly inside (0, 1)")
    if not 0.0 < b < 1.0:
        raise ValueError("bandwidth must lie in (0, 1)")
    return float(_qdens_kernel_sorted(s.sorted, p, b, kernel))


def _qdens_kernel_sorted(sorted_values: np.ndarray, p: float, b: float,
                         kernel: Kernel = EPANECHNIKOV) -> float:
    n = sorted_values.size
    r = kernel.support * b
    # indices i = 1..n contribute through K_b(p - (i-1)/n) and K_b(p - i/n)
    i_lo = max(1, int(math.floor(n * (p - r))))
    i_hi = min(n, int(math.ceil(n * (p + r))) + 1)
    if i_lo > i_hi:
        return 0.0
    idx = np.arange(i_lo, i_hi + 1)
    left = kernel((p - (idx - 1) / n) / b)
    right = kernel((p - idx / n) / b)
    w = (left - right) / b
    return float(np.dot(sorted_values[idx - 1], w))


def _silverman_bandwidth(s: Sample) -> float:
    sd = float(np.std(s.values, ddof=1))
    iqr = sample_quantile(s, 0.75) - sample_quantile(s, 0.25)
    scale = min(sd, iqr / 1.349)
    if scale <= 0:
        scale = sd  # many ties in the middle; fall back to the sd
    if scale <= 0:
        raise ValueError("degenerate sample")
    return 0.9 * scale * s.n ** -0.2


def qdens_inversion(s, p: float, quantile_type: int = 8) -> float:
    """Estimate q(p) as 1/f_hat(x_p).

    f_hat is a Gaussian kernel density estimate with the Silverman
    bandwidth 0.9 min(sd, IQR/1.349) n^(-1/5); x_p is the type-8 sample
    quantile by default.
    """
    s = as_sample(s)
    if s.n < 2:
        raise ValueError("need at least two observations")
    h = _silverman_bandwidth(s)
    xp = sample_quantile(s, p, quantile_type)
    u = (xp - s.values) / h
    fhat = float(np.mean(np.exp(-0.5 * u * u)) / (_SQRT_2PI * h))
    if fhat <= 0.0 or not math.isfinite(fhat):
        raise ValueError("zero density at quantile")
    return 1.0 / fhat
