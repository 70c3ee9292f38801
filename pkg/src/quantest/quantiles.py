"""Sample quantiles with selectable interpolation rule.

Implements the continuous interpolation family for quantile estimation
(types 4 through 9 in the Hyndman and Fan (1996) numbering).  The default
is type 8, whose plotting position (k - 1/3)/(n + 1/3) gives approximately
median-unbiased estimates regardless of the underlying distribution.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["Sample", "as_sample", "sample_quantile", "sample_quantiles"]

# h(p) = slope(n) * p + offset, with slope expressed as n + a and offset b.
_PLOTTING_CONSTANTS = {
    4: (0.0, 0.0),
    5: (0.0, 0.5),
    6: (1.0, 0.0),
    7: (-1.0, 1.0),
    8: (1.0 / 3.0, 1.0 / 3.0),
    9: (0.25, 0.375),
}


@dataclass(frozen=True)
class Sample:
    """Immutable collection of finite observations with a cached sort.

    Construct through :func:`as_sample` (or ``Sample.from_values``), which
    validates the data.  NaN and infinite entries are rejected outright
    rather than dropped, so a constructed Sample is always safe input for
    the variance machinery downstream.
    """

    values: np.ndarray
    sorted: np.ndarray

    @classmethod
    def from_values(cls, values) -> "Sample":
        arr = np.asarray(values, dtype=float).ravel()
        if arr.size == 0:
            raise ValueError("empty sample")
        if not np.all(np.isfinite(arr)):
            raise ValueError("sample contains non-finite values")
        srt = np.sort(arr)
        arr = arr.copy()
        arr.setflags(write=False)
        srt.setflags(write=False)
        return cls(values=arr, sorted=srt)

    @property
    def n(self) -> int:
        return self.values.size

    def min(self) -> float:
        return float(self.sorted[0])

    def max(self) -> float:
        return float(self.sorted[-1])


def as_sample(x) -> Sample:
    """Coerce array-like data (or pass through a Sample) with validation."""
    if isinstance(x, Sample):
        return x
    return Sample.from_values(x)


def _check_type(quantile_type: int) -> None:
    if quantile_type not in _PLOTTING_CONSTANTS:
        raise ValueError(
            f"unsupported quantile type {quantile_type!r}; supported types are 4..9"
        )


def _quantiles_sorted(sorted_values: np.ndarray, ps, quantile_type: int = 8) -> np.ndarray:
    """Quantiles along the last axis of an array of pre-sorted values.

    ``sorted_values`` may be a matrix of independently sorted rows; the
    result then has one row of quantiles per input row.
    """
    a, b = _PLOTTING_CONSTANTS[quantile_type]
    p = np.asarray(ps, dtype=float)
    n = sorted_values.shape[-1]
    if n == 1:
        if p.ndim == 0:
            return sorted_values[..., 0] * np.ones_like(p)
        return sorted_values[..., 0:1] * np.ones_like(p)
    h = (n + a) * p + b
    h = np.clip(h, 1.0, float(n))
    k = np.clip(np.floor(h).astype(int), 1, n - 1)
    gamma = h - k
    lo = sorted_values[..., k - 1]
    hi = sorted_values[..., k]
    diff = hi - lo
    # evaluate the interpolation from the nearer endpoint so gamma = 0/1
    # return the order statistics exactly, then clip away any last-ulp
    # rounding outside the bracket
    out = np.where(gamma < 0.5, lo + gamma * diff, hi - (1.0 - gamma) * diff)
    return np.clip(out, lo, hi)


def sample_quantile(s, p: float, quantile_type: int = 8) -> float:
    """Single sample quantile.

    Parameters
    ----------
    s : Sample or array-like
        Observations.
    p : float
        Probability in the closed interval [0, 1].  Values outside [0, 1]
        raise a ValueError; the endpoints clamp to the sample minimum and
        maximum.
    quantile_type : int
        Interpolation rule, one of 4..9.  Default 8.

    For type 8 the interpolation position is h = (n + 1/3) p + 1/3 clamped
    to [1, n]; with k = floor(h) the result is
    ``sorted[k] + (h - k) (sorted[k+1] - sorted[k])`` in 1-based indexing.
    """
    s = as_sample(s)
    _check_type(quantile_type)
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p!r} outside [0, 1]")
    return float(_quantiles_sorted(s.sorted, p, quantile_type))


def sample_quantiles(s, ps, quantile_type: int = 8) -> np.ndarray:
    """Vectorized sample_quantile; output matches the length and order of ps."""
    s = as_sample(s)
    _check_type(quantile_type)
    p = np.asarray(ps, dtype=float)
    if p.size == 0:
        return np.empty(0)
    if np.any(p < 0.0) or np.any(p > 1.0):
        raise ValueError("probabilities outside [0, 1]")
    return _quantiles_sorted(s.sorted, p, quantile_type)
