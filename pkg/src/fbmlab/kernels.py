"""Closed-form correlation kernels for fBm, integrated fBm, and their stationary duals.

An h-self-similar Gaussian process x(t) with x(0) = 0 induces a stationary
process x~(s) = exp(-h s) x(exp(s)) in logarithmic time.  This module evaluates
the correlation functions of the duals of integrated fractional Brownian motion
(h = 1 + H) and of fractional Brownian motion itself (h = H), together with the
exact covariance of integrated fBm and the generic dual transform used as an
independent oracle for the closed forms.

All evaluations are arranged so that no intermediate exceeds O(1) before
cancellation: the natural variable is x = exp(-t), and the growing powers
x**(-H), x**(-(1+H)) are folded analytically into bounded combinations.
Below ``SMALL_T`` a Taylor branch takes over; above ``LARGE_T`` the leading
asymptotic term is returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

__all__ = [
    "KernelKind",
    "KernelId",
    "check_hurst",
    "dual_corr_ifbm",
    "dual_corr_ifbm_half",
    "dual_corr_fbm",
    "fbm_covariance",
    "ifbm_covariance",
    "dual_from_covariance",
    "kernel_corr",
    "time_rescaled",
    "SMALL_T",
    "LARGE_T",
]

# Branch thresholds; the branches are required to agree at the switch-over
# (tested to 1e-12).
SMALL_T = 1e-4
LARGE_T = 500.0


def check_hurst(H: float) -> float:
    """Validate a Hurst index, rejecting the degenerate endpoints."""
    H = float(H)
    if not 0.0 < H < 1.0:
        raise ValueError(f"Hurst index must lie strictly in (0, 1), got {H}")
    return H


class KernelKind(Enum):
    DUAL_IFBM = "ifbm"
    DUAL_FBM = "fbm"
    DUAL_IFBM_HALF = "ifbm-half"


@dataclass(frozen=True)
class KernelId:
    """Which dual correlation kernel, with its parameter.

    ``DUAL_IFBM_HALF`` carries no Hurst parameter; the other kinds require one.
    """

    kind: KernelKind
    hurst: float | None = None

    def __post_init__(self):
        if self.kind is KernelKind.DUAL_IFBM_HALF:
            if self.hurst is not None:
                raise ValueError("the H=1/2 integrated-fBm kernel takes no Hurst parameter")
        else:
            if self.hurst is None:
                raise ValueError(f"kernel kind {self.kind.value!r} requires a Hurst parameter")
            object.__setattr__(self, "hurst", check_hurst(self.hurst))

    def label(self) -> str:
        if self.kind is KernelKind.DUAL_IFBM_HALF:
            return "ifbm-half"
        return f"{self.kind.value}(H={self.hurst})"


def _fold(t) -> np.ndarray:
    # Correlations are even; negative lags fold to |t|.
    return np.abs(np.asarray(t, dtype=float))


def _binom_series_g(x: np.ndarray, c: float) -> np.ndarray:
    """((1-x)**c - 1 + c*x) / x**2 by its binomial series, for 0 <= x < 1/2.

    Terms a_j = C(c, j+2) (-x)**j with ratio a_{j+1}/a_j = -x (c-j-2)/(j+3);
    64 terms put the tail below 2**-64 for x < 1/2.
    """
    acc = np.full_like(x, c * (c - 1.0) / 2.0)
    term = np.full_like(x, c * (c - 1.0) / 2.0)
    for j in range(64):
        term = term * (-x) * (c - j - 2.0) / (j + 3.0)
        acc += term
    return acc


def _g_of_x(x: np.ndarray, c: float, y: np.ndarray | None = None) -> np.ndarray:
    """((1-x)**c - 1 + c*x) / x**2, stable on [0, 1].

    For x >= 1/2 the direct form in y = 1 - x has no leading cancellation;
    callers that know y to better precision than 1 - x (e.g. via expm1) may
    pass it explicitly.
    """
    x = np.asarray(x, dtype=float)
    if y is None:
        y = 1.0 - x
    out = np.empty_like(x)
    small_x = x < 0.5
    if np.any(small_x):
        out[small_x] = _binom_series_g(x[small_x], c)
    big = ~small_x
    if np.any(big):
        ys = y[big]
        xs = x[big]
        out[big] = (ys**c + (c - 1.0) - c * ys) / (xs * xs)
    return out


def _log1mexp(t: np.ndarray) -> np.ndarray:
    """log(1 - exp(-t)) for t > 0, accurate at both ends (log1mexp trick)."""
    return np.where(
        t < np.log(2.0),
        np.log(-np.expm1(-np.minimum(t, np.log(2.0)))),
        np.log1p(-np.exp(-np.maximum(t, np.log(2.0)))),
    )


def _sinhc_pow(t: np.ndarray, m: float) -> np.ndarray:
    # (sinh(t/2)/(t/2))**m to O(t**6), for the small-t branches.
    t2 = t * t
    return 1.0 + m * t2 / 24.0 + (m * m / 72.0 - m / 180.0) * (t2 * t2) / 16.0


def _dual_corr_ifbm_arr(H: float, t: np.ndarray) -> np.ndarray:
    c = 2.0 * H + 2.0
    norm = 2.0 + 4.0 * H
    out = np.empty_like(t)

    small = t <= SMALL_T
    large = t > LARGE_T
    mid = ~(small | large)

    if np.any(small):
        ts = t[small]
        t2 = ts * ts
        # (4+4H) cosh(Ht) - 2 cosh((1+H)t), even powers through t**6.
        acc = np.full_like(ts, (4.0 + 4.0 * H) - 2.0)
        fact = 1.0
        power = np.ones_like(ts)
        for k in (1, 2, 3):
            fact *= (2 * k - 1) * (2 * k)
            power = power * t2
            acc += ((4.0 + 4.0 * H) * H ** (2 * k) - 2.0 * (1.0 + H) ** (2 * k)) * power / fact
        acc += ts**c * _sinhc_pow(ts, c)
        out[small] = acc / norm
    if np.any(mid):
        tm = t[mid]
        x = np.exp(-tm)
        g = _g_of_x(x, c, y=-np.expm1(-tm))
        out[mid] = (x ** (1.0 - H) * g + (2.0 + 2.0 * H) * x**H - x ** (1.0 + H)) / norm
    if np.any(large):
        tl = t[large]
        out[large] = (
            (2.0 * H + 1.0) * (H + 1.0) * np.exp((H - 1.0) * tl)
            + (2.0 + 2.0 * H) * np.exp(-H * tl)
        ) / norm
    return out


def dual_corr_ifbm(H: float, t):
    """Correlation of the stationary dual of integrated fBm at lag t.

    Equals (2+4H)^{-1} [(4+4H) cosh(Ht) - 2 cosh((1+H)t) + (2 sinh(t/2))^{2H+2}],
    evaluated cancellation-safely.  Accepts scalars or arrays; even in t.
    """
    H = check_hurst(H)
    t = _fold(t)
    scalar = t.ndim == 0
    out = _dual_corr_ifbm_arr(H, np.atleast_1d(t))
    return float(out[0]) if scalar else out


def dual_corr_ifbm_half(t):
    """Correlation of the dual of integrated Brownian motion: (3 e^{-t/2} - e^{-3t/2}) / 2."""
    t = _fold(t)
    x = np.exp(-t)
    out = 0.5 * np.exp(-0.5 * t) * (3.0 - x)
    return float(out) if out.ndim == 0 else out


def _dual_corr_fbm_arr(H: float, t: np.ndarray) -> np.ndarray:
    out = np.empty_like(t)
    small = t <= SMALL_T
    large = t > LARGE_T
    mid = ~(small | large)

    if np.any(small):
        ts = t[small]
        t2 = ts * ts
        h2 = H * H
        cosh_ht = 1.0 + h2 * t2 / 2.0 + h2 * h2 * t2 * t2 / 24.0
        out[small] = cosh_ht - 0.5 * ts ** (2.0 * H) * _sinhc_pow(ts, 2.0 * H)
    if np.any(mid):
        tm = t[mid]
        x = np.exp(-tm)
        # cosh(Ht) - (2 sinh(t/2))^{2H}/2 = [x^H + x^{-H} (1 - (1-x)^{2H})] / 2,
        # all summands nonnegative, so no cancellation.
        out[mid] = 0.5 * (x**H + np.exp(H * tm) * (-np.expm1(2.0 * H * _log1mexp(tm))))
    if np.any(large):
        tl = t[large]
        out[large] = 0.5 * (np.exp(-H * tl) + 2.0 * H * np.exp(-(1.0 - H) * tl))
    return out


def dual_corr_fbm(H: float, t):
    """Correlation of the stationary dual of fBm: cosh(tH) - (2 sinh(t/2))^{2H} / 2."""
    H = check_hurst(H)
    t = _fold(t)
    scalar = t.ndim == 0
    out = _dual_corr_fbm_arr(H, np.atleast_1d(t))
    return float(out[0]) if scalar else out


def fbm_covariance(H: float, t, s):
    """Covariance of fBm: (|t|^{2H} + |s|^{2H} - |t-s|^{2H}) / 2.

    For same-sign arguments the leading powers are cancelled analytically
    (u^{2H} - (u-v)^{2H} via expm1/log1p), so the value stays accurate even
    when |t|/|s| spans many orders of magnitude.
    """
    H = check_hurst(H)
    t, s = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(s, dtype=float))
    u = np.maximum(np.abs(t), np.abs(s))
    v = np.minimum(np.abs(t), np.abs(s))
    ratio = np.divide(v, u, out=np.zeros_like(u), where=u > 0)
    with np.errstate(divide="ignore"):
        same = 0.5 * (v ** (2 * H) - u ** (2 * H) * np.expm1(2 * H * np.log1p(-ratio)))
    opposite = 0.5 * (u ** (2 * H) + v ** (2 * H) - (u + v) ** (2 * H))
    out = np.where(t * s >= 0, same, opposite)
    return float(out) if out.ndim == 0 else out


def ifbm_covariance(H: float, t, s):
    """Covariance of integrated fBm, as the closed-form double integral of the fBm covariance.

    With a = 2H+1, b = 2H+2, u = max(t, s), v = min(t, s), r = v/u:

        Cov(t, s) = [ v^2 u^{2H} g(r) / (a b) + v^a u (1 - v/(u b)) / a ] / 2,
        g(r) = ((1-r)^b - 1 + b r) / r^2,

    which is the usual polynomial form with its leading-order cancellation
    carried out analytically.  Diagonal: t^{2H+2} / (2H+2); both summands are
    nonnegative, so the evaluation is stable for any t/s ratio.
    """
    H = check_hurst(H)
    t, s = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(s, dtype=float))
    if np.any(t < 0) or np.any(s < 0):
        raise ValueError("integrated-fBm covariance requires nonnegative times")
    a = 2.0 * H + 1.0
    b = 2.0 * H + 2.0
    u = np.maximum(t, s)
    v = np.minimum(t, s)
    r = np.divide(v, u, out=np.zeros_like(u), where=u > 0)
    g = _g_of_x(np.atleast_1d(r), b).reshape(r.shape)
    out = 0.5 * (v * v * u ** (2 * H) * g / (a * b) + v**a * u * (1.0 - r / b) / a)
    return float(out) if out.ndim == 0 else out


def dual_from_covariance(cov: Callable[[float, float], float], h: float, tau):
    """Dual stationary correlation at lag tau of an h-self-similar process with covariance cov.

    Returns cov(exp(tau), 1) * exp(-h tau) / cov(1, 1).  Serves as the
    independent oracle for the closed-form dual kernels.
    """
    if h <= 0:
        raise ValueError(f"self-similarity index must be positive, got {h}")
    var1 = cov(1.0, 1.0)
    if var1 <= 0:
        raise ValueError(f"degenerate variance: cov(1,1) = {var1}")
    tau = _fold(tau)
    scalar = tau.ndim == 0
    tau = np.atleast_1d(tau)
    out = np.array([cov(float(np.exp(u)), 1.0) * np.exp(-h * u) / var1 for u in tau])
    return float(out[0]) if scalar else out


def kernel_corr(kernel: KernelId, t):
    """Evaluate a kernel identified by a KernelId at lag(s) t."""
    if kernel.kind is KernelKind.DUAL_IFBM:
        return dual_corr_ifbm(kernel.hurst, t)
    if kernel.kind is KernelKind.DUAL_FBM:
        return dual_corr_fbm(kernel.hurst, t)
    return dual_corr_ifbm_half(t)


def time_rescaled(kernel: KernelId, p: float, t):
    """Kernel evaluated at lag p*t; the exponent of the rescaled process is p times the original."""
    if p <= 0:
        raise ValueError(f"rescale factor must be positive, got {p}")
    return kernel_corr(kernel, p * np.asarray(t, dtype=float))
