"""Non-asymptotic statistical bounds for the multitaper estimate.

Every bound is a closed-form function of two ingredient groups: eigenvalue
deficit statistics of the taper bank (how much spectral energy the first k
tapers lose outside the band) and local statistics of the true power
spectral density over the band around the frequency of interest.  The
Monte Carlo suite validates each bound empirically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import InapplicableBoundError, ParameterError

__all__ = [
    "SigmaStats",
    "LocalPsdStats",
    "BoundReport",
    "sigma_stats",
    "local_psd_stats",
    "bias_bound_smooth",
    "bias_bound_general",
    "variance_bound",
    "covariance_bound",
    "kappa_lower_bound",
    "tail_probability",
    "bound_report",
]


@dataclass(frozen=True)
class SigmaStats:
    """Eigenvalue-deficit statistics of the first k tapers: sigma1 is the
    mean of (1 - eigenvalue), sigma2 the root mean square.  The chain
    0 <= sigma1 <= sigma2 <= 1 - lambda_last <= 1 always holds."""

    sigma1: float
    sigma2: float
    k: int
    lambda_last: float


def sigma_stats(eigenvalues: np.ndarray, k: int) -> SigmaStats:
    lam = np.asarray(eigenvalues, dtype=float)
    if not 1 <= k <= lam.size:
        raise ParameterError(
            f"k = {k} exceeds available eigenvalues ({lam.size})")
    deficit = 1.0 - lam[:k]
    return SigmaStats(
        sigma1=float(deficit.mean()),
        sigma2=float(np.sqrt(np.mean(deficit ** 2))),
        k=k,
        lambda_last=float(lam[k - 1]),
    )


@dataclass(frozen=True)
class LocalPsdStats:
    """Extremes and moments of the power spectral density over the band
    [f - w, f + w], plus the global maximum.  ``m2_f`` bounds |S''| on the
    band and is None when the density is not smooth there."""

    f: float
    w: float
    m_f: float
    big_m_f: float
    a_f: float
    r_f: float
    big_m: float
    m2_f: float | None = None


def local_psd_stats(psd, f: float, w: float) -> LocalPsdStats:
    """Exact interval statistics for a piecewise-constant 1-periodic density.

    Min/max consider every piece overlapping [f - w, f + w] with positive
    length; the average and RMS integrate the overlaps exactly.  For a
    piecewise-constant model the density is twice differentiable on the
    band iff it is constant there, in which case |S''| = 0.
    """
    if not 0.0 < w < 0.5:
        raise ParameterError(f"half-bandwidth w must lie in (0, 1/2), got {w}")
    a, b = f - w, f + w
    starts, ends, levels = psd.piece_arrays()
    lo_shift = int(np.floor(a)) - 1
    hi_shift = int(np.ceil(b)) + 1
    m_f = np.inf
    big_m_f = -np.inf
    integral = 0.0
    integral_sq = 0.0
    for z in range(lo_shift, hi_shift + 1):
        left = np.maximum(starts + z, a)
        right = np.minimum(ends + z, b)
        length = right - left
        hit = length > 0.0
        if not np.any(hit):
            continue
        lv = levels[hit]
        ln = length[hit]
        m_f = min(m_f, lv.min())
        big_m_f = max(big_m_f, lv.max())
        integral += float(lv @ ln)
        integral_sq += float((lv ** 2) @ ln)
    a_f = integral / (2.0 * w)
    r_f = float(np.sqrt(integral_sq / (2.0 * w)))
    m2 = 0.0 if m_f == big_m_f else None
    return LocalPsdStats(f=f, w=w, m_f=float(m_f), big_m_f=float(big_m_f),
                         a_f=a_f, r_f=r_f, big_m=float(levels.max()), m2_f=m2)


def bias_bound_smooth(stats: LocalPsdStats, sig: SigmaStats,
                      n: int, w: float, k: int) -> float:
    """Bias bound requiring a curvature bound on the band:
    m2 * n * w^3 / (3k) + (M + M_f) * sigma1."""
    if stats.m2_f is None:
        raise InapplicableBoundError(
            "density is not twice differentiable on the band "
            f"[{stats.f - stats.w}, {stats.f + stats.w}]")
    return stats.m2_f * n * w ** 3 / (3.0 * k) \
        + (stats.big_m + stats.big_m_f) * sig.sigma1


def bias_bound_general(stats: LocalPsdStats, sig: SigmaStats) -> float:
    """Smoothness-free bias bound:
    (M_f - m_f)(1 - sigma1) + M * sigma1."""
    return (stats.big_m_f - stats.m_f) * (1.0 - sig.sigma1) \
        + stats.big_m * sig.sigma1


def variance_bound(stats: LocalPsdStats, sig: SigmaStats,
                   n: int, w: float, k: int) -> float:
    """(1/k) * (R_f * sqrt(2nw/k) + M * sigma2)^2."""
    return (stats.r_f * np.sqrt(2.0 * n * w / k)
            + stats.big_m * sig.sigma2) ** 2 / k


def _circular_distance(f1: float, f2: float) -> float:
    d = abs(f1 - f2) % 1.0
    return min(d, 1.0 - d)


def covariance_bound(stats1: LocalPsdStats, stats2: LocalPsdStats,
                     sig: SigmaStats, n: int, w: float, k: int) -> float:
    """Covariance bound for two frequencies separated by more than the
    full bandwidth 2w (circularly):
    ((R_f1 + R_f2) * sqrt((2nw/k) * sigma1) + M * sigma1)^2."""
    d = _circular_distance(stats1.f, stats2.f)
    if not 2.0 * w < d < 1.0 - 2.0 * w:
        raise InapplicableBoundError(
            f"circular distance |f1 - f2| = {d!r} must lie strictly between "
            f"2w = {2 * w} and 1 - 2w = {1 - 2 * w}")
    big_m = max(stats1.big_m, stats2.big_m)
    return ((stats1.r_f + stats2.r_f)
            * np.sqrt(2.0 * n * w / k * sig.sigma1)
            + big_m * sig.sigma1) ** 2


def kappa_lower_bound(stats: LocalPsdStats, sig: SigmaStats,
                      n: int, w: float, k: int) -> float:
    """Lower bound on the effective half degrees of freedom:
    (k(1 - sigma1)M_f - 2nw(M_f - A_f)) / (M_f + (M - M_f)(1 - lambda_last)).

    May come out non-positive (vacuous); the caller decides how to flag it.
    """
    den = stats.big_m_f + (stats.big_m - stats.big_m_f) * (1.0 - sig.lambda_last)
    if den == 0.0:
        raise InapplicableBoundError(
            "degenerate denominator: M_f = 0 and lambda_last = 1")
    num = k * (1.0 - sig.sigma1) * stats.big_m_f \
        - 2.0 * n * w * (stats.big_m_f - stats.a_f)
    return num / den


def tail_probability(kappa: float, beta: float) -> tuple[float, float]:
    """Chi-squared-style tail bounds with 2*kappa degrees of freedom.

    Returns (upper_tail, lower_tail): for beta > 1 the upper tail is
    exp(-kappa(beta - 1 - ln beta)) / beta and the lower entry is 1; for
    0 < beta < 1 the roles swap.
    """
    if kappa <= 0.0:
        raise ParameterError(f"kappa must be positive, got {kappa}")
    if beta <= 0.0 or beta == 1.0:
        raise ParameterError(f"beta must be positive and != 1, got {beta}")
    expo = np.exp(-kappa * (beta - 1.0 - np.log(beta)))
    if beta > 1.0:
        return float(expo / beta), 1.0
    return 1.0, float(expo)


@dataclass(frozen=True)
class BoundReport:
    """Evaluated bound values for one configuration.  ``bias_smooth`` is
    None when the curvature bound does not apply; a non-positive kappa is
    kept as-is and flagged vacuous."""

    n: int
    w: float
    k: int
    f: float
    sigma1: float
    sigma2: float
    lambda_last: float
    bias_general: float
    variance: float
    kappa_lower: float
    kappa_vacuous: bool
    bias_smooth: float | None = None
    f2: float | None = None
    covariance: float | None = None

    def to_json_dict(self) -> dict:
        return {
            "n": self.n, "w": self.w, "k": self.k, "f": self.f,
            "sigma1": self.sigma1, "sigma2": self.sigma2,
            "lambda_last": self.lambda_last,
            "bias_smooth": self.bias_smooth,
            "bias_general": self.bias_general,
            "variance": self.variance,
            "kappa_lower": self.kappa_lower,
            "kappa_vacuous": self.kappa_vacuous,
            "f2": self.f2,
            "covariance": self.covariance,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    def to_text(self) -> str:
        lines = []
        for key, val in self.to_json_dict().items():
            if val is None:
                continue
            if isinstance(val, float):
                lines.append(f"{key} = {val:.17g}")
            else:
                lines.append(f"{key} = {val}")
        return "\n".join(lines) + "\n"


def bound_report(psd, f: float, n: int, w: float, k: int,
                 eigenvalues: np.ndarray, f2: float | None = None,
                 ) -> BoundReport:
    """Evaluate every applicable bound for one (psd, f, n, w, k)."""
    sig = sigma_stats(eigenvalues, k)
    stats = local_psd_stats(psd, f, w)
    try:
        smooth = bias_bound_smooth(stats, sig, n, w, k)
    except InapplicableBoundError:
        smooth = None
    kappa = kappa_lower_bound(stats, sig, n, w, k)
    cov = None
    if f2 is not None:
        stats2 = local_psd_stats(psd, f2, w)
        cov = covariance_bound(stats, stats2, sig, n, w, k)
    return BoundReport(
        n=n, w=w, k=k, f=f,
        sigma1=sig.sigma1, sigma2=sig.sigma2, lambda_last=sig.lambda_last,
        bias_general=bias_bound_general(stats, sig),
        variance=variance_bound(stats, sig, n, w, k),
        kappa_lower=kappa, kappa_vacuous=kappa <= 0.0,
        bias_smooth=smooth, f2=f2, covariance=cov,
    )
