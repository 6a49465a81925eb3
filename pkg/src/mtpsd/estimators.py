"""Exact spectral estimators: periodogram, tapered periodograms, the
multitaper average, its spectral window, adaptive taper weighting, and the
mean-logarithmic-deviation error metric.

All estimators evaluate on the uniform grid of ``l`` frequencies ``f = 0/l,
1/l, ..., (l-1)/l`` covering one period.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.fft import fft

from .dpss import TaperBank
from .errors import ParameterError

__all__ = [
    "FrequencyGrid",
    "SpectralEstimate",
    "AdaptiveResult",
    "periodogram",
    "tapered_periodogram",
    "multitaper_exact",
    "spectral_window",
    "adaptive_multitaper",
    "mean_log_deviation",
]

# cap per-batch FFT workspace at ~64 MB of complex128
_BATCH_BYTES = 64 * 2 ** 20


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform grid of l frequencies over one period, f = arange(l) / l."""

    l: int

    def __post_init__(self):
        if self.l < 1:
            raise ParameterError(f"grid size must be positive, got {self.l}")

    @property
    def frequencies(self) -> np.ndarray:
        return np.arange(self.l) / self.l


@dataclass(frozen=True)
class SpectralEstimate:
    """Nonnegative estimator values on a frequency grid.

    ``method`` is one of periodogram | single | multitaper |
    multitaper-approx | adaptive; ``meta`` echoes the parameters that
    produced the estimate (n, w, k, epsilon, fft counts, ...).
    """

    grid: FrequencyGrid
    values: np.ndarray
    method: str
    meta: dict = field(default_factory=dict)

    @property
    def frequencies(self) -> np.ndarray:
        return self.grid.frequencies


@dataclass(frozen=True)
class AdaptiveResult:
    estimate: SpectralEstimate
    weights: np.ndarray  # (k, l) nonnegative, finite
    iterations: int
    converged: bool


def _check_grid(n: int, l: int) -> None:
    if l < n:
        raise ParameterError(f"grid size l = {l} must be at least n = {n}")


def periodogram(x: np.ndarray, l: int) -> SpectralEstimate:
    """(1/n) |DFT of x zero-padded to l|^2."""
    x = np.asarray(x)
    n = x.shape[-1]
    _check_grid(n, l)
    values = np.abs(fft(x, n=l)) ** 2 / n
    return SpectralEstimate(FrequencyGrid(l), values, "periodogram",
                            {"n": n})


def tapered_periodogram(x: np.ndarray, taper: np.ndarray, l: int,
                        ) -> SpectralEstimate:
    """|DFT of (taper * x) zero-padded to l|^2 for a unit-norm taper."""
    x = np.asarray(x)
    taper = np.asarray(taper)
    n = x.shape[-1]
    if taper.shape[-1] != n:
        raise ParameterError(
            f"taper length {taper.shape[-1]} does not match signal length {n}")
    _check_grid(n, l)
    nrm = np.linalg.norm(taper)
    if abs(nrm - 1.0) > 1e-6:
        raise ParameterError(f"taper must have unit 2-norm, got {nrm!r}")
    values = np.abs(fft(taper * x, n=l)) ** 2
    return SpectralEstimate(FrequencyGrid(l), values, "single", {"n": n})


def _mean_tapered_power(x: np.ndarray | None, tapers: np.ndarray, l: int,
                        counter=None) -> np.ndarray:
    """Mean over rows of |FFT(taper * x, l)|^2, batched to bound memory."""
    k, n = tapers.shape
    acc = np.zeros(l)
    step = max(1, _BATCH_BYTES // (16 * l))
    for s in range(0, k, step):
        block = tapers[s:s + step]
        if x is not None:
            block = block * x
        acc += np.sum(np.abs(fft(block, n=l, axis=-1)) ** 2, axis=0)
        if counter is not None:
            counter.record(l, block.shape[0])
    return acc / k


def multitaper_exact(x: np.ndarray, bank: TaperBank, k: int, l: int,
                     counter=None) -> SpectralEstimate:
    """Average of the first k tapered periodograms (k length-l FFTs)."""
    x = np.asarray(x)
    n = x.shape[-1]
    if n != bank.n:
        raise ParameterError(f"signal length {n} does not match bank n {bank.n}")
    if not 1 <= k <= bank.k_computed:
        raise ParameterError(
            f"k = {k} exceeds computed tapers ({bank.k_computed})")
    _check_grid(n, l)
    values = _mean_tapered_power(x, bank.tapers[:k], l, counter)
    return SpectralEstimate(FrequencyGrid(l), values, "multitaper",
                            {"n": n, "w": bank.w, "k": k, "fft_count": k})


def spectral_window(bank: TaperBank, k: int, l: int) -> np.ndarray:
    """Smoothing kernel of the k-taper estimate on the grid: the mean of the
    squared taper DFT magnitudes.  Even, bounded by n/k, unit integral."""
    if not 1 <= k <= bank.k_computed:
        raise ParameterError(
            f"k = {k} exceeds computed tapers ({bank.k_computed})")
    if l < 1:
        raise ParameterError(f"grid size must be positive, got {l}")
    return _mean_tapered_power(None, bank.tapers[:k], l)


def adaptive_multitaper(x: np.ndarray, bank: TaperBank, k: int, l: int,
                        tol: float = 1e-8, max_iter: int = 1000,
                        ) -> AdaptiveResult:
    """Eigenvalue-driven adaptive reweighting of single-taper estimates.

    Per frequency, weights and estimate are alternated to a fixed point:
    weight_k = lam_k * est^2 / (lam_k * est + (1 - lam_k) * sigma2)^2 with
    sigma2 = ||x||^2 / n, starting from the mean of the first min(2, k)
    single-taper estimates, until the largest relative change of the
    estimate drops below ``tol`` or ``max_iter`` is reached.
    """
    x = np.asarray(x)
    n = x.shape[-1]
    if n != bank.n:
        raise ParameterError(f"signal length {n} does not match bank n {bank.n}")
    if not 1 <= k <= bank.k_computed:
        raise ParameterError(
            f"k = {k} exceeds computed tapers ({bank.k_computed})")
    if tol <= 0:
        raise ParameterError(f"tol must be positive, got {tol}")
    _check_grid(n, l)

    lam = np.asarray(bank.eigenvalues[:k], dtype=float)[:, None]
    sigma2 = float(np.real(np.vdot(x, x))) / n
    grid = FrequencyGrid(l)
    if sigma2 == 0.0:
        est = SpectralEstimate(grid, np.zeros(l), "adaptive",
                               {"n": n, "w": bank.w, "k": k})
        return AdaptiveResult(est, np.zeros((k, l)), 0, True)

    single = np.abs(fft(bank.tapers[:k] * x, n=l, axis=-1)) ** 2  # (k, l)
    est = single[:min(2, k)].mean(axis=0)
    tiny = np.finfo(float).tiny
    converged = False
    iterations = 0
    weights = np.zeros((k, l))
    for iterations in range(1, max_iter + 1):
        with np.errstate(divide="ignore", invalid="ignore"):
            weights = lam * est ** 2 / (lam * est + (1.0 - lam) * sigma2) ** 2
        den = weights.sum(axis=0)
        num = (weights * single).sum(axis=0)
        new = np.where(den > 0.0, num / np.where(den > 0.0, den, 1.0), 0.0)
        change = np.max(np.abs(new - est) / np.maximum(est, tiny))
        est = new
        if change < tol:
            converged = True
            break
    result = SpectralEstimate(grid, est, "adaptive",
                              {"n": n, "w": bank.w, "k": k,
                               "iterations": iterations})
    return AdaptiveResult(result, weights, iterations, converged)


def mean_log_deviation(estimate: SpectralEstimate, truth) -> np.ndarray:
    """Per-frequency |10*log10(estimate / truth)| in dB.

    A zero or negative estimate against positive truth (and vice versa)
    yields +inf so pathological outputs stay detectable; zero against zero
    yields 0.  Averaging across realizations is left to the caller.
    """
    s_true = truth.evaluate(estimate.frequencies)
    vals = estimate.values
    out = np.full(vals.shape, np.inf)
    both_zero = (vals <= 0.0) & (s_true <= 0.0)
    ok = (vals > 0.0) & (s_true > 0.0)
    out[both_zero] = 0.0
    out[ok] = np.abs(10.0 * np.log10(vals[ok] / s_true[ok]))
    return out
