"""Approximate multitaper estimation in O(log) FFTs instead of K.

The eigenvalue-weighted sum of all n tapered periodograms equals a quadratic
form in the prolate matrix and needs no tapers at all: extending the prolate
matrix to a circulant diagonalized by the length-l DFT turns the whole grid
evaluation into three length-l FFTs.  Adding small corrections for the few
eigenvalues in the transition band (eps, 1 - eps) yields an estimator within
(eps / k) * ||x||^2 of the exact k-taper average, uniformly over frequency.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.fft import fft, ifft

from . import dpss
from .dpss import ProlateKernel, build_prolate_kernel, taper_range
from .errors import ConfigurationError, ParameterError
from .estimators import FrequencyGrid, SpectralEstimate

__all__ = [
    "FftCounter",
    "SincKernelExt",
    "IndexPartition",
    "TransitionTapers",
    "build_sinc_kernel",
    "psi_weighted_sum",
    "partition_indices",
    "multitaper_approx",
    "prepare_fast_multitaper",
    "fast_multitaper",
]


class FftCounter:
    """Counts forward/inverse transforms, normalized to length-l units.

    ``record(size, count)`` logs ``count`` transforms of length ``size``;
    ``equivalent(l)`` reports the total in units of length-l transforms
    (a length-2l transform counts as 2).
    """

    def __init__(self):
        self.events: list[tuple[int, int]] = []

    def record(self, size: int, count: int = 1) -> None:
        self.events.append((size, count))

    @property
    def transforms(self) -> int:
        return sum(c for _, c in self.events)

    def equivalent(self, l: int) -> int:
        return sum(c * max(1, round(s / l)) for s, c in self.events)


class _BufMeter:
    """Tracks the high-water mark of live float64-equivalent scratch."""

    def __init__(self):
        self.current = 0
        self.peak = 0

    def alloc(self, n_floats: int) -> None:
        self.current += n_floats
        self.peak = max(self.peak, self.current)

    def free(self, n_floats: int) -> None:
        self.current -= n_floats


@dataclass(frozen=True)
class SincKernelExt:
    """First column of the length-l circulant extension of the prolate
    matrix: sinc head, zero middle, reflected tail."""

    n: int
    w: float
    l: int
    b: np.ndarray


def build_sinc_kernel(n: int, w: float, l: int) -> SincKernelExt:
    if not 0.0 < w < 0.5:
        raise ParameterError(f"half-bandwidth w must lie in (0, 1/2), got {w}")
    if l < 2 * n:
        raise ParameterError(f"extension length l = {l} must be >= 2n = {2 * n}")
    b = np.zeros(l)
    b[0] = 2.0 * w
    m = np.arange(1, n)
    head = np.sin(2.0 * np.pi * w * m) / (np.pi * m)
    b[1:n] = head
    b[l - n + 1:] = head[::-1]
    return SincKernelExt(n=n, w=w, l=l, b=b)


def _psi_on_grid(x: np.ndarray, kern: SincKernelExt, counter) -> np.ndarray:
    l = kern.l
    power = np.abs(fft(x, n=l)) ** 2
    out = ifft(kern.b * fft(power)).real
    if counter is not None:
        counter.record(l, 3)
    # quadratic form in a PSD matrix; clip FFT roundoff below zero
    return np.maximum(out, 0.0)


def psi_weighted_sum(x: np.ndarray, n: int, w: float, l: int,
                     kernel: SincKernelExt | None = None,
                     counter: FftCounter | None = None) -> np.ndarray:
    """Eigenvalue-weighted sum of all n tapered periodograms on the grid
    [l]/l, computed without tapers via three FFTs.

    For n <= l < 2n the sum is evaluated on the doubled grid [2l]/2l and
    every second entry kept.
    """
    x = np.asarray(x)
    if x.shape[-1] != n:
        raise ParameterError(f"signal length {x.shape[-1]} != n = {n}")
    if l < n:
        raise ParameterError(f"grid size l = {l} must be at least n = {n}")
    if l >= 2 * n:
        if kernel is None or kernel.l != l:
            kernel = build_sinc_kernel(n, w, l)
        return _psi_on_grid(x, kernel, counter)
    if kernel is None or kernel.l != 2 * l:
        kernel = build_sinc_kernel(n, w, 2 * l)
    return _psi_on_grid(x, kernel, counter)[::2]


@dataclass(frozen=True)
class IndexPartition:
    """Disjoint index sets over [n] for a k-taper estimate at tolerance
    epsilon: i1/i2 split [k] at eigenvalue 1 - epsilon, i3/i4 split the
    rest at epsilon.  i4 is implicit (complement) and never stored."""

    n: int
    k: int
    epsilon: float
    i1: np.ndarray
    i2: np.ndarray
    i3: np.ndarray

    @property
    def i4(self) -> np.ndarray:
        mask = np.ones(self.n, dtype=bool)
        mask[:self.k] = False
        mask[self.i3] = False
        return np.nonzero(mask)[0]

    @property
    def transition(self) -> np.ndarray:
        return np.concatenate([self.i2, self.i3])


def partition_indices(eigenvalues: np.ndarray, k: int, eps: float,
                      n: int | None = None) -> IndexPartition:
    """Partition [n] by eigenvalue against the thresholds eps and 1 - eps.

    ``eigenvalues`` must cover every index whose eigenvalue exceeds eps;
    indices beyond the list are treated as having eigenvalue <= eps.
    Requires eigenvalue k-1 >= 1/2 and eigenvalue k <= 1 - eps.
    """
    lam = np.asarray(eigenvalues, dtype=float)
    if not 0.0 < eps < 0.5:
        raise ParameterError(f"eps must lie in (0, 1/2), got {eps}")
    if n is None:
        n = lam.size
    if not 1 <= k <= n:
        raise ParameterError(f"k = {k} out of range for n = {n}")
    if k > lam.size:
        raise ParameterError(
            f"need eigenvalues through index {k - 1}, got {lam.size}")
    if lam[k - 1] < 0.5:
        raise ConfigurationError(
            f"requires eigenvalue[k-1] >= 1/2; eigenvalue[{k - 1}] = {lam[k - 1]!r}")
    if k < lam.size and lam[k] > 1.0 - eps:
        raise ConfigurationError(
            f"requires eigenvalue[k] <= 1 - eps; eigenvalue[{k}] = {lam[k]!r} "
            f"> {1.0 - eps!r}")
    head = lam[:k]
    i1 = np.nonzero(head >= 1.0 - eps)[0]
    i2 = np.nonzero((head < 1.0 - eps) & (head > eps))[0]
    tail = lam[k:]
    i3 = k + np.nonzero((tail > eps) & (tail < 1.0 - eps))[0]
    return IndexPartition(n=n, k=k, epsilon=eps, i1=i1, i2=i2, i3=i3)


@dataclass(frozen=True)
class TransitionTapers:
    """Tapers and eigenvalues for exactly the transition indices i2 u i3."""

    indices: np.ndarray
    eigenvalues: np.ndarray
    tapers: np.ndarray  # (len(indices), n)


def compute_transition_tapers(n: int, w: float, partition: IndexPartition,
                              kernel: ProlateKernel | None = None,
                              ) -> TransitionTapers:
    trans = partition.transition
    if trans.size == 0:
        return TransitionTapers(trans, np.empty(0), np.empty((0, n)))
    lo, hi = int(trans.min()), int(trans.max())
    idx, lam, rows = taper_range(n, w, lo, hi, kernel=kernel)
    keep = np.isin(idx, trans)
    return TransitionTapers(idx[keep], lam[keep], rows[keep])


def multitaper_approx(x: np.ndarray, transition: TransitionTapers,
                      partition: IndexPartition, n: int, w: float, k: int,
                      l: int, counter: FftCounter | None = None,
                      kernel: SincKernelExt | None = None) -> SpectralEstimate:
    """Approximate k-taper estimate: weighted sum identity plus transition
    corrections; off from the exact estimate by at most
    (epsilon / k) * ||x||^2 at every frequency.

    Costs 3 + |i2| + |i3| length-l FFTs (twice that for the weighted-sum
    part when n <= l < 2n).
    """
    x = np.asarray(x)
    if x.shape[-1] != n:
        raise ParameterError(f"signal length {x.shape[-1]} != n = {n}")
    if l < n:
        raise ParameterError(f"grid size l = {l} must be at least n = {n}")
    trans = partition.transition
    if transition.indices.size != trans.size or \
            not np.array_equal(np.sort(transition.indices), np.sort(trans)):
        missing = np.setdiff1d(trans, transition.indices)
        raise ParameterError(
            f"transition tapers missing for indices {missing.tolist()}")

    own_counter = counter if counter is not None else FftCounter()
    meter = _BufMeter()
    psi_len = l if l >= 2 * n else 2 * l
    meter.alloc(5 * psi_len)  # kernel column + padded power + spectrum scratch
    values = psi_weighted_sum(x, n, w, l, kernel=kernel, counter=own_counter)
    values = values / k
    meter.free(5 * psi_len)
    meter.alloc(2 * l)  # running estimate (values)

    order = np.argsort(transition.indices)
    for pos in order:
        idx = int(transition.indices[pos])
        lam = transition.eigenvalues[pos]
        meter.alloc(4 * l)  # padded product + transform
        sk = np.abs(fft(transition.tapers[pos] * x, n=l)) ** 2
        own_counter.record(l, 1)
        if idx < k:
            values = values + ((1.0 - lam) / k) * sk
        else:
            values = values - (lam / k) * sk
        meter.free(4 * l)

    values = np.maximum(values, 0.0)
    meta = {
        "n": n, "w": w, "k": k, "epsilon": partition.epsilon,
        "i2_size": int(partition.i2.size), "i3_size": int(partition.i3.size),
        "fft_count": own_counter.equivalent(l),
        "peak_live_floats": meter.peak + transition.tapers.size,
    }
    return SpectralEstimate(FrequencyGrid(l), values, "multitaper-approx", meta)


@dataclass(frozen=True)
class FastMultitaperPlan:
    """Precomputed state for repeated approximate estimates at fixed
    (n, w, k, epsilon): the index partition and the transition tapers."""

    n: int
    w: float
    k: int
    epsilon: float
    partition: IndexPartition
    transition: TransitionTapers


def prepare_fast_multitaper(n: int, w: float, eps: float,
                            k: int | None = None,
                            delta: float | None = None,
                            window: tuple[np.ndarray, np.ndarray, np.ndarray]
                            | None = None) -> FastMultitaperPlan:
    """Build the partition and transition tapers without touching the
    eigenvalues outside a window around 2nw.

    Exactly one of ``k`` (taper count) or ``delta`` (eigenvalue gap for
    automatic selection) must be given.  A precomputed
    ``dpss.transition_window`` result covering (eps', 1 - eps') for some
    eps' <= eps may be passed to share one eigensolve across several plans.
    Indices left of the window are certified as above 1 - eps by
    monotonicity; indices right of it as below eps.
    """
    if (k is None) == (delta is None):
        raise ParameterError("supply exactly one of k or delta")
    if not 0.0 < eps < 0.5:
        raise ParameterError(f"eps must lie in (0, 1/2), got {eps}")
    if delta is not None:
        k = dpss.select_num_tapers(n, w, delta, window=window)
        if k == 0:
            raise ConfigurationError(
                f"no taper reaches eigenvalue 1 - {delta}; widen w")

    if window is None:
        window = dpss.transition_window(n, w, eps)
    idx, lam, rows = window
    lo, hi = int(idx[0]), int(idx[-1])
    if lam[0] < 1.0 - eps and lo > 0:
        raise ParameterError("supplied window does not reach above 1 - eps")
    if lam[-1] > eps and hi < n - 1:
        raise ParameterError("supplied window does not reach below eps")
    # standing assumptions: eigenvalue k-1 >= 1/2 and eigenvalue k <= 1-eps.
    # Left of the window eigenvalues exceed 1-eps, right of it they are
    # below eps, so out-of-window positions decide both checks.
    if k <= lo:
        raise ConfigurationError(
            f"requires eigenvalue[k] <= 1 - eps, but index {k} lies left of "
            f"the certified window (eigenvalues there exceed {1 - eps!r})")
    if k - 1 > hi:
        raise ConfigurationError(
            f"requires eigenvalue[k-1] >= 1/2, but index {k - 1} lies right "
            f"of the certified window (eigenvalues there are <= {eps!r})")
    if lam[k - 1 - lo] < 0.5:
        raise ConfigurationError(
            f"requires eigenvalue[k-1] >= 1/2; eigenvalue[{k - 1}] = "
            f"{lam[k - 1 - lo]!r}")
    if k <= hi and lam[k - lo] > 1.0 - eps:
        raise ConfigurationError(
            f"requires eigenvalue[k] <= 1 - eps; eigenvalue[{k}] = "
            f"{lam[k - lo]!r}")

    in_trans = (lam > eps) & (lam < 1.0 - eps)
    i2 = idx[in_trans & (idx < k)]
    i3 = idx[in_trans & (idx >= k)]
    i1_window = idx[(lam >= 1.0 - eps) & (idx < k)]
    i1 = np.concatenate([np.arange(lo), i1_window]) if lo > 0 else i1_window
    partition = IndexPartition(n=n, k=k, epsilon=eps, i1=i1, i2=i2, i3=i3)

    keep = np.isin(idx, partition.transition)
    transition = TransitionTapers(idx[keep], lam[keep], rows[keep])
    return FastMultitaperPlan(n=n, w=w, k=k, epsilon=eps,
                              partition=partition, transition=transition)


def fast_multitaper(x: np.ndarray, plan: FastMultitaperPlan, l: int,
                    counter: FftCounter | None = None) -> SpectralEstimate:
    return multitaper_approx(x, plan.transition, plan.partition,
                             plan.n, plan.w, plan.k, l, counter=counter)
