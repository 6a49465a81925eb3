"""Stationary complex Gaussian process synthesis from a piecewise-constant
power spectral density.

Draws are exact: the Hermitian Toeplitz covariance implied by the density is
embedded in a circulant matrix (one FFT per realization); when the embedding
spectrum has material negative entries the sampler falls back to a dense
Hermitian square root for n <= 4096 and refuses larger problems.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.fft import fft, ifft, next_fast_len
from scipy.linalg import eigh, toeplitz

from .errors import InputError, NumericalError, ParameterError

__all__ = [
    "PiecewisePsd",
    "ProcessSampler",
    "autocorrelation",
    "build_sampler",
    "draw",
    "multiband_fixture",
    "load_psd_json",
    "save_samples",
    "load_samples",
]

_EMBED_TOL = 1e-8       # relative clamp threshold for embedding spectrum
_DENSE_MAX_N = 4096     # largest n for the dense fallback factorization


@dataclass(frozen=True)
class PiecewisePsd:
    """1-periodic nonnegative piecewise-constant power spectral density.

    ``breakpoints`` are strictly increasing in [0, 1); piece i spans
    [breakpoints[i], breakpoints[i+1]) and the last piece wraps around to
    breakpoints[0] + 1.
    """

    breakpoints: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        if bp.size == 0 or bp.size != vals.size:
            raise ParameterError("need one value per breakpoint, at least one piece")
        if np.any(bp < 0.0) or np.any(bp >= 1.0) or np.any(np.diff(bp) <= 0.0):
            raise ParameterError("breakpoints must be strictly increasing in [0, 1)")
        if np.any(vals < 0.0) or not np.all(np.isfinite(vals)):
            raise ParameterError("piece values must be finite and nonnegative")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)

    def piece_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(starts, ends, levels) with ends[-1] = breakpoints[0] + 1."""
        starts = self.breakpoints
        ends = np.append(self.breakpoints[1:], self.breakpoints[0] + 1.0)
        return starts, ends, self.values

    def evaluate(self, f) -> np.ndarray:
        f = np.mod(np.asarray(f, dtype=float), 1.0)
        idx = np.searchsorted(self.breakpoints, f, side="right") - 1
        idx = np.where(idx < 0, len(self.values) - 1, idx)
        return self.values[idx]

    def total_power(self) -> float:
        starts, ends, levels = self.piece_arrays()
        return float(levels @ (ends - starts))


def autocorrelation(psd: PiecewisePsd, lag) -> complex | np.ndarray:
    """Autocorrelation r(lag) = integral of S(f) exp(j 2 pi f lag) over one
    period, in closed form per piece."""
    lags = np.asarray(lag)
    scalar = lags.ndim == 0
    lags = np.atleast_1d(lags).astype(float)
    starts, ends, levels = psd.piece_arrays()
    out = np.zeros(lags.shape, dtype=complex)
    nz = lags != 0
    ln = lags[nz][:, None]
    if np.any(nz):
        phase = (np.exp(2j * np.pi * ends[None, :] * ln)
                 - np.exp(2j * np.pi * starts[None, :] * ln))
        out[nz] = (phase @ levels) / (2j * np.pi * lags[nz])
    if np.any(~nz):
        out[~nz] = levels @ (ends - starts)
    return complex(out[0]) if scalar else out


@dataclass(frozen=True)
class ProcessSampler:
    """Immutable exact sampler for x ~ CN(0, R) with R from a piecewise
    density.  ``mode`` is 'circulant' (sqrt_spectrum over embed_len) or
    'dense' (n-by-n square-root factor)."""

    psd: PiecewisePsd
    n: int
    seed: int
    mode: str
    embed_len: int = 0
    sqrt_spectrum: np.ndarray | None = field(default=None, repr=False)
    dense_factor: np.ndarray | None = field(default=None, repr=False)


def _embedding_column(psd: PiecewisePsd, n: int, m: int,
                      rolloff: bool = False) -> np.ndarray:
    """First column of the Hermitian circulant extending the Toeplitz
    covariance.  Lags below n must be the true autocorrelation (they fix
    the covariance of the first n samples); the free middle lags either
    carry the true values or, with ``rolloff``, are shaped to zero by a
    raised cosine, which suppresses the truncation ringing that can push
    the embedding spectrum negative."""
    half = m // 2
    r_head = autocorrelation(psd, np.arange(half + 1))
    if rolloff and half > n:
        t = (np.arange(n, half + 1) - n) / (half - n)
        r_head[n:] *= 0.5 * (1.0 + np.cos(np.pi * t))
    c = np.empty(m, dtype=complex)
    c[:half + 1] = r_head
    c[half + 1:] = np.conj(r_head[1:m - half][::-1])
    if m % 2 == 0:
        c[half] = c[half].real
    return c


def build_sampler(psd: PiecewisePsd, n: int, seed: int) -> ProcessSampler:
    """Factor the covariance once; afterwards each draw costs one FFT
    (circulant path) or one matrix-vector product (dense fallback)."""
    if n < 1:
        raise ParameterError(f"n must be positive, got {n}")
    for m, rolloff in ((next_fast_len(2 * n), False),
                       (next_fast_len(4 * n), True)):
        spectrum = fft(_embedding_column(psd, n, m, rolloff)).real
        top = spectrum.max()
        if top <= 0.0:
            raise NumericalError("covariance embedding spectrum has no mass")
        if spectrum.min() >= -_EMBED_TOL * top:
            np.clip(spectrum, 0.0, None, out=spectrum)
            return ProcessSampler(psd=psd, n=n, seed=seed, mode="circulant",
                                  embed_len=m, sqrt_spectrum=np.sqrt(spectrum))
    if n > _DENSE_MAX_N:
        raise NumericalError(
            f"circulant embedding of this density is indefinite at n = {n} "
            f"(min spectrum {spectrum.min():.3e} vs max {top:.3e}); the dense "
            f"fallback is limited to n <= {_DENSE_MAX_N}. Use a smaller n or "
            "sample directly in the spectral domain.")
    r = autocorrelation(psd, np.arange(n))
    cov = toeplitz(r, np.conj(r))
    vals, vecs = eigh(cov)
    floor = -1e-10 * vals.max()
    if vals.min() < floor:
        raise NumericalError(
            f"dense covariance factorization failed: eigenvalue {vals.min():.3e}")
    np.clip(vals, 0.0, None, out=vals)
    factor = vecs * np.sqrt(vals)
    return ProcessSampler(psd=psd, n=n, seed=seed, mode="dense",
                          dense_factor=factor)


def _draw_noise(seed: int, index: int, size: int) -> np.ndarray:
    """Unit complex Gaussian stream for one draw index: real and imaginary
    parts i.i.d. N(0, 1/2), keyed by (seed, index) so any draw can be
    produced independently of the others."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(index,))
    gen = np.random.Generator(np.random.Philox(ss))
    z = gen.standard_normal(2 * size)
    return (z[:size] + 1j * z[size:]) * np.sqrt(0.5)


def draw(sampler: ProcessSampler, count: int, start: int = 0) -> np.ndarray:
    """Realizations start..start+count-1 as rows of an (count, n) array.

    Output for a given (seed, index) never depends on batching, ordering,
    or parallelism.
    """
    if count < 1:
        raise ParameterError(f"count must be positive, got {count}")
    n = sampler.n
    if sampler.mode == "circulant":
        m = sampler.embed_len
        noise = np.empty((count, m), dtype=complex)
        for i in range(count):
            noise[i] = _draw_noise(sampler.seed, start + i, m)
        colored = ifft(noise * sampler.sqrt_spectrum, axis=-1)
        return np.ascontiguousarray(colored[:, :n]) * np.sqrt(m)
    noise = np.empty((count, n), dtype=complex)
    for i in range(count):
        noise[i] = _draw_noise(sampler.seed, start + i, n)
    return noise @ sampler.dense_factor.T


def multiband_fixture() -> PiecewisePsd:
    """Four narrowband sources of widely different strength over a unit
    background: 1e3 on [0.18, 0.22), 1e9 on [0.28, 0.32), 1e2 on
    [0.38, 0.42), 1e1 on [0.78, 0.82), 1 elsewhere."""
    return PiecewisePsd(
        breakpoints=np.array([0.0, 0.18, 0.22, 0.28, 0.32,
                              0.38, 0.42, 0.78, 0.82]),
        values=np.array([1.0, 1e3, 1.0, 1e9, 1.0, 1e2, 1.0, 1e1, 1.0]),
    )


def load_psd_json(source) -> PiecewisePsd:
    """Build a density from a JSON piece list [{start, end, level}, ...].

    Pieces must not overlap; gaps are filled with level 0.
    """
    if isinstance(source, (str, bytes)):
        pieces = json.loads(source)
    else:
        pieces = source
    if not isinstance(pieces, list) or not pieces:
        raise InputError("expected a non-empty JSON list of pieces")
    try:
        spans = sorted((float(p["start"]), float(p["end"]), float(p["level"]))
                       for p in pieces)
    except (KeyError, TypeError) as exc:
        raise InputError(f"each piece needs start/end/level: {exc}") from exc
    bp: list[float] = []
    vals: list[float] = []
    cursor = 0.0
    for start, end, level in spans:
        if not 0.0 <= start < end <= 1.0:
            raise InputError(f"piece [{start}, {end}) outside [0, 1]")
        if start < cursor:
            raise InputError(f"piece [{start}, {end}) overlaps a previous piece")
        if start > cursor:
            bp.append(cursor)
            vals.append(0.0)
        bp.append(start)
        vals.append(level)
        cursor = end
    if cursor < 1.0:
        bp.append(cursor)
        vals.append(0.0)
    return PiecewisePsd(np.array(bp), np.array(vals))


def save_samples(x: np.ndarray, path) -> None:
    """Raw interleaved little-endian float64 (re, im) pairs."""
    np.ascontiguousarray(x, dtype="<c16").tofile(path)


def load_samples(path, n: int | None = None) -> np.ndarray:
    data = np.fromfile(path, dtype="<c16")
    if n is not None:
        if data.size != n:
            raise InputError(
                f"sample file holds {data.size} complex values, expected {n}")
    return data
