"""Slepian taper banks and eigenvalue bounds for the prolate matrix.

The prolate matrix B for a window length ``n`` and half-bandwidth ``w`` is the
symmetric Toeplitz matrix with entries ``sin(2*pi*w*(p-q)) / (pi*(p-q))`` and
diagonal ``2*w``.  Its orthonormal eigenvectors are the Slepian tapers; the
eigenvalue of taper k is the fraction of that taper's spectral energy inside
the band ``[-w, w]``.

Tapers are computed as eigenvectors of the symmetric tridiagonal matrix that
commutes with B (bisection plus inverse iteration, so selected index ranges
cost O(n) per taper), and each eigenvalue is then recovered as the Rayleigh
quotient ``s^T B s`` with B applied through an FFT-based Toeplitz multiply.
"""

from __future__ import annotations

import struct
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.fft import fft, ifft, next_fast_len, rfft, irfft
from scipy.linalg import eigh_tridiagonal

from .errors import NumericalError, ParameterError

__all__ = [
    "ProlateKernel",
    "TaperBank",
    "build_prolate_kernel",
    "apply_prolate",
    "build_taper_bank",
    "taper_range",
    "transition_width_bound",
    "eigenvalue_lower_bound",
    "select_num_tapers",
    "save_bank",
    "load_bank",
]

_BANK_MAGIC = b"DPSS"
_BANK_VERSION = 1


def _check_bandwidth(w: float) -> None:
    if not 0.0 < w < 0.5:
        raise ParameterError(f"half-bandwidth w must lie in (0, 1/2), got {w}")


def prolate_first_column(n: int, w: float) -> np.ndarray:
    """First column of the n-by-n prolate matrix."""
    col = np.empty(n)
    col[0] = 2.0 * w
    m = np.arange(1, n)
    col[1:] = np.sin(2.0 * np.pi * w * m) / (np.pi * m)
    return col


@dataclass(frozen=True)
class ProlateKernel:
    """Prolate matrix held as its first column plus a cached circulant
    embedding, so matrix-vector products cost three length-m FFTs."""

    n: int
    w: float
    first_column: np.ndarray
    embed_len: int = field(repr=False, compare=False, default=0)
    embed_spectrum: np.ndarray = field(repr=False, compare=False, default=None)


def build_prolate_kernel(n: int, w: float) -> ProlateKernel:
    if n < 1:
        raise ParameterError(f"n must be positive, got {n}")
    _check_bandwidth(w)
    col = prolate_first_column(n, w)
    m = next_fast_len(2 * n)
    c = np.zeros(m)
    c[:n] = col
    c[m - n + 1:] = col[1:][::-1]
    # c is a symmetric real sequence, so the circulant spectrum is real
    spectrum = fft(c).real
    return ProlateKernel(n=n, w=w, first_column=col,
                         embed_len=m, embed_spectrum=spectrum)


def apply_prolate(kernel: ProlateKernel, v: np.ndarray) -> np.ndarray:
    """B @ v via the circulant embedding (exact up to FFT roundoff).

    Accepts a single vector or a stack of row vectors; real input stays
    real.
    """
    v = np.asarray(v)
    if v.shape[-1] != kernel.n:
        raise ParameterError(
            f"vector length {v.shape[-1]} does not match kernel size {kernel.n}")
    m = kernel.embed_len
    if np.isrealobj(v):
        half = kernel.embed_spectrum[:m // 2 + 1]
        out = irfft(rfft(v, n=m, axis=-1) * half, n=m, axis=-1)
    else:
        out = ifft(fft(v, n=m, axis=-1) * kernel.embed_spectrum, axis=-1)
    return np.ascontiguousarray(out[..., :kernel.n])


@dataclass(frozen=True)
class TaperBank:
    """The first ``k_computed`` Slepian tapers for a fixed (n, w).

    ``tapers`` has one taper per row; ``eigenvalues`` are strictly
    descending and lie in the open interval (0, 1).  ``low_time_bandwidth``
    marks the degenerate regime 2*n*w <= 1.
    """

    n: int
    w: float
    tapers: np.ndarray
    eigenvalues: np.ndarray
    k_computed: int
    low_time_bandwidth: bool = False

    def taper(self, k: int) -> np.ndarray:
        return self.tapers[k]


def _commuting_tridiagonal(n: int, w: float) -> tuple[np.ndarray, np.ndarray]:
    i = np.arange(n, dtype=np.float64)
    diag = ((n - 1 - 2 * i) / 2.0) ** 2 * np.cos(2 * np.pi * w)
    off = (i[1:] * (n - i[1:])) / 2.0
    return diag, off


def _top_vectors(diag: np.ndarray, off: np.ndarray, j_lo: int, j_hi: int,
                 label: str) -> np.ndarray:
    """Eigenvectors for the j_lo..j_hi-th largest eigenvalues (rows, in
    descending eigenvalue order)."""
    size = diag.size
    try:
        _, vecs = eigh_tridiagonal(
            diag, off, select="i",
            select_range=(size - 1 - j_hi, size - 1 - j_lo))
    except Exception as exc:  # LinAlgError from stebz/stein
        raise NumericalError(
            f"tridiagonal eigensolver failed for {label} ranks "
            f"{j_lo}..{j_hi}: {exc}") from exc
    return vecs[:, ::-1].T


def _solve_taper_rows(n: int, w: float, lo: int, hi: int) -> np.ndarray:
    """Tapers lo..hi (inclusive) as rows, sign-normalized.

    The commuting tridiagonal is persymmetric, so it folds into two
    half-size problems: tapers alternate symmetric (even k) and
    antisymmetric (odd k) about the midpoint, and taper 2j (resp. 2j+1) is
    the j-th largest eigenvector of the symmetric (resp. antisymmetric)
    half.  Solving the halves costs half the bisection work per taper.
    """
    diag, off = _commuting_tridiagonal(n, w)
    if n < 4:
        rows = _top_vectors(diag, off, lo, hi, "tridiagonal")
        rows = np.ascontiguousarray(rows)
    else:
        m = n // 2
        rows = np.empty((hi - lo + 1, n))
        even_lo, even_hi = (lo + 1) // 2, hi // 2
        odd_lo, odd_hi = lo // 2, (hi - 1) // 2
        if n % 2 == 0:
            d_sym = diag[:m].copy()
            d_sym[m - 1] += off[m - 1]
            d_asym = diag[:m].copy()
            d_asym[m - 1] -= off[m - 1]
            off_half = off[:m - 1]
            if even_hi >= even_lo:
                half = _top_vectors(d_sym, off_half, even_lo, even_hi,
                                    "symmetric half")
                for j, u in zip(range(even_lo, even_hi + 1), half):
                    rows[2 * j - lo] = np.concatenate([u, u[::-1]]) / np.sqrt(2)
            if hi >= 1 and odd_hi >= odd_lo:
                half = _top_vectors(d_asym, off_half, odd_lo, odd_hi,
                                    "antisymmetric half")
                for j, u in zip(range(odd_lo, odd_hi + 1), half):
                    rows[2 * j + 1 - lo] = \
                        np.concatenate([u, -u[::-1]]) / np.sqrt(2)
        else:
            d_sym = diag[:m + 1].copy()
            off_sym = off[:m].copy()
            off_sym[m - 1] *= np.sqrt(2.0)
            if even_hi >= even_lo:
                half = _top_vectors(d_sym, off_sym, even_lo, even_hi,
                                    "symmetric half")
                for j, u in zip(range(even_lo, even_hi + 1), half):
                    center = u[m] * np.sqrt(2.0)
                    rows[2 * j - lo] = np.concatenate(
                        [u[:m], [center], u[:m][::-1]]) / np.sqrt(2)
            if hi >= 1 and odd_hi >= odd_lo:
                half = _top_vectors(diag[:m], off[:m - 1], odd_lo, odd_hi,
                                    "antisymmetric half")
                for j, u in zip(range(odd_lo, odd_hi + 1), half):
                    rows[2 * j + 1 - lo] = np.concatenate(
                        [u, [0.0], -u[::-1]]) / np.sqrt(2)
    # unit norm (inverse iteration output is already close)
    rows /= np.linalg.norm(rows, axis=1, keepdims=True)
    _normalize_signs(rows)
    return rows

def _normalize_signs(rows: np.ndarray) -> None:
    """Sign convention: positive entry sum; if the sum vanishes
    (antisymmetric tapers), first non-negligible entry positive."""
    sums = rows.sum(axis=1)
    for i, s in enumerate(sums):
        if abs(s) > 1e-8:
            sign = np.sign(s)
        else:
            r = rows[i]
            j = np.argmax(np.abs(r) > 1e-8 * np.abs(r).max())
            sign = np.sign(r[j])
        if sign < 0:
            rows[i] = -rows[i]


def _rayleigh_eigenvalues(kernel: ProlateKernel, rows: np.ndarray,
                          chunk: int = 256) -> np.ndarray:
    lam = np.empty(rows.shape[0])
    for start in range(0, rows.shape[0], chunk):
        block = rows[start:start + chunk]
        lam[start:start + chunk] = np.einsum(
            "ij,ij->i", block, apply_prolate(kernel, block))
    return lam


def _enforce_open_unit_descending(lam: np.ndarray, n: int) -> np.ndarray:
    """Clamp Rayleigh quotients into (0, 1) and break roundoff ties so the
    sequence is strictly descending.  Adjustments are a few ulps; the
    documented floor for far-tail eigenvalues is machine-eps * n."""
    floor = np.finfo(np.float64).eps * n
    out = np.clip(lam, floor, np.nextafter(1.0, 0.0))
    for i in range(1, len(out)):
        if out[i] >= out[i - 1]:
            out[i] = np.nextafter(out[i - 1], 0.0)
    return out


def build_taper_bank(n: int, w: float, k_max: int) -> TaperBank:
    """First ``k_max`` Slepian tapers and eigenvalues for (n, w)."""
    if n < 1:
        raise ParameterError(f"n must be positive, got {n}")
    _check_bandwidth(w)
    if not 1 <= k_max <= n:
        raise ParameterError(f"k_max must satisfy 1 <= k_max <= n, got {k_max}")
    low_tbw = 2.0 * n * w <= 1.0
    if low_tbw:
        warnings.warn(
            f"time-bandwidth product 2*n*w = {2 * n * w:.3g} <= 1; "
            "even the first taper is poorly concentrated", stacklevel=2)
    rows = _solve_taper_rows(n, w, 0, k_max - 1)
    kernel = build_prolate_kernel(n, w)
    lam = _enforce_open_unit_descending(_rayleigh_eigenvalues(kernel, rows), n)
    return TaperBank(n=n, w=w, tapers=rows, eigenvalues=lam,
                     k_computed=k_max, low_time_bandwidth=low_tbw)


def taper_range(n: int, w: float, first: int, last: int,
                kernel: ProlateKernel | None = None
                ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Tapers and eigenvalues for the index range first..last inclusive.

    Returns (indices, eigenvalues, taper rows).  Eigenvalues here are the
    raw clipped Rayleigh quotients of the requested slice; strict descent is
    only enforced within the slice.
    """
    if n < 1:
        raise ParameterError(f"n must be positive, got {n}")
    _check_bandwidth(w)
    if not 0 <= first <= last <= n - 1:
        raise ParameterError(
            f"index range {first}..{last} invalid for n = {n}")
    rows = _solve_taper_rows(n, w, first, last)
    if kernel is None:
        kernel = build_prolate_kernel(n, w)
    lam = _enforce_open_unit_descending(_rayleigh_eigenvalues(kernel, rows), n)
    return np.arange(first, last + 1), lam, rows


def transition_width_bound(n: int, w: float, eps: float) -> float:
    """Upper bound on how many eigenvalues lie in (eps, 1 - eps).

    Natural logarithms throughout.
    """
    if not 0.0 < eps < 0.5:
        raise ParameterError(f"eps must lie in (0, 1/2), got {eps}")
    return (2.0 / np.pi ** 2) * np.log(100.0 * n * w + 25.0) \
        * np.log(5.0 / (eps * (1.0 - eps))) + 7.0


def eigenvalue_lower_bound(n: int, w: float, k: int) -> float:
    """Certified lower bound on eigenvalue k, valid for
    0 <= k <= floor(2nw) - 1.  May be <= 0 (vacuous) near the upper end."""
    _check_bandwidth(w)
    top = int(np.floor(2.0 * n * w)) - 1
    if not 0 <= k <= top:
        raise ParameterError(
            f"k must satisfy 0 <= k <= floor(2nw)-1 = {top}, got {k}")
    c = (2.0 / np.pi ** 2) * np.log(100.0 * n * w + 25.0)
    return 1.0 - 10.0 * np.exp(-(np.floor(2.0 * n * w) - k - 7.0) / c)


def transition_window(n: int, w: float, eps: float,
                      kernel: ProlateKernel | None = None,
                      ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Eigenpairs covering every eigenvalue in (eps, 1 - eps).

    Returns (indices, eigenvalues, taper rows) for a contiguous index range
    around 2nw whose first eigenvalue is certified >= 1 - eps (unless the
    range starts at 0) and whose last is certified <= eps (unless it ends
    at n - 1); everything outside follows by monotonicity.
    """
    if n < 1:
        raise ParameterError(f"n must be positive, got {n}")
    eps = min(max(eps, 1e-300), 0.4999999)
    width = int(np.ceil(transition_width_bound(n, w, eps)))
    center = int(np.floor(2.0 * n * w))
    lo = max(0, center - width - 3)
    hi = min(n - 1, max(center + width + 3, lo))
    if kernel is None:
        kernel = build_prolate_kernel(n, w)
    while True:
        idx, lam, rows = taper_range(n, w, lo, hi, kernel=kernel)
        if lam[0] < 1.0 - eps and lo > 0:
            lo = max(0, lo - (hi - lo + 1))
            continue
        if lam[-1] > eps and hi < n - 1:
            hi = min(n - 1, hi + (hi - lo + 1))
            continue
        return idx, lam, rows


def select_num_tapers(n: int, w: float, delta: float,
                      window: tuple[np.ndarray, np.ndarray, np.ndarray] | None
                      = None) -> int:
    """Largest K such that eigenvalue K-1 is at least 1 - delta.

    Eigenvalues are computed only inside a window around 2nw wide enough to
    contain the crossing (a precomputed ``transition_window`` result may be
    passed to share the eigensolve); indices left of a window whose first
    eigenvalue is >= 1 - delta are covered by monotonicity.
    """
    if n < 1:
        raise ParameterError(f"n must be positive, got {n}")
    _check_bandwidth(w)
    if not 0.0 < delta < 1.0:
        raise ParameterError(f"delta must lie in (0, 1), got {delta}")
    if window is None:
        window = transition_window(n, w, min(delta, 1.0 - delta))
    idx, lam, _ = window
    if lam[0] < 1.0 - delta and idx[0] > 0:
        raise ParameterError(
            "supplied window does not reach above 1 - delta")
    below = np.nonzero(lam < 1.0 - delta)[0]
    if below.size == 0:
        if idx[-1] < n - 1:
            raise ParameterError(
                "supplied window does not reach below 1 - delta")
        return n
    return int(idx[below[0]])


def save_bank(bank: TaperBank, path) -> None:
    """Columnar binary cache: little-endian header
    {magic 'DPSS', version u32, n u64, w f64, k u64}, then eigenvalues,
    then tapers taper-by-taper."""
    with open(path, "wb") as fh:
        fh.write(_BANK_MAGIC)
        fh.write(struct.pack("<IQdQ", _BANK_VERSION, bank.n, bank.w,
                             bank.k_computed))
        fh.write(np.asarray(bank.eigenvalues, dtype="<f8").tobytes())
        fh.write(np.ascontiguousarray(bank.tapers, dtype="<f8").tobytes())


def load_bank(path) -> TaperBank:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != _BANK_MAGIC:
            raise ParameterError(f"not a taper bank file: bad magic {magic!r}")
        version, n, w, k = struct.unpack("<IQdQ", fh.read(4 + 8 + 8 + 8))
        if version != _BANK_VERSION:
            raise ParameterError(f"unsupported bank version {version}")
        lam = np.frombuffer(fh.read(8 * k), dtype="<f8").copy()
        tapers = np.frombuffer(fh.read(8 * k * n), dtype="<f8").reshape(k, n).copy()
    return TaperBank(n=n, w=w, tapers=tapers, eigenvalues=lam, k_computed=k,
                     low_time_bandwidth=2.0 * n * w <= 1.0)
