"""Improper Gaussian noise models built from moving-average filters.

The driving process is doubly white: each sample ``u(n)`` is an independent
complex Gaussian with ``E[|u|^2] = sigma2_u`` and a real second-moment
``E[u^2] = rho_u * sigma2_u`` controlled by the impropriety coefficient
``rho_u``. Passing it through a finite impulse response gives colored noise
whose covariance and complementary covariance are both Toeplitz and available
in closed form.

Windows are read newest-first throughout the package: the window at position
``n`` is ``[v(n), v(n-1), ..., v(n-L+1)]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.signal

from .errors import (
    EmptyInputError,
    InsufficientSamplesError,
    InvalidImproprietyError,
    NotHermitianError,
    NotSymmetricError,
)
from .seeding import as_generator

__all__ = [
    "NoiseModel",
    "CovariancePair",
    "demo_model",
    "sample_improper_white",
    "ma_filter",
    "analytic_covariances",
    "empirical_covariances",
    "sliding_windows",
]


@dataclass(frozen=True)
class NoiseModel:
    """Moving-average noise model driven by doubly white improper Gaussians.

    Attributes
    ----------
    taps : tuple of complex
        Finite impulse response coefficients; ``v(n) = sum_k taps[k] u(n-k)``.
    rho_u : float
        Impropriety coefficient of the driving noise, in [0, 1].
    sigma2_u : float
        Power of the driving noise, positive.
    """

    taps: tuple[complex, ...]
    rho_u: float
    sigma2_u: float = 1.0

    def __post_init__(self):
        taps = tuple(complex(t) for t in self.taps)
        if len(taps) == 0:
            raise EmptyInputError("taps must be nonempty")
        if not all(np.isfinite(t.real) and np.isfinite(t.imag) for t in taps):
            raise ValueError("taps contain non-finite entries")
        if all(t == 0 for t in taps):
            raise ValueError("at least one tap must be nonzero")
        object.__setattr__(self, "taps", taps)
        if not 0.0 <= self.rho_u <= 1.0:
            raise InvalidImproprietyError(f"rho_u must lie in [0, 1], got {self.rho_u}")
        if not self.sigma2_u > 0:
            raise ValueError(f"sigma2_u must be positive, got {self.sigma2_u}")


@dataclass(frozen=True)
class CovariancePair:
    """Covariance ``r = E[w w^H]`` and complementary covariance ``c = E[w w^T]``
    of a length-L noise window, plus the augmented block matrix built from them.
    """

    r: np.ndarray
    c: np.ndarray
    augmented: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        r = np.asarray(self.r, dtype=complex)
        c = np.asarray(self.c, dtype=complex)
        if r.shape != c.shape or r.ndim != 2 or r.shape[0] != r.shape[1]:
            raise ValueError(f"covariances must be equal square shapes, got {r.shape} and {c.shape}")
        scale = max(float(np.linalg.norm(r)), float(np.linalg.norm(c)), 1.0)
        if np.linalg.norm(r - r.conj().T) > 1e-10 * scale:
            raise NotHermitianError("covariance r must be Hermitian")
        if np.linalg.norm(c - c.T) > 1e-10 * scale:
            raise NotSymmetricError("complementary covariance c must be symmetric")
        r = (r + r.conj().T) / 2.0
        c = (c + c.T) / 2.0
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "c", c)
        top = np.hstack([r, c])
        bottom = np.hstack([c.conj(), r.conj()])
        object.__setattr__(self, "augmented", np.vstack([top, bottom]))

    @property
    def dim(self) -> int:
        return self.r.shape[0]


def demo_model(rho_u: float, sigma2_u: float = 1.0) -> NoiseModel:
    """The two-tap moving average ``v(n) = 0.9 u(n) - 0.1j u(n-1)`` used by the demos."""
    return NoiseModel(taps=(0.9, -0.1j), rho_u=rho_u, sigma2_u=sigma2_u)


def sample_improper_white(
    n: int,
    rho_u: float,
    sigma2_u: float = 1.0,
    rng: np.random.Generator | int | None = None,
) -> np.ndarray:
    """Draw ``n`` doubly white improper Gaussian samples.

    Real and imaginary parts are independent zero-mean Gaussians with
    variances ``sigma2_u (1 + rho_u) / 2`` and ``sigma2_u (1 - rho_u) / 2``,
    the unique split with uncorrelated parts giving ``E[|u|^2] = sigma2_u``
    and ``E[u^2] = rho_u sigma2_u``.
    """
    if n <= 0:
        raise EmptyInputError(f"sample count must be positive, got {n}")
    if not 0.0 <= rho_u <= 1.0:
        raise InvalidImproprietyError(f"rho_u must lie in [0, 1], got {rho_u}")
    if not sigma2_u > 0:
        raise ValueError(f"sigma2_u must be positive, got {sigma2_u}")
    gen = as_generator(rng)
    std_re = np.sqrt(sigma2_u * (1.0 + rho_u) / 2.0)
    std_im = np.sqrt(sigma2_u * (1.0 - rho_u) / 2.0)
    return std_re * gen.standard_normal(n) + 1j * std_im * gen.standard_normal(n)


def ma_filter(u: np.ndarray, taps) -> np.ndarray:
    """Apply the moving-average filter with zero initial state.

    Returns a sequence of the same length as ``u``; the first ``len(taps)``
    outputs (where the filter is still filling) are kept.
    """
    u = np.asarray(u, dtype=complex)
    if u.size == 0:
        raise EmptyInputError("input sequence is empty")
    taps = np.asarray(taps, dtype=complex)
    if taps.size == 0:
        raise EmptyInputError("taps must be nonempty")
    return scipy.signal.lfilter(taps, [1.0], u)


def _lagged_products(taps: np.ndarray, conjugate: bool, length: int) -> np.ndarray:
    """Vector of ``sum_m taps[m+k] * (conj)taps[m]`` for k = 0..length-1."""
    other = np.conj(taps) if conjugate else taps
    full = np.correlate(taps, np.conj(other), mode="full")
    nonneg = full[len(taps) - 1 :]
    out = np.zeros(length, dtype=complex)
    take = min(length, len(nonneg))
    out[:take] = nonneg[:take]
    return out


def analytic_covariances(model: NoiseModel, filter_len: int) -> CovariancePair:
    """Exact window covariances of the filtered noise.

    With ``r(k) = sigma2_u sum_m taps[m+k] conj(taps[m])`` and
    ``c(k) = rho_u sigma2_u sum_m taps[m+k] taps[m]``, the newest-first
    window has Toeplitz covariance ``R[a, b] = r(b - a)`` (conjugated below
    the diagonal) and symmetric Toeplitz complementary covariance
    ``C[a, b] = c(|a - b|)``.
    """
    if filter_len < 1:
        raise EmptyInputError(f"filter_len must be >= 1, got {filter_len}")
    taps = np.asarray(model.taps, dtype=complex)
    r = model.sigma2_u * _lagged_products(taps, conjugate=True, length=filter_len)
    c = model.rho_u * model.sigma2_u * _lagged_products(taps, conjugate=False, length=filter_len)
    r_mat = sla.toeplitz(np.conj(r), r)
    c_mat = sla.toeplitz(c, c)
    r_mat = (r_mat + r_mat.conj().T) / 2.0
    c_mat = (c_mat + c_mat.T) / 2.0
    return CovariancePair(r=r_mat, c=c_mat)


def sliding_windows(sequence: np.ndarray, window_len: int) -> np.ndarray:
    """Newest-first windows of a sequence as columns of an (L, K) matrix.

    Column ``k`` is the window ending at sample ``k + window_len - 1``
    (0-based), i.e. positions L..N in 1-based terms, K = N - L + 1 columns.
    """
    sequence = np.asarray(sequence)
    if window_len < 1:
        raise EmptyInputError(f"window_len must be >= 1, got {window_len}")
    if sequence.ndim != 1 or sequence.size < window_len:
        raise InsufficientSamplesError(
            f"need a 1-d sequence of at least {window_len} samples, got shape {sequence.shape}"
        )
    return np.lib.stride_tricks.sliding_window_view(sequence, window_len)[:, ::-1].T


def empirical_covariances(v: np.ndarray, filter_len: int) -> CovariancePair:
    """Sample window covariances from a noise record.

    Averages ``w w^H`` and ``w w^T`` over every sliding window (normalized by
    the window count) and symmetrizes exactly, so the augmented matrix is a
    genuine sample covariance of the stacked ``(w, conj(w))`` vectors and
    inherits positive semidefiniteness by construction.
    """
    v = np.asarray(v, dtype=complex)
    if v.ndim != 1 or v.size < 10 * filter_len:
        raise InsufficientSamplesError(
            f"need at least {10 * filter_len} samples for filter_len={filter_len}, got {v.size}"
        )
    windows = sliding_windows(v, filter_len)
    count = windows.shape[1]
    r_mat = windows @ windows.conj().T / count
    c_mat = windows @ windows.T / count
    r_mat = (r_mat + r_mat.conj().T) / 2.0
    c_mat = (c_mat + c_mat.T) / 2.0
    return CovariancePair(r=r_mat, c=c_mat)
