"""Impropriety-driven analysis of the widely linear SNR surplus.

A covariance pair ``(R, C)`` is approximately uncorrelated by the unitary
basis ``Q`` from the Takagi factorization ``C = Q diag(p) Q^T``; in that
basis ``R`` is treated through its eigenvalue spectrum ``lambda`` (sorted
descending and paired with the descending ``p``), and the surplus SNR of the
widely linear matched filter decomposes into per-component contributions

    gain ~= sum_i |xt_i|^2 / lambda_i * g(rho_i; eps_i),

where ``xt = Q^H x``, ``rho_i = p_i / lambda_i`` is the component circularity
quotient, ``eps_i = Re(xt_i^2) / |xt_i|^2`` measures the input's phase
alignment, and ``g(rho; eps) = (1 + rho^2 - 2 eps rho) / (1 - rho^2)``.

``g`` is minimized over ``rho`` at 0 for ``eps <= 0`` and otherwise at
``(1 - sqrt(1 - eps^2)) / eps``, where it equals ``sqrt(1 - eps^2)``; a
sequence whose components sit exactly at that minimizer is produced by
:func:`design_matched_sequence`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateWindowError,
    DimensionMismatchError,
    InvalidImproprietyError,
    NotPositiveDefiniteError,
    SingularAtOneError,
)
from .filters import _as_columns, snr_gain
from .linalg import hermitian_eig, is_positive_definite, takagi
from .noise import CovariancePair, sliding_windows
from .seeding import as_generator

__all__ = [
    "AutDecomposition",
    "ImproprietyProfile",
    "aut_decompose",
    "rotated_input",
    "impropriety_profile",
    "g_of_rho",
    "g_derivative",
    "lower_bound_rho",
    "approx_snr_gain",
    "normalized_snr_bias",
    "design_matched_sequence",
]

logger = logging.getLogger(__name__)

# Quotients may exceed 1 by sampling noise when the covariances are
# estimated; tiny excursions are clamped, anything larger is a real
# singularity of the model.
_RHO_CEILING = 1.0 - 1e-9
_RHO_SLACK = 1e-6


@dataclass(frozen=True)
class AutDecomposition:
    """Approximate joint diagonalization of a covariance pair.

    Attributes
    ----------
    q : ndarray
        Unitary Takagi basis of the complementary covariance.
    lambda_c : ndarray
        Takagi values of ``C`` (descending, nonnegative).
    lambda_r : ndarray
        Eigenvalues of ``R`` (descending, real positive), paired index-wise
        with ``lambda_c``.
    rotated_diag : ndarray
        Real diagonal of ``Q^H R Q``: the basis-dependent alternative
        reading of the noise powers, kept as a diagnostic.
    offdiag_residual : float
        ``||offdiag(Q^H R Q)||_F / ||R||_F``; zero iff the basis in fact
        diagonalizes ``R`` and the approximation is exact.
    """

    q: np.ndarray
    lambda_c: np.ndarray
    lambda_r: np.ndarray
    rotated_diag: np.ndarray
    offdiag_residual: float

    @property
    def dim(self) -> int:
        return self.q.shape[0]


@dataclass(frozen=True)
class ImproprietyProfile:
    """Per-component circularity description of an input in the rotated basis.

    ``epsilon[i]`` is 0 wherever ``zero_mask[i]`` is set (a zero rotated
    component has no phase to measure).
    """

    epsilon: np.ndarray
    rho: np.ndarray
    zero_mask: np.ndarray


def aut_decompose(cov: CovariancePair) -> AutDecomposition:
    """Approximately uncorrelate a covariance pair.

    The basis is the Takagi factorization of the complementary covariance
    (eigenvectors of ``R`` when ``C`` is exactly zero, making the
    decomposition exact); the noise powers are the eigenvalues of ``R``.

    Raises
    ------
    NotPositiveDefiniteError
        If ``R`` is not positive definite.
    """
    if not is_positive_definite(cov.r):
        raise NotPositiveDefiniteError("covariance R must be positive definite")
    factor = takagi(cov.c, companion=cov.r)
    lambda_r, _ = hermitian_eig(cov.r)
    rotated = factor.q.conj().T @ cov.r @ factor.q
    diag = np.real(np.diag(rotated))
    off = rotated - np.diag(np.diag(rotated))
    residual = float(np.linalg.norm(off) / max(np.linalg.norm(cov.r), 1e-300))
    return AutDecomposition(
        q=factor.q,
        lambda_c=factor.p,
        lambda_r=lambda_r,
        rotated_diag=diag,
        offdiag_residual=residual,
    )


def rotated_input(aut: AutDecomposition, x: np.ndarray) -> np.ndarray:
    """Coordinates of ``x`` in the uncorrelating basis, ``Q^H x``."""
    cols, was_vector = _as_columns(x, aut.dim)
    rotated = aut.q.conj().T @ cols
    return rotated[:, 0] if was_vector else rotated


def _clamped_rho(aut: AutDecomposition) -> np.ndarray:
    """Circularity quotients ``p_i / lambda_i`` kept strictly below one."""
    rho = aut.lambda_c / aut.lambda_r
    worst = float(np.max(rho)) if rho.size else 0.0
    if worst >= 1.0 + _RHO_SLACK:
        raise SingularAtOneError(
            f"circularity quotient {worst:.6f} >= 1; the gain expansion is singular"
        )
    if worst > _RHO_CEILING:
        logger.warning(
            "clamping circularity quotient %.12f to %.12f (finite-sample excursion)",
            worst,
            _RHO_CEILING,
        )
        rho = np.minimum(rho, _RHO_CEILING)
    return np.maximum(rho, 0.0)


def _epsilon_columns(rotated: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-component ``Re(xt^2)/|xt|^2`` with a mask of zero components."""
    power = np.abs(rotated) ** 2
    zero = power == 0.0
    eps = np.real(rotated * rotated) / np.where(zero, 1.0, power)
    return np.where(zero, 0.0, eps), zero


def impropriety_profile(aut: AutDecomposition, rotated: np.ndarray) -> ImproprietyProfile:
    """Circularity measures of one already-rotated input (see rotated_input).

    ``rho[i]`` is the per-component degree of impropriety of the noise,
    ``epsilon[i] = Re(rotated[i]^2)/|rotated[i]|^2`` the power-difference
    coefficient of the input. Zero components get epsilon 0 and a raised
    ``zero_mask`` flag instead of an exception.
    """
    cols, was_vector = _as_columns(rotated, aut.dim)
    if not was_vector:
        raise DimensionMismatchError("impropriety_profile expects a single window")
    eps, zero = _epsilon_columns(cols)
    return ImproprietyProfile(epsilon=eps[:, 0], rho=_clamped_rho(aut), zero_mask=zero[:, 0])


def _validate_rho_eps(rho, epsilon):
    rho = np.asarray(rho, dtype=float)
    epsilon = np.asarray(epsilon, dtype=float)
    if np.any(rho < 0):
        raise InvalidImproprietyError("rho must be nonnegative")
    if np.any(rho >= 1):
        raise SingularAtOneError("g(rho; eps) is singular at rho = 1")
    if np.any(np.abs(epsilon) > 1):
        raise InvalidImproprietyError("epsilon must lie in [-1, 1]")
    return rho, epsilon


def g_of_rho(rho, epsilon):
    """Component gain factor ``(1 + rho^2 - 2 eps rho) / (1 - rho^2)``.

    Scalar or elementwise on arrays. Requires ``0 <= rho < 1`` and
    ``|eps| <= 1``.
    """
    scalar = np.isscalar(rho) and np.isscalar(epsilon)
    rho, epsilon = _validate_rho_eps(rho, epsilon)
    value = (1.0 + rho**2 - 2.0 * epsilon * rho) / (1.0 - rho**2)
    return float(value) if scalar else value


def g_derivative(rho, epsilon):
    """Derivative of :func:`g_of_rho` in ``rho``:
    ``-2 (eps rho^2 - 2 rho + eps) / (1 - rho^2)^2``."""
    scalar = np.isscalar(rho) and np.isscalar(epsilon)
    rho, epsilon = _validate_rho_eps(rho, epsilon)
    value = -2.0 * (epsilon * rho**2 - 2.0 * rho + epsilon) / (1.0 - rho**2) ** 2
    return float(value) if scalar else value


def lower_bound_rho(epsilon: float) -> float:
    """Quotient at which the component gain factor is smallest.

    Zero for ``epsilon <= 0``; otherwise ``(1 - sqrt(1 - eps^2)) / eps``,
    reaching 1 only in the limit ``epsilon = 1``. At the interior minimizer
    the factor value is ``sqrt(1 - eps^2)``.
    """
    if not -1.0 <= epsilon <= 1.0:
        raise InvalidImproprietyError(f"epsilon must lie in [-1, 1], got {epsilon}")
    if epsilon <= 0.0:
        return 0.0
    return float((1.0 - np.sqrt(1.0 - epsilon**2)) / epsilon)


def approx_snr_gain(x: np.ndarray, aut: AutDecomposition):
    """Component-wise approximation of the widely linear SNR surplus.

    Sums ``|xt_i|^2 / lambda_i * g(rho_i; eps_i)`` over components; exact
    whenever the basis truly diagonalizes both covariances (in particular for
    zero complementary covariance). Accepts a window or a column batch.
    """
    cols, was_vector = _as_columns(x, aut.dim)
    rotated = aut.q.conj().T @ cols
    eps, _ = _epsilon_columns(rotated)
    rho = _clamped_rho(aut)[:, None]
    factor = (1.0 + rho**2 - 2.0 * eps * rho) / (1.0 - rho**2)
    values = np.sum(np.abs(rotated) ** 2 / aut.lambda_r[:, None] * factor, axis=0)
    return float(values[0]) if was_vector else values


def normalized_snr_bias(signal: np.ndarray, cov: CovariancePair) -> float:
    """Average relative error of the approximate gain over all signal windows.

    For each window position ``n = L..N`` computes ``(approx - exact) /
    exact`` and returns the mean. Positive values mean the approximation
    statistically overestimates the surplus.

    Raises
    ------
    DegenerateWindowError
        If some window's exact surplus falls below 1e-14, making the
        normalization meaningless.
    """
    windows = sliding_windows(np.asarray(signal, dtype=complex), cov.dim)
    exact = snr_gain(windows, cov)
    if np.any(exact < 1e-14):
        raise DegenerateWindowError("a window has numerically zero exact SNR surplus")
    approx = approx_snr_gain(windows, aut_decompose(cov))
    return float(np.mean((approx - exact) / exact))


def design_matched_sequence(
    aut: AutDecomposition,
    magnitudes: np.ndarray | None = None,
    rng: np.random.Generator | int | None = None,
) -> np.ndarray:
    """Construct an input whose components sit at the gain-factor minimizer.

    Component ``i`` of the rotated input gets phase ``theta_i = arccos(
    eps_i) / 2`` where ``eps_i = 2 rho_i / (1 + rho_i^2)`` inverts the
    minimizer condition, so ``Re(xt_i^2)/|xt_i|^2 = eps_i`` lands each
    component exactly on the circularity quotient the noise already has.
    Magnitudes are free; by default they are absolute values of standard
    normal draws from ``rng``.
    """
    rho = _clamped_rho(aut)
    eps_target = 2.0 * rho / (1.0 + rho**2)
    if magnitudes is None:
        magnitudes = np.abs(as_generator(rng).standard_normal(aut.dim))
    else:
        magnitudes = np.asarray(magnitudes, dtype=float)
        if magnitudes.shape != (aut.dim,):
            raise DimensionMismatchError(
                f"magnitudes must have shape ({aut.dim},), got {magnitudes.shape}"
            )
        if not np.all(magnitudes > 0):
            raise ValueError("magnitudes must be strictly positive")
    theta = 0.5 * np.arccos(eps_target)
    rotated = magnitudes * np.exp(1j * theta)
    return aut.q @ rotated
