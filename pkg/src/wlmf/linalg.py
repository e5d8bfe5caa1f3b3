"""Complex linear algebra kernels: Hermitian solves, eigensystems, and the
Takagi factorization of complex symmetric matrices.

All matrices are plain numpy arrays. Functions validate structure (shape,
finiteness, Hermitian/symmetric character, positive definiteness) and raise
the library's typed errors instead of letting LAPACK failures float up.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg as sla

from .errors import (
    DimensionMismatchError,
    EmptyInputError,
    NotHermitianError,
    NotPositiveDefiniteError,
    NotSymmetricError,
    NumericalConsistencyError,
)

__all__ = [
    "TakagiResult",
    "hermitian_solve",
    "hermitian_eig",
    "is_positive_definite",
    "takagi",
]

# Structure checks use a relative Frobenius tolerance; covariance builders in
# this package symmetrize exactly, so anything past this is a caller bug.
_STRUCTURE_RTOL = 1e-10


def _as_square_matrix(a: np.ndarray, name: str) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"{name} must be square, got shape {a.shape}")
    if a.shape[0] == 0:
        raise EmptyInputError(f"{name} must have at least one row")
    if not np.all(np.isfinite(a.view(float))):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def _check_hermitian(a: np.ndarray, name: str) -> None:
    scale = max(float(np.linalg.norm(a)), 1.0)
    if np.linalg.norm(a - a.conj().T) > _STRUCTURE_RTOL * scale:
        raise NotHermitianError(f"{name} is not Hermitian")


def _check_symmetric(a: np.ndarray, name: str) -> None:
    scale = max(float(np.linalg.norm(a)), 1.0)
    if np.linalg.norm(a - a.T) > _STRUCTURE_RTOL * scale:
        raise NotSymmetricError(f"{name} is not complex symmetric")


def _default_pivot_tol(a: np.ndarray) -> float:
    return 1e-12 * max(float(np.max(np.real(np.diag(a)))), 0.0)


def _cholesky_or_none(a: np.ndarray) -> np.ndarray | None:
    try:
        return np.linalg.cholesky(a)
    except np.linalg.LinAlgError:
        return None


def is_positive_definite(a: np.ndarray, tol: float | None = None) -> bool:
    """True iff the Hermitian matrix ``a`` has all Cholesky pivots above ``tol``.

    ``tol`` defaults to ``1e-12 * max(diag(a))``, so near-singular matrices
    whose smallest pivot drowns in rounding noise are reported as not
    positive definite rather than accepted by luck.
    """
    a = _as_square_matrix(a, "a")
    _check_hermitian(a, "a")
    chol = _cholesky_or_none(a)
    if chol is None:
        return False
    if tol is None:
        tol = _default_pivot_tol(a)
    pivots = np.real(np.diag(chol)) ** 2
    return bool(np.all(pivots > tol))


def hermitian_solve(a: np.ndarray, b: np.ndarray, tol: float | None = None) -> np.ndarray:
    """Solve ``a @ y = b`` for Hermitian positive definite ``a``.

    Parameters
    ----------
    a : ndarray
        Hermitian positive definite matrix, shape (n, n).
    b : ndarray
        Right-hand side, shape (n,) or (n, k) for multiple columns.
    tol : float, optional
        Pivot threshold below which ``a`` is rejected as not positive
        definite. Defaults to ``1e-12 * max(diag(a))``.

    Returns
    -------
    ndarray
        Solution with the same shape as ``b``. One step of iterative
        refinement is applied, which keeps the residual near machine level
        even for ill-conditioned augmented covariances.

    Raises
    ------
    NotPositiveDefiniteError
        If the Cholesky factorization fails or a pivot falls below ``tol``.
    """
    a = _as_square_matrix(a, "a")
    _check_hermitian(a, "a")
    b = np.asarray(b, dtype=complex)
    if b.shape[0] != a.shape[0] or b.ndim not in (1, 2):
        raise DimensionMismatchError(
            f"b has shape {b.shape}, expected ({a.shape[0]},) or ({a.shape[0]}, k)"
        )
    chol = _cholesky_or_none(a)
    if chol is None:
        raise NotPositiveDefiniteError("matrix is not positive definite")
    if tol is None:
        tol = _default_pivot_tol(a)
    if not np.all(np.real(np.diag(chol)) ** 2 > tol):
        raise NotPositiveDefiniteError("matrix has a pivot below tolerance")
    y = sla.cho_solve((chol, True), b)
    y = y + sla.cho_solve((chol, True), b - a @ y)
    return y


def hermitian_eig(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending, real) and matching eigenvectors of Hermitian ``a``."""
    a = _as_square_matrix(a, "a")
    _check_hermitian(a, "a")
    vals, vecs = np.linalg.eigh(a)
    return vals[::-1], vecs[:, ::-1]


class TakagiResult:
    """Takagi factorization ``c = q @ diag(p) @ q.T``.

    Attributes
    ----------
    q : ndarray
        Unitary matrix whose columns are ordered by descending ``p``.
    p : ndarray
        Real nonnegative factor values (the singular values of ``c``),
        sorted descending.
    """

    __slots__ = ("q", "p")

    def __init__(self, q: np.ndarray, p: np.ndarray):
        self.q = q
        self.p = p


def _group_close(values: np.ndarray, rtol: float) -> list[list[int]]:
    """Partition indices of a descending vector into runs of near-equal values."""
    scale = max(float(values[0]), 1e-300) if len(values) else 1.0
    groups: list[list[int]] = []
    start = 0
    for i in range(1, len(values) + 1):
        if i == len(values) or abs(values[start] - values[i]) > rtol * scale:
            groups.append(list(range(start, i)))
            start = i
    return groups


def takagi(c: np.ndarray, companion: np.ndarray | None = None) -> TakagiResult:
    """Factor a complex symmetric matrix as ``c = q @ diag(p) @ q.T``.

    Computed from the singular value decomposition ``c = u s v^H``: symmetry
    makes ``t = u^H c conj(u)`` block diagonal with symmetric unitary blocks
    (scaled by the singular values), and the principal square root of each
    block is the phase correction turning ``u`` into a Takagi basis. Distinct
    singular values reduce the block to a single square-rooted phase; groups
    of equal singular values are corrected together; zero singular values
    keep the identity correction.

    Parameters
    ----------
    c : ndarray
        Complex symmetric matrix.
    companion : ndarray, optional
        Hermitian matrix consulted only when ``c`` is exactly zero: its
        eigenvectors (descending eigenvalue order) are returned as ``q``,
        which lets callers diagonalizing a covariance pair keep a meaningful
        basis when the complementary part vanishes. Without a companion the
        zero matrix yields the identity basis.

    Raises
    ------
    NotSymmetricError
        If ``c`` is not complex symmetric.
    """
    c = _as_square_matrix(c, "c")
    _check_symmetric(c, "c")
    n = c.shape[0]

    c_norm = float(np.linalg.norm(c))
    if c_norm == 0.0:
        if companion is not None:
            _, q = hermitian_eig(companion)
        else:
            q = np.eye(n, dtype=complex)
        return TakagiResult(q, np.zeros(n))

    u, s, _ = np.linalg.svd(c)
    t = u.conj().T @ c @ u.conj()
    d = np.zeros((n, n), dtype=complex)
    for group in _group_close(s, 1e-8):
        sg = s[group[0]]
        if sg <= 1e-13 * s[0]:
            d[np.ix_(group, group)] = np.eye(len(group))
        elif len(group) == 1:
            d[group[0], group[0]] = np.sqrt(t[group[0], group[0]] / sg)
        else:
            d[np.ix_(group, group)] = sla.sqrtm(t[np.ix_(group, group)] / sg)
    q = u @ d

    # Guard against a mis-grouped degenerate cluster; reconstruction failure
    # here means the result would silently violate the factorization contract.
    residual = np.linalg.norm(q @ np.diag(s) @ q.T - c)
    if residual > 1e-8 * c_norm:
        raise NumericalConsistencyError(
            f"Takagi reconstruction residual {residual:.3e} exceeds 1e-8 * ||c||"
        )
    return TakagiResult(q, s)
