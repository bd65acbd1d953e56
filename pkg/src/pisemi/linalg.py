"""Dense complex matrix helpers and the basic operator predicates.

Every approximate equality in the package is measured in the Frobenius norm
against a scalar threshold ``tol`` (default :data:`DEFAULT_TOL`).
"""

from __future__ import annotations

import logging
import math

import numpy as np

from .errors import DimensionError, NotPartialIsometryError

log = logging.getLogger(__name__)

CMatrix = np.ndarray

DEFAULT_TOL = 1e-9


def as_cmatrix(A) -> CMatrix:
    """Coerce ``A`` to a finite 2-D complex128 array."""
    M = np.asarray(A, dtype=np.complex128)
    if M.ndim != 2 or M.shape[0] < 1 or M.shape[1] < 1:
        raise DimensionError(f"expected a non-empty 2-D matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    return M


def check_tol(tol: float) -> float:
    tol = float(tol)
    if not 0.0 <= tol < 1.0:
        raise ValueError(f"tolerance must lie in [0, 1), got {tol}")
    return tol


def _square(A) -> CMatrix:
    M = as_cmatrix(A)
    if M.shape[0] != M.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {M.shape}")
    return M


def dagger(A: CMatrix) -> CMatrix:
    return A.conj().T


def fro(A: CMatrix) -> float:
    return float(np.linalg.norm(A))


def hermitian_part(A: CMatrix) -> CMatrix:
    return (A + dagger(A)) / 2


def matrices_equal(A, B, tol: float = DEFAULT_TOL) -> bool:
    A, B = as_cmatrix(A), as_cmatrix(B)
    if A.shape != B.shape:
        raise DimensionError(f"shape mismatch {A.shape} vs {B.shape}")
    return fro(A - B) <= tol


def is_projection(A, tol: float = DEFAULT_TOL) -> bool:
    A = _square(A)
    return fro(A - dagger(A)) <= tol and fro(A @ A - A) <= tol


def is_unitary(U, tol: float = DEFAULT_TOL) -> bool:
    U = _square(U)
    return fro(dagger(U) @ U - np.eye(U.shape[0])) <= tol


def is_partial_isometry(A, tol: float = DEFAULT_TOL) -> bool:
    """True iff ``A*A`` is a projection.

    The identity ``A A* A = A`` is evaluated as a cross-check. The two tests
    weigh small singular values differently (``s**2`` against ``s``), so an
    input sitting inside the tolerance band can pass one and fail the other;
    such inputs are reported as not being partial isometries.
    """
    A = _square(A)
    by_projection = is_projection(dagger(A) @ A, tol)
    by_identity = fro(A @ dagger(A) @ A - A) <= tol
    if by_projection != by_identity:
        log.debug("partial isometry tests disagree at tol=%g", tol)
        return False
    return by_projection


def clean_projection(P: CMatrix) -> CMatrix:
    """Snap a near-projection to the spectral projection onto eigenvalues > 1/2."""
    V = projection_basis(P)
    return V @ dagger(V)


def projection_basis(P: CMatrix) -> CMatrix:
    """Orthonormal basis (as columns) of the range of a near-projection."""
    w, V = np.linalg.eigh(hermitian_part(P))
    return V[:, w > 0.5]


def initial_and_final_projections(A, tol: float = DEFAULT_TOL) -> tuple[CMatrix, CMatrix]:
    A = _square(A)
    if not is_partial_isometry(A, tol):
        raise NotPartialIsometryError("input is not a partial isometry")
    return clean_projection(dagger(A) @ A), clean_projection(A @ dagger(A))


def rank_cutoff(s: np.ndarray, shape: tuple[int, int], tol: float) -> float:
    # relative cutoff with an absolute floor, so rounding noise on a zero
    # product does not count as rank
    smax = float(s[0]) if s.size else 0.0
    return max(tol * max(shape) * smax, tol)


def numerical_rank(A, tol: float = DEFAULT_TOL) -> int:
    A = as_cmatrix(A)
    s = np.linalg.svd(A, compute_uv=False)
    return int(np.sum(s > rank_cutoff(s, A.shape, tol)))


def range_basis(A, tol: float = DEFAULT_TOL) -> CMatrix:
    """Orthonormal basis of the column space, columns in descending singular value."""
    A = as_cmatrix(A)
    U, s, _ = np.linalg.svd(A, full_matrices=False)
    r = int(np.sum(s > rank_cutoff(s, A.shape, tol)))
    return U[:, :r]


def range_projection(A, tol: float = DEFAULT_TOL) -> CMatrix:
    A = _square(A)
    Q = range_basis(A, tol)
    return Q @ dagger(Q)


def kernel_projection(A, tol: float = DEFAULT_TOL) -> CMatrix:
    A = _square(A)
    return np.eye(A.shape[0]) - range_projection(dagger(A), tol)


def meet(P: CMatrix, Q: CMatrix, tol: float = DEFAULT_TOL) -> CMatrix:
    """Projection onto ``ran P ∩ ran Q``.

    Uses the eigenvalue-one eigenspace of ``PQP``. A vector at principal angle
    ``θ`` from ``ran Q`` has Rayleigh quotient ``cos²θ``, so the acceptance
    band is ``1 - sqrt(tol)``.
    """
    M = hermitian_part(P @ Q @ P)
    w, V = np.linalg.eigh(M)
    keep = V[:, w >= 1.0 - math.sqrt(max(tol, 1e-16))]
    return keep @ dagger(keep)


def polar_unitary(B: CMatrix) -> CMatrix:
    """Unitary factor of the polar decomposition of a square matrix."""
    U, _, Vh = np.linalg.svd(B)
    return U @ Vh


def basic_matrix(n: int, i: int, j: int) -> CMatrix:
    """``E_ij`` in dimension ``n`` (0-based indices)."""
    E = np.zeros((n, n), dtype=np.complex128)
    E[i, j] = 1.0
    return E


def block_diag(*blocks) -> CMatrix:
    blocks = [np.asarray(b, dtype=np.complex128) for b in blocks]
    n = sum(b.shape[0] for b in blocks)
    m = sum(b.shape[1] for b in blocks)
    out = np.zeros((n, m), dtype=np.complex128)
    r = c = 0
    for b in blocks:
        out[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def truncated_shift(s: int) -> CMatrix:
    """Nilpotent Jordan block with ones on the first subdiagonal."""
    return np.eye(s, k=-1, dtype=np.complex128)
