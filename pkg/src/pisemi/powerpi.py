"""Power partial isometries and their finite-dimensional Halmos–Wallen form.

In finite dimension a power partial isometry is unitarily equivalent to
``U ⊕ J_{s1} ⊕ J_{s2} ⊕ ...`` with ``U`` unitary and ``J_s`` the ``s × s``
truncated shift (ones on the first subdiagonal).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .closure import ClosureBudget, Enumerator
from .errors import BudgetExhausted, NotPowerPartialIsometryError, TheoremViolation
from .linalg import (
    DEFAULT_TOL,
    CMatrix,
    _square,
    block_diag,
    clean_projection,
    dagger,
    fro,
    is_partial_isometry,
    is_unitary,
    kernel_projection,
    meet,
    projection_basis,
    range_basis,
    range_projection,
    truncated_shift,
)


@dataclass(frozen=True, eq=False)
class HWDecomposition:
    unitary_dim: int
    shift_sizes: tuple[int, ...]
    basis: CMatrix
    unitary_block: CMatrix
    reconstruction_error: float

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def canonical_form(self) -> CMatrix:
        """``unitary_block ⊕ J_{s1} ⊕ ...`` in the decomposition basis."""
        return block_diag(self.unitary_block,
                          *[truncated_shift(s) for s in self.shift_sizes])

    def reconstruct(self) -> CMatrix:
        return self.basis @ self.canonical_form() @ dagger(self.basis)


def _powers(T: CMatrix, upto: int) -> list[CMatrix]:
    out = [np.eye(T.shape[0], dtype=np.complex128)]
    for _ in range(upto):
        out.append(out[-1] @ T)
    return out


def is_power_partial_isometry(T, tol: float = DEFAULT_TOL) -> bool:
    """True iff ``T^k`` is a partial isometry for ``k = 1..n``.

    Nilpotent summands die by power ``n`` and the unitary summand adds nothing
    new past ``k = 1``, so ``n`` powers decide the question.
    """
    T = _square(T)
    P = T
    for _ in range(T.shape[0]):
        if not is_partial_isometry(P, tol):
            return False
        P = P @ T
    return True


def unitary_part_projection(T: CMatrix, tol: float = DEFAULT_TOL) -> CMatrix:
    """Limit of ``ran T^k ∧ ran T*^k``; the subspace on which ``T`` is unitary."""
    n = T.shape[0]
    P = np.eye(n, dtype=np.complex128)
    Tk = P
    for _ in range(n):
        Tk = Tk @ T
        P = meet(P, range_projection(Tk, tol), tol)
        P = meet(P, range_projection(dagger(Tk), tol), tol)
    return P


def halmos_wallen(T, tol: float = DEFAULT_TOL) -> HWDecomposition:
    """Split a power partial isometry into its unitary part and truncated shifts.

    The nilpotent part is decomposed into orthonormal Jordan chains, longest
    first. A chain of length ``s`` starts at a vector of
    ``init(T^{s-1}) ∧ ker(T^s)`` orthogonal to all earlier chains; seeds of
    equal length come out in descending singular value.
    """
    T = _square(T)
    n = T.shape[0]
    if not is_power_partial_isometry(T, tol):
        raise NotPowerPartialIsometryError("input is not a power partial isometry")
    I = np.eye(n, dtype=np.complex128)

    Pu = unitary_part_projection(T, tol)
    Vu = projection_basis(Pu)
    N = I - clean_projection(Pu)
    pw = _powers(T, n)

    used = np.zeros((n, 0), dtype=np.complex128)
    chains: list[CMatrix] = []
    sizes: list[int] = []
    for s in range(n, 0, -1):
        init = clean_projection(dagger(pw[s - 1]) @ pw[s - 1])
        M = meet(meet(init, kernel_projection(pw[s], tol), tol), N, tol)
        B = projection_basis(M)
        if B.shape[1] == 0:
            continue
        R = B - used @ (dagger(used) @ B)
        seeds = range_basis(R, tol)
        for v in seeds.T:
            chain = [v]
            for _ in range(s - 1):
                chain.append(T @ chain[-1])
            C = np.stack(chain, axis=1)
            chains.append(C)
            sizes.append(s)
            used = np.hstack([used, C])

    basis = np.hstack([Vu] + chains) if chains else Vu
    if basis.shape[1] != n or not is_unitary(basis, n * tol):
        raise TheoremViolation(
            f"decomposition basis has {basis.shape[1]} orthonormal columns, expected {n}",
            witness=T,
        )
    k = Vu.shape[1]
    Ub = dagger(Vu) @ T @ Vu
    if k and not is_unitary(Ub, n * tol):
        raise TheoremViolation("restriction to the unitary part is not unitary", witness=T)
    hw = HWDecomposition(k, tuple(sizes), basis, Ub, 0.0)
    err = fro(hw.reconstruct() - T)
    if err > n * tol:
        raise TheoremViolation(
            f"reconstruction error {err:.3e} exceeds {n * tol:.3e}", witness=T
        )
    return HWDecomposition(k, tuple(sizes), basis, Ub, err)


def ppi_semigroup_check(T, tol: float = DEFAULT_TOL, max_words: int = 5000) -> bool:
    """Does the self-adjoint semigroup generated by ``T`` consist of partial isometries?

    A word that is not a partial isometry settles the answer at once. If every
    enumerated word passes but the closure does not finish within
    ``max_words`` elements, :class:`BudgetExhausted` is raised with the partial
    semigroup attached.
    """
    T = _square(T)
    en = Enumerator([T, dagger(T)], tol, ClosureBudget(max_elements=max_words))
    verdict = True
    for _, A, _ in en.run():
        if not is_partial_isometry(A, tol):
            verdict = False
            break
    if verdict and en.status != "closed":
        raise BudgetExhausted(
            f"closure of S(T, T*) not complete after {len(en.index)} elements",
            partial=en.result(),
        )
    if verdict != is_power_partial_isometry(T, tol):
        raise TheoremViolation(
            "semigroup test and power test disagree on a completed closure", witness=T
        )
    return verdict
