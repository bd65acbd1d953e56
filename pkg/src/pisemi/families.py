"""Canonical generator families and random constructions used by tests and the CLI."""

from __future__ import annotations

import numpy as np

from .linalg import CMatrix, basic_matrix, block_diag, dagger, truncated_shift


def random_unitary(d: int, rng: np.random.Generator) -> CMatrix:
    """Haar-distributed unitary (QR of a complex Ginibre matrix, phase-corrected)."""
    Z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    ph = np.diag(R) / np.abs(np.diag(R))
    return Q * ph


def random_isometry(n: int, r: int, rng: np.random.Generator) -> CMatrix:
    return random_unitary(n, rng)[:, :r]


def conjugate(mats, W: CMatrix) -> list[CMatrix]:
    return [W @ A @ dagger(W) for A in mats]


def kron_block(k: int, i: int, j: int, G: CMatrix) -> CMatrix:
    """``E_ij^k ⊗ G`` (0-based block indices)."""
    return np.kron(basic_matrix(k, i, j), G)


# -- small finite groups --------------------------------------------------

PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)


def root_of_unity(m: int, a: int = 1) -> complex:
    return complex(np.exp(2j * np.pi * a / m))


def shift_matrix(n: int) -> CMatrix:
    """Cyclic shift ``e_j -> e_{j+1 mod n}``."""
    return np.roll(np.eye(n, dtype=np.complex128), 1, axis=0)


def clock_matrix(n: int) -> CMatrix:
    return np.diag([root_of_unity(n, j) for j in range(n)])


def weyl_heisenberg(n: int) -> list[CMatrix]:
    """Generators of the Weyl–Heisenberg group in dimension ``n``.

    Shift and clock; for even ``n`` the displacement ``e^{iπ/n} XZ`` is added,
    which at ``n = 2`` gives the 16-element Pauli group.
    """
    X, Z = shift_matrix(n), clock_matrix(n)
    gens = [X, Z]
    if n % 2 == 0:
        gens.append(np.exp(1j * np.pi / n) * X @ Z)
    return gens


def pauli_generators() -> list[CMatrix]:
    return [PAULI_X, PAULI_Y, PAULI_Z]


def cyclic_group(m: int, dim: int = 1, exponents=None) -> list[CMatrix]:
    """Generator of a cyclic group of order dividing ``m`` acting diagonally."""
    if exponents is None:
        exponents = [1] + [0] * (dim - 1)
    return [np.diag([root_of_unity(m, a) for a in exponents])]


def dihedral4() -> list[CMatrix]:
    """Order 8, irreducible on C^2."""
    return [PAULI_X, PAULI_Z]


def quaternion8() -> list[CMatrix]:
    """Order 8, irreducible on C^2."""
    return [1j * PAULI_X, 1j * PAULI_Z]


def symmetric3() -> list[CMatrix]:
    """Order 6, the two-dimensional irreducible representation."""
    c, s = np.cos(2 * np.pi / 3), np.sin(2 * np.pi / 3)
    return [np.array([[c, -s], [s, c]], dtype=np.complex128),
            np.array([[1, 0], [0, -1]], dtype=np.complex128)]


# -- semigroup generator sets -----------------------------------------------

def basic_matrix_generators(r: int) -> list[CMatrix]:
    """Nearest-neighbour basic matrices; they generate all ``E_ij`` and 0."""
    if r == 1:
        return [np.ones((1, 1), dtype=np.complex128)]
    gens = []
    for i in range(r - 1):
        gens += [basic_matrix(r, i, i + 1), basic_matrix(r, i + 1, i)]
    return gens


def zero_unitary_generators(k: int, group_gens) -> list[CMatrix]:
    """Generators of ``S0^k(U) ∪ {0}`` for the group generated by ``group_gens``.

    Neighbouring block transpositions with identity blocks, plus ``E_11 ⊗ g``
    for each group generator.
    """
    group_gens = [np.asarray(g, dtype=np.complex128) for g in group_gens]
    s = group_gens[0].shape[0] if group_gens else 1
    I = np.eye(s, dtype=np.complex128)
    gens = []
    for i in range(k - 1):
        gens += [kron_block(k, i, i + 1, I), kron_block(k, i + 1, i, I)]
    gens += [kron_block(k, 0, 0, g) for g in group_gens]
    if not gens:
        gens = [kron_block(k, 0, 0, I)]
    return gens


def tensor_example(r: int, group_gens=None, s: int = 1) -> list[CMatrix]:
    """Basic ``r × r`` matrices tensored with a unitary group on ``C^s``."""
    if group_gens is None:
        group_gens = [np.eye(s, dtype=np.complex128)]
    return zero_unitary_generators(r, group_gens)


def random_ppi(unitary_dim: int, shift_sizes, rng: np.random.Generator,
               order: int = 6) -> tuple[CMatrix, CMatrix]:
    """Random finite-order unitary ⊕ truncated shifts, conjugated by a Haar unitary.

    Returns ``(T, W)`` with ``W`` the conjugating unitary. The unitary part
    has eigenvalues among the ``order``-th roots of unity, so ``S(T, T*)`` is
    finite.
    """
    blocks = []
    if unitary_dim:
        exps = rng.integers(0, order, size=unitary_dim)
        D = np.diag([root_of_unity(order, int(a)) for a in exps])
        V = random_unitary(unitary_dim, rng)
        blocks.append(V @ D @ dagger(V))
    blocks += [truncated_shift(s) for s in shift_sizes]
    T = block_diag(*blocks)
    W = random_unitary(T.shape[0], rng)
    return W @ T @ dagger(W), W


def random_partial_isometry(n: int, r: int, rng: np.random.Generator) -> CMatrix:
    """``V W*`` for independent random isometries ``V, W: C^r -> C^n``."""
    return random_isometry(n, r, rng) @ dagger(random_isometry(n, r, rng))
