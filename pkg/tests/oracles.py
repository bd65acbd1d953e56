"""Reference computations that share no code with the package.

Each one is deliberately naive: plain loops, textbook definitions, and
``np.allclose``-style comparisons instead of the package's indexed search.
"""

from __future__ import annotations

import itertools

import numpy as np


def dag(A):
    return A.conj().T


def fnorm(A):
    return float(np.sqrt(np.sum(np.abs(A) ** 2)))


def pi_by_identity(A, tol):
    """Partial isometry iff A A* A = A."""
    return fnorm(A @ dag(A) @ A - A) <= tol


def naive_closure(gens, tol=1e-8, max_size=2000):
    """Close under products by repeated all-pairs multiplication."""
    elems = []

    def add(M):
        for E in elems:
            if fnorm(E - M) <= tol:
                return False
        elems.append(M)
        return True

    for G in gens:
        add(np.asarray(G, dtype=complex))
    changed = True
    while changed:
        changed = False
        for A, B in itertools.product(list(elems), list(elems)):
            if add(A @ B):
                changed = True
                if len(elems) > max_size:
                    raise RuntimeError("naive closure too large")
    return elems


def words_upto(gens, length, tol=1e-8):
    """Distinct values of all words of length <= ``length``."""
    out = []
    layer = [np.asarray(G, dtype=complex) for G in gens]
    for _ in range(length):
        for M in layer:
            if all(fnorm(M - E) > tol for E in out):
                out.append(M)
        layer = [M @ G for M in layer for G in gens]
    return out


def same_set(xs, ys, tol=1e-7):
    if len(xs) != len(ys):
        return False
    return all(any(fnorm(x - y) <= tol for y in ys) for x in xs)


def gram_schmidt_projection(A, tol=1e-10):
    """Projection onto the column space via modified Gram–Schmidt."""
    n = A.shape[0]
    Q = []
    for c in A.T.astype(complex):
        v = c.copy()
        for q in Q:
            v = v - (q.conj() @ v) * q
        nv = np.linalg.norm(v)
        if nv > tol:
            Q.append(v / nv)
    if not Q:
        return np.zeros((n, n), dtype=complex)
    Qm = np.stack(Q, axis=1)
    return Qm @ dag(Qm)


def joint_atoms(projs, tol=1e-8):
    """Atoms of commuting projections by brute force over 0/1 sign patterns."""
    n = projs[0].shape[0]
    I = np.eye(n)
    uniq = []
    for P in projs:
        if all(fnorm(P - Q) > tol for Q in uniq):
            uniq.append(P)
    atoms = []
    for signs in itertools.product((0, 1), repeat=len(uniq)):
        M = I.astype(complex)
        for s, P in zip(signs, uniq):
            M = M @ (P if s else I - P)
        if np.trace(M).real > 0.5:
            atoms.append(M)
    return atoms


def identity_power_by_iteration(U, eps, n_max):
    """Least m with ||U^m - I|| <= eps, by repeated multiplication."""
    I = np.eye(U.shape[0])
    M = U.copy()
    for m in range(1, n_max + 1):
        if fnorm(M - I) <= eps:
            return m
        M = M @ U
    return None


def power_ranks(T, tol=1e-8):
    n = T.shape[0]
    out, M = [], np.eye(n, dtype=complex)
    for _ in range(n + 1):
        out.append(int(np.linalg.matrix_rank(M, tol=tol)))
        M = M @ T
    return out


def shift_sizes_from_ranks(T, tol=1e-8):
    """Multiset of nilpotent block sizes from ranks of powers.

    For ``U ⊕ J_{s1} ⊕ ...`` with ``u = dim U``:
    ``rank T^k = u + Σ max(s - k, 0)``, so the number of blocks of size
    exactly ``k`` is ``r_{k-1} - 2 r_k + r_{k+1}``.
    """
    r = power_ranks(T, tol)
    n = T.shape[0]
    u = r[n]
    sizes = []
    r = r + [u]
    for k in range(1, n + 1):
        sizes += [k] * (r[k - 1] - 2 * r[k] + r[k + 1])
    return u, sorted(sizes, reverse=True)


def orbit_dim(mats, v, tol=1e-7):
    O = np.stack([v] + [A @ v for A in mats], axis=1)
    return int(np.linalg.matrix_rank(O, tol=tol * max(1.0, np.abs(O).max())))


def reducible_by_orbits(mats, rng, n_random=20, n_elements=3):
    """Search for a proper invariant subspace among orbits.

    Orbits of random vectors and of eigenvectors of random elements of the
    span; a minimal invariant subspace contains an eigenvector of a generic
    element, so the search succeeds on reducible sets with probability one.
    """
    n = mats[0].shape[0]
    probes = [rng.standard_normal(n) + 1j * rng.standard_normal(n) for _ in range(n_random)]
    for _ in range(n_elements):
        c = rng.standard_normal(len(mats)) + 1j * rng.standard_normal(len(mats))
        X = sum(ci * A for ci, A in zip(c, mats))
        _, V = np.linalg.eig(X)
        probes += list(V.T)
    return any(orbit_dim(mats, v) < n for v in probes)
