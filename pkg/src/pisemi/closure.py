"""Breadth-first closure of finite generator sets into matrix semigroups."""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .errors import DimensionError
from .linalg import (
    DEFAULT_TOL,
    CMatrix,
    as_cmatrix,
    check_tol,
    clean_projection,
    dagger,
    fro,
    is_partial_isometry,
    is_projection,
)

CLOSED = "closed"
BUDGET_EXHAUSTED = "budget_exhausted"

_KEY_SEED = 20_110_615


@dataclass(frozen=True)
class ClosureBudget:
    max_elements: int = 5000
    max_word_length: int = 100

    def __post_init__(self):
        if self.max_elements < 1 or self.max_word_length < 1:
            raise ValueError("closure budget entries must be >= 1")


class MatrixIndex:
    """Exact tolerance lookup over a growing set of matrices.

    Each matrix is keyed by ``Re<W, A>`` for a fixed unit-norm ``W``, so
    ``|key(A) - key(B)| <= ||A - B||``: every representative within ``tol`` of
    a query lies in the key window ``[key - tol, key + tol]``. No false
    negatives, no float hashing.
    """

    def __init__(self, dim: int, tol: float):
        rng = np.random.default_rng(_KEY_SEED + dim)
        W = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        self._w = (W / np.linalg.norm(W)).ravel()
        self.tol = tol
        self._keys: list[float] = []
        self._ids: list[int] = []
        self.matrices: list[CMatrix] = []

    def key(self, A: CMatrix) -> float:
        return float((self._w @ A.ravel()).real)

    def find(self, A: CMatrix, key: float | None = None) -> int | None:
        """Index of the nearest stored matrix within ``tol``, or None."""
        k = self.key(A) if key is None else key
        lo = bisect.bisect_left(self._keys, k - self.tol)
        hi = bisect.bisect_right(self._keys, k + self.tol)
        best, best_d = None, self.tol
        for pos in range(lo, hi):
            idx = self._ids[pos]
            d = fro(self.matrices[idx] - A)
            if d <= best_d and (best is None or d < best_d or idx < best):
                best, best_d = idx, d
        return best

    def add(self, A: CMatrix, key: float | None = None) -> int:
        k = self.key(A) if key is None else key
        idx = len(self.matrices)
        pos = bisect.bisect_right(self._keys, k)
        self._keys.insert(pos, k)
        self._ids.insert(pos, idx)
        self.matrices.append(A)
        return idx

    def __len__(self) -> int:
        return len(self.matrices)


@dataclass(frozen=True, eq=False)
class ClosedSemigroup:
    """Distinct representatives of a finitely generated matrix semigroup.

    ``elements[i]`` was first reached by ``words[i]``, a shortest word in the
    generator indices. Order is breadth-first by word length, ties broken
    lexicographically.
    """

    dim: int
    elements: tuple[CMatrix, ...]
    words: tuple[tuple[int, ...], ...]
    generators: tuple[CMatrix, ...]
    status: str
    work_tol: float
    _index: MatrixIndex | None = field(default=None, repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @property
    def closed(self) -> bool:
        return self.status == CLOSED

    @property
    def max_word_length(self) -> int:
        return max((len(w) for w in self.words), default=0)

    def index(self) -> MatrixIndex:
        if self._index is None:
            idx = MatrixIndex(self.dim, self.work_tol)
            for A in self.elements:
                idx.add(A)
            object.__setattr__(self, "_index", idx)
        return self._index

    def index_of(self, A, tol: float | None = None) -> int | None:
        """Position of the element matching ``A`` (nearest within tolerance)."""
        A = as_cmatrix(A)
        idx = self.index()
        if tol is None or tol == idx.tol:
            return idx.find(A)
        best = None
        for i, B in enumerate(self.elements):
            d = fro(A - B)
            if d <= tol and (best is None or d < best[1]):
                best = (i, d)
        return None if best is None else best[0]

    def contains(self, A, tol: float | None = None) -> bool:
        return self.index_of(A, tol) is not None

    def is_selfadjoint(self, tol: float | None = None) -> bool:
        return all(self.contains(dagger(A), tol) for A in self.elements)

    def evaluate(self, word: Sequence[int]) -> CMatrix:
        out = self.generators[word[0]]
        for g in word[1:]:
            out = out @ self.generators[g]
        return out

    @classmethod
    def from_elements(cls, elements, tol: float = DEFAULT_TOL,
                      status: str = CLOSED) -> "ClosedSemigroup":
        """Wrap an explicit element list (deduplicated, each its own generator)."""
        mats = [as_cmatrix(A) for A in elements]
        if not mats:
            raise ValueError("need at least one element")
        dim = _common_dim(mats)
        idx = MatrixIndex(dim, tol)
        for A in mats:
            if idx.find(A) is None:
                idx.add(A)
        kept = tuple(idx.matrices)
        return cls(dim, kept, tuple((i,) for i in range(len(kept))), kept,
                   status, tol, idx)


def _common_dim(mats: Sequence[CMatrix]) -> int:
    n = mats[0].shape[0]
    for A in mats:
        if A.shape != (n, n):
            raise DimensionError(
                f"generators must be square of equal size, got {A.shape} and {(n, n)}"
            )
    return n


class Enumerator:
    """Stateful breadth-first word enumeration.

    :meth:`run` yields each admitted element as ``(index, matrix, word)``;
    consumers may stop early and still call :meth:`result` for the partial
    semigroup.
    """

    def __init__(self, generators, tol: float = DEFAULT_TOL,
                 budget: ClosureBudget | None = None):
        gens = [as_cmatrix(G) for G in generators]
        if not gens:
            raise ValueError("need at least one generator")
        self.dim = _common_dim(gens)
        self.tol = check_tol(tol)
        self.budget = budget or ClosureBudget()
        self.work_tol = self.tol * (1 + self.budget.max_word_length)
        self.generators = tuple(gens)
        self._gstack = np.stack(gens)
        self.index = MatrixIndex(self.dim, self.work_tol)
        self.words: list[tuple[int, ...]] = []
        self.status: str | None = None

    def _admit(self, A: CMatrix, word: tuple[int, ...]):
        if len(self.index) >= self.budget.max_elements:
            self.status = BUDGET_EXHAUSTED
            return None
        i = self.index.add(A)
        self.words.append(word)
        return i

    def run(self) -> Iterator[tuple[int, CMatrix, tuple[int, ...]]]:
        frontier: list[int] = []
        for g, G in enumerate(self.generators):
            if self.index.find(G) is None:
                i = self._admit(G, (g,))
                if i is None:
                    return
                frontier.append(i)
                yield i, G, (g,)
        length = 1
        while frontier:
            F = np.stack([self.index.matrices[i] for i in frontier])
            prods = np.einsum("fij,gjk->fgik", F, self._gstack)
            nxt: list[int] = []
            for a, fi in enumerate(frontier):
                for g in range(len(self.generators)):
                    P = prods[a, g]
                    if self.index.find(P) is not None:
                        continue
                    if length + 1 > self.budget.max_word_length:
                        self.status = BUDGET_EXHAUSTED
                        return
                    word = self.words[fi] + (g,)
                    i = self._admit(P, word)
                    if i is None:
                        return
                    nxt.append(i)
                    yield i, P, word
            frontier = nxt
            length += 1
        self.status = CLOSED

    def result(self) -> ClosedSemigroup:
        status = self.status or BUDGET_EXHAUSTED
        return ClosedSemigroup(
            dim=self.dim,
            elements=tuple(self.index.matrices),
            words=tuple(self.words),
            generators=self.generators,
            status=status,
            work_tol=self.work_tol,
            _index=self.index,
        )


def close(generators, tol: float = DEFAULT_TOL,
          budget: ClosureBudget | None = None) -> ClosedSemigroup:
    """Close ``generators`` under multiplication.

    Budget exhaustion is not an error: the result carries
    ``status == "budget_exhausted"`` and whatever was enumerated.
    """
    en = Enumerator(generators, tol, budget)
    for _ in en.run():
        pass
    return en.result()


def close_selfadjoint(generators, tol: float = DEFAULT_TOL,
                      budget: ClosureBudget | None = None) -> ClosedSemigroup:
    gens = [as_cmatrix(G) for G in generators]
    return close(gens + [dagger(G) for G in gens], tol, budget)


def all_partial_isometries(S: ClosedSemigroup, tol: float = DEFAULT_TOL) -> bool:
    return all(is_partial_isometry(A, tol) for A in S.elements)


def first_non_partial_isometry(S: ClosedSemigroup, tol: float = DEFAULT_TOL) -> int | None:
    for i, A in enumerate(S.elements):
        if not is_partial_isometry(A, tol):
            return i
    return None


def projections_of(S: ClosedSemigroup, tol: float = DEFAULT_TOL) -> list[CMatrix]:
    return [clean_projection(A) for A in S.elements if is_projection(A, tol)]


def idempotents_of(S: ClosedSemigroup, tol: float = DEFAULT_TOL) -> list[CMatrix]:
    return [A for A in S.elements if fro(A @ A - A) <= tol]

