"""Enveloping bands of projections.

A finite family of commuting projections generates a finite Boolean algebra
(meet ``PQ``, complement ``I - P``). Its atoms are the joint 0/1 eigenspaces
of the family; every member is a sum of a subset of atoms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .closure import (
    ClosedSemigroup,
    ClosureBudget,
    close,
    first_non_partial_isometry,
    projections_of,
)
from .errors import (
    BudgetExhausted,
    ClaimViolationError,
    CommutativityError,
    DimensionError,
    NotPartialIsometryError,
    PreconditionError,
    TheoremViolation,
)
from .linalg import (
    DEFAULT_TOL,
    CMatrix,
    _square,
    clean_projection,
    dagger,
    fro,
    hermitian_part,
    is_partial_isometry,
    is_projection,
)

MAX_ENUMERATED_ATOMS = 20
# Boolean members are injected wholesale into enrichment only below this
# many atoms; above it atoms and co-atoms generate the rest by products.
INJECT_ALL_MEMBERS_ATOMS = 4


@dataclass(frozen=True)
class BooleanElement:
    atom_mask: frozenset[int]

    def __contains__(self, i: int) -> bool:
        return i in self.atom_mask


@dataclass(frozen=True, eq=False)
class ProjectionBand:
    """Atoms of a finite commuting projection family.

    ``bases[i]`` is an orthonormal basis of ``ran atoms[i]``; atoms are
    pairwise orthogonal and sum to the identity.
    """

    dim: int
    atoms: tuple[CMatrix, ...]
    atom_ranks: tuple[int, ...]
    bases: tuple[CMatrix, ...]

    def __len__(self) -> int:
        return len(self.atoms)

    def member(self, element: BooleanElement | Sequence[int]) -> CMatrix:
        mask = element.atom_mask if isinstance(element, BooleanElement) else element
        out = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for i in mask:
            out += self.atoms[i]
        return out

    def decompose(self, P: CMatrix, tol: float = DEFAULT_TOL) -> BooleanElement | None:
        """Atom mask of ``P`` if ``P`` is a member of the algebra, else None."""
        mask = []
        for i, (A, r) in enumerate(zip(self.atoms, self.atom_ranks)):
            overlap = float(np.trace(P @ A).real) / r
            if overlap > 0.5:
                mask.append(i)
        elem = BooleanElement(frozenset(mask))
        if fro(self.member(elem) - P) > max(len(self.atoms), 1) * tol:
            return None
        return elem

    def same_as(self, other: "ProjectionBand", tol: float = DEFAULT_TOL) -> bool:
        if len(self) != len(other):
            return False
        return all(any(fro(A - B) <= tol for B in other.atoms) for A in self.atoms)


def _refine(parts: list[CMatrix], P: CMatrix) -> list[CMatrix]:
    out = []
    for B in parts:
        w, V = np.linalg.eigh(hermitian_part(dagger(B) @ P @ B))
        inside, outside = B @ V[:, w > 0.5], B @ V[:, w <= 0.5]
        for part in (inside, outside):
            if part.shape[1]:
                out.append(part)
    return out


def enveloping_band(projections: Sequence[CMatrix], dim: int,
                    tol: float = DEFAULT_TOL) -> ProjectionBand:
    """Atoms of the Boolean algebra generated by commuting ``projections``.

    Each projection splits every current subspace into its parts inside and
    outside its range. Atoms are ordered by the first coordinate they touch,
    refinement order breaking ties.
    """
    projs = []
    for P in projections:
        P = _square(P)
        if P.shape != (dim, dim):
            raise DimensionError(f"projection of shape {P.shape} in dimension {dim}")
        projs.append(P)
    for i in range(len(projs)):
        for j in range(i + 1, len(projs)):
            c = fro(projs[i] @ projs[j] - projs[j] @ projs[i])
            if c > 10 * tol:
                raise CommutativityError(i, j, c)

    parts = [np.eye(dim, dtype=np.complex128)]
    for P in projs:
        parts = _refine(parts, clean_projection(P))

    thresh = max(np.sqrt(tol), 1e-12)

    def lead(B):
        weights = np.sum(np.abs(B) ** 2, axis=1)
        return int(np.argmax(weights > thresh))

    parts = sorted(parts, key=lead)
    atoms = tuple(clean_projection(B @ dagger(B)) for B in parts)
    return ProjectionBand(dim, atoms, tuple(B.shape[1] for B in parts), tuple(parts))


def boolean_members(band: ProjectionBand) -> Iterator[tuple[BooleanElement, CMatrix]]:
    """All ``2**len(band)`` members, in bitmask order (bit ``i`` = atom ``i``)."""
    m = len(band)
    if m > MAX_ENUMERATED_ATOMS:
        raise ValueError(
            f"refusing to enumerate 2**{m} members; build masks lazily with band.member"
        )
    for bits in range(2 ** m):
        elem = BooleanElement(frozenset(i for i in range(m) if bits >> i & 1))
        yield elem, band.member(elem)


def conjugate_projection(A, E, tol: float = DEFAULT_TOL) -> CMatrix:
    """``F = A*EA``, checked to be a projection with ``EA = AF``."""
    A, E = _square(A), _square(E)
    if not is_partial_isometry(A, tol):
        raise NotPartialIsometryError("A is not a partial isometry")
    if not is_projection(E, tol):
        raise PreconditionError("E is not a projection")
    P = A @ dagger(A)
    if fro(P @ E - E @ P) > 10 * tol:
        raise PreconditionError("E does not commute with the final projection of A")
    F = hermitian_part(dagger(A) @ E @ A)
    if not is_projection(F, tol):
        raise ClaimViolationError("A*EA is not a projection", witness=F)
    gap = fro(E @ A - A @ F)
    if gap > tol:
        raise ClaimViolationError(f"||EA - AF|| = {gap:.3e}", witness=F)
    return clean_projection(F)


def enrich(S0: ClosedSemigroup, tol: float = DEFAULT_TOL,
           budget: ClosureBudget | None = None) -> tuple[ClosedSemigroup, ProjectionBand]:
    """Adjoin the enveloping band of ``S0`` and re-close.

    Checks that the result consists of partial isometries, that its
    projections are exactly the Boolean members of the band of ``S0``, and
    that the band does not grow. If the enlarged closure runs out of budget
    the semigroup is returned with ``status == "budget_exhausted"`` and no
    conclusion is checked.
    """
    if not S0.closed:
        raise BudgetExhausted("input semigroup is not closed", partial=S0)
    bad = first_non_partial_isometry(S0, tol)
    if bad is not None:
        raise PreconditionError(f"element {bad} of S0 is not a partial isometry")
    if not S0.is_selfadjoint():
        raise PreconditionError("S0 is not self-adjoint")

    n = S0.dim
    band = enveloping_band(projections_of(S0, tol), n, tol)
    I = np.eye(n, dtype=np.complex128)
    injected = list(S0.generators) + list(band.atoms)
    injected += [I - a for a in band.atoms] + [np.zeros((n, n), complex), I]
    if len(band) <= INJECT_ALL_MEMBERS_ATOMS:
        injected += [M for _, M in boolean_members(band)]
    S1 = close(injected, tol, budget)
    if not S1.closed:
        return S1, band

    bad = first_non_partial_isometry(S1, tol)
    if bad is not None:
        raise TheoremViolation("enriched semigroup has a non-partial-isometry",
                               witness=S1.elements[bad])
    projs1 = projections_of(S1, tol)
    for P in projs1:
        if band.decompose(P, tol) is None:
            raise TheoremViolation("projection outside the enveloping band", witness=P)
    if len(band) <= MAX_ENUMERATED_ATOMS:
        for _, M in boolean_members(band):
            if not S1.contains(M):
                raise TheoremViolation("Boolean member missing from S1", witness=M)
    band1 = enveloping_band(projs1, n, tol)
    if not band1.same_as(band, max(len(band), 1) * tol):
        raise TheoremViolation("enveloping band changed under enrichment")
    return S1, band
