"""Irreducibility, zero-unitary block structure and the atomic representation.

An irreducible closed semigroup of partial isometries on ``C^n`` is, after a
unitary change of basis, squeezed between ``S0^k(U)`` (single nonzero block,
any group element) and ``S1^k(U)`` (block-monomial with group blocks), where
``U`` is a group of ``r0 × r0`` unitaries, ``r0`` the minimal nonzero rank and
``k r0 = n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .band import ProjectionBand, enveloping_band
from .closure import (
    ClosedSemigroup,
    ClosureBudget,
    MatrixIndex,
    all_partial_isometries,
    close_selfadjoint,
    first_non_partial_isometry,
    projections_of,
)
from .errors import (
    BudgetExhausted,
    DegenerateSemigroupError,
    NotPartialIsometryError,
    PreconditionError,
    ReducibleError,
    SearchExhausted,
    TheoremViolation,
)
from .linalg import (
    DEFAULT_TOL,
    CMatrix,
    _square,
    clean_projection,
    dagger,
    fro,
    is_partial_isometry,
    is_unitary,
    kernel_projection,
    numerical_rank,
    polar_unitary,
    range_basis,
    range_projection,
)

# ---------------------------------------------------------------- irreducibility


@dataclass(frozen=True, eq=False)
class IrreducibilityReport:
    irreducible: bool
    algebra_dim: int
    witness_subspace: CMatrix | None = None
    advisory: bool = False

    def __bool__(self) -> bool:
        return self.irreducible


def _vec_rows(mats: Sequence[CMatrix]) -> np.ndarray:
    return np.stack([A.ravel() for A in mats])


def algebra_basis(mats: Sequence[CMatrix], tol: float = DEFAULT_TOL) -> list[CMatrix]:
    """Orthonormal basis (Frobenius inner product) of ``span(mats)``."""
    n = mats[0].shape[0]
    M = _vec_rows(mats)
    _, s, Vh = np.linalg.svd(M, full_matrices=False)
    r = int(np.sum(s > max(tol * max(M.shape) * (s[0] if s.size else 0.0), tol)))
    return [Vh[i].reshape(n, n) for i in range(r)]


def _orbit_subspace(basis: Sequence[CMatrix], v: np.ndarray, tol: float) -> CMatrix:
    O = np.stack([A @ v for A in basis], axis=1)
    return range_basis(O, tol)


def _radical_subspace(basis: Sequence[CMatrix], n: int, tol: float) -> CMatrix | None:
    # rad = {X in A : tr(XY) = 0 for all Y in A}; rad·C^n is invariant and proper
    M = _vec_rows(basis)
    Mt = _vec_rows([A.T for A in basis])
    G = M @ Mt.T
    _, s, Vh = np.linalg.svd(G)
    null = Vh[s <= max(tol * len(basis) * (s[0] if s.size else 0.0), tol)]
    if null.shape[0] == 0:
        return None
    cols = []
    for c in null.conj():
        X = sum(ci * A for ci, A in zip(c, basis))
        cols.append(X)
    Q = range_basis(np.hstack(cols), np.sqrt(tol))
    return Q if 0 < Q.shape[1] < n else None


def _commutant_subspace(gens: Sequence[CMatrix], n: int, tol: float) -> CMatrix | None:
    # XA = AX for all generators; vec(XA - AX) = (A^T ⊗ I - I ⊗ A) vec(X) (column-major)
    I = np.eye(n)
    L = np.vstack([np.kron(A.T, I) - np.kron(I, A) for A in gens])
    _, s, Vh = np.linalg.svd(L)
    s = np.concatenate([s, np.zeros(n * n - s.size)])
    for row in Vh[s <= max(tol * n, tol)]:
        X = row.conj().reshape(n, n, order="F")
        X = X - np.trace(X) / n * I
        if fro(X) <= np.sqrt(tol):
            continue
        lam = np.linalg.eigvals(X)[0]
        U, sv, Wh = np.linalg.svd(X - lam * I)
        kernel = Wh[sv <= np.sqrt(tol) * max(1.0, sv[0])].conj().T
        if 0 < kernel.shape[1] < n:
            return kernel
    return None


def invariant_subspace(elements: Sequence[CMatrix], generators: Sequence[CMatrix],
                       tol: float = DEFAULT_TOL, seed: int = 0) -> CMatrix | None:
    """Projection onto a common nontrivial invariant subspace, if one is found.

    Tries cyclic subspaces of coordinate and random vectors first, then the
    range of the Jacobson radical, then eigenspaces of a non-scalar commutant
    element. For the unital algebra spanned by ``elements`` one of the three
    succeeds whenever it is a proper subalgebra of the full matrix algebra.
    """
    n = elements[0].shape[0]
    basis = algebra_basis(list(elements) + [np.eye(n, dtype=complex)], tol)
    rng = np.random.default_rng(seed)
    probes = list(np.eye(n, dtype=complex))
    probes += list(rng.standard_normal((4, n)) + 1j * rng.standard_normal((4, n)))
    for v in probes:
        Q = _orbit_subspace(basis, v, tol)
        if 0 < Q.shape[1] < n:
            return Q @ dagger(Q)
    for Q in (_radical_subspace(basis, n, tol), _commutant_subspace(generators, n, tol)):
        if Q is not None:
            Q = range_basis(Q, tol)
            return Q @ dagger(Q)
    return None


def irreducibility(S: ClosedSemigroup, tol: float = DEFAULT_TOL,
                   seed: int = 0) -> IrreducibilityReport:
    """Burnside test: irreducible iff ``span(S ∪ {I})`` is all of ``M_n``.

    On an unfinished closure the verdict is advisory.
    """
    n = S.dim
    basis = algebra_basis(list(S.elements) + [np.eye(n, dtype=complex)], tol)
    d = len(basis)
    if d == n * n:
        return IrreducibilityReport(True, d, None, not S.closed)
    P = invariant_subspace(S.elements, S.generators, tol, seed)
    if P is not None:
        leak = max(fro((np.eye(n) - P) @ A @ P) for A in S.elements)
        if leak > n * max(tol, 1e-12):
            P = None
    return IrreducibilityReport(False, d, P, not S.closed)


# ------------------------------------------------------------- unitary powers


def approximate_identity_power(U, eps_target: float = 1e-6, n_max: int = 10 ** 5,
                               tol: float = 1e-8) -> int:
    """Least ``m`` in ``[1, n_max]`` with ``||U^m - I|| <= eps_target``.

    The search runs on the eigenangles (``||U^m - I||`` is unitarily
    invariant), in chunks; each hit is confirmed on the matrix power itself.
    """
    U = _square(U)
    if not is_unitary(U, tol):
        raise PreconditionError("input is not unitary")
    n = U.shape[0]
    theta = np.angle(np.linalg.eigvals(U))
    chunk = 1 << 16
    start = 1
    while start <= n_max:
        m = np.arange(start, min(start + chunk, n_max + 1))
        err = np.sqrt(np.sum(np.abs(np.expm1(1j * np.outer(m, theta))) ** 2, axis=1))
        for hit in m[err <= eps_target * (1 + 1e-9)]:
            if fro(np.linalg.matrix_power(U, int(hit)) - np.eye(n)) <= eps_target:
                return int(hit)
        start += chunk
    raise SearchExhausted(f"no power up to {n_max} within {eps_target} of the identity")


def minimal_nonzero_rank(S: ClosedSemigroup, tol: float = DEFAULT_TOL) -> int:
    ranks = [numerical_rank(A, tol) for A in S.elements]
    nonzero = [r for r in ranks if r > 0]
    if not nonzero:
        raise DegenerateSemigroupError("semigroup has no nonzero element")
    return min(nonzero)


# ------------------------------------------------------ partial permutations


@dataclass(frozen=True)
class PartialPermutation:
    """Injective partial map on ``{0..k-1}``, stored as sorted ``(source, target)``."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pairs = tuple(sorted((int(a), int(b)) for a, b in self.pairs))
        src = [a for a, _ in pairs]
        dst = [b for _, b in pairs]
        if len(set(src)) != len(src) or len(set(dst)) != len(dst):
            raise ValueError(f"not an injective partial map: {pairs}")
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def from_dict(cls, mapping: dict[int, int]) -> "PartialPermutation":
        return cls(tuple(mapping.items()))

    @property
    def domain(self) -> frozenset[int]:
        return frozenset(a for a, _ in self.pairs)

    @property
    def image(self) -> frozenset[int]:
        return frozenset(b for _, b in self.pairs)

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)

    def __call__(self, i: int) -> int:
        return self.as_dict()[i]

    def __len__(self) -> int:
        return len(self.pairs)

    def compose(self, other: "PartialPermutation") -> "PartialPermutation":
        """``self ∘ other``: apply ``other`` first."""
        mine = self.as_dict()
        return PartialPermutation(tuple(
            (a, mine[b]) for a, b in other.pairs if b in mine
        ))

    def inverse(self) -> "PartialPermutation":
        return PartialPermutation(tuple((b, a) for a, b in self.pairs))


# ----------------------------------------------------- zero-unitary structure


@dataclass(frozen=True, eq=False)
class BlockPattern:
    perm: PartialPermutation
    labels: tuple[int, ...]  # group index of the block on each pair of perm.pairs


@dataclass(frozen=True, eq=False)
class ZeroUnitaryStructure:
    k: int
    r0: int
    basis: CMatrix
    unitary_group: tuple[CMatrix, ...]
    patterns: tuple[BlockPattern, ...]
    carriers: tuple[int, ...] = field(default=())

    @property
    def dim(self) -> int:
        return self.k * self.r0

    def block_matrix(self, i: int, j: int, g: int) -> CMatrix:
        """``E_ij ⊗ U_g`` in the original coordinates."""
        r = self.r0
        M = np.zeros((self.dim, self.dim), dtype=np.complex128)
        M[i * r:(i + 1) * r, j * r:(j + 1) * r] = self.unitary_group[g]
        return self.basis @ M @ dagger(self.basis)

    def assemble(self, pattern: BlockPattern) -> CMatrix:
        r = self.r0
        M = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for (j, i), g in zip(pattern.perm.pairs, pattern.labels):
            M[i * r:(i + 1) * r, j * r:(j + 1) * r] = self.unitary_group[g]
        return self.basis @ M @ dagger(self.basis)


class _PatternError(Exception):
    pass


def _classify(A: CMatrix, W: CMatrix, k: int, r: int, group: MatrixIndex,
              tol: float) -> BlockPattern:
    M = dagger(W) @ A @ W
    pairs, labels = [], []
    for j in range(k):
        for i in range(k):
            B = M[i * r:(i + 1) * r, j * r:(j + 1) * r]
            nb = fro(B)
            if nb <= tol:
                continue
            G = polar_unitary(B)
            if fro(B - G) > tol:
                raise _PatternError(f"block ({i},{j}) is not unitary (distance {fro(B - G):.3e})")
            g = group.find(G)
            if g is None:
                raise _PatternError(f"block ({i},{j}) is not in the unitary group")
            pairs.append((j, i))
            labels.append(g)
    try:
        perm = PartialPermutation(tuple(pairs))
    except ValueError as exc:
        raise _PatternError(f"not block-monomial: {exc}") from None
    order = {p: lab for p, lab in zip(pairs, labels)}
    return BlockPattern(perm, tuple(order[p] for p in perm.pairs))


def _require_closed(S: ClosedSemigroup):
    if not S.closed:
        raise BudgetExhausted("semigroup closure incomplete; result would be inconclusive",
                              partial=S)


def _require_nonzero(S: ClosedSemigroup, tol: float):
    if all(fro(A) <= tol for A in S.elements):
        raise DegenerateSemigroupError("semigroup has no nonzero element")


def _require_pi(S: ClosedSemigroup, tol: float):
    bad = first_non_partial_isometry(S, tol)
    if bad is not None:
        raise NotPartialIsometryError(f"element {bad} is not a partial isometry")


def extract_zero_unitary(S: ClosedSemigroup, tol: float = DEFAULT_TOL, *,
                         require_irreducible: bool = True) -> ZeroUnitaryStructure:
    """Recover ``k``, ``r0``, the aligned block basis and the unitary group.

    Steps: minimal nonzero rank ``r0``; a rank-``r0`` element ``T`` whose
    initial and final spaces coincide; ``P = T^m`` with ``T^m ≈ I`` on
    ``ran P``; the group ``U = PSP|ran P``; block bases ``X V`` for elements
    ``X = AP`` carrying ``ran P`` onto new orthogonal blocks (so ``X`` reads as
    the identity block); finally every element is classified block by block.

    With ``require_irreducible=False`` a reducible input is accepted as long
    as the blocks reached from ``ran P`` exhaust the space.
    """
    _require_closed(S)
    _require_nonzero(S, tol)
    _require_pi(S, tol)
    if require_irreducible:
        rep = irreducibility(S, tol)
        if not rep.irreducible:
            raise ReducibleError("semigroup is reducible", rep.witness_subspace)
    n = S.dim
    r0 = minimal_nonzero_rank(S, tol)

    T = None
    for A in S.elements:
        if numerical_rank(A, tol) != r0:
            continue
        if fro(dagger(A) @ A - A @ dagger(A)) <= tol:
            T = A
            break
    if T is None:
        raise TheoremViolation("no non-nilpotent element of minimal rank")
    V = range_basis(T, tol)
    core = dagger(V) @ T @ V
    try:
        m = approximate_identity_power(polar_unitary(core))
    except SearchExhausted:
        m = approximate_identity_power(polar_unitary(core), 1e-3, 10 ** 5)
    P = np.linalg.matrix_power(T, m)
    if not S.contains(P):
        raise TheoremViolation("minimal idempotent power of T is not in S", witness=P)
    if m > 1 and not S.contains(np.linalg.matrix_power(T, m - 1)):
        raise TheoremViolation("T* = T^(m-1) is not in S", witness=T)
    P = V @ dagger(V)

    group = MatrixIndex(r0, tol)
    group.add(np.eye(r0, dtype=np.complex128))
    for A in S.elements:
        B = dagger(V) @ A @ V
        if fro(B) <= tol:
            continue
        G = polar_unitary(B)
        if fro(B - G) > tol:
            raise TheoremViolation("compression to ran P is not unitary", witness=A)
        if group.find(G) is None:
            group.add(G)
    U = list(group.matrices)
    for a in U:
        if group.find(dagger(a)) is None:
            raise TheoremViolation("unitary group not closed under adjoint", witness=a)
        for b in U:
            if group.find(a @ b) is None:
                raise TheoremViolation("unitary group not closed under products", witness=a @ b)

    blocks = [V]
    carriers = [S.index_of(T @ dagger(T)) if S.contains(T @ dagger(T)) else -1]
    Q = P.copy()
    for idx, A in enumerate(S.elements):
        if len(blocks) * r0 >= n:
            break
        X = A @ P
        if numerical_rank(X, tol) != r0:
            continue
        F = X @ dagger(X)
        overlap = fro(F @ Q)
        if overlap <= tol:
            blocks.append(X @ V)
            carriers.append(S.index_of(X) if S.contains(X) else -1)
            Q = Q + F
        elif fro(F @ Q - F) > np.sqrt(tol):
            raise TheoremViolation("final space straddles discovered blocks", witness=X)
    if len(blocks) * r0 != n:
        raise ReducibleError(
            f"blocks reached from the minimal projection span {len(blocks) * r0} of {n} dimensions"
        )
    W = np.hstack(blocks)
    if not is_unitary(W, n * tol):
        raise TheoremViolation("aligned block basis is not unitary", witness=W)
    k = len(blocks)

    patterns = []
    for A in S.elements:
        try:
            patterns.append(_classify(A, W, k, r0, group, tol))
        except _PatternError as exc:
            raise TheoremViolation(str(exc), witness=A) from None
    return ZeroUnitaryStructure(k, r0, W, tuple(U), tuple(patterns), tuple(carriers))


@dataclass(frozen=True, eq=False)
class SandwichReport:
    lower: bool
    upper: bool
    missing: tuple[tuple[int, int, int], ...] = ()
    violations: tuple[tuple[int, str], ...] = ()

    def __bool__(self) -> bool:
        return self.lower and self.upper


def verify_sandwich(S: ClosedSemigroup, Z: ZeroUnitaryStructure,
                    tol: float = DEFAULT_TOL) -> SandwichReport:
    """Check ``S0^k(U) ⊆ S ⊆ S1^k(U)`` in the extracted coordinates."""
    missing = []
    for i in range(Z.k):
        for j in range(Z.k):
            for g in range(len(Z.unitary_group)):
                if not S.contains(Z.block_matrix(i, j, g)):
                    missing.append((i, j, g))
    group = MatrixIndex(Z.r0, tol)
    for G in Z.unitary_group:
        group.add(G)
    violations = []
    for idx, A in enumerate(S.elements):
        try:
            _classify(A, Z.basis, Z.k, Z.r0, group, tol)
        except _PatternError as exc:
            violations.append((idx, str(exc)))
    return SandwichReport(not missing, not violations, tuple(missing), tuple(violations))


# ------------------------------------------------------ atomic representation


@dataclass(frozen=True, eq=False)
class AtomicAction:
    perm: PartialPermutation
    unitaries: tuple[CMatrix, ...]  # one per pair of perm.pairs
    weights: tuple[float, ...]


@dataclass(frozen=True, eq=False)
class AtomicRepresentation:
    band: ProjectionBand
    block_dim: int
    per_element: tuple[AtomicAction, ...]

    def assemble(self, action: AtomicAction) -> CMatrix:
        n = self.band.dim
        M = np.zeros((n, n), dtype=np.complex128)
        for (a, b), Tt, w in zip(action.perm.pairs, action.unitaries, action.weights):
            M += w * self.band.bases[b] @ Tt @ dagger(self.band.bases[a])
        return M


def atomic_representation(S1: ClosedSemigroup, band: ProjectionBand,
                          tol: float = DEFAULT_TOL) -> AtomicRepresentation:
    """Atom-level partial bijections and per-atom unitaries of every element.

    Atoms play the points of the measure space; each is given unit weight, so
    every element acts as a pure composition followed by per-atom unitaries.
    """
    _require_closed(S1)
    _require_nonzero(S1, tol)
    _require_pi(S1, tol)
    for a in band.atoms:
        if not S1.contains(a):
            raise PreconditionError("semigroup does not contain its band")
    rep = irreducibility(S1, tol)
    if not rep.irreducible:
        raise ReducibleError("semigroup is reducible", rep.witness_subspace)
    if len(set(band.atom_ranks)) != 1:
        raise TheoremViolation(f"atoms of unequal rank {band.atom_ranks} in an irreducible semigroup")
    d = band.atom_ranks[0]
    k = len(band)

    actions = []
    for A in S1.elements:
        X = band.decompose(clean_projection(dagger(A) @ A), tol)
        Y = band.decompose(clean_projection(A @ dagger(A)), tol)
        if X is None or Y is None:
            raise TheoremViolation("initial or final projection outside the band", witness=A)
        pairs, units = [], []
        for a in sorted(X.atom_mask):
            F = A @ band.atoms[a] @ dagger(A)
            target = band.decompose(F, tol)
            if target is None or len(target.atom_mask) != 1:
                raise TheoremViolation(f"atom {a} is not carried onto a single atom", witness=A)
            (b,) = target.atom_mask
            Tt = dagger(band.bases[b]) @ A @ band.bases[a]
            if not is_unitary(Tt, tol):
                raise TheoremViolation("fibre map is not unitary", witness=A)
            pairs.append((a, b))
            units.append(Tt)
        try:
            perm = PartialPermutation(tuple(pairs))
        except ValueError:
            raise TheoremViolation("atom map is not injective", witness=A) from None
        if perm.image != Y.atom_mask:
            raise TheoremViolation("atom map does not land on the final projection", witness=A)
        order = dict(zip(pairs, units))
        actions.append(AtomicAction(perm, tuple(order[p] for p in perm.pairs),
                                    tuple(1.0 for _ in perm.pairs)))
    out = AtomicRepresentation(band, d, tuple(actions))
    for A, act in zip(S1.elements, actions):
        err = fro(out.assemble(act) - A)
        if err > k * tol:
            raise TheoremViolation(f"reconstruction error {err:.3e}", witness=A)
    return out


def masa_criterion(band: ProjectionBand) -> bool:
    """Every atom has rank one, so the band generates a maximal abelian algebra."""
    return all(r == 1 for r in band.atom_ranks)


def reducible_split(S: ClosedSemigroup, band: ProjectionBand,
                    tol: float = DEFAULT_TOL) -> list[tuple[CMatrix, ClosedSemigroup]]:
    """Group atoms by rank and compress ``S`` to each rank class.

    Elements carry atoms isometrically onto atoms, so no element can mix
    atoms of different ranks: every class projection reduces ``S``.
    """
    for a in band.atoms:
        if not S.contains(a):
            raise PreconditionError("semigroup does not contain its band")
    out = []
    for r in sorted(set(band.atom_ranks)):
        idxs = [i for i, ri in enumerate(band.atom_ranks) if ri == r]
        B = np.hstack([band.bases[i] for i in idxs])
        Q = B @ dagger(B)
        for A in S.elements:
            c = fro(Q @ A - A @ Q)
            if c > tol:
                raise TheoremViolation(
                    f"rank-{r} class projection fails to commute ({c:.3e})", witness=A
                )
        part = ClosedSemigroup.from_elements([dagger(B) @ A @ B for A in S.elements],
                                             S.work_tol, S.status)
        out.append((Q, part))
    return out


# ------------------------------------------------------------ corollaries


@dataclass(eq=False)
class AtomicityReport:
    range_equal: bool
    kernel_equal: bool
    commute: bool
    failures: list[str]
    lattice_equal: bool | None = None
    atoms_agree: bool | None = None
    atoms_permuted: bool | None = None
    bands: list[ProjectionBand] = field(default_factory=list)

    @property
    def hypotheses(self) -> bool:
        return self.range_equal and self.kernel_equal and self.commute

    @property
    def atomic(self) -> bool | None:
        if not self.hypotheses:
            return None
        return bool(self.lattice_equal and self.atoms_agree and self.atoms_permuted)


def _lattice_band(T: CMatrix, tol: float) -> ProjectionBand:
    n = T.shape[0]
    projs, Tk = [], np.eye(n, dtype=complex)
    for _ in range(n + 1):
        projs += [range_projection(Tk, tol), kernel_projection(Tk, tol)]
        Tk = Tk @ T
    return enveloping_band(projs, n, tol)


def check_finitely_generated_atomicity(generators, tol: float = DEFAULT_TOL,
                                       budget: ClosureBudget | None = None) -> AtomicityReport:
    """Test the equal range / equal kernel / commuting hypotheses and their consequences.

    When they hold: powers of all generators share ranges and kernels up to
    the ambient dimension, the singly generated self-adjoint semigroups have
    the same band atoms, and every generator carries each atom onto an atom
    or to zero. A singly generated closure that exceeds ``budget`` falls back
    to the band of the range/kernel lattice of the generator's powers.
    """
    gens = [_square(G) for G in generators]
    for i, G in enumerate(gens):
        if not is_partial_isometry(G, tol):
            raise NotPartialIsometryError(f"generator {i} is not a partial isometry")
    n = gens[0].shape[0]
    failures = []
    rng_ok = ker_ok = com_ok = True
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            A, B = gens[i], gens[j]
            if fro(range_projection(A, tol) - range_projection(B, tol)) > tol:
                rng_ok = False
                failures.append(f"ran T{i} != ran T{j}")
            if fro(kernel_projection(A, tol) - kernel_projection(B, tol)) > tol:
                ker_ok = False
                failures.append(f"ker T{i} != ker T{j}")
            if fro(A @ B - B @ A) > tol:
                com_ok = False
                failures.append(f"T{i} T{j} != T{j} T{i}")
    rep = AtomicityReport(rng_ok, ker_ok, com_ok, failures)
    if not rep.hypotheses:
        return rep

    lattice_ok = True
    powers = [np.eye(n, dtype=complex) for _ in gens]
    for _ in range(n + 1):
        r0, k0 = range_projection(powers[0], tol), kernel_projection(powers[0], tol)
        for Pk in powers[1:]:
            if fro(range_projection(Pk, tol) - r0) > tol or fro(kernel_projection(Pk, tol) - k0) > tol:
                lattice_ok = False
        powers = [Pk @ G for Pk, G in zip(powers, gens)]
    rep.lattice_equal = lattice_ok

    for G in gens:
        Si = close_selfadjoint([G], tol, budget)
        if Si.closed:
            rep.bands.append(enveloping_band(projections_of(Si, tol), n, tol))
        else:
            rep.bands.append(_lattice_band(G, tol))
    base = rep.bands[0]
    rep.atoms_agree = all(b.same_as(base, max(len(base), 1) * tol) for b in rep.bands[1:])

    permuted = True
    for G in gens:
        for a in base.atoms:
            F = G @ a @ dagger(G)
            if fro(F) <= tol:
                continue
            m = base.decompose(F, tol)
            if m is None or len(m.atom_mask) != 1:
                permuted = False
    rep.atoms_permuted = permuted
    return rep


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % p for p in range(2, int(n ** 0.5) + 1))


def check_prime_size(S: ClosedSemigroup, tol: float = DEFAULT_TOL) -> bool:
    """In prime dimension, an irreducible PI semigroup without rank-one members is a unitary group.

    A zero element, if present, is set aside. Precondition failures raise
    :class:`PreconditionError` listing each one; a failed conclusion raises
    :class:`TheoremViolation`.
    """
    n = S.dim
    problems = []
    if not _is_prime(n):
        problems.append(f"dimension {n} is not prime")
    if not S.closed:
        problems.append("closure incomplete")
    if first_non_partial_isometry(S, tol) is not None:
        problems.append("not all elements are partial isometries")
    if any(numerical_rank(A, tol) == 1 for A in S.elements):
        problems.append("rank-one members present")
    if not problems and not irreducibility(S, tol).irreducible:
        problems.append("semigroup is reducible")
    if problems:
        raise PreconditionError("; ".join(problems))

    nonzero = [A for A in S.elements if fro(A) > tol]
    for A in nonzero:
        if not is_unitary(A, tol):
            raise TheoremViolation("non-unitary member in prime dimension", witness=A)
    for A in nonzero:
        if not S.contains(dagger(A)):
            raise TheoremViolation("adjoint missing", witness=A)
    if not S.contains(np.eye(n)):
        raise TheoremViolation("identity missing")
    return True


def check_automatic_selfadjoint(S: ClosedSemigroup, tol: float = DEFAULT_TOL,
                                budget: ClosureBudget | None = None) -> bool:
    """Does the self-adjoint semigroup generated by ``S`` consist of partial isometries?

    A negative answer on an irreducible semigroup of partial isometries
    contradicts the zero-unitary structure and raises
    :class:`TheoremViolation`.
    """
    _require_closed(S)
    T = close_selfadjoint(S.generators, tol, budget)
    if not T.closed:
        raise BudgetExhausted("self-adjoint closure incomplete", partial=T)
    ok = all_partial_isometries(T, tol)
    if not ok and all_partial_isometries(S, tol) and irreducibility(S, tol).irreducible:
        bad = first_non_partial_isometry(T, tol)
        raise TheoremViolation("self-adjoint closure left the partial isometries",
                               witness=T.elements[bad])
    return ok
