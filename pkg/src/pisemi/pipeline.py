"""Run the named checks on a generator file and collect an analysis report.

Checks run in a fixed dependency order. Shared intermediate objects (the
closure, its band, the enriched semigroup, the irreducibility verdict) are
computed once, on first use, so any subset of checks can be requested.

Verdicts:

``pass``          the property holds (or, for the equivalence checks, the
                  two sides agree)
``fail``          the property does not hold; a witness is attached when
                  one exists
``inconclusive``  a budget ran out before an answer was reached
``skipped``       a hypothesis of the check is not met; the reason is given
``violation``     a computed conclusion contradicts the theory; witness attached
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .band import enrich, enveloping_band
from .closure import (
    ClosedSemigroup,
    ClosureBudget,
    close,
    close_selfadjoint,
    first_non_partial_isometry,
    projections_of,
)
from .errors import (
    BudgetExhausted,
    CommutativityError,
    PreconditionError,
    SearchExhausted,
    TheoremViolation,
)
from .inputs import GeneratorFile
from .linalg import DEFAULT_TOL, check_tol, is_partial_isometry
from .powerpi import halmos_wallen, is_power_partial_isometry, ppi_semigroup_check
from .structure import (
    atomic_representation,
    check_automatic_selfadjoint,
    check_finitely_generated_atomicity,
    check_prime_size,
    extract_zero_unitary,
    irreducibility,
    masa_criterion,
    reducible_split,
    verify_sandwich,
)

REPORT_SCHEMA = "report/v1"

PASS, FAIL, INCONCLUSIVE, SKIPPED, VIOLATION = (
    "pass", "fail", "inconclusive", "skipped", "violation")
VERDICTS = (PASS, FAIL, INCONCLUSIVE, SKIPPED, VIOLATION)

EXIT_OK, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_INPUT, EXIT_VIOLATION = 0, 1, 2, 3, 4

CHECKS = (
    "partial-isometry",
    "power-partial-isometry",
    "halmos-wallen",
    "ppi-semigroup",
    "band",
    "enrich",
    "irreducible",
    "reducible-split",
    "zero-unitary",
    "atomic-representation",
    "masa",
    "finitely-generated",
    "prime-size",
    "automatic-sa",
)

ZERO_SNAP = 1e-14


def matrix_json(A) -> list:
    """Rows of ``[re, im]`` pairs; entries below ``ZERO_SNAP`` become 0.0."""
    def num(x: float) -> float:
        return 0.0 if abs(x) < ZERO_SNAP else float(x)
    A = np.asarray(A, dtype=np.complex128)
    return [[[num(z.real), num(z.imag)] for z in row] for row in A]


@dataclass
class Verdict:
    check: str
    verdict: str
    detail: str
    data: dict = field(default_factory=dict)
    witness: np.ndarray | None = None

    def as_dict(self) -> dict:
        out = {"check": self.check, "verdict": self.verdict, "detail": self.detail,
               "data": self.data}
        out["witness"] = None if self.witness is None else matrix_json(self.witness)
        return out


class _Skip(Exception):
    pass


class Context:
    """Lazily computed objects shared between checks."""

    def __init__(self, gf: GeneratorFile, tol: float, budget: ClosureBudget, seed: int):
        self.gf, self.tol, self.budget, self.seed = gf, tol, budget, seed
        self._cache: dict = {}

    def _memo(self, key, fn):
        if key not in self._cache:
            try:
                self._cache[key] = ("ok", fn())
            except Exception as exc:  # replayed to every check that needs it
                self._cache[key] = ("err", exc)
        kind, val = self._cache[key]
        if kind == "err":
            raise val
        return val

    @property
    def S(self) -> ClosedSemigroup:
        def build():
            make = close_selfadjoint if self.gf.selfadjoint else close
            return make(self.gf.generators, self.tol, self.budget)
        return self._memo("S", build)

    def closed_S(self) -> ClosedSemigroup:
        S = self.S
        if not S.closed:
            raise BudgetExhausted(f"closure stopped at {len(S)} elements", partial=S)
        return S

    def non_pi_index(self) -> int | None:
        return self._memo("non_pi", lambda: first_non_partial_isometry(self.S, self.tol))

    def require_pi(self):
        if self.non_pi_index() is not None:
            raise _Skip("the semigroup contains a non-partial-isometry")
        self.closed_S()

    @property
    def irreducible(self):
        return self._memo("irr", lambda: irreducibility(self.closed_S(), self.tol, self.seed))

    def require_irreducible(self):
        if not self.irreducible.irreducible:
            raise _Skip("the semigroup is reducible")

    @property
    def band(self):
        def build():
            S = self.closed_S()
            return enveloping_band(projections_of(S, self.tol), S.dim, self.tol)
        return self._memo("band", build)

    @property
    def enriched(self):
        def build():
            self.require_pi()
            if not self.S.is_selfadjoint():
                raise _Skip("the semigroup is not self-adjoint")
            S1, band = enrich(self.S, self.tol, self.budget)
            if not S1.closed:
                raise BudgetExhausted(f"enriched closure stopped at {len(S1)} elements",
                                      partial=S1)
            return S1, band
        return self._memo("enriched", build)


# ---------------------------------------------------------------- checks


def _partial_isometry(ctx: Context) -> Verdict:
    name = "partial-isometry"
    for i, G in enumerate(ctx.gf.generators):
        if not is_partial_isometry(G, ctx.tol):
            return Verdict(name, FAIL, f"generator {i} is not a partial isometry",
                           {"generator": i}, G)
    S = ctx.S
    bad = ctx.non_pi_index()
    if bad is not None:
        return Verdict(name, FAIL, "a product of generators is not a partial isometry",
                       {"element": bad, "word": list(S.words[bad])}, S.elements[bad])
    if not S.closed:
        return Verdict(name, INCONCLUSIVE,
                       f"all {len(S)} enumerated elements pass; closure incomplete")
    return Verdict(name, PASS, f"all {len(S)} elements are partial isometries")


def _power_partial_isometry(ctx: Context) -> Verdict:
    flags = [is_power_partial_isometry(G, ctx.tol) for G in ctx.gf.generators]
    data = {"generators": flags}
    if all(flags):
        return Verdict("power-partial-isometry", PASS,
                       "every generator is a power partial isometry", data)
    bad = flags.index(False)
    return Verdict("power-partial-isometry", FAIL,
                   f"generator {bad} is not a power partial isometry", data,
                   ctx.gf.generators[bad])


def _halmos_wallen(ctx: Context) -> Verdict:
    rows = []
    for i, G in enumerate(ctx.gf.generators):
        if not is_power_partial_isometry(G, ctx.tol):
            rows.append({"generator": i, "skipped": "not a power partial isometry"})
            continue
        hw = halmos_wallen(G, ctx.tol)
        rows.append({
            "generator": i,
            "unitary_dim": hw.unitary_dim,
            "shift_sizes": list(hw.shift_sizes),
            "reconstruction_error": hw.reconstruction_error,
            "basis": matrix_json(hw.basis),
        })
    done = sum("skipped" not in r for r in rows)
    if not done:
        raise _Skip("no generator is a power partial isometry")
    return Verdict("halmos-wallen", PASS,
                   f"decomposed {done} of {len(rows)} generators", {"generators": rows})


def _ppi_semigroup(ctx: Context) -> Verdict:
    rows = []
    for i, G in enumerate(ctx.gf.generators):
        ok = ppi_semigroup_check(G, ctx.tol, ctx.budget.max_elements)
        rows.append({"generator": i, "semigroup_of_partial_isometries": ok})
    return Verdict("ppi-semigroup", PASS,
                   "S(T, T*) test agrees with the power test for every generator",
                   {"generators": rows})


def _band(ctx: Context) -> Verdict:
    try:
        band = ctx.band
    except CommutativityError as exc:
        return Verdict("band", FAIL, str(exc), {"pair": list(exc.pair)})
    return Verdict("band", PASS, f"atom ranks {list(band.atom_ranks)}",
                   {"atom_ranks": list(band.atom_ranks),
                    "atoms": [matrix_json(a) for a in band.atoms]})


def _enrich(ctx: Context) -> Verdict:
    S1, band = ctx.enriched
    return Verdict("enrich", PASS,
                   f"enriched semigroup closed with {len(S1)} elements; band unchanged",
                   {"size": len(S1), "atom_ranks": list(band.atom_ranks)})


def _irreducible(ctx: Context) -> Verdict:
    rep = ctx.irreducible
    data = {"algebra_dim": rep.algebra_dim}
    if rep.irreducible:
        return Verdict("irreducible", PASS, "the generated algebra is all of M_n", data)
    return Verdict("irreducible", FAIL,
                   f"the generated algebra has dimension {rep.algebra_dim} < {ctx.S.dim ** 2}",
                   data, rep.witness_subspace)


def _reducible_split(ctx: Context) -> Verdict:
    S1, band = ctx.enriched
    parts = reducible_split(S1, band, ctx.tol)
    ranks = sorted(set(band.atom_ranks))
    rows = [{"rank": r, "atoms": band.atom_ranks.count(r), "dim": part.dim,
             "size": len(part)} for r, (_, part) in zip(ranks, parts)]
    return Verdict("reducible-split", PASS,
                   f"{len(parts)} reducing rank class(es)", {"classes": rows})


def _zero_unitary(ctx: Context) -> Verdict:
    ctx.require_pi()
    ctx.require_irreducible()
    S = ctx.closed_S()
    Z = extract_zero_unitary(S, ctx.tol)
    sw = verify_sandwich(S, Z, ctx.tol)
    data = {
        "k": Z.k,
        "r0": Z.r0,
        "group_order": len(Z.unitary_group),
        "unitary_group": [matrix_json(G) for G in Z.unitary_group],
        "basis": matrix_json(Z.basis),
        "patterns": [{"element": i, "pairs": [list(p) for p in pat.perm.pairs],
                      "labels": list(pat.labels)} for i, pat in enumerate(Z.patterns)],
        "sandwich_lower": sw.lower,
        "sandwich_upper": sw.upper,
    }
    if not sw:
        witness = None
        if sw.violations:
            witness = S.elements[sw.violations[0][0]]
        elif sw.missing:
            witness = Z.block_matrix(*sw.missing[0])
        return Verdict("zero-unitary", VIOLATION, "sandwich inclusion fails", data, witness)
    return Verdict("zero-unitary", PASS,
                   f"k={Z.k}, r0={Z.r0}, |U|={len(Z.unitary_group)}; sandwich holds", data)


def _atomic_representation(ctx: Context) -> Verdict:
    S1, band = ctx.enriched
    rep = atomic_representation(S1, band, ctx.tol)
    rows = [{"element": i, "pairs": [list(p) for p in act.perm.pairs],
             "unitaries": [matrix_json(U) for U in act.unitaries],
             "weights": list(act.weights)}
            for i, act in enumerate(rep.per_element)]
    return Verdict("atomic-representation", PASS,
                   f"{len(band)} atom(s) of rank {rep.block_dim}; every element acts "
                   "as a partial bijection of atoms",
                   {"block_dim": rep.block_dim, "atoms": len(band), "elements": rows})


def _masa(ctx: Context) -> Verdict:
    band = ctx.band
    data = {"atom_ranks": list(band.atom_ranks)}
    if masa_criterion(band):
        return Verdict("masa", PASS, "every atom has rank one", data)
    return Verdict("masa", FAIL, "some atom has rank greater than one", data)


def _finitely_generated(ctx: Context) -> Verdict:
    rep = check_finitely_generated_atomicity(ctx.gf.generators, ctx.tol, ctx.budget)
    data = {"range_equal": rep.range_equal, "kernel_equal": rep.kernel_equal,
            "commute": rep.commute, "failures": rep.failures}
    if not rep.hypotheses:
        shown = "; ".join(rep.failures[:3])
        if len(rep.failures) > 3:
            shown += f" (+{len(rep.failures) - 3} more)"
        return Verdict("finitely-generated", SKIPPED, "hypotheses not met: " + shown, data)
    data.update(lattice_equal=rep.lattice_equal, atoms_agree=rep.atoms_agree,
                atoms_permuted=rep.atoms_permuted)
    if not rep.atomic:
        return Verdict("finitely-generated", VIOLATION,
                       "hypotheses hold but the conclusions fail", data)
    return Verdict("finitely-generated", PASS,
                   "hypotheses and all conclusions hold", data)


def _prime_size(ctx: Context) -> Verdict:
    check_prime_size(ctx.closed_S(), ctx.tol)
    return Verdict("prime-size", PASS,
                   "every nonzero element is unitary; the semigroup is a group")


def _automatic_sa(ctx: Context) -> Verdict:
    ctx.require_pi()
    ctx.require_irreducible()
    check_automatic_selfadjoint(ctx.closed_S(), ctx.tol, ctx.budget)
    return Verdict("automatic-sa", PASS,
                   "the self-adjoint closure consists of partial isometries")


RUNNERS: dict[str, Callable[[Context], Verdict]] = {
    "partial-isometry": _partial_isometry,
    "power-partial-isometry": _power_partial_isometry,
    "halmos-wallen": _halmos_wallen,
    "ppi-semigroup": _ppi_semigroup,
    "band": _band,
    "enrich": _enrich,
    "irreducible": _irreducible,
    "reducible-split": _reducible_split,
    "zero-unitary": _zero_unitary,
    "atomic-representation": _atomic_representation,
    "masa": _masa,
    "finitely-generated": _finitely_generated,
    "prime-size": _prime_size,
    "automatic-sa": _automatic_sa,
}


def _run_one(name: str, ctx: Context) -> Verdict:
    try:
        return RUNNERS[name](ctx)
    except TheoremViolation as exc:
        return Verdict(name, VIOLATION, str(exc), {}, exc.witness)
    except (BudgetExhausted, SearchExhausted) as exc:
        return Verdict(name, INCONCLUSIVE, str(exc))
    except (_Skip, PreconditionError) as exc:
        return Verdict(name, SKIPPED, str(exc))


def parse_checks(selection: str) -> list[str]:
    """``"all"``, ``""`` (none) or a comma-separated list; returned in run order."""
    selection = selection.strip()
    if selection == "all":
        return list(CHECKS)
    names = {s.strip() for s in selection.split(",") if s.strip()}
    unknown = sorted(names - set(CHECKS))
    if unknown:
        raise ValueError(f"unknown check(s): {', '.join(unknown)}")
    return [c for c in CHECKS if c in names]


def exit_code(report: dict) -> int:
    verdicts = [c["verdict"] for c in report["checks"]]
    if VIOLATION in verdicts:
        return EXIT_VIOLATION
    if FAIL in verdicts:
        return EXIT_FAIL
    if INCONCLUSIVE in verdicts or report["closure"]["status"] != "closed":
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def run_pipeline(gf: GeneratorFile, checks=CHECKS, *, tol: float | None = None,
                 budget: ClosureBudget | None = None, seed: int = 0) -> dict:
    """Close the generators, run ``checks`` and return the report as a dict.

    Explicit ``tol``/``budget`` override the file's own settings.
    """
    tol = check_tol(tol if tol is not None else gf.tol if gf.tol is not None else DEFAULT_TOL)
    budget = budget or gf.budget or ClosureBudget()
    ctx = Context(gf, tol, budget, seed)
    order = [c for c in CHECKS if c in set(checks)]
    S = ctx.S
    report = {
        "schema": REPORT_SCHEMA,
        "input": {
            "name": gf.name,
            "digest": gf.digest,
            "dim": gf.dim,
            "generators": len(gf.generators),
            "selfadjoint": gf.selfadjoint,
        },
        "settings": {
            "tol": tol,
            "max_elements": budget.max_elements,
            "max_word_length": budget.max_word_length,
            "seed": seed,
            "checks": order,
        },
        "closure": {
            "status": S.status,
            "size": len(S),
            "max_word_length": S.max_word_length,
            "work_tol": S.work_tol,
        },
        "checks": [_run_one(name, ctx).as_dict() for name in order],
    }
    counts = {v: 0 for v in VERDICTS}
    for c in report["checks"]:
        counts[c["verdict"]] += 1
    report["summary"] = {**counts, "exit_code": exit_code(report)}
    return report
