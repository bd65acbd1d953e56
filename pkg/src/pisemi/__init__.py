"""Semigroups of partial isometries in finite dimension.

Closure of generator sets, power partial isometries, enveloping projection
bands, irreducibility and the zero-unitary block structure of irreducible
self-adjoint semigroups.
"""

from .band import (
    BooleanElement,
    ProjectionBand,
    boolean_members,
    conjugate_projection,
    enrich,
    enveloping_band,
)
from .closure import (
    ClosedSemigroup,
    ClosureBudget,
    Enumerator,
    MatrixIndex,
    all_partial_isometries,
    close,
    close_selfadjoint,
    idempotents_of,
    projections_of,
)
from .errors import (
    BudgetExhausted,
    ClaimViolationError,
    CommutativityError,
    DegenerateSemigroupError,
    DimensionError,
    NotPartialIsometryError,
    NotPowerPartialIsometryError,
    PreconditionError,
    ReducibleError,
    SearchExhausted,
    TheoremViolation,
)
from .inputs import GeneratorFile, InputError, load_generator_file, parse_generator_file
from .linalg import DEFAULT_TOL, is_partial_isometry, is_projection, is_unitary
from .pipeline import CHECKS, run_pipeline
from .powerpi import (
    HWDecomposition,
    halmos_wallen,
    is_power_partial_isometry,
    ppi_semigroup_check,
    unitary_part_projection,
)
from .report import emit
from .structure import (
    AtomicRepresentation,
    AtomicityReport,
    IrreducibilityReport,
    PartialPermutation,
    SandwichReport,
    ZeroUnitaryStructure,
    approximate_identity_power,
    atomic_representation,
    check_automatic_selfadjoint,
    check_finitely_generated_atomicity,
    check_prime_size,
    extract_zero_unitary,
    irreducibility,
    masa_criterion,
    minimal_nonzero_rank,
    reducible_split,
    verify_sandwich,
)

__version__ = "0.1.0"
