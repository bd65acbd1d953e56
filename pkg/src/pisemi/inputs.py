"""Generator files: JSON parsing, schema validation and shorthand expansion.

Entries of ``generators`` may be

* a ``dim × dim`` matrix whose entries are ``[re, im]`` pairs (or plain reals),
* ``{"E": [i, j]}`` for the basic matrix ``E_ij`` (1-based, as in ``E_11``),
* ``{"tensor": {"r": r, "group": name}}`` or
  ``{"tensor": {"r": r, "group_generators": [...]}}`` for the basic ``r × r``
  matrices tensored with a unitary group (expands to several generators),
* ``{"weyl_heisenberg": n}`` for shift/clock generators.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from . import families
from .closure import ClosureBudget
from .linalg import CMatrix, basic_matrix

SCHEMA_FILE = "generator_file.schema.json"

NAMED_GROUPS = {
    "trivial": None,
    "pauli": families.pauli_generators,
    "dihedral4": families.dihedral4,
    "quaternion8": families.quaternion8,
    "symmetric3": families.symmetric3,
}


class InputError(ValueError):
    """Malformed or inconsistent generator file."""


@dataclass
class GeneratorFile:
    dim: int
    generators: list[CMatrix]
    name: str = "unnamed"
    tol: float | None = None
    budget: ClosureBudget | None = None
    selfadjoint: bool = True
    digest: str = ""
    source: dict = field(default_factory=dict, repr=False)


def load_schema(name: str) -> dict:
    return json.loads(resources.files("pisemi.schemas").joinpath(name).read_text())


def _matrix(rows, dim: int, where: str) -> CMatrix:
    M = np.zeros((dim, dim), dtype=np.complex128)
    if len(rows) != dim or any(len(r) != dim for r in rows):
        raise InputError(f"{where}: expected a {dim}x{dim} matrix")
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            M[i, j] = complex(x[0], x[1]) if isinstance(x, list) else float(x)
    return M


def _group_generators(params: dict, where: str) -> list[CMatrix]:
    if "group_generators" in params:
        s = params.get("s", len(params["group_generators"][0]))
        return [_matrix(g, s, f"{where}.group_generators[{i}]")
                for i, g in enumerate(params["group_generators"])]
    name = params.get("group", "trivial")
    if name.startswith("cyclic:"):
        return families.cyclic_group(int(name.split(":", 1)[1]))
    if name not in NAMED_GROUPS:
        raise InputError(f"{where}.group: unknown group {name!r}")
    make = NAMED_GROUPS[name]
    return [np.eye(params.get("s", 1), dtype=np.complex128)] if make is None else make()


def _expand(entry, dim: int, where: str) -> list[CMatrix]:
    if isinstance(entry, list):
        return [_matrix(entry, dim, where)]
    if "E" in entry:
        i, j = entry["E"]
        if not (1 <= i <= dim and 1 <= j <= dim):
            raise InputError(f"{where}.E: indices must lie in 1..{dim}")
        return [basic_matrix(dim, i - 1, j - 1)]
    if "tensor" in entry:
        params = entry["tensor"]
        gens = families.tensor_example(params["r"], _group_generators(params, f"{where}.tensor"))
    elif "weyl_heisenberg" in entry:
        gens = families.weyl_heisenberg(entry["weyl_heisenberg"])
    else:
        raise InputError(f"{where}: unrecognised generator entry")
    if gens[0].shape[0] != dim:
        raise InputError(f"{where}: family has dimension {gens[0].shape[0]}, file declares {dim}")
    return gens


def parse_generator_file(text: str) -> GeneratorFile:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    try:
        jsonschema.validate(data, load_schema(SCHEMA_FILE))
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise InputError(f"field {path}: {exc.message}") from None

    dim = data["dim"]
    gens: list[CMatrix] = []
    for i, entry in enumerate(data["generators"]):
        gens += _expand(entry, dim, f"generators[{i}]")
    budget = None
    if "budget" in data:
        budget = ClosureBudget(**data["budget"])
    canonical = json.dumps(data, sort_keys=True, separators=(",", ":"))
    return GeneratorFile(
        dim=dim,
        generators=gens,
        name=data.get("name", "unnamed"),
        tol=data.get("tol"),
        budget=budget,
        selfadjoint=data.get("selfadjoint", True),
        digest=hashlib.sha256(canonical.encode()).hexdigest(),
        source=data,
    )


def load_generator_file(path) -> GeneratorFile:
    return parse_generator_file(Path(path).read_text())
