"""JSON documents for bases, probability tables and density matrices.

Every document carries ``"format": 1``. Complex numbers are ``[re, im]`` pairs.
Writers go through ``json.dumps(..., sort_keys=True)`` so identical inputs give
byte-identical files.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Type, TypeVar, Union

import numpy as np
from pydantic import BaseModel, ValidationError

from ..bases.entangled import TENSOR_CONVENTION, EntangledBasis
from ..bases.mub import MubBasis
from ..errors import PuebError
from ..schemas import (
    FORMAT_VERSION,
    BasisRecord,
    DensityMatrixRecord,
    ProbTable,
    complex_pair,
)
from ..states import DensityMatrix

logger = logging.getLogger(__name__)

Model = TypeVar("Model", bound=BaseModel)
PathLike = Union[str, Path]


def basis_record(basis: MubBasis) -> BasisRecord:
    """Single-particle basis; states are listed in c order."""

    states = [[complex_pair(a) for a in psi.amps] for psi in basis.states]
    exps = None
    root_order = None
    if all(psi.phase_exps is not None for psi in basis.states):
        exps = [psi.phase_exps.tolist() for psi in basis.states]
        root_order = basis.states[0].root_order
    return BasisRecord(
        dim=basis.dim,
        label=basis.name,
        b=basis.label,
        root_order=root_order,
        states=states,
        phase_exps=exps,
    )


def entangled_record(basis: EntangledBasis) -> BasisRecord:
    """Entangled basis; states in c1*d + c2 order, amplitudes indexed n*d + k."""

    return BasisRecord(
        dim=basis.dim,
        label=f"b={basis.b},s={basis.s}",
        b=basis.b,
        s=basis.s,
        tensor=TENSOR_CONVENTION,
        states=[[complex_pair(a) for a in psi.amps] for psi in basis.states],
    )


def density_record(rho: Union[DensityMatrix, np.ndarray]) -> DensityMatrixRecord:
    entries = rho.entries if isinstance(rho, DensityMatrix) else np.asarray(rho)
    return DensityMatrixRecord(
        dim=int(entries.shape[0]), entries=[complex_pair(z) for z in entries.reshape(-1)]
    )


def density_from_record(record: DensityMatrixRecord, *, validate: bool = True) -> DensityMatrix:
    if len(record.entries) != record.dim * record.dim:
        raise PuebError(
            f"density matrix record has {len(record.entries)} entries, expected {record.dim ** 2}"
        )
    values = np.array([complex(re, im) for re, im in record.entries]).reshape(record.dim, record.dim)
    return DensityMatrix(values, validate=validate)


def dumps(model: BaseModel) -> str:
    return json.dumps(model.model_dump(mode="json"), sort_keys=True, indent=1) + "\n"


def write_json(path: PathLike, model: BaseModel) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(model), encoding="utf-8")
    logger.debug("Wrote %s", path)
    return path


def read_json(path: PathLike, model: Type[Model]) -> Model:
    """Parse ``path`` into ``model``, rejecting unknown format versions."""

    path = Path(path)
    try:
        payload: Any = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise PuebError(f"cannot read {path}: {exc}") from exc
    if not isinstance(payload, dict):
        raise PuebError(f"{path} is not a JSON object")
    if payload.get("format") != FORMAT_VERSION:
        raise PuebError(f"{path} has format {payload.get('format')!r}, expected {FORMAT_VERSION}")
    try:
        return model.model_validate(payload)
    except ValidationError as exc:
        raise PuebError(f"{path} is not a valid {model.__name__}: {exc}") from exc


def read_density(path: PathLike) -> DensityMatrix:
    return density_from_record(read_json(path, DensityMatrixRecord))


def read_prob_table(path: PathLike) -> ProbTable:
    return read_json(path, ProbTable)
