"""Measurement settings, Born probabilities, shot sampling and setting accounting.

A setting is one jointly measurable basis. Single-particle tomography uses the
d structured bases plus the computational basis. Two-particle tomography uses
the d(d-1) entangled bases, the computational x computational basis and the
two families of product bases {|b;c>_mu |n>_nu} and {|n>_mu |b;c>_nu}.
"""

from __future__ import annotations

import logging
import re
import zlib
from typing import List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict

from ..algebra.finite_field import Field
from ..algebra.schwinger import xz_power
from ..bases.entangled import entangled_basis, product_basis_matrix
from ..bases.mub import computational_basis, structured_basis, structured_basis_pp
from ..errors import InvalidProbabilitiesError, PuebError
from ..schemas import ProbTable, SettingOutcomes
from ..states import DensityMatrix
from ..utils.linalg import dagger, max_abs
from ..utils.phases import roots_of_unity

logger = logging.getLogger(__name__)

SettingKind = Literal[
    "entangled",
    "computational",
    "product_left",
    "product_right",
    "single_basis",
    "zz_correlation",
]
Scheme = Literal["single", "two_partite"]
CountScheme = Literal[
    "single_mub", "two_partite_this_paper", "two_partite_full_mub", "product_single_mub"
]

NEGATIVE_CLIP = 1e-12
_KEY_PATTERN = re.compile(r"^(ent|comp|left|right|mub|zz)(?::(.*))?$")
_PREFIX = {
    "entangled": "ent",
    "computational": "comp",
    "product_left": "left",
    "product_right": "right",
    "single_basis": "mub",
    "zz_correlation": "zz",
}


class MeasurementSetting(BaseModel):
    """One measurement setting.

    ``product_left`` measures |b;c> on mu and the computational basis on nu;
    ``product_right`` is the mirror image. ``zz_correlation`` is never measured
    separately: its statistics come from the computational setting.
    """

    model_config = ConfigDict(frozen=True)

    kind: SettingKind
    b: Optional[int] = None
    s: Optional[int] = None

    @property
    def key(self) -> str:
        prefix = _PREFIX[self.kind]
        if self.kind == "entangled":
            return f"{prefix}:b={self.b},s={self.s}"
        if self.kind == "zz_correlation":
            return f"{prefix}:s={self.s}"
        if self.kind == "computational":
            return prefix
        return f"{prefix}:b={self.b}"

    @classmethod
    def from_key(cls, key: str) -> "MeasurementSetting":
        match = _KEY_PATTERN.match(key)
        if match is None:
            raise PuebError(f"unrecognised setting id {key!r}")
        prefix, params = match.groups()
        kind = next(k for k, p in _PREFIX.items() if p == prefix)
        values = {}
        for part in (params or "").split(","):
            if not part:
                continue
            name, _, value = part.partition("=")
            if name not in ("b", "s") or not value.lstrip("-").isdigit():
                raise PuebError(f"unrecognised setting id {key!r}")
            values[name] = int(value)
        return cls(kind=kind, **values)


def settings_for(d: int, scheme: Scheme) -> List[MeasurementSetting]:
    """Settings a reconstruction consumes, in file order."""

    if scheme == "single":
        return [MeasurementSetting(kind="single_basis", b=b) for b in range(d)] + [
            MeasurementSetting(kind="computational")
        ]
    if scheme == "two_partite":
        entangled = [
            MeasurementSetting(kind="entangled", b=b, s=s) for s in range(1, d) for b in range(d)
        ]
        left = [MeasurementSetting(kind="product_left", b=b) for b in range(d)]
        right = [MeasurementSetting(kind="product_right", b=b) for b in range(d)]
        return entangled + [MeasurementSetting(kind="computational")] + left + right
    raise PuebError(f"unknown scheme {scheme!r}")


def basis_for_setting(
    d: int, setting: MeasurementSetting, scheme: Scheme, field: Optional[Field] = None
) -> np.ndarray:
    """Outcome states of ``setting`` as matrix columns, in outcome order."""

    if scheme == "single":
        if setting.kind == "computational":
            return computational_basis(d).matrix()
        if setting.kind == "single_basis":
            if field is not None and field.n > 1:
                return structured_basis_pp(field, setting.b).matrix()
            return structured_basis(d, setting.b).matrix()
    elif scheme == "two_partite":
        if setting.kind in ("computational", "zz_correlation"):
            return product_basis_matrix(d, None, None)
        if setting.kind == "entangled":
            return entangled_basis(d, setting.b, setting.s).matrix()
        if setting.kind == "product_left":
            return product_basis_matrix(d, setting.b, None)
        if setting.kind == "product_right":
            return product_basis_matrix(d, None, setting.b)
    raise PuebError(f"setting {setting.key} does not belong to scheme {scheme}")


def _entries(rho: Union[DensityMatrix, np.ndarray]) -> np.ndarray:
    return rho.entries if isinstance(rho, DensityMatrix) else np.asarray(rho)


def born_probs(rho: Union[DensityMatrix, np.ndarray], basis: np.ndarray) -> np.ndarray:
    """p_k = <k|rho|k> for the columns |k> of ``basis``."""

    entries = _entries(rho)
    basis = np.asarray(basis)
    if basis.shape != entries.shape:
        raise PuebError(f"basis shape {basis.shape} does not match state shape {entries.shape}")
    if max_abs(dagger(basis) @ basis - np.eye(basis.shape[1])) > 1e-10:
        raise PuebError("measurement basis is not orthonormal")
    probs = np.real(np.einsum("ik,ij,jk->k", basis.conj(), entries, basis))
    if probs.min() < -NEGATIVE_CLIP:
        raise InvalidProbabilitiesError(f"negative probability {probs.min():.3e}")
    return np.clip(probs, 0.0, None)


def _table_dim(rho: Union[DensityMatrix, np.ndarray], scheme: Scheme) -> int:
    dim = _entries(rho).shape[0]
    if scheme == "single":
        return dim
    d = int(round(np.sqrt(dim)))
    if d * d != dim:
        raise PuebError(f"state of dimension {dim} is not bipartite")
    return d


def exact_prob_table(
    rho: Union[DensityMatrix, np.ndarray], scheme: Scheme, field: Optional[Field] = None
) -> ProbTable:
    d = _table_dim(rho, scheme)
    entries = [
        SettingOutcomes(
            id=setting.key,
            outcomes=born_probs(rho, basis_for_setting(d, setting, scheme, field)).tolist(),
        )
        for setting in settings_for(d, scheme)
    ]
    return ProbTable(dim=d, scheme=scheme, settings=entries)


def setting_rng(seed: int, key: str) -> np.random.Generator:
    """Independent generator stream for one setting, derived from (seed, setting id)."""

    return np.random.default_rng(np.random.SeedSequence([seed, zlib.crc32(key.encode("utf-8"))]))


def sample_probs(probs: np.ndarray, shots: int, rng: np.random.Generator) -> np.ndarray:
    """Multinomial outcome frequencies of ``shots`` repetitions."""

    if shots < 1:
        raise PuebError(f"shots must be at least 1, got {shots}")
    probs = np.clip(np.asarray(probs, dtype=float), 0.0, None)
    counts = rng.multinomial(shots, probs / probs.sum())
    return counts / shots


def sampled_prob_table(
    rho: Union[DensityMatrix, np.ndarray],
    scheme: Scheme,
    shots: int,
    seed: int,
    field: Optional[Field] = None,
) -> ProbTable:
    """Shot-noise version of ``exact_prob_table``; identical for identical (seed, shots)."""

    if shots < 1:
        raise PuebError(f"shots must be at least 1, got {shots}")
    exact = exact_prob_table(rho, scheme, field)
    entries = [
        SettingOutcomes(
            id=entry.id,
            outcomes=sample_probs(entry.outcomes, shots, setting_rng(seed, entry.id)).tolist(),
        )
        for entry in exact.settings
    ]
    logger.debug("Sampled %d settings with %d shots each", len(entries), shots)
    return exact.model_copy(update={"settings": entries})


def measurement_count(d: int, scheme: CountScheme) -> int:
    """Number of distinct settings a tomography scheme needs.

    ``product_single_mub`` is (d+1)^2 = d^2+2d+1, measuring one particle MUB on each side.
    """

    counts = {
        "single_mub": d + 1,
        "two_partite_this_paper": d * d + d + 1,
        "two_partite_full_mub": d * d + 1,
        "product_single_mub": (d + 1) ** 2,
    }
    if scheme not in counts:
        raise PuebError(f"unknown counting scheme {scheme!r}")
    return counts[scheme]


def hermitian_pair(d: int, b: int) -> Tuple[np.ndarray, np.ndarray]:
    """M1 = XZ^b + (XZ^b)^dagger and M2 = i (XZ^b - (XZ^b)^dagger).

    On |b;c> they take the values (2 cos(2 pi c/d), -2 sin(2 pi c/d)).
    """

    u = xz_power(d, b, 1)
    return u + dagger(u), 1j * (u - dagger(u))


def correlation_expectations(table: ProbTable, s: int) -> np.ndarray:
    """Tr[rho (Z^s_mu Z^-1_nu)^r] for r = 0..d-1, read from the computational setting."""

    if table.scheme != "two_partite":
        raise PuebError("correlations need a two-partite probability table")
    d = table.dim
    probs = table.probabilities(MeasurementSetting(kind="computational").key).reshape(d, d)
    n, k = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    omega = roots_of_unity(d)
    return np.array([np.sum(probs * omega[(r * (s * n - k)) % d]) for r in range(d)])
