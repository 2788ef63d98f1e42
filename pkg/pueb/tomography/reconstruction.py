"""Linear reconstruction of density matrices from setting probabilities.

Single particle, with P_B = sum_k p_B(k) |k><k| over the outcome states of setting B:

    rho = sum_b P_b + P_computational - I

Two particles, d(d-1) + 1 + d + d = d^2 + d + 1 settings:

    rho = sum_{b,s} P_ent(b,s) - (d-1) P_comp + sum_b P_left(b) + sum_b P_right(b) - I

The Z^s_mu Z^-1_nu correlations sit inside P_comp, so they need no setting of their own.
Only probabilities enter; amplitudes of the measured state are never used.
"""

from __future__ import annotations

import logging
from typing import Optional

import numpy as np

from ..algebra.finite_field import Field
from ..errors import MissingSettingsError, PuebError
from ..schemas import ProbTable, ReconstructionDiagnostics, SettingOutcomes
from ..states import DensityMatrix
from ..utils.linalg import weighted_projector_sum
from .measurements import MeasurementSetting, Scheme, basis_for_setting, settings_for

logger = logging.getLogger(__name__)

HERMITICITY_FLAG = 1e-8


def _check_table(d: int, table: ProbTable, scheme: Scheme) -> ProbTable:
    if table.scheme != scheme:
        raise PuebError(f"expected a {scheme} table, got {table.scheme}")
    if table.dim != d:
        raise PuebError(f"table dimension {table.dim} does not match d={d}")
    present = set(table.keys())
    missing = [setting.key for setting in settings_for(d, scheme) if setting.key not in present]
    if missing:
        raise MissingSettingsError(missing)
    return table.validated()


def _projector_term(
    d: int, table: ProbTable, setting: MeasurementSetting, scheme: Scheme, field: Optional[Field]
) -> np.ndarray:
    basis = basis_for_setting(d, setting, scheme, field)
    probs = table.probabilities(setting.key)
    if probs.size != basis.shape[1]:
        raise PuebError(
            f"setting {setting.key} has {probs.size} outcomes, expected {basis.shape[1]}"
        )
    return weighted_projector_sum(basis, probs)


def _flag(rho: np.ndarray) -> DensityMatrix:
    result = DensityMatrix(rho, validate=False)
    if result.hermiticity_error() > HERMITICITY_FLAG:
        logger.warning("Reconstruction is not Hermitian: error %.3e", result.hermiticity_error())
    return result


def reconstruct_single(d: int, table: ProbTable, field: Optional[Field] = None) -> DensityMatrix:
    """Single-particle reconstruction from d+1 MUB settings."""

    table = _check_table(d, table, "single")
    rho = -np.eye(d, dtype=complex)
    for setting in settings_for(d, "single"):
        rho += _projector_term(d, table, setting, "single", field)
    return _flag(rho)


def reconstruct_two(d: int, table: ProbTable) -> DensityMatrix:
    """Two-particle reconstruction from d^2 + d + 1 settings."""

    table = _check_table(d, table, "two_partite")
    rho = -np.eye(d * d, dtype=complex)
    for setting in settings_for(d, "two_partite"):
        weight = -(d - 1) if setting.kind == "computational" else 1
        rho += weight * _projector_term(d, table, setting, "two_partite", None)
    return _flag(rho)


def reconstruct(table: ProbTable, field: Optional[Field] = None) -> DensityMatrix:
    if table.scheme == "single":
        return reconstruct_single(table.dim, table, field)
    return reconstruct_two(table.dim, table)


def mix_tables(first: ProbTable, second: ProbTable, alpha: float) -> ProbTable:
    """alpha * first + (1 - alpha) * second, setting by setting."""

    if not 0.0 <= alpha <= 1.0:
        raise PuebError(f"mixing weight {alpha} outside [0, 1]")
    if (first.dim, first.scheme) != (second.dim, second.scheme):
        raise PuebError("tables differ in dimension or scheme")
    mixed = [
        SettingOutcomes(
            id=key,
            outcomes=(
                alpha * first.probabilities(key) + (1.0 - alpha) * second.probabilities(key)
            ).tolist(),
        )
        for key in first.keys()
    ]
    return first.model_copy(update={"settings": mixed})


def random_density_matrix(dim: int, rank: Optional[int] = None, seed: int = 0) -> DensityMatrix:
    """rho = G G^dagger / Tr(G G^dagger) for a dim x rank complex Gaussian G.

    ``rank=1`` gives a pure state and the default ``rank=dim`` a full-rank mixed one.
    G is drawn from ``numpy.random.default_rng(seed)``, real parts first.
    """

    rank = dim if rank is None else rank
    if not 1 <= rank <= dim:
        raise PuebError(f"rank {rank} outside 1..{dim}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    rho = rho / np.trace(rho).real
    return DensityMatrix((rho + rho.conj().T) / 2)


def diagnostics(
    estimate: DensityMatrix, truth: Optional[DensityMatrix] = None
) -> ReconstructionDiagnostics:
    return ReconstructionDiagnostics(
        hermiticity_error=estimate.hermiticity_error(),
        trace=estimate.trace(),
        min_eigenvalue=estimate.min_eigenvalue(),
        max_error=None if truth is None else estimate.distance(truth),
    )


def shot_noise_tolerance(d: int, shots: int) -> float:
    """Envelope 3 d^2 / sqrt(shots) for the max-norm error of a sampled reconstruction."""

    return 3.0 * d * d / np.sqrt(shots)
