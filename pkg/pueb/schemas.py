"""Pydantic schemas for labels, verification reports and file formats."""

from __future__ import annotations

import json
from typing import Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .errors import InvalidProbabilitiesError

ComplexPair = Tuple[float, float]
FORMAT_VERSION = 1


def complex_pair(z: complex) -> ComplexPair:
    """Return ``z`` as a JSON-friendly ``(re, im)`` pair."""

    return (float(np.real(z)), float(np.imag(z)))


class _Label(BaseModel):
    model_config = ConfigDict(frozen=True)


class MonomialLabel(_Label):
    """Exponent pair (m, l) of the single-particle monomial X^m Z^l."""

    m: int = Field(..., ge=0)
    l: int = Field(..., ge=0)

    @classmethod
    def reduced(cls, d: int, m: int, l: int) -> "MonomialLabel":
        return cls(m=m % d, l=l % d)


class CanonicalMonomial(_Label):
    """Phase-canonical form X^m Z^l = omega^nu (X Z^b)^m."""

    b: int = Field(..., ge=0)
    m: int = Field(..., ge=1)
    nu: int = Field(..., ge=0)


class TwoPartyLabel(_Label):
    """Exponents of (X^m1 Z^l1)_mu (X^m2 Z^l2)_nu."""

    m1: int = Field(..., ge=0)
    l1: int = Field(..., ge=0)
    m2: int = Field(..., ge=0)
    l2: int = Field(..., ge=0)

    @classmethod
    def reduced(cls, d: int, m1: int, l1: int, m2: int, l2: int) -> "TwoPartyLabel":
        return cls(m1=m1 % d, l1=l1 % d, m2=m2 % d, l2=l2 % d)


FamilyVariant = Literal["both_x", "z_left", "z_right", "both_z"]


class FamilyTag(_Label):
    """Family of a two-particle monomial.

    ``both_x`` carries (b1, b2, m1, m2); ``z_left`` carries (b1, b2, m2);
    ``z_right`` carries (b1, m1, b2); ``both_z`` carries (b1, b2).
    """

    variant: FamilyVariant
    b1: int
    b2: int
    m1: Optional[int] = None
    m2: Optional[int] = None


class EntangledLabel(_Label):
    """Label |b, s; c1, c2> of an entangled basis state."""

    b: int = Field(..., ge=0)
    s: int = Field(..., ge=0)
    c1: int = Field(..., ge=0)
    c2: int = Field(..., ge=0)


class DeviationReport(BaseModel):
    """Maximum deviation of a numerical check against its tolerance."""

    max_dev: float
    tolerance: float
    passed: bool

    @classmethod
    def against(cls, max_dev: float, tolerance: float) -> "DeviationReport":
        return cls(max_dev=float(max_dev), tolerance=tolerance, passed=bool(max_dev < tolerance))


class EigenReport(BaseModel):
    """Measured eigenvalues of Z^s_mu Z^-1_nu and X_mu (X^s Z^sb)_nu on one entangled state."""

    label: EntangledLabel
    eig1: ComplexPair
    eig2: ComplexPair
    eig1_exponent: int
    eig2_exponent: int
    residual1: float
    residual2: float
    expected_eig1_exponent: int
    claimed_eig2_exponent: int
    derived_eig2_exponent: int
    claim_holds: bool
    passed: bool


class OverlapReport(BaseModel):
    """Maximum deviation from the predicted overlap magnitude, binned by case."""

    d: int
    case_same: float
    case_s_equal: float
    case_full: float
    pair_counts: Dict[str, int]
    passed: bool


class ProjectionResult(BaseModel):
    """Outcome of contracting one particle of an entangled state with a MUB bra."""

    target_b: int
    target_c: int
    phase: ComplexPair
    max_dev: float
    passed: bool
    labels_differ: bool


class ClusterReport(BaseModel):
    """Commutation and orthogonality of one (s, b) operator cluster."""

    s: int
    b: int
    size: int
    max_commutator: float
    max_hs_offdiag: float
    max_hs_diag_dev: float
    max_offdiag_in_basis: float
    passed: bool


class PartitionReport(BaseModel):
    """Assignment of all d^4 two-particle monomials to families."""

    d: int
    family_sizes: Dict[str, int]
    expected_sizes: Dict[str, int]
    z_partition_sizes: Dict[str, int]
    total: int
    reparameterization_bijective: bool
    clusters: List[ClusterReport] = Field(default_factory=list)
    failures: List[str] = Field(default_factory=list)
    passed: bool


class IncidenceReport(BaseModel):
    """Pairs (b, b1) for which the projected label b - b1 coincides with b1."""

    d: int
    pairs_checked: int
    coinciding: List[Tuple[int, int]] = Field(default_factory=list)


class CheckResult(BaseModel):
    """Single row of a run report."""

    name: str
    max_deviation: float
    tolerance: float
    passed: bool

    @classmethod
    def evaluate(cls, name: str, max_deviation: float, tolerance: float) -> "CheckResult":
        return cls(
            name=name,
            max_deviation=float(max_deviation),
            tolerance=tolerance,
            passed=bool(max_deviation < tolerance),
        )


class RunReport(BaseModel):
    """Result of one command-line invocation."""

    command: str
    dim: int
    checks: List[CheckResult] = Field(default_factory=list)
    counts: Optional[Dict[str, int]] = None
    wall_time_ms: int = 0

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def to_json(self) -> str:
        payload = self.model_dump(mode="json", exclude_none=True)
        payload["passed"] = self.passed
        return json.dumps(payload, sort_keys=True)


class SettingOutcomes(BaseModel):
    """Outcome distribution of one measurement setting."""

    id: str
    outcomes: List[float]


class ProbTable(BaseModel):
    """Measurement setting -> outcome probabilities, the input of every reconstruction.

    ``dim`` is the single-particle dimension d; two-partite settings carry d^2 outcomes.
    """

    format: int = FORMAT_VERSION
    dim: int
    scheme: Literal["single", "two_partite"]
    settings: List[SettingOutcomes] = Field(default_factory=list)

    def keys(self) -> List[str]:
        return [entry.id for entry in self.settings]

    def probabilities(self, key: str) -> np.ndarray:
        for entry in self.settings:
            if entry.id == key:
                return np.asarray(entry.outcomes, dtype=float)
        raise KeyError(key)

    def validated(self, *, clip: float = 1e-12, sum_tol: float = 1e-10) -> "ProbTable":
        """Return a copy with round-off negatives clipped to zero.

        Raises ``InvalidProbabilitiesError`` for negatives below ``-clip``, values above one
        or distributions that do not sum to one within ``sum_tol``.
        """

        cleaned = []
        for entry in self.settings:
            probs = np.asarray(entry.outcomes, dtype=float)
            if probs.size and probs.min() < -clip:
                raise InvalidProbabilitiesError(
                    f"setting {entry.id} has probability {probs.min():.3e} below zero"
                )
            if probs.size and probs.max() > 1.0 + clip:
                raise InvalidProbabilitiesError(f"setting {entry.id} has probability above one")
            if abs(probs.sum() - 1.0) > sum_tol:
                raise InvalidProbabilitiesError(
                    f"setting {entry.id} sums to {probs.sum():.12f}, expected 1"
                )
            probs = np.clip(probs, 0.0, None)
            cleaned.append(SettingOutcomes(id=entry.id, outcomes=probs.tolist()))
        return self.model_copy(update={"settings": cleaned})


class BasisRecord(BaseModel):
    """Export format for single-particle and entangled bases."""

    format: int = FORMAT_VERSION
    dim: int
    label: str
    b: Optional[int] = None
    s: Optional[int] = None
    tensor: Optional[str] = None
    root_order: Optional[int] = None
    states: List[List[ComplexPair]]
    phase_exps: Optional[List[List[int]]] = None


class DensityMatrixRecord(BaseModel):
    """Export format for density matrices: dim*dim entries, row-major."""

    format: int = FORMAT_VERSION
    dim: int
    entries: List[ComplexPair]


class Manifest(BaseModel):
    """Index of the files written by ``mub-gen``."""

    format: int = FORMAT_VERSION
    dim: int
    field: str
    modulus_poly: Optional[List[int]] = None
    files: List[str] = Field(default_factory=list)


class ReconstructionDiagnostics(BaseModel):
    """Physicality of a reconstructed matrix; noisy reconstructions are reported raw."""

    hermiticity_error: float
    trace: float
    min_eigenvalue: float
    max_error: Optional[float] = None
