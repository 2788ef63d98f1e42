"""The d+1 mutually unbiased bases of an odd prime or odd prime power dimension.

For prime d the structured bases are

    |b;c> = d^-1/2 sum_n omega^((b/2) n (n-1) - c n) |n>,

the eigenbasis of X Z^b with eigenvalues omega^c. For d = p^n the labels are
field elements and

    |b;c> = d^-1/2 sum_n omega_p^tr[(b/2) n^2 + c n] |n>.

Bases are built from these closed forms; no eigensolver is involved. The
coefficient of |0> is always +1/sqrt(d).
"""

from __future__ import annotations

import logging
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple, Union

import galois
import numpy as np

from ..algebra.finite_field import Field, FieldElement, half, make_field
from ..algebra.schwinger import build_Z, monomial, xz_power
from ..config import get_settings
from ..errors import FieldMismatchError, UnsupportedDimensionError
from ..schemas import DeviationReport, MonomialLabel
from ..states import StateVector
from ..utils.linalg import align_phase, dagger, max_abs

logger = logging.getLogger(__name__)

ElementLike = Union[FieldElement, int]


class MubBasis:
    """Orthonormal basis; ``label`` is None for the computational basis, else b.

    For prime powers ``label`` is the element index of b in ``field``.
    """

    __slots__ = ("label", "states", "field")

    def __init__(
        self, label: Optional[int], states: Sequence[StateVector], field: Optional[Field] = None
    ) -> None:
        self.label = label
        self.states = tuple(states)
        self.field = field

    @property
    def dim(self) -> int:
        return self.states[0].dim

    @property
    def is_computational(self) -> bool:
        return self.label is None

    @property
    def name(self) -> str:
        return "computational" if self.label is None else f"b={self.label}"

    def matrix(self) -> np.ndarray:
        """States as the columns of a dim x dim matrix."""

        return np.column_stack([psi.amps for psi in self.states])

    def gram(self) -> np.ndarray:
        v = self.matrix()
        return dagger(v) @ v

    def __len__(self) -> int:
        return len(self.states)

    def __repr__(self) -> str:
        return f"MubBasis({self.name}, dim={self.dim})"


class SpectralData:
    """Eigenphases W[alpha][nu] = <nu|U_alpha|nu> of d commuting unitaries over one basis."""

    __slots__ = ("basis", "eigenphases", "offdiag_residual")

    def __init__(self, basis: MubBasis, eigenphases: np.ndarray, offdiag_residual: float) -> None:
        self.basis = basis
        self.eigenphases = eigenphases
        self.offdiag_residual = offdiag_residual


def _require_odd_prime(d: int) -> None:
    if d % 2 == 0 or not galois.is_prime(d):
        raise UnsupportedDimensionError(
            f"d={d} is not an odd prime; use the prime-power constructors for d = p^n"
        )


def _index(f: Field, value: ElementLike) -> int:
    if isinstance(value, FieldElement):
        if value.owner != f:
            raise FieldMismatchError(f"element of {value.owner} used as a label in {f}")
        return value.index
    return int(value) % f.d


def mub_phase_exponents(d: int, b: int, c: int) -> np.ndarray:
    """Exponents (b/2) n (n-1) - c n mod d for n = 0..d-1."""

    h = (d + 1) // 2
    n = np.arange(d, dtype=np.int64)
    return np.mod(h * b * n * (n - 1) - c * n, d)


def mub_state(d: int, b: int, c: int) -> StateVector:
    _require_odd_prime(d)
    return StateVector.from_phase_exponents(mub_phase_exponents(d, b % d, c % d), d)


def mub_state_pp(f: Field, b: ElementLike, c: ElementLike) -> StateVector:
    """Field-trace MUB state over the d field-labelled computational states."""

    hb = (half(f) * f.element(_index(f, b))).index
    ci = _index(f, c)
    n = np.arange(f.d)
    squares = f.mul_table[n, n]
    argument = f.add_table[f.mul_table[hb, squares], f.mul_table[ci, n]]
    return StateVector.from_phase_exponents(f.trace_table[argument], f.p)


def computational_basis(d: int) -> MubBasis:
    eye = np.eye(d, dtype=complex)
    return MubBasis(None, [StateVector(eye[:, n]) for n in range(d)])


@lru_cache(maxsize=None)
def structured_basis(d: int, b: int) -> MubBasis:
    """Eigenbasis of X Z^b, states indexed by c."""

    return MubBasis(b % d, [mub_state(d, b, c) for c in range(d)])


@lru_cache(maxsize=None)
def structured_basis_pp(f: Field, b: int) -> MubBasis:
    return MubBasis(b, [mub_state_pp(f, b, c) for c in range(f.d)], field=f)


def all_mubs(d_or_field: Union[int, Field]) -> List[MubBasis]:
    """d structured bases (b = 0..d-1) followed by the computational basis.

    An int or a prime field uses the n(n-1) formula; an extension field uses the
    field-trace formula.
    """

    if isinstance(d_or_field, Field) and d_or_field.n > 1:
        f = d_or_field
        logger.debug("Building %d trace-based MUB for %s", f.d + 1, f)
        return [structured_basis_pp(f, b) for b in range(f.d)] + [computational_basis(f.d)]
    d = d_or_field.d if isinstance(d_or_field, Field) else int(d_or_field)
    _require_odd_prime(d)
    return [structured_basis(d, b) for b in range(d)] + [computational_basis(d)]


def _tolerance(tol: Optional[float]) -> float:
    return get_settings().loose_tol if tol is None else tol


def verify_unbiased(
    b1: MubBasis, b2: MubBasis, tol: Optional[float] = None
) -> DeviationReport:
    """Max | |<u|v>| - 1/sqrt(d) | over state pairs, or |G - I| when both are the same basis."""

    if b1.dim != b2.dim:
        raise UnsupportedDimensionError(f"bases differ in dimension: {b1.dim} vs {b2.dim}")
    overlaps = dagger(b1.matrix()) @ b2.matrix()
    if b1 is b2 or (b1.label == b2.label and b1.field == b2.field):
        max_dev = max_abs(overlaps - np.eye(b1.dim))
    else:
        max_dev = max_abs(np.abs(overlaps) - 1.0 / np.sqrt(b1.dim))
    return DeviationReport.against(max_dev, _tolerance(tol))


def resolves_identity(basis: MubBasis) -> float:
    """Max deviation of sum_c |b;c><b;c| from the identity."""

    v = basis.matrix()
    return max_abs(v @ dagger(v) - np.eye(basis.dim))


def spectral_data(basis: MubBasis, unitaries: Sequence[np.ndarray]) -> SpectralData:
    """Diagonal of each unitary in ``basis``; the first unitary should be the identity."""

    v = basis.matrix()
    table = np.empty((len(unitaries), basis.dim), dtype=complex)
    residual = 0.0
    for alpha, u in enumerate(unitaries):
        in_basis = dagger(v) @ u @ v
        table[alpha] = np.diag(in_basis)
        residual = max(residual, max_abs(in_basis - np.diag(np.diag(in_basis))))
    return SpectralData(basis, table, residual)


def structured_spectral_data(d: int, b: int) -> SpectralData:
    """Spectral data of U_alpha = (X Z^b)^alpha over the basis |b;c>."""

    return spectral_data(structured_basis(d, b), [xz_power(d, b, alpha) for alpha in range(d)])


def computational_spectral_data(d: int) -> SpectralData:
    """Spectral data of U_alpha = Z^alpha over the computational basis."""

    z = build_Z(d)
    return spectral_data(
        computational_basis(d), [np.linalg.matrix_power(z, alpha) for alpha in range(d)]
    )


def verify_completeness(sd: SpectralData, tol: Optional[float] = None) -> DeviationReport:
    """Check (1/d) sum_alpha W[alpha][nu] W[alpha][nu']* = delta(nu, nu').

    Unimodularity of W, W[0] = 1 and diagonality of the unitaries in the basis
    enter the same deviation.
    """

    w = sd.eigenphases
    d = w.shape[1]
    completeness = (w.T @ w.conj()) / d
    max_dev = max(
        max_abs(completeness - np.eye(d)),
        max_abs(np.abs(w) - 1.0),
        max_abs(w[0] - 1.0),
        sd.offdiag_residual,
    )
    return DeviationReport.against(max_dev, get_settings().strict_tol if tol is None else tol)


def relabel_match(d: int, b: int) -> Tuple[List[int], float]:
    """Match trace-formula states to n(n-1)-formula states for a prime d.

    Returns ``perm`` with ``mub_state(d, b, c) ~ mub_state_pp(GF(d), b, perm[c])`` up to
    a global phase, and the largest deviation seen. For prime d the match is
    perm[c] = -(b/2 + c) mod d.
    """

    f = make_field(d)
    target = structured_basis_pp(f, b)
    perm: List[int] = []
    worst = 0.0
    for psi in structured_basis(d, b).states:
        overlaps = [abs(psi.inner(phi)) for phi in target.states]
        best = int(np.argmax(overlaps))
        _, dev = align_phase(target.states[best].amps, psi.amps)
        perm.append(best)
        worst = max(worst, dev)
    return perm, worst


def density_from_operator_expansion(rho: np.ndarray) -> np.ndarray:
    """rho = (1/d) [ sum_{b, m>=1} Tr[rho (XZ^b)^m] ((XZ^b)^m)^dagger + sum_l Tr[rho Z^l] (Z^l)^dagger ].

    Works on amplitudes directly; used as an independent check of the
    probability-based reconstruction.
    """

    d = rho.shape[0]
    out = np.zeros((d, d), dtype=complex)
    for b in range(d):
        for m in range(1, d):
            u = xz_power(d, b, m)
            out += np.trace(rho @ u) * dagger(u)
    for l in range(d):
        u = monomial(d, MonomialLabel(m=0, l=l))
        out += np.trace(rho @ u) * dagger(u)
    return out / d

