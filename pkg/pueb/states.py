"""State carriers: pure state vectors and density matrices."""

from __future__ import annotations

from typing import Optional

import numpy as np

from .errors import PuebError
from .utils.linalg import dagger, frozen, max_abs
from .utils.phases import phase_vector


class StateVector:
    """Unit vector of complex amplitudes.

    When every amplitude is ``omega**k / sqrt(dim)`` with omega a root of unity of
    order ``root_order``, the integer exponents are kept in ``phase_exps``.
    """

    __slots__ = ("amps", "phase_exps", "root_order")

    def __init__(
        self,
        amps: np.ndarray,
        phase_exps: Optional[np.ndarray] = None,
        root_order: Optional[int] = None,
    ) -> None:
        self.amps = frozen(np.array(amps, dtype=complex))
        self.phase_exps = None if phase_exps is None else frozen(np.array(phase_exps, dtype=np.int64))
        self.root_order = root_order

    @classmethod
    def from_phase_exponents(cls, exponents: np.ndarray, root_order: int) -> "StateVector":
        exponents = np.mod(np.asarray(exponents, dtype=np.int64), root_order)
        amps = phase_vector(exponents, root_order) / np.sqrt(exponents.size)
        return cls(amps, exponents, root_order)

    @property
    def dim(self) -> int:
        return int(self.amps.size)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def inner(self, other: "StateVector") -> complex:
        """<self|other>."""

        return complex(np.vdot(self.amps, other.amps))

    def __repr__(self) -> str:
        return f"StateVector(dim={self.dim})"


class DensityMatrix:
    """Operator on a dim-dimensional space; physical ones are Hermitian, unit-trace and PSD.

    Reconstructions from noisy data are wrapped without validation and expose
    their defects through the diagnostic methods.
    """

    __slots__ = ("entries",)

    def __init__(self, entries: np.ndarray, *, validate: bool = True, atol: float = 1e-10) -> None:
        entries = np.array(entries, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise PuebError(f"density matrix must be square, got shape {entries.shape}")
        self.entries = frozen(entries)
        if validate:
            if self.hermiticity_error() > atol:
                raise PuebError("density matrix is not Hermitian")
            if abs(self.trace() - 1.0) > atol:
                raise PuebError(f"density matrix has trace {self.trace():.12f}")
            if self.min_eigenvalue() < -atol:
                raise PuebError("density matrix is not positive semidefinite")

    @classmethod
    def from_state(cls, psi: StateVector) -> "DensityMatrix":
        return cls(np.outer(psi.amps, psi.amps.conj()))

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])

    def trace(self) -> float:
        return float(np.real(np.trace(self.entries)))

    def hermiticity_error(self) -> float:
        return max_abs(self.entries - dagger(self.entries))

    def min_eigenvalue(self) -> float:
        hermitian_part = (self.entries + dagger(self.entries)) / 2
        return float(np.linalg.eigvalsh(hermitian_part).min())

    def distance(self, other: "DensityMatrix") -> float:
        """Max-norm distance between entries."""

        return max_abs(self.entries - other.entries)

    def __repr__(self) -> str:
        return f"DensityMatrix(dim={self.dim})"
