"""Schwinger clock and shift operators as dense matrices.

Z|n> = omega^n |n>, X|n> = |n+1> with omega = exp(2 pi i / d), so ZX = omega XZ.
Monomials X^m Z^l are always the product in that order. Phases are carried as
integer exponents until a matrix is assembled.
"""

from __future__ import annotations

import logging
from typing import Union

import numpy as np

from ..errors import PuebError, UnsupportedDimensionError
from ..schemas import CanonicalMonomial, MonomialLabel
from ..utils.linalg import dagger, max_abs
from ..utils.phases import roots_of_unity
from .finite_field import Field, half, make_field

logger = logging.getLogger(__name__)

UnitaryMatrix = np.ndarray


def _check_dim(d: int) -> None:
    if d < 2:
        raise UnsupportedDimensionError(f"dimension {d} must be at least 2")


def build_X(d: int) -> UnitaryMatrix:
    """Cyclic shift X|n> = |n+1 mod d>."""

    _check_dim(d)
    return np.roll(np.eye(d, dtype=complex), 1, axis=0)


def build_Z(d: int) -> UnitaryMatrix:
    """Clock Z|n> = omega^n |n>."""

    _check_dim(d)
    return np.diag(roots_of_unity(d)).astype(complex)


def monomial(d: int, lab: MonomialLabel) -> UnitaryMatrix:
    """X^m Z^l, assembled entrywise: X^m Z^l |n> = omega^(l n) |n+m>."""

    _check_dim(d)
    n = np.arange(d)
    out = np.zeros((d, d), dtype=complex)
    out[(n + lab.m) % d, n] = roots_of_unity(d)[(lab.l * n) % d]
    return out


def xz_power(d: int, b: int, m: int) -> UnitaryMatrix:
    """(X Z^b)^m by repeated multiplication."""

    return np.linalg.matrix_power(monomial(d, MonomialLabel.reduced(d, 1, b)), m % d)


def power_phase_exponent(d: int, b: int, m: int) -> int:
    """Exponent k in (X Z^b)^m = omega^k X^m Z^(b m); k = b m (m-1) / 2."""

    return (b * (m * (m - 1) // 2)) % d


def hs_inner(a: UnitaryMatrix, b: UnitaryMatrix) -> complex:
    """Hilbert-Schmidt inner product Tr[A B^dagger]."""

    if a.shape != b.shape:
        raise PuebError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return complex(np.vdot(b, a))


def unitarity_error(u: UnitaryMatrix) -> float:
    return max_abs(u @ dagger(u) - np.eye(u.shape[0]))


def _prime_field(f: Union[Field, int]) -> Field:
    field = make_field(f) if isinstance(f, int) else f
    if field.n != 1:
        raise UnsupportedDimensionError(
            f"monomial classification is defined for prime dimensions only, got {field}"
        )
    return field


def canonical_form(f: Union[Field, int], lab: MonomialLabel) -> CanonicalMonomial:
    """Rewrite X^m Z^l as omega^nu (X Z^b)^m with b = l/m and nu = -(b/2) m (m-1)."""

    field = _prime_field(f)
    d = field.d
    if lab.m % d == 0:
        raise PuebError("canonical form needs m != 0; Z^l is its own family")
    m = field.from_int(lab.m)
    b = field.from_int(lab.l) / m
    nu = -half(field) * b * m * (m - 1)
    return CanonicalMonomial(b=b.index, m=lab.m % d, nu=nu.index)


def canonical_matrix(d: int, cm: CanonicalMonomial) -> UnitaryMatrix:
    """omega^nu (X Z^b)^m as a matrix."""

    return roots_of_unity(d)[cm.nu % d] * xz_power(d, cm.b, cm.m)


def field_shift(f: Field, a: int) -> UnitaryMatrix:
    """Translation X_a|m> = |m + a> on field-labelled basis states (a is an element index)."""

    out = np.zeros((f.d, f.d), dtype=complex)
    m = np.arange(f.d)
    out[f.add_table[m, a], m] = 1.0
    return out


def field_clock(f: Field, a: int) -> UnitaryMatrix:
    """Trace clock Z_a|m> = omega_p^tr[a m] |m> (a is an element index)."""

    traces = f.trace_table[f.mul_table[a, np.arange(f.d)]]
    return np.diag(roots_of_unity(f.p)[traces]).astype(complex)


def power_identity(d: int, b: int, m: int) -> float:
    """Max deviation of (X Z^b)^m from omega^(b m (m-1)/2) X^m Z^(b m)."""

    rhs = roots_of_unity(d)[power_phase_exponent(d, b, m)] * monomial(
        d, MonomialLabel.reduced(d, m, b * m)
    )
    return max_abs(xz_power(d, b, m) - rhs)
