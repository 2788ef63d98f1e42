"""Roots of unity and integer phase exponents."""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def roots_of_unity(order: int) -> np.ndarray:
    """Read-only array ``[omega**k for k in range(order)]`` with omega = exp(2 pi i / order)."""

    roots = np.exp(2j * np.pi * np.arange(order) / order)
    roots.flags.writeable = False
    return roots


def omega(order: int) -> complex:
    return complex(roots_of_unity(order)[1 % order])


def phase_vector(exponents: np.ndarray, order: int) -> np.ndarray:
    """Map integer exponents to omega**exponent, reducing mod ``order`` first."""

    return roots_of_unity(order)[np.mod(np.asarray(exponents, dtype=np.int64), order)]


def nearest_exponent(z: complex, order: int) -> int:
    """Exponent k with omega**k closest to ``z``."""

    return int(np.rint(np.angle(z) * order / (2 * np.pi))) % order
