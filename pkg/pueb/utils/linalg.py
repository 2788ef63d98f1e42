"""Small dense linear-algebra helpers shared by the basis and tomography modules."""

from __future__ import annotations

from typing import Literal, Tuple

import numpy as np

Particle = Literal["mu", "nu"]


def frozen(array: np.ndarray) -> np.ndarray:
    """Mark ``array`` read-only and return it."""

    array.flags.writeable = False
    return array


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def max_abs(a: np.ndarray) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def weighted_projector_sum(columns: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Sum_k w_k |v_k><v_k| for the columns v_k of ``columns``."""

    return (columns * np.asarray(weights)[None, :]) @ dagger(columns)


def partial_trace(rho: np.ndarray, d: int, keep: Particle) -> np.ndarray:
    """Reduce a d^2 x d^2 operator with index (n*d + k) <-> |n>_mu |k>_nu to one particle."""

    tensor = np.asarray(rho).reshape(d, d, d, d)
    if keep == "mu":
        return np.einsum("ikjk->ij", tensor)
    return np.einsum("kikj->ij", tensor)


def align_phase(vec: np.ndarray, ref: np.ndarray, atol: float = 1e-12) -> Tuple[complex, float]:
    """Fit ``vec`` to a phase multiple of ``ref``.

    The phase is read off at the first nonzero amplitude of ``ref``; returns that
    phase and the max deviation of ``vec`` from ``phase * ref``.
    """

    ref = np.asarray(ref)
    vec = np.asarray(vec)
    nonzero = np.flatnonzero(np.abs(ref) > atol)
    if nonzero.size == 0:
        return 1.0 + 0j, max_abs(vec)
    k = nonzero[0]
    ratio = vec[k] / ref[k]
    magnitude = abs(ratio)
    phase = ratio / magnitude if magnitude > atol else 1.0 + 0j
    return complex(phase), max_abs(vec - phase * ref)
