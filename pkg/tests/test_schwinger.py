from __future__ import annotations

import itertools

import numpy as np
import pytest

from pueb.algebra.finite_field import make_field
from pueb.algebra.schwinger import (
    build_X,
    build_Z,
    canonical_form,
    canonical_matrix,
    field_clock,
    field_shift,
    hs_inner,
    monomial,
    power_identity,
    unitarity_error,
)
from pueb.errors import PuebError, UnsupportedDimensionError
from pueb.schemas import MonomialLabel
from pueb.utils.phases import omega, roots_of_unity


@pytest.mark.parametrize("d", [3, 5, 7])
def test_clock_and_shift_commutation(d: int) -> None:
    x, z = build_X(d), build_Z(d)
    assert np.allclose(z @ x, omega(d) * x @ z, atol=1e-12)
    assert np.allclose(np.linalg.matrix_power(x, d), np.eye(d), atol=1e-12)
    assert np.allclose(np.linalg.matrix_power(z, d), np.eye(d), atol=1e-12)


def test_shift_moves_basis_states() -> None:
    x = build_X(5)
    assert x[1, 0] == 1 and x[0, 4] == 1


@pytest.mark.parametrize("d", [3, 5])
def test_monomials_are_hilbert_schmidt_orthogonal(d: int) -> None:
    ops = [monomial(d, MonomialLabel(m=m, l=l)) for m in range(d) for l in range(d)]
    for (i, a), (j, b) in itertools.product(enumerate(ops), repeat=2):
        expected = d if i == j else 0.0
        assert abs(hs_inner(a, b) - expected) < 1e-12
    assert max(unitarity_error(u) for u in ops) < 1e-12


def test_monomial_matches_matrix_product() -> None:
    d = 7
    lab = MonomialLabel(m=3, l=5)
    expected = np.linalg.matrix_power(build_X(d), 3) @ np.linalg.matrix_power(build_Z(d), 5)
    assert np.allclose(monomial(d, lab), expected, atol=1e-12)


@pytest.mark.parametrize("d", [3, 5, 7])
def test_power_identity(d: int) -> None:
    assert max(power_identity(d, b, m) for b in range(d) for m in range(d)) < 1e-12


@pytest.mark.parametrize("d", [3, 5, 7])
def test_canonical_form_reproduces_monomial(d: int) -> None:
    f = make_field(d)
    for m, l in itertools.product(range(1, d), range(d)):
        lab = MonomialLabel(m=m, l=l)
        cm = canonical_form(f, lab)
        assert cm.m == m
        assert cm.b == (l * pow(m, d - 2, d)) % d
        assert np.abs(canonical_matrix(d, cm) - monomial(d, lab)).max() < 1e-12


def test_canonical_form_rejects_pure_clock_and_extension_fields() -> None:
    with pytest.raises(PuebError):
        canonical_form(3, MonomialLabel(m=0, l=1))
    with pytest.raises(UnsupportedDimensionError):
        canonical_form(make_field(3, 2), MonomialLabel(m=1, l=1))


def test_hs_inner_rejects_shape_mismatch() -> None:
    with pytest.raises(PuebError):
        hs_inner(np.eye(3), np.eye(5))


def test_field_operators_satisfy_weyl_relation() -> None:
    f = make_field(3, 2)
    w = roots_of_unity(3)
    for a, c in itertools.product(range(f.d), repeat=2):
        za, xc = field_clock(f, a), field_shift(f, c)
        phase = w[f.trace_table[f.mul_table[a, c]]]
        assert np.abs(za @ xc - phase * xc @ za).max() < 1e-12
        assert unitarity_error(xc) < 1e-12


def test_dimension_below_two_is_rejected() -> None:
    with pytest.raises(UnsupportedDimensionError):
        build_X(1)
