from __future__ import annotations

from collections import Counter

import pytest

from pueb.algebra.finite_field import (
    add,
    field_trace,
    half,
    inv,
    is_irreducible,
    make_field,
    mul,
    neg,
    parse_dim_spec,
)
from pueb.errors import FieldMismatchError, PuebError, UnsupportedDimensionError


@pytest.mark.parametrize("p,n", [(3, 1), (5, 1), (3, 2), (5, 2), (3, 3), (7, 2)])
def test_every_nonzero_element_has_an_inverse(p: int, n: int) -> None:
    f = make_field(p, n)
    for a in f.elements()[1:]:
        assert a * inv(a) == f.one


def test_zero_has_no_inverse() -> None:
    with pytest.raises(ZeroDivisionError):
        inv(make_field(3, 2).zero)


def test_gf9_multiplication_follows_modulus() -> None:
    f = make_field(3, 2)
    x = f.element([0, 1])
    assert x.index == 3
    assert (x * x).index == 2
    assert f.mul_table[3, 3] == 2
    assert x**8 == f.one


@pytest.mark.parametrize("p,n", [(3, 1), (7, 1), (3, 2), (5, 2), (3, 3)])
def test_half_solves_two_x_equals_one(p: int, n: int) -> None:
    f = make_field(p, n)
    assert half(f) * 2 == f.one
    assert half(f) + half(f) == f.one


def test_trace_values_in_gf9() -> None:
    f = make_field(3, 2)
    assert field_trace(f.one) == 2
    assert field_trace(f.element([0, 1])) == 0


@pytest.mark.parametrize("p,n", [(3, 2), (5, 2), (3, 3), (7, 2)])
def test_trace_is_additive_and_balanced(p: int, n: int) -> None:
    f = make_field(p, n)
    elems = f.elements()
    for a in elems[:: max(1, f.d // 7)]:
        for b in elems[:: max(1, f.d // 5)]:
            assert field_trace(a + b) == (field_trace(a) + field_trace(b)) % p
    counts = Counter(int(t) for t in f.trace_table)
    assert counts == {value: f.d // p for value in range(p)}


def test_prime_field_trace_is_identity() -> None:
    f = make_field(7)
    assert [field_trace(a) for a in f.elements()] == list(range(7))


def test_irreducibility_check() -> None:
    assert is_irreducible((1, 0, 1), 3)
    assert not is_irreducible((2, 0, 1), 3)
    assert not is_irreducible((1, 1, 1), 3)
    assert is_irreducible((1, 2, 0, 1), 3)


def test_custom_modulus_must_be_irreducible() -> None:
    f = make_field(3, 2, modulus_poly=[2, 1, 1])
    assert f.d == 9
    with pytest.raises(PuebError):
        make_field(3, 2, modulus_poly=[2, 0, 1])


def test_mixing_fields_is_rejected() -> None:
    with pytest.raises(FieldMismatchError):
        make_field(3, 2).one + make_field(3).one


@pytest.mark.parametrize(
    "spec,expected",
    [("3", (3, 1)), ("3^2", (3, 2)), ("9", (3, 2)), ("27", (3, 3)), (" 5 ^ 2 ", (5, 2))],
)
def test_parse_dim_spec(spec: str, expected: tuple) -> None:
    f = parse_dim_spec(spec)
    assert (f.p, f.n) == expected


@pytest.mark.parametrize("spec", ["4", "2", "6", "2^3", "abc", "3^0"])
def test_parse_dim_spec_rejects(spec: str) -> None:
    with pytest.raises(UnsupportedDimensionError):
        parse_dim_spec(spec)


def test_max_dim_caps_field_construction(settings_factory) -> None:
    settings_factory(PUEB_MAX_DIM=10)
    assert make_field(3, 2).d == 9
    with pytest.raises(UnsupportedDimensionError):
        make_field(5, 2)


def test_named_arithmetic_examples() -> None:
    gf3, gf5 = make_field(3), make_field(5)
    assert inv(gf3.from_int(2)) == gf3.from_int(2)
    assert inv(gf5.from_int(3)) == gf5.from_int(2)
    assert half(gf3).index == 2 and half(gf5).index == 3
    gf9 = make_field(3, 2)
    x = gf9.element([0, 1])
    assert mul(x, x) == neg(gf9.one)
    assert add(x, neg(x)) == gf9.zero
    assert half(gf9).coeffs == (2, 0)


@pytest.mark.parametrize("p,n", [(3, 1), (5, 1), (3, 2)])
def test_inverse_of_product(p: int, n: int) -> None:
    f = make_field(p, n)
    nonzero = f.elements()[1:]
    for a in nonzero:
        for b in nonzero:
            assert inv(mul(a, b)) == mul(inv(a), inv(b))


@pytest.mark.parametrize("p,n", [(3, 2), (5, 2), (3, 3), (7, 2)])
def test_trace_is_frobenius_invariant(p: int, n: int) -> None:
    f = make_field(p, n)
    for a in f.elements():
        assert field_trace(a**p) == field_trace(a)


def test_gf9_trace_is_additive_exhaustively() -> None:
    f = make_field(3, 2)
    for a in f.elements():
        for b in f.elements():
            assert field_trace(add(a, b)) == (field_trace(a) + field_trace(b)) % 3


def test_element_index_is_galois_integer_representation() -> None:
    f = make_field(3, 2)
    assert f.element([2, 1]).index == 5
    assert int(f.element([2, 1]).value) == int(f.gf(5))
    assert f.element(7).coeffs == (1, 2)
    assert f.element([0, 0, 1]) == neg(f.one)


@pytest.mark.parametrize("spec", ["2147483647", "100000007", "3^100000000", "49^2"])
def test_parse_dim_spec_caps_before_factoring(spec: str) -> None:
    with pytest.raises(UnsupportedDimensionError, match="PUEB_MAX_DIM"):
        parse_dim_spec(spec)
