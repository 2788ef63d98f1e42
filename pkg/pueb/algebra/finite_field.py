"""Arithmetic over GF(p) and GF(p^n) for odd primes p, backed by ``galois``.

Elements keep the ``galois`` integer representation: ``a0 + a1 x + ... `` has index
``sum(a_i * p**i)``, so enumerating indices in order runs the constant term fastest.
That is the order used for computational basis labels.

Irreducible moduli are fixed per (p, n) so every state built on top of a field is
reproducible:
    GF(9)  : x^2 + 1
    GF(27) : x^3 + 2x + 1
    GF(25) : x^2 + 2
    GF(49) : x^2 + 1
"""

from __future__ import annotations

import logging
import re
from functools import cached_property, lru_cache
from typing import Dict, Optional, Sequence, Tuple, Type, Union

import galois
import numpy as np

from ..config import get_settings
from ..errors import FieldMismatchError, PuebError, UnsupportedDimensionError

logger = logging.getLogger(__name__)

# Coefficients constant term first; galois.Poly wants them highest degree first.
IRREDUCIBLE_POLYS: Dict[Tuple[int, int], Tuple[int, ...]] = {
    (3, 2): (1, 0, 1),
    (3, 3): (1, 2, 0, 1),
    (5, 2): (2, 0, 1),
    (7, 2): (1, 0, 1),
}


def _galois_poly(poly: Sequence[int], p: int) -> galois.Poly:
    return galois.Poly(list(reversed([int(c) % p for c in poly])), field=galois.GF(p))


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Irreducibility over GF(p) of a polynomial given constant term first."""

    trimmed = list(poly)
    while trimmed and trimmed[-1] % p == 0:
        trimmed.pop()
    if len(trimmed) < 2:
        return False
    return bool(_galois_poly(trimmed, p).is_irreducible())


def _exceeds(p: int, n: int, max_dim: int) -> bool:
    """p**n > max_dim, decided without building p**n for huge exponents."""

    if p > max_dim or n > max_dim.bit_length():
        return True
    return p**n > max_dim


class Field:
    """Galois field GF(p^n) for odd prime p with a fixed monic modulus."""

    def __init__(self, p: int, n: int, modulus_poly: Tuple[int, ...]) -> None:
        self.p = p
        self.n = n
        self.modulus_poly = modulus_poly
        self.d = p**n
        if n == 1:
            self.gf: Type[galois.FieldArray] = galois.GF(p)
        else:
            self.gf = galois.GF(self.d, irreducible_poly=_galois_poly(modulus_poly, p))

    def __repr__(self) -> str:
        return f"GF({self.d})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Field):
            return NotImplemented
        return (self.p, self.n, self.modulus_poly) == (other.p, other.n, other.modulus_poly)

    def __hash__(self) -> int:
        return hash((self.p, self.n, self.modulus_poly))

    @property
    def name(self) -> str:
        """Dimension spec string, e.g. ``"3"`` or ``"3^2"``."""

        return str(self.p) if self.n == 1 else f"{self.p}^{self.n}"

    @property
    def zero(self) -> "FieldElement":
        return self.element(0)

    @property
    def one(self) -> "FieldElement":
        return self.element(1)

    def element(self, value: Union[int, Sequence[int]]) -> "FieldElement":
        """Element from its integer index or its coefficient vector (constant term first)."""

        if isinstance(value, (int, np.integer)):
            index = int(value)
            if not 0 <= index < self.d:
                raise PuebError(f"element index {index} outside 0..{self.d - 1}")
            return FieldElement(self, self.gf(index))
        coeffs = [int(c) % self.p for c in value]
        if len(coeffs) <= self.n:
            return FieldElement(self, self.gf(sum(c * self.p**k for k, c in enumerate(coeffs))))
        if self.n == 1:
            raise PuebError(f"GF({self.p}) elements take a single coefficient, got {len(coeffs)}")
        x = self.gf(self.p)
        total = self.gf(0)
        for c in reversed(coeffs):
            total = total * x + self.gf(c)
        return FieldElement(self, total)

    def from_int(self, value: int) -> "FieldElement":
        """Embed an integer into the prime subfield."""

        return FieldElement(self, self.gf(int(value) % self.p))

    def elements(self) -> Tuple["FieldElement", ...]:
        return self._elements

    @cached_property
    def _elements(self) -> Tuple["FieldElement", ...]:
        return tuple(self.element(k) for k in range(self.d))

    @cached_property
    def _array(self) -> galois.FieldArray:
        return self.gf(np.arange(self.d))

    @cached_property
    def add_table(self) -> np.ndarray:
        """d x d table of element indices for a + b."""

        x = self._array
        return _indices(x[:, np.newaxis] + x[np.newaxis, :])

    @cached_property
    def mul_table(self) -> np.ndarray:
        """d x d table of element indices for a * b."""

        x = self._array
        return _indices(x[:, np.newaxis] * x[np.newaxis, :])

    @cached_property
    def trace_table(self) -> np.ndarray:
        """Field trace of every element, as integers mod p, by element index."""

        return _indices(self._array.field_trace())


def _indices(values: galois.FieldArray) -> np.ndarray:
    return np.asarray(values.view(np.ndarray), dtype=np.int64)


class FieldElement:
    """Immutable element of a ``Field`` wrapping a scalar ``galois`` array."""

    __slots__ = ("owner", "value")

    def __init__(self, owner: Field, value: galois.FieldArray) -> None:
        self.owner = owner
        self.value = value

    def __repr__(self) -> str:
        if self.owner.n == 1:
            return f"{self.index}"
        terms = [
            (str(c) if k == 0 else f"{'' if c == 1 else c}x{'' if k == 1 else f'^{k}'}")
            for k, c in enumerate(self.coeffs)
            if c
        ]
        return " + ".join(reversed(terms)) or "0"

    @property
    def index(self) -> int:
        return int(self.value)

    @property
    def coeffs(self) -> Tuple[int, ...]:
        """Coefficients constant term first, padded to the extension degree."""

        digits, rest = [], self.index
        for _ in range(self.owner.n):
            rest, digit = divmod(rest, self.owner.p)
            digits.append(digit)
        return tuple(digits)

    def is_zero(self) -> bool:
        return self.index == 0

    def _coerce(self, other: object) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.owner != self.owner:
                raise FieldMismatchError(f"cannot combine {self.owner} and {other.owner} elements")
            return other
        if isinstance(other, (int, np.integer)):
            return self.owner.from_int(int(other))
        raise TypeError(f"unsupported operand type {type(other).__name__}")

    def _wrap(self, value: galois.FieldArray) -> "FieldElement":
        return FieldElement(self.owner, value)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, np.integer)):
            other = self.owner.from_int(int(other))
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.owner == other.owner and self.index == other.index

    def __hash__(self) -> int:
        return hash((self.owner, self.index))

    def __add__(self, other: object) -> "FieldElement":
        return self._wrap(self.value + self._coerce(other).value)

    __radd__ = __add__

    def __neg__(self) -> "FieldElement":
        return self._wrap(-self.value)

    def __sub__(self, other: object) -> "FieldElement":
        return self._wrap(self.value - self._coerce(other).value)

    def __rsub__(self, other: object) -> "FieldElement":
        return self._coerce(other) - self

    def __mul__(self, other: object) -> "FieldElement":
        return self._wrap(self.value * self._coerce(other).value)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "FieldElement":
        if exponent < 0 and self.is_zero():
            raise ZeroDivisionError("zero has no multiplicative inverse")
        return self._wrap(self.value ** int(exponent))

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("zero has no multiplicative inverse")
        return self._wrap(np.reciprocal(self.value))

    def __truediv__(self, other: object) -> "FieldElement":
        return self * self._coerce(other).inverse()


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def neg(a: FieldElement) -> FieldElement:
    return -a


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def half(f: Field) -> FieldElement:
    """The solution of 2x = 1, which lies in the prime subfield."""

    return f.from_int((f.p + 1) // 2)


def field_trace(a: FieldElement) -> int:
    """tr[a] = a + a^p + ... + a^(p^(n-1)), reported as an integer mod p."""

    return int(a.value.field_trace())


@lru_cache(maxsize=None)
def _build_field(p: int, n: int, modulus_poly: Tuple[int, ...]) -> Field:
    logger.debug("Building GF(%d^%d) with modulus %s", p, n, modulus_poly)
    return Field(p, n, modulus_poly)


def make_field(p: int, n: int = 1, modulus_poly: Optional[Sequence[int]] = None) -> Field:
    """Return GF(p^n) with a fixed modulus polynomial.

    ``modulus_poly`` (constant term first, monic) overrides the built-in table and
    is checked for irreducibility.
    """

    if n < 1:
        raise UnsupportedDimensionError(f"extension degree n={n} must be positive")
    max_dim = get_settings().max_dim
    if _exceeds(p, n, max_dim):
        raise UnsupportedDimensionError(f"dimension {p}^{n} exceeds PUEB_MAX_DIM={max_dim}")
    if p % 2 == 0 or not galois.is_prime(p):
        raise UnsupportedDimensionError(f"p={p} must be an odd prime")
    if n == 1:
        return _build_field(p, 1, (0, 1))
    if modulus_poly is None:
        if (p, n) not in IRREDUCIBLE_POLYS:
            raise UnsupportedDimensionError(
                f"no built-in irreducible polynomial for GF({p}^{n}); pass modulus_poly"
            )
        poly = IRREDUCIBLE_POLYS[(p, n)]
    else:
        poly = tuple(int(c) % p for c in modulus_poly)
        if len(poly) != n + 1 or poly[-1] != 1:
            raise PuebError(f"modulus must be monic of degree {n}")
        if not is_irreducible(poly, p):
            raise PuebError(f"modulus {poly} is reducible over GF({p})")
    return _build_field(p, n, poly)


_DIM_SPEC = re.compile(r"^\s*(\d+)\s*(?:\^\s*(\d+))?\s*$")


def parse_dim_spec(spec: str) -> Field:
    """Parse ``"p"``, ``"p^n"`` or a prime-power integer such as ``"9"``.

    The ``PUEB_MAX_DIM`` cap is applied before any factoring.
    """

    match = _DIM_SPEC.match(spec)
    if not match:
        raise UnsupportedDimensionError(f"cannot parse dimension {spec!r}")
    base = int(match.group(1))
    if match.group(2) is not None:
        return make_field(base, int(match.group(2)))
    max_dim = get_settings().max_dim
    if base > max_dim:
        raise UnsupportedDimensionError(f"dimension {base} exceeds PUEB_MAX_DIM={max_dim}")
    if base < 2 or not galois.is_prime_power(base):
        raise UnsupportedDimensionError(f"{base} is not a prime power")
    (p,), (n,) = galois.factors(base)
    return make_field(int(p), int(n))
