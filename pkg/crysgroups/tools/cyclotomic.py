# Copyright 2025 The crysgroups Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Cyclotomic lattices K[xi_i] in the recursive basis B_i.

B_1 = (1, xi_1, ..., xi_1^(p-2)) and B_i = B_{i-1}, xi_i B_{i-1}, ...,
xi_i^(p-1) B_{i-1}, where xi_i^p = xi_{i-1}. Every matrix built by the
representation builders depends on this order, so it is fixed here.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from functools import lru_cache
from typing import Mapping, Sequence

from sympy import Poly, QQ, Symbol, cyclotomic_poly, isprime

from crysgroups.entities.matrix import CycloPayload
from crysgroups.shared_libraries.errors import (
    NotInvertibleError,
    ParameterError,
)
from crysgroups.tools.exact_linalg import Domain, ExactMatrix

logger = logging.getLogger(__name__)

T = Symbol("t")


def phi(p: int, i: int) -> int:
    """Euler phi of p^i."""
    return 1 if i == 0 else (p - 1) * p ** (i - 1)


def _check(p: int, i: int) -> None:
    if not isprime(p):
        raise ParameterError(f"{p} is not prime", "p must be prime")
    if i < 0:
        raise ParameterError(f"level {i} is negative", "level i >= 0")


@dataclass(frozen=True)
class CycloBasis:
    """Ordered basis B_i; each element is an exponent vector (e_1, ..., e_i)
    standing for xi_1^e_1 ... xi_i^e_i."""

    p: int
    level: int
    elements: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.elements)

    def exponent(self, index: int) -> int:
        """Exponent e with basis element `index` equal to xi_level^e."""
        tag = self.elements[index]
        i = self.level
        return sum(e * self.p ** (i - 1 - k) for k, e in enumerate(tag))


@lru_cache(maxsize=None)
def cyclo_basis(p: int, i: int) -> CycloBasis:
    """The ordered basis B_i of K[xi_i]; level 0 gives {1}."""
    _check(p, i)
    if i == 0:
        return CycloBasis(p, 0, ((),))
    if i == 1:
        return CycloBasis(p, 1, tuple((k,) for k in range(p - 1)))
    prev = cyclo_basis(p, i - 1).elements
    return CycloBasis(
        p, i, tuple(tag + (k,) for k in range(p) for tag in prev)
    )


@lru_cache(maxsize=None)
def _modulus(p: int, i: int) -> Poly:
    return Poly(cyclotomic_poly(p**i, T), T, domain=QQ)


@lru_cache(maxsize=None)
def _change_of_basis(p: int, i: int) -> tuple[ExactMatrix, ExactMatrix]:
    """Matrices taking B_i coordinates to power-basis coefficients and back.

    Column b of the first holds the coefficients of xi^exponent(b) reduced
    modulo the cyclotomic polynomial, lowest degree first.
    """
    basis = cyclo_basis(p, i)
    size = len(basis)
    modulus = _modulus(p, i)
    columns = []
    for b in range(size):
        reduced = Poly(T ** basis.exponent(b), T, domain=QQ).rem(modulus)
        coeffs = [int(c) for c in reversed(reduced.all_coeffs())]
        columns.append(coeffs + [0] * (size - len(coeffs)))
    to_power = ExactMatrix(columns, Domain.Z).transpose()
    return to_power, to_power.inverse()


@dataclass(frozen=True)
class CycloElement:
    """Element of Q(xi_level) stored by rational coordinates over B_level."""

    p: int
    level: int
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        _check(self.p, self.level)
        coords = tuple(Fraction(c) for c in self.coords)
        if len(coords) != phi(self.p, self.level):
            raise ParameterError(
                f"expected {phi(self.p, self.level)} coordinates, "
                f"got {len(coords)}",
                "coords length = phi(p^i)",
            )
        object.__setattr__(self, "coords", coords)

    @classmethod
    def zero(cls, p: int, i: int) -> "CycloElement":
        return cls(p, i, (0,) * phi(p, i))

    @classmethod
    def one(cls, p: int, i: int) -> "CycloElement":
        return cls(p, i, (1,) + (0,) * (phi(p, i) - 1))

    @classmethod
    def from_power(
        cls, p: int, i: int, coeffs: Mapping[int, Fraction | int]
    ) -> "CycloElement":
        """Element sum(c_e * xi_i^e) for an exponent-to-coefficient map."""
        _check(p, i)
        return cls._from_poly(p, i, _poly_from_coeffs(coeffs))

    @classmethod
    def xi(cls, p: int, i: int, k: int = 1) -> "CycloElement":
        """The power xi_i^k; negative k wraps modulo p^i."""
        return cls.from_power(p, i, {k % p**i: 1})

    @classmethod
    def _from_poly(cls, p: int, i: int, poly: Poly) -> "CycloElement":
        reduced = poly.rem(_modulus(p, i))
        coeffs = [Fraction(str(c)) for c in reversed(reduced.all_coeffs())]
        coeffs += [Fraction(0)] * (phi(p, i) - len(coeffs))
        _, from_power = _change_of_basis(p, i)
        return cls(p, i, from_power.apply(coeffs))

    def to_poly(self) -> Poly:
        """Power-basis polynomial in t of degree below phi(p^i)."""
        to_power, _ = _change_of_basis(self.p, self.level)
        coeffs = to_power.to_domain(Domain.Q).apply(self.coords)
        return _poly_from_coeffs(dict(enumerate(coeffs)))

    def _coerce(self, other) -> "CycloElement":
        if isinstance(other, CycloElement):
            if (other.p, other.level) != (self.p, self.level):
                raise ParameterError(
                    "elements of different cyclotomic fields",
                    "operands share p and level",
                )
            return other
        return CycloElement.one(self.p, self.level).scale(other)

    def __add__(self, other) -> "CycloElement":
        other = self._coerce(other)
        return CycloElement(
            self.p,
            self.level,
            tuple(a + b for a, b in zip(self.coords, other.coords)),
        )

    __radd__ = __add__

    def __neg__(self) -> "CycloElement":
        return CycloElement(self.p, self.level, tuple(-a for a in self.coords))

    def __sub__(self, other) -> "CycloElement":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "CycloElement":
        return self._coerce(other) - self

    def scale(self, c) -> "CycloElement":
        c = Fraction(c)
        return CycloElement(self.p, self.level, tuple(c * a for a in self.coords))

    def __mul__(self, other) -> "CycloElement":
        if not isinstance(other, CycloElement):
            return self.scale(other)
        other = self._coerce(other)
        return CycloElement(
            self.p,
            self.level,
            mult_matrix(self).apply(other.coords),
        )

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "CycloElement":
        base = self if k >= 0 else invert_cyclo(self)
        result = CycloElement.one(self.p, self.level)
        for _ in range(abs(k)):
            result = result * base
        return result

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def denominator(self) -> int:
        return lcm(*(c.denominator for c in self.coords))

    def mod_one(self) -> tuple[Fraction, ...]:
        """Coordinates reduced to [0, 1)."""
        return tuple(c - (c.numerator // c.denominator) for c in self.coords)

    def to_payload(self) -> CycloPayload:
        return CycloPayload(
            p=self.p, level=self.level, coords=[str(c) for c in self.coords]
        )

    @classmethod
    def from_payload(cls, payload: CycloPayload | Mapping) -> "CycloElement":
        if not isinstance(payload, CycloPayload):
            payload = CycloPayload.model_validate(payload)
        return cls(payload.p, payload.level, tuple(payload.coords))


def _poly_from_coeffs(coeffs: Mapping[int, Fraction | int]) -> Poly:
    """Poly over QQ from an exponent-to-coefficient map."""
    dense = [QQ(0)] * (max(coeffs, default=0) + 1)
    for e, c in coeffs.items():
        f = Fraction(c)
        dense[e] += QQ(f.numerator, f.denominator)
    return Poly(list(reversed(dense)), T, domain=QQ)


@lru_cache(maxsize=None)
def xi_matrix(p: int, i: int) -> ExactMatrix:
    """Integer matrix of multiplication by xi_i in the basis B_i."""
    _check(p, i)
    if i == 0:
        return ExactMatrix.identity(1)
    if i == 1:
        k = p - 1
        return ExactMatrix(
            [
                [
                    -1 if c == k - 1 else (1 if r == c + 1 else 0)
                    for c in range(k)
                ]
                for r in range(k)
            ]
        )
    prev = xi_matrix(p, i - 1)
    s = phi(p, i - 1)
    rows = [[0] * (p * s) for _ in range(p * s)]
    for k in range(p - 1):
        for t in range(s):
            rows[(k + 1) * s + t][k * s + t] = 1
    for a in range(s):
        for b in range(s):
            rows[a][(p - 1) * s + b] = prev[a, b]
    return ExactMatrix(rows)


def mult_matrix(x: CycloElement) -> ExactMatrix:
    """Rational matrix of multiplication by x in the basis B_i."""
    basis = cyclo_basis(x.p, x.level)
    xi = xi_matrix(x.p, x.level).to_domain(Domain.Q)
    size = len(basis)
    result = ExactMatrix.zeros(size, size, Domain.Q)
    for b, c in enumerate(x.coords):
        if c:
            result = result + xi.power(basis.exponent(b)).scale(c)
    return result


def invert_cyclo(x: CycloElement) -> CycloElement:
    """Inverse in Q(xi) by extended Euclid against the cyclotomic polynomial.

    Raises:
        NotInvertibleError: x is zero.
    """
    if x.is_zero():
        raise NotInvertibleError("not invertible: zero cyclotomic element")
    modulus = _modulus(x.p, x.level)
    s, _, h = x.to_poly().gcdex(modulus)
    if h.degree() != 0:
        raise NotInvertibleError("not invertible")
    return CycloElement._from_poly(x.p, x.level, s)


def column_embed(x: CycloElement, j: int) -> ExactMatrix:
    """phi(p^i) x phi(p^j) matrix whose last column holds the coordinates of
    x and whose other columns vanish.

    Raises:
        ParameterError: target level j is below the level of x.
    """
    i = x.level
    if j < i:
        raise ParameterError(
            f"cannot embed level {i} into level {j}", "0 <= i <= j"
        )
    width = phi(x.p, j)
    domain = Domain.Z if x.is_integral() else Domain.Q
    return ExactMatrix(
        [[0] * (width - 1) + [c] for c in x.coords], domain, ncols=width
    )


def epsilon(p: int, k: int = 1) -> CycloElement:
    """The power eps^k of a primitive p-th root of unity."""
    return CycloElement.xi(p, 1, k)


def alpha_inverse(p: int) -> CycloElement:
    """(eps - 1)^(-1); its coordinates have denominator p."""
    return invert_cyclo(epsilon(p) - 1)


def alpha_i(p: int, i: int) -> CycloElement:
    """(eps^(p-i) - 1) / (eps - 1) = 1 + eps + ... + eps^(p-i-1)."""
    if not 1 <= i <= p:
        raise ParameterError(f"alpha index {i} outside 1..{p}", "1 <= i <= p")
    return CycloElement.from_power(p, 1, {t: 1 for t in range(p - i)})


def beta_s(p: int, s: int) -> CycloElement:
    """(eps^s - 1) / (eps - 1) = 1 + eps + ... + eps^(s-1)."""
    return CycloElement.from_power(p, 1, {t: 1 for t in range(s % p)})


def integral_coords(x: CycloElement) -> Sequence[int]:
    if not x.is_integral():
        raise ParameterError("element is not integral", "integral element")
    return [int(c) for c in x.coords]
