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

from fractions import Fraction
import random

import pytest

from crysgroups.shared_libraries.errors import NotInvertibleError, ParameterError
from crysgroups.tools.cyclotomic import (
    CycloElement,
    alpha_i,
    alpha_inverse,
    beta_s,
    column_embed,
    epsilon,
    invert_cyclo,
    mult_matrix,
    phi,
    xi_matrix,
)
from crysgroups.tools.exact_linalg import (
    Domain,
    ExactMatrix,
    block_matrix,
    kron,
)


def test_phi():
    assert phi(2, 3) == 4
    assert phi(3, 2) == 6
    assert phi(5, 0) == 1


@pytest.mark.parametrize("p,i", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1)])
def test_xi_matrix_order(p, i):
    xi = xi_matrix(p, i)
    assert xi.shape == (phi(p, i), phi(p, i))
    assert xi.power(p**i).is_identity()
    assert not xi.power(p ** (i - 1)).is_identity()


@pytest.mark.parametrize("p,i", [(2, 2), (2, 3), (3, 2), (3, 3)])
def test_xi_matrix_pth_power_is_block_diagonal(p, i):
    expected = kron(ExactMatrix.identity(p), xi_matrix(p, i - 1))
    assert xi_matrix(p, i).power(p) == expected


@pytest.mark.parametrize("p,i", [(2, 2), (3, 1), (3, 2), (5, 1)])
def test_mult_matrix_of_xi(p, i):
    assert mult_matrix(CycloElement.xi(p, i)) == xi_matrix(p, i).to_domain(
        Domain.Q
    )


def test_xi_powers():
    assert CycloElement.xi(3, 1, 3) == CycloElement.one(3, 1)
    assert CycloElement.xi(2, 2, 2) == -CycloElement.one(2, 2)
    assert CycloElement.xi(2, 2, -1) == CycloElement.xi(2, 2, 3)


def test_alpha_inverse():
    assert alpha_inverse(3).coords == (Fraction(-2, 3), Fraction(-1, 3))
    assert alpha_inverse(5).coords == (
        Fraction(-4, 5),
        Fraction(-3, 5),
        Fraction(-2, 5),
        Fraction(-1, 5),
    )
    for p in (3, 5, 7):
        a = alpha_inverse(p)
        assert (epsilon(p) - 1) * a == CycloElement.one(p, 1)
        assert a.denominator() == p
    assert alpha_inverse(3).mod_one() == (Fraction(1, 3), Fraction(2, 3))


@pytest.mark.parametrize("p", [3, 5])
def test_alpha_beta_identity(p):
    for s in range(1, p + 1):
        total = epsilon(p, s) * alpha_i(p, s) + beta_s(p, s)
        assert total.is_zero()


def test_alpha_i_bounds():
    assert alpha_i(3, 3).is_zero()
    with pytest.raises(ParameterError):
        alpha_i(3, 0)


def test_invert_cyclo():
    x = CycloElement.one(2, 2) + CycloElement.xi(2, 2).scale(2)
    assert invert_cyclo(x) * x == CycloElement.one(2, 2)
    assert x ** -1 == invert_cyclo(x)
    with pytest.raises(NotInvertibleError):
        invert_cyclo(CycloElement.zero(3, 2))


def test_column_embed():
    one = CycloElement.one(2, 0)
    assert column_embed(one, 2) == ExactMatrix([[0, 1]])
    assert column_embed(CycloElement.one(2, 1), 2) == ExactMatrix([[0, 1]])
    assert column_embed(alpha_inverse(3), 2).domain is Domain.Q
    with pytest.raises(ParameterError):
        column_embed(CycloElement.one(2, 2), 1)


def test_element_validation():
    with pytest.raises(ParameterError):
        CycloElement(4, 1, (1, 0, 0))
    with pytest.raises(ParameterError):
        CycloElement(3, 1, (1,))
    with pytest.raises(ParameterError):
        CycloElement.one(3, 1) + CycloElement.one(5, 1)


def test_payload_round_trip():
    a = alpha_inverse(5)
    assert CycloElement.from_payload(a.to_payload()) == a
    assert a.to_payload().coords == ["-4/5", "-3/5", "-2/5", "-1/5"]


# Randomized properties.


def _random_integral(rng, p, i, spread=3):
    return CycloElement(
        p, i, tuple(rng.randint(-spread, spread) for _ in range(phi(p, i)))
    )


def _product_by_polynomials(x, y):
    product = x.to_poly() * y.to_poly()
    return CycloElement.from_power(
        x.p,
        x.level,
        {e: Fraction(str(c)) for (e,), c in product.terms()},
    )


@pytest.mark.parametrize("p,i", [(2, 2), (2, 3), (3, 1), (3, 2)])
def test_mult_matrix_is_ring_homomorphism(p, i):
    rng = random.Random(p * 10 + i)
    for _ in range(30):
        x, y = _random_integral(rng, p, i), _random_integral(rng, p, i)
        product = _product_by_polynomials(x, y)
        assert mult_matrix(x + y) == mult_matrix(x) + mult_matrix(y)
        assert mult_matrix(product) == mult_matrix(x) @ mult_matrix(y)
        assert x * y == product


@pytest.mark.parametrize("p", [2, 3])
def test_column_embed_identities(p):
    rng = random.Random(p)
    levels = [(i, j) for j in range(1, 4) for i in range(j)]
    for i, j in levels:
        s = phi(p, j - 1)
        for _ in range(5):
            alpha = _random_integral(rng, p, i)

            # xi_i <alpha> = <xi_i alpha>
            shifted = alpha * CycloElement.xi(p, i)
            assert xi_matrix(p, i) @ column_embed(alpha, j) == column_embed(
                shifted, j
            )

            if j < 2:
                continue
            # <alpha>_j is p blocks of width phi(p^(j-1)), only the last one
            # nonzero and equal to <alpha>_(j-1).
            zero = ExactMatrix.zeros(phi(p, i), s)
            assert column_embed(alpha, j) == block_matrix(
                [[zero] * (p - 1) + [column_embed(alpha, j - 1)]]
            )

            # Right multiplication by xi_j^k moves alpha to block p - k.
            for k in range(p):
                blocks = [zero] * p
                blocks[p - k - 1] = column_embed(alpha, j - 1)
                assert column_embed(alpha, j) @ xi_matrix(p, j).power(
                    k
                ) == block_matrix([blocks])
