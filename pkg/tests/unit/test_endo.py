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

import logging

import numpy as np
import pytest

from crysgroups.config import SearchSettings
from crysgroups.entities.certificate import CertificateKind
from crysgroups.shared_libraries.errors import CertificationRefused, ParameterError
from crysgroups.tools.cyclotomic import CycloElement
from crysgroups.tools.endo import (
    centralizer_basis,
    certify_indecomposable,
    endo_algebra_mod_p,
    exhaustive_idempotents,
    is_local_mod_p,
    jacobson_radical,
)
from crysgroups.tools.exact_linalg import Domain, ExactMatrix, block_matrix, kron
from crysgroups.tools.reps import (
    build_a4_rep,
    build_bicyclic_tail_rep,
    build_composite_rep,
    build_cyclic_rep,
    build_delta_rep,
    build_extension_rep,
    build_p2_rep,
    direct_sum_rep,
)

logger = logging.getLogger(__name__)


@pytest.fixture
def split_module():
    return direct_sum_rep(build_delta_rep(3, 1, 0), build_delta_rep(3, 1, 1))


@pytest.fixture
def settings():
    return SearchSettings()


def test_centralizer_of_small_modules(split_module):
    trivial = build_delta_rep(3, 1, 0)
    assert centralizer_basis(trivial) == [ExactMatrix([[1]])]
    assert len(centralizer_basis(build_delta_rep(3, 1, 1))) == 2
    basis = centralizer_basis(split_module)
    assert len(basis) == 3
    g = split_module.images["a"]
    for b in basis:
        assert b @ g == g @ b


@pytest.mark.parametrize(
    "rep,rank",
    [
        (build_cyclic_rep(2, 3), 8),
        (build_cyclic_rep(3, 3), 27),
        (build_p2_rep(3), 9),
        (build_p2_rep(3, 1), 30),
        (build_bicyclic_tail_rep(3, 2), 28),
    ],
    ids=["c8", "c27", "bicyclic-3-0", "bicyclic-3-1", "tail-3-2"],
)
def test_centralizer_ranks(rep, rank):
    basis = centralizer_basis(rep)
    logger.info("%r: rank %i", rep, len(basis))
    assert len(basis) == rank


@pytest.mark.slow
@pytest.mark.parametrize(
    "rep,rank",
    [(build_cyclic_rep(2, 3, 2), 32), (build_p2_rep(3, 2), 65)],
    ids=["c8-m2", "bicyclic-3-2"],
)
def test_centralizer_ranks_large(rep, rank):
    assert len(centralizer_basis(rep)) == rank


def test_centralizer_basis_is_saturated():
    rep = build_p2_rep(3)
    basis = centralizer_basis(rep)
    d = rep.degree
    flat = [[v for row in b.data for v in row] for b in basis]
    for q in (2, 3, 5, 7):
        assert ExactMatrix(flat, Domain.FP, q).rank() == len(basis)
    eye = ExactMatrix.identity(d)
    system = block_matrix(
        [
            [kron(eye, g.transpose()) - kron(g, eye)]
            for g in rep.images.values()
        ]
    )
    assert d * d - system.rank() == len(basis)


def test_algebra_structure(split_module):
    alg = endo_algebra_mod_p(split_module, 3)
    assert alg.dim == 3
    assert alg.is_commutative()
    assert alg.is_associative()
    for s in range(alg.dim):
        x = alg.unit(s)
        assert np.array_equal(alg.mul(alg.identity, x), x)
        assert np.array_equal(alg.mul(x, alg.identity), x)
    assert alg.to_matrix(alg.identity) == ExactMatrix.identity(3, Domain.FP, 3)


def test_bicyclic_algebra_is_associative():
    alg = endo_algebra_mod_p(build_p2_rep(3), 3)
    assert alg.is_associative()


def test_radical_of_ring_of_integers():
    alg = endo_algebra_mod_p(build_delta_rep(3, 1, 1), 3)
    assert len(jacobson_radical(alg)) == 1


def test_split_module_is_not_local(split_module, settings):
    alg = endo_algebra_mod_p(split_module, 3)
    cert = is_local_mod_p(alg, settings)
    assert cert.kind is CertificateKind.INDECOMPOSABLE
    assert not cert.verdict
    e = ExactMatrix.from_payload(cert.witnesses["idempotent"])
    assert e == ExactMatrix([[1, 0, 0], [0, 0, 0], [0, 0, 0]], Domain.FP, 3)
    assert len(exhaustive_idempotents(alg, settings)) == 4


def test_split_module_is_decomposable(split_module):
    cert = certify_indecomposable(split_module, 3, oracle=True)
    assert cert.kind is CertificateKind.DECOMPOSABLE
    assert cert.verdict
    assert not cert.passed
    assert cert.checked_against_oracle


@pytest.mark.parametrize(
    "rep,p",
    [
        (build_delta_rep(3, 1, 1), 3),
        (build_cyclic_rep(2, 3), 2),
        (build_p2_rep(3), 3),
    ],
    ids=["delta1", "c8", "bicyclic-3-0"],
)
def test_locality_agrees_with_enumeration(rep, p, settings):
    alg = endo_algebra_mod_p(rep, p)
    cert = is_local_mod_p(alg, settings)
    assert cert.verdict
    assert len(exhaustive_idempotents(alg, settings)) == 2


def test_enumeration_limit(settings):
    alg = endo_algebra_mod_p(build_cyclic_rep(3, 3), 3)
    assert exhaustive_idempotents(alg, settings) is None


@pytest.mark.parametrize(
    "p,n,m,factors",
    [
        (2, 3, 1, ["x + 1"]),
        (2, 3, 2, ["x**2 + 1"]),
        (3, 3, 1, ["x + 2"]),
        (3, 2, 1, ["x + 2"]),
    ],
)
def test_cyclic_reps_are_indecomposable(p, n, m, factors):
    cert = certify_indecomposable(build_cyclic_rep(p, n, m), p, oracle=True)
    assert cert.kind is CertificateKind.INDECOMPOSABLE
    assert cert.verdict
    route = cert.witnesses["invariant_factor_route"]
    assert route["invariant_factors"] == factors
    assert route["single_irreducible_power"]


@pytest.mark.slow
def test_cyclic_rep_with_multiplicity_is_indecomposable():
    cert = certify_indecomposable(build_cyclic_rep(3, 3, 2), 3)
    assert cert.verdict


def test_extension_by_unit_and_by_p():
    one = build_extension_rep(3, 0, 1, CycloElement.one(3, 0))
    assert certify_indecomposable(one, 3, oracle=True).verdict
    three = build_extension_rep(3, 0, 1, CycloElement(3, 0, (3,)))
    cert = certify_indecomposable(three, 3, oracle=True)
    assert cert.kind is CertificateKind.DECOMPOSABLE


def test_composite_rep_factorwise():
    cert = certify_indecomposable(build_composite_rep([(2, 3), (3, 2)]), 2)
    assert cert.kind is CertificateKind.INDECOMPOSABLE
    assert cert.verdict
    factors = cert.witnesses["factors"]
    assert [f["prime"] for f in factors] == [2, 3]
    assert [f["copies"] for f in factors] == [9, 8]
    assert all(f["restriction_is_multiple"] for f in factors)


def test_certificate_hypotheses():
    with pytest.raises(CertificationRefused):
        certify_indecomposable(build_composite_rep([(2, 3)], 2), 2)
    with pytest.raises(ParameterError):
        certify_indecomposable(build_cyclic_rep(2, 3), 3)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_bicyclic_tails_are_local(n):
    assert certify_indecomposable(build_bicyclic_tail_rep(3, n), 3).verdict


def test_alternating_rep_is_indecomposable_at_two():
    cert = certify_indecomposable(build_a4_rep(1), 2, oracle=True)
    assert cert.verdict
    assert cert.witnesses["centralizer_rank"] >= 1


@pytest.mark.slow
def test_alternating_rep_two_blocks():
    assert certify_indecomposable(build_a4_rep(2), 2).verdict


def test_glued_bicyclic_rep_splits_over_3_adic_integers():
    rep = build_p2_rep(3, 1)
    cert = certify_indecomposable(rep, 3)
    assert cert.kind is CertificateKind.DECOMPOSABLE
    e = ExactMatrix.from_payload(cert.witnesses["idempotent"])
    assert e @ e == e
    assert not e.is_zero() and not e.is_identity()
    for g in rep.images.values():
        g3 = g.to_domain(Domain.FP, 3)
        assert e @ g3 == g3 @ e
