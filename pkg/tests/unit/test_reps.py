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

import pytest

from crysgroups.entities.bundle import GroupSpec
from crysgroups.shared_libraries.errors import ParameterError
from crysgroups.tools.cyclotomic import CycloElement, beta_s
from crysgroups.tools.exact_linalg import ExactMatrix
from crysgroups.tools.groups import GroupElement, build_group
from crysgroups.tools.reps import (
    ALTERNATING_ALPHA,
    ALTERNATING_BETA,
    Representation,
    build_a4_rep,
    build_alternating_block_rep,
    build_alternating_irreducible,
    build_bicyclic_irreducible,
    build_bicyclic_tail_rep,
    build_composite_rep,
    build_cyclic_rep,
    build_delta_rep,
    build_extension_rep,
    build_p2_rep,
    build_regular_rep,
    build_trivial_rep,
    character_vector,
    condense,
    condensed_slots,
    cyclic_blocks,
    direct_sum_rep,
    jordan_lower,
    kernel_elements,
    params_equivalent_mod_p,
    restrict_to_cyclic,
    verify_representation,
)

logger = logging.getLogger(__name__)


def test_smallest_cyclic_rep():
    rep = build_cyclic_rep(2, 2)
    assert rep.images["a"] == ExactMatrix(
        [[1, 0, 0, 1], [0, -1, 0, 1], [0, 0, 0, -1], [0, 0, 1, 0]]
    )
    assert rep.provenance.params == {"p": 2, "n": 2, "m": 1}


@pytest.mark.parametrize(
    "p,n,m", [(2, 2, 1), (2, 3, 1), (2, 3, 2), (3, 2, 1), (3, 3, 1)]
)
def test_cyclic_rep_is_faithful(p, n, m):
    rep = build_cyclic_rep(p, n, m)
    assert rep.degree == m * p**n
    report = verify_representation(rep)
    logger.info(report)
    assert report.ok
    assert report["failed_relations"] == []


@pytest.mark.slow
@pytest.mark.parametrize("p,n,m", [(2, 3, 3), (3, 3, 2), (3, 3, 3)])
def test_cyclic_rep_is_faithful_large(p, n, m):
    assert verify_representation(build_cyclic_rep(p, n, m)).ok


@pytest.mark.parametrize("p,n,m", [(2, 2, 1), (2, 3, 2), (3, 3, 1)])
def test_cyclic_rep_pth_power_block(p, n, m):
    d1, d2, u = cyclic_blocks(p, n, m)
    gamma = build_cyclic_rep(p, n, m).images["a"]
    top = d1.nrows
    expected = d1.power(p - 1) @ u
    for t in range(1, p):
        expected = expected + d1.power(p - t - 1) @ u @ d2.power(t)
    corner = gamma.power(p).submatrix(
        range(top), range(top, gamma.ncols)
    )
    assert corner == expected


@pytest.mark.parametrize(
    "args,hypothesis",
    [
        ((2, 1, 1), "n >= 2 required"),
        ((2, 3, 0), "m >= 1 required"),
        ((3, 2, 2), "n = 2 requires m = 1"),
    ],
)
def test_cyclic_rep_hypotheses(args, hypothesis):
    with pytest.raises(ParameterError) as info:
        build_cyclic_rep(*args)
    assert info.value.hypothesis == hypothesis


def test_cyclic_rep_custom_a():
    a = ExactMatrix([[1, 0], [0, 1]])
    rep = build_cyclic_rep(2, 3, 2, a)
    assert rep.provenance.params["A"] == [[1, 0], [0, 1]]
    assert verify_representation(rep).ok


def test_composite_rep():
    rep = build_composite_rep([(2, 3), (3, 2)])
    assert rep.degree == 72
    assert rep.coprime_ok
    assert [f.degree for f in rep.factor_reps] == [8, 9]
    eye9 = ExactMatrix.identity(9)
    g = rep.group.generators["a1"]
    assert rep.image(g) == rep.images["a1"]
    assert rep.images["a1"].submatrix(range(9), range(9)) == eye9


def test_composite_single_factor_matches_block():
    rep = build_composite_rep([(2, 3)])
    assert rep.images["a"] == build_cyclic_rep(2, 3).images["a"]


def test_composite_rep_multiplicity():
    rep = build_composite_rep([(2, 3)], 2)
    assert not rep.coprime_ok
    assert build_composite_rep([(2, 3)], 3).coprime_ok
    with pytest.raises(ParameterError) as info:
        build_composite_rep([(2, 2)])
    assert info.value.hypothesis == (
        "composite cyclic holonomy: n_1 >= 3 required"
    )


def test_composite_image_is_kronecker_product():
    rep = build_composite_rep([(2, 3), (3, 2)])
    g = GroupElement("cyclic", (3, 5))
    expected = rep.images["a1"].power(3) @ rep.images["a2"].power(5)
    assert rep.image(g) == expected


def test_composite_payload_round_trip():
    rep = build_composite_rep([(2, 3), (3, 2)])
    back = Representation.from_payload(rep.to_payload())
    assert back.images == rep.images
    assert back.factor_reps is not None

    payload = rep.to_payload().model_dump()
    payload["provenance"]["params"]["m"] = 5
    with pytest.raises(ParameterError):
        Representation.from_payload(payload)


def test_p2_rep_degrees():
    assert build_p2_rep(3).degree == 9
    assert build_p2_rep(3, 1).degree == 16
    assert build_p2_rep(3, 2).degree == 23
    assert build_p2_rep(5).degree == 25
    assert build_bicyclic_tail_rep(3, 2).degree == 14


def test_p2_rep_rejects_two():
    with pytest.raises(ParameterError) as info:
        build_p2_rep(2)
    assert info.value.hypothesis == "C_p x C_p holonomy requires p > 2"
    with pytest.raises(ParameterError):
        build_p2_rep(3, -1)


@pytest.mark.parametrize("p,n", [(3, 0), (3, 1), (3, 2), (5, 0)])
def test_p2_rep_is_faithful(p, n):
    assert verify_representation(build_p2_rep(p, n)).ok


def test_p2_rep_ring_marker():
    assert build_p2_rep(3, ring_marker="Z_p").ring_marker == "Z_p"
    with pytest.raises(ParameterError):
        build_p2_rep(3, ring_marker="Q")


def test_condensed_slots():
    assert condensed_slots(3) == [(0, 2), (2, 2), (4, 2), (6, 2), (8, 1)]
    assert condense(list(range(9)), 3)[-1] == (8,)


@pytest.mark.parametrize("p", [3, 5])
def test_restriction_to_a_shows_beta_columns(p):
    rep = build_p2_rep(p)
    restricted = restrict_to_cyclic(rep, rep.group.generators["a"])
    assert restricted.group.order == p
    last = p * p - 1
    for s in range(1, p):
        image = restricted.image(GroupElement("cyclic", (s,)))
        assert image == rep.image(GroupElement("bicyclic", (s, 0)))
        slots = condense(image.col(last), p)
        expected = tuple(int(c) for c in beta_s(p, s).coords)
        assert all(slot == expected for slot in slots[:p])
        assert not any(slots[p])
        assert slots[p + 1] == (1,)


@pytest.mark.parametrize("p", [3, 5])
def test_bicyclic_irreducibles_have_distinct_characters(p):
    names = ["gamma0", "gamma1", "gamma2", "gamma3"] + [
        f"rho{i}" for i in range(2, p)
    ]
    characters = set()
    for name in names:
        rep = build_bicyclic_irreducible(p, name)
        assert verify_representation(rep)["relations_ok"]
        characters.add(character_vector(rep))
    assert len(characters) == p + 2


def test_a4_irreducibles_satisfy_relations():
    for k in range(1, 5):
        report = verify_representation(build_alternating_irreducible(k))
        assert report["relations_ok"], k
    assert verify_representation(build_alternating_block_rep()).ok


@pytest.mark.parametrize("n", [1, 2])
def test_a4_rep(n):
    rep = build_a4_rep(n)
    assert rep.degree == 12 * n
    assert verify_representation(rep).ok


def test_a4_rep_intertwining_block():
    rep = build_a4_rep(2)
    u = rep.images["a"].submatrix(range(2), range(2, 24))
    zeros = (0,) * 11
    assert u.row(0) == ALTERNATING_ALPHA + ALTERNATING_BETA
    assert u.row(1) == zeros + ALTERNATING_ALPHA
    assert rep.images["b"].submatrix(range(2), range(2, 24)).is_zero()


def test_a4_rep_needs_positive_n():
    with pytest.raises(ParameterError):
        build_a4_rep(0)


def test_delta_and_kernel():
    trivial = build_delta_rep(2, 3, 0)
    report = verify_representation(trivial)
    assert report["relations_ok"]
    assert not report["faithful"]
    assert not report.ok
    assert kernel_elements(trivial) == [GroupElement("cyclic", (4,))]
    assert kernel_elements(build_delta_rep(2, 3, 3)) == []
    with pytest.raises(ParameterError):
        build_delta_rep(2, 3, 4)


def test_extension_rep():
    rep = build_extension_rep(3, 0, 1, CycloElement.one(3, 0))
    assert rep.degree == 3
    assert rep.images["a"] == ExactMatrix(
        [[1, 0, 1], [0, 0, -1], [0, 1, -1]]
    )
    assert verify_representation(rep)["relations_ok"]
    with pytest.raises(ParameterError):
        build_extension_rep(3, 1, 1, CycloElement.one(3, 1))


def test_regular_and_trivial_reps():
    regular = build_regular_rep(6)
    assert regular.group.generator_names == ("a1", "a2")
    assert verify_representation(regular).ok
    group = build_group(GroupSpec(family="cyclic", factors=[(2, 1)]))
    trivial = build_trivial_rep(group, 2)
    assert trivial.images["a"].is_identity()


def test_direct_sum_rep():
    rep = direct_sum_rep(build_delta_rep(3, 1, 0), build_delta_rep(3, 1, 1))
    assert rep.degree == 3
    assert rep.provenance.family == "direct-sum"
    with pytest.raises(ParameterError):
        direct_sum_rep(build_delta_rep(3, 1, 0), build_delta_rep(2, 1, 0))


def test_restriction_of_composite_rep():
    rep = build_composite_rep([(2, 3), (3, 2)])
    group = rep.group
    restricted = restrict_to_cyclic(rep, group.generators["a2"])
    assert restricted.group.order == 9
    assert restricted.images["a"] == rep.images["a2"]

    whole = restrict_to_cyclic(rep, group.full_generator())
    assert whole.images["a1"] == rep.images["a1"]
    assert whole.images["a2"] == rep.images["a2"]

    with pytest.raises(ParameterError):
        restrict_to_cyclic(rep, group.identity())


def test_params_equivalent_mod_p():
    j2 = jordan_lower(2)
    e2 = ExactMatrix.identity(2)
    c = ExactMatrix([[1, 1], [0, 1]])
    assert params_equivalent_mod_p(j2, j2, 3)
    assert not params_equivalent_mod_p(j2, e2, 3)
    assert params_equivalent_mod_p(j2, c.inverse() @ j2 @ c, 3)
    # Conjugate over F_2 only, through a matrix of determinant 3.
    d = ExactMatrix([[1, 0], [0, 3]])
    conjugate = ExactMatrix([[1, 0], [3, 1]])
    assert d @ j2 == conjugate @ d
    assert params_equivalent_mod_p(j2, conjugate, 2)
