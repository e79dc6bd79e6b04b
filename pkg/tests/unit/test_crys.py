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
import json

import numpy as np
import pytest

from crysgroups.config import Config
from crysgroups.entities.bundle import BundleSpec
from crysgroups.entities.certificate import CertificateKind
from crysgroups.shared_libraries.errors import ParameterError
from crysgroups.tools.cohomology import zero_cocycle
from crysgroups.tools.crys import (
    CHECKS,
    CrysElement,
    CrysGroup,
    build_crys,
    check_grounds,
    expected_dimension,
    run_checks,
)
from crysgroups.tools.groups import GroupElement


@pytest.fixture
def conf():
    return Config()


@pytest.fixture(scope="module")
def c8():
    return build_crys(BundleSpec(family="cyclic", factors=[(2, 3)]))


@pytest.fixture(scope="module")
def split_c8():
    crys = build_crys(BundleSpec(family="cyclic", factors=[(2, 3)]))
    return CrysGroup(crys.spec, crys.rep, zero_cocycle(crys.rep))


@pytest.mark.parametrize(
    "spec,dimension",
    [
        (BundleSpec(family="cyclic", factors=[(2, 3)]), 8),
        (BundleSpec(family="bicyclic", p=3), 9),
        (BundleSpec(family="bicyclic", p=3, n=1), 16),
        (BundleSpec(family="alternating", n=1), 12),
        (BundleSpec(family="alternating", n=2), 24),
    ],
)
def test_dimensions(spec, dimension):
    crys = build_crys(spec)
    assert crys.dimension == dimension
    assert expected_dimension(spec) == dimension
    assert crys.non_split


@pytest.mark.parametrize(
    "spec,dimension",
    [
        (BundleSpec(family="cyclic", factors=[(2, 3), (3, 2)]), 72),
        (BundleSpec(family="cyclic", factors=[(2, 3), (3, 2)], m=5), 360),
        (BundleSpec(family="bicyclic", p=3, n=3), 30),
        (BundleSpec(family="alternating", n=4), 48),
    ],
)
def test_expected_dimensions(spec, dimension):
    assert expected_dimension(spec) == dimension


def test_invalid_bundles():
    with pytest.raises(ParameterError):
        build_crys(BundleSpec(family="alternating", n=0))
    with pytest.raises(ParameterError) as info:
        build_crys(BundleSpec(family="bicyclic", p=2))
    assert info.value.hypothesis == "C_p x C_p holonomy requires p > 2"
    with pytest.raises(ParameterError) as info:
        build_crys(BundleSpec(family="cyclic", factors=[(2, 3), (3, 1)]))
    assert info.value.hypothesis == (
        "composite cyclic holonomy: n_i >= 2 required for i >= 2"
    )


def test_group_law(c8):
    rng = np.random.default_rng(11)
    identity = c8.identity()
    for _ in range(200):
        e1, e2, e3 = (c8.random_element(rng) for _ in range(3))
        assert c8.multiply(c8.multiply(e1, e2), e3) == c8.multiply(
            e1, c8.multiply(e2, e3)
        )
        assert c8.multiply(identity, e1) == e1
        assert c8.multiply(e1, c8.inverse(e1)) == identity
        assert c8.project(c8.multiply(e1, e2)) == c8.group.multiply(
            c8.project(e1), c8.project(e2)
        )


def test_translations(c8):
    t1 = c8.translation([1] + [0] * 7)
    t2 = c8.translation([0, 2] + [0] * 6)
    product = c8.multiply(t1, t2)
    assert product.x == (1, 2) + (0,) * 6
    assert c8.order(t1) is None


def test_torsionfree_elements_have_infinite_order(c8):
    rng = np.random.default_rng(5)
    for _ in range(50):
        e = c8.random_element(rng)
        if e.g != c8.group.identity():
            assert c8.order(e) is None
    assert c8.torsion_elements() == []


def test_generator_power(c8):
    a = c8.element(c8.group.generators["a"])
    assert a.x[0] == Fraction(1, 8)
    power = c8.power(a, 8)
    assert power.g == c8.group.identity()
    assert power.x == (1,) + (0,) * 7
    assert c8.format_element(a) == "(a, [1/8, 0, 0, 0, 0, 0, 0, 0])"


def test_split_group_has_torsion(split_c8):
    h = GroupElement("cyclic", (4,))
    assert split_c8.order(split_c8.element(h)) == 2
    found = split_c8.torsion_elements()
    assert found
    for e in found:
        assert split_c8.order(e) == split_c8.group.order_of(e.g)


def test_membership(c8):
    bad = CrysElement(c8.group.generators["a"], (Fraction(0),) * 8)
    assert not c8.contains(bad)
    with pytest.raises(ParameterError):
        c8.multiply(bad, c8.identity())
    with pytest.raises(ParameterError):
        CrysGroup(c8.spec, c8.rep, zero_cocycle(
            build_crys(BundleSpec(family="cyclic", factors=[(2, 3)])).rep
        ))


def test_payload_round_trip(c8):
    payload = c8.to_payload()
    data = json.loads(payload.to_json())
    assert data["dimension"] == 8
    assert data["cocycle"]["gen_values"]["a"][0] == "1/8"
    back = CrysGroup.from_payload(data)
    assert back.dimension == 8
    assert back.cocycle.table == c8.cocycle.table
    assert back.non_split == c8.non_split


def test_run_checks_cyclic(c8, conf):
    certificates = run_checks(c8, CHECKS, conf)
    assert [c.kind for c in certificates] == [
        CertificateKind.RELATIONS,
        CertificateKind.FAITHFUL,
        CertificateKind.COCYCLE_VALID,
        CertificateKind.TORSION_FREE,
        CertificateKind.INDECOMPOSABLE,
        CertificateKind.DIMENSION,
    ]
    assert all(c.passed for c in certificates)
    assert certificates[3].checked_against_oracle
    assert c8.certificates == certificates


def test_certificates_name_their_grounds(c8, conf):
    certificates = run_checks(c8, CHECKS, conf)
    for name, cert in zip(CHECKS, certificates):
        assert cert.basis.startswith(f"{name}: ")
        assert cert.basis.startswith(check_grounds(name, c8.spec))
    assert "prime-order criterion" in certificates[3].basis
    assert "local endomorphism ring mod p" in certificates[4].basis
    assert "gcd(m, |G|) = 1" in certificates[4].basis
    assert certificates[5].basis.startswith(
        "dimension: K-rank of M (d = m |G|)"
    )

    crys = build_crys(BundleSpec(family="bicyclic", p=3, n=1))
    (cert,) = run_checks(crys, ["dimension"], conf)
    assert "d = (3p - 2) n + p^2" in cert.basis


def test_run_checks_alternating(conf):
    crys = build_crys(BundleSpec(family="alternating", n=1))
    certificates = run_checks(crys, ["torsionfree", "indecomposable"], conf)
    assert all(c.passed for c in certificates)


def test_run_checks_split_group(split_c8, conf):
    (cert,) = run_checks(split_c8, ["torsionfree"], conf, oracle=False)
    assert not cert.passed
    assert "torsion_element" in cert.witnesses


def test_run_checks_unknown(c8, conf):
    with pytest.raises(ParameterError):
        run_checks(c8, ["volume"], conf)


@pytest.mark.slow
def test_run_checks_composite(conf):
    crys = build_crys(BundleSpec(family="cyclic", factors=[(2, 3), (3, 2)]))
    certificates = run_checks(crys, CHECKS, conf)
    assert all(c.passed for c in certificates)
    assert not certificates[3].checked_against_oracle
