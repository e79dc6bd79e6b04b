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

"""The group Crys(G; M; f) of pairs (g, x), x in f(g), and the bundles
shipped for the three holonomy families."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

import numpy as np

from crysgroups.config import Config
from crysgroups.entities.bundle import BundlePayload, BundleSpec
from crysgroups.entities.certificate import Certificate, CertificateKind
from crysgroups.shared_libraries.errors import ParameterError
from crysgroups.tools.cohomology import (
    Cocycle,
    certify_cocycle,
    certify_torsionfree,
    is_coboundary_on_cyclic,
    standard_cocycle,
    torsion_element_search,
)
from crysgroups.tools.endo import certify_indecomposable
from crysgroups.tools.groups import (
    GroupElement,
    iter_subgroup_generators,
    prime_order_elements,
)
from crysgroups.tools.reps import (
    Representation,
    build_a4_rep,
    build_composite_rep,
    build_p2_rep,
    verify_representation,
)

logger = logging.getLogger(__name__)

CHECKS = (
    "relations",
    "faithful",
    "cocycle",
    "torsionfree",
    "indecomposable",
    "dimension",
)


@dataclass(frozen=True)
class CrysElement:
    """A pair (g, x) with x an exact rational vector lying in f(g)."""

    g: GroupElement
    x: tuple[Fraction, ...]


@dataclass
class CrysGroup:
    spec: BundleSpec
    rep: Representation
    cocycle: Cocycle
    seed: int = 0
    non_split: bool | None = None
    certificates: list[Certificate] = field(default_factory=list)

    def __post_init__(self):
        if self.cocycle.rep is not self.rep:
            raise ParameterError("cocycle over another representation", "cocycle.rep = rep")

    @property
    def dimension(self) -> int:
        return self.rep.degree

    @property
    def group(self):
        return self.rep.group

    # Elements.

    def contains(self, e: CrysElement) -> bool:
        if len(e.x) != self.dimension:
            return False
        lift = self.cocycle(e.g).lift()
        return all((Fraction(a) - b).denominator == 1 for a, b in zip(e.x, lift))

    def _check(self, *elements: CrysElement) -> None:
        for e in elements:
            if not self.contains(e):
                raise ParameterError(
                    f"{self.format_element(e)} is not an element of this group",
                    "x lies in f(g)",
                )

    def element(
        self, g: GroupElement, translation: Sequence[int] | None = None
    ) -> CrysElement:
        """(g, lift of f(g) + translation)."""
        lift = self.cocycle(g).lift()
        if translation is not None:
            lift = tuple(a + int(t) for a, t in zip(lift, translation))
        return CrysElement(g, lift)

    def translation(self, m: Sequence[int]) -> CrysElement:
        return CrysElement(self.group.identity(), tuple(Fraction(int(v)) for v in m))

    def identity(self) -> CrysElement:
        return CrysElement(self.group.identity(), (Fraction(0),) * self.dimension)

    def multiply(self, e1: CrysElement, e2: CrysElement) -> CrysElement:
        """(g, x)(g', x') = (g g', Gamma(g) x' + x)."""
        self._check(e1, e2)
        moved = self.rep.image(e1.g).apply(e2.x)
        return CrysElement(
            self.group.multiply(e1.g, e2.g),
            tuple(Fraction(a) + b for a, b in zip(moved, e1.x)),
        )

    def inverse(self, e: CrysElement) -> CrysElement:
        self._check(e)
        g_inv = self.group.inverse(e.g)
        moved = self.rep.image(g_inv).apply(e.x)
        return CrysElement(g_inv, tuple(-Fraction(a) for a in moved))

    def power(self, e: CrysElement, k: int) -> CrysElement:
        if k < 0:
            e, k = self.inverse(e), -k
        result = self.identity()
        for _ in range(k):
            result = self.multiply(result, e)
        return result

    def order(self, e: CrysElement) -> int | None:
        """Order of e; None when infinite. With k = ord(g), e^k = (1, t) and
        the order is k exactly when t = 0."""
        k = self.group.order_of(e.g)
        top = self.power(e, k)
        return k if not any(top.x) else None

    def project(self, e: CrysElement) -> GroupElement:
        return e.g

    def random_element(
        self, rng: np.random.Generator, spread: int = 3
    ) -> CrysElement:
        elements = self.group.elements()
        g = elements[int(rng.integers(0, len(elements)))]
        m = rng.integers(-spread, spread + 1, size=self.dimension)
        return self.element(g, [int(v) for v in m])

    def torsion_elements(self) -> list[CrysElement]:
        """Explicit finite-order elements over every prime-order element."""
        found = []
        for h, _ in prime_order_elements(self.group):
            t = torsion_element_search(self.cocycle, h)
            if t is not None:
                found.append(CrysElement(t.g, t.x))
        return found

    def format_element(self, e: CrysElement) -> str:
        body = ", ".join(str(Fraction(v)) for v in e.x)
        return f"({self.group.format_element(e.g)}, [{body}])"

    # Serialization.

    def to_payload(self) -> BundlePayload:
        return BundlePayload(
            spec=self.spec,
            dimension=self.dimension,
            non_split=self.non_split,
            seed=self.seed,
            representation=self.rep.to_payload(),
            cocycle=self.cocycle.to_payload(),
            certificates=self.certificates,
        )

    @classmethod
    def from_payload(cls, payload: BundlePayload | dict) -> "CrysGroup":
        if not isinstance(payload, BundlePayload):
            payload = BundlePayload.model_validate(payload)
        rep = Representation.from_payload(payload.representation)
        if rep.degree != payload.dimension:
            raise ParameterError(
                f"dimension {payload.dimension} but degree {rep.degree}",
                "dimension = degree",
            )
        return cls(
            spec=payload.spec,
            rep=rep,
            cocycle=Cocycle.from_payload(rep, payload.cocycle),
            seed=payload.seed,
            non_split=payload.non_split,
            certificates=list(payload.certificates),
        )


def build_representation(spec: BundleSpec) -> Representation:
    if spec.family == "cyclic":
        return build_composite_rep(spec.factors, spec.m)
    if spec.family == "bicyclic":
        if spec.p is None:
            raise ParameterError("bicyclic bundle without p", "p given")
        return build_p2_rep(spec.p, spec.n)
    if spec.n < 1:
        raise ParameterError(f"n = {spec.n}", "n >= 1 required")
    return build_a4_rep(spec.n)


def expected_dimension(spec: BundleSpec) -> int:
    if spec.family == "cyclic":
        order = 1
        for p, n in spec.factors:
            order *= p**n
        return spec.m * order
    if spec.family == "bicyclic":
        p = spec.p
        return (3 * p - 2) * spec.n + p * p
    return 12 * spec.n


def is_non_split(cocycle: Cocycle) -> bool:
    """True when some prime-order restriction is not a coboundary, so the
    cocycle is not cohomologous to zero."""
    return any(
        not is_coboundary_on_cyclic(cocycle, h).verdict
        for h, _ in iter_subgroup_generators(cocycle.group)
    )


def build_crys(
    spec: BundleSpec, seed: int = 0, mark_split: bool = True
) -> CrysGroup:
    """Wires a family builder to its standard cocycle."""
    rep = build_representation(spec)
    cocycle = standard_cocycle(rep)
    crys = CrysGroup(spec=spec, rep=rep, cocycle=cocycle, seed=seed)
    if mark_split:
        crys.non_split = is_non_split(cocycle)
    logger.info(
        "built %s bundle of dimension %i (non_split=%s)",
        spec.family,
        crys.dimension,
        crys.non_split,
    )
    return crys


def _indecomposability_prime(crys: CrysGroup) -> int:
    spec = crys.spec
    if spec.family == "cyclic":
        return spec.factors[0][0]
    if spec.family == "bicyclic":
        return spec.p
    return 2


def _report(crys: CrysGroup, config: Config, cache: dict):
    if "report" not in cache:
        cache["report"] = verify_representation(crys.rep, config.DET_MAX_DEGREE)
    return cache["report"]


def _relations(crys: CrysGroup, config: Config, cache: dict) -> Certificate:
    report = _report(crys, config, cache)
    return Certificate(
        kind=CertificateKind.RELATIONS,
        verdict=bool(report["relations_ok"] and report["unit_determinants"]),
        subject=repr(crys.rep),
        basis="defining relators evaluate to E; generator images unimodular",
        witnesses={
            "failed_relations": report["failed_relations"],
            "unit_determinants": report["unit_determinants"],
        },
    )


def _faithful(crys: CrysGroup, config: Config, cache: dict) -> Certificate:
    report = _report(crys, config, cache)
    return Certificate(
        kind=CertificateKind.FAITHFUL,
        verdict=bool(report["faithful"]),
        subject=repr(crys.rep),
        basis=f"all {crys.group.order} images pairwise distinct",
    )


def _cocycle(crys: CrysGroup, config: Config, cache: dict) -> Certificate:
    exhaustive = crys.dimension <= config.oracle_settings.max_degree
    return certify_cocycle(crys.cocycle, exhaustive=exhaustive)


def _torsionfree(crys: CrysGroup, config: Config, cache: dict) -> Certificate:
    return certify_torsionfree(crys.cocycle, oracle=cache["oracle"])


def _indecomposable(crys: CrysGroup, config: Config, cache: dict) -> Certificate:
    return certify_indecomposable(
        crys.rep,
        _indecomposability_prime(crys),
        config.search_settings,
        oracle=cache["oracle"],
    )


def _dimension(crys: CrysGroup, config: Config, cache: dict) -> Certificate:
    expected = expected_dimension(crys.spec)
    return Certificate(
        kind=CertificateKind.DIMENSION,
        verdict=crys.dimension == expected,
        subject=crys.spec.family,
        basis="rank of M against the family's degree formula",
        witnesses={"dimension": crys.dimension, "expected": expected},
    )


_CHECKERS: dict[str, Callable[[CrysGroup, Config, dict], Certificate]] = {
    "relations": _relations,
    "faithful": _faithful,
    "cocycle": _cocycle,
    "torsionfree": _torsionfree,
    "indecomposable": _indecomposable,
    "dimension": _dimension,
}


_CHECK_GROUNDS = {
    "relations": "relations: presentation of the holonomy group",
    "faithful": "faithful: Crys(G; M; T) needs a faithful holonomy action",
    "cocycle": "cocycle: 1-cocycle law in FM/M",
    "torsionfree": (
        "torsionfree: prime-order criterion, no restriction to a subgroup "
        "of prime order is a coboundary"
    ),
    "indecomposable": (
        "indecomposable: a local endomorphism ring mod p rules out "
        "direct summands over Z"
    ),
    "dimension": "dimension: K-rank of M",
}

_DIMENSION_FORMULAS = {
    "cyclic": "d = m |G|",
    "bicyclic": "d = (3p - 2) n + p^2",
    "alternating": "d = 12 n",
}


def check_grounds(name: str, spec: BundleSpec) -> str:
    """The result a check rests on, as shown in reports."""
    grounds = _CHECK_GROUNDS[name]
    if name == "dimension":
        grounds = f"{grounds} ({_DIMENSION_FORMULAS[spec.family]})"
    elif name == "indecomposable" and spec.family == "cyclic":
        grounds += "; composite holonomy needs gcd(m, |G|) = 1"
    return grounds


def run_checks(
    crys: CrysGroup,
    checks: Sequence[str] = CHECKS,
    config: Config | None = None,
    oracle: bool | None = None,
) -> list[Certificate]:
    """Runs the named checks in order and attaches the certificates.

    Oracle cross-checks default to on for modules up to the configured
    degree.
    """
    config = config or Config()
    unknown = [c for c in checks if c not in _CHECKERS]
    if unknown:
        raise ParameterError(
            f"unknown checks {unknown}", f"checks from {', '.join(CHECKS)}"
        )
    if oracle is None:
        oracle = crys.dimension <= config.oracle_settings.max_degree
    cache: dict[str, Any] = {"oracle": oracle}
    certificates = []
    for name in checks:
        logger.info("running check %s", name)
        cert = _CHECKERS[name](crys, config, cache)
        cert.basis = f"{check_grounds(name, crys.spec)}; {cert.basis}"
        certificates.append(cert)
    crys.certificates = certificates
    return certificates
