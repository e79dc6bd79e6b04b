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

"""1-cocycles with values in FM/M, coboundary decisions on cyclic subgroups
and torsionfreeness certificates."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm, prod
from typing import Any, Iterable, Mapping, NamedTuple, Sequence

import numpy as np
from sympy import Matrix, isprime
from sympy.matrices.normalforms import hermite_normal_form

from crysgroups.entities.bundle import CocyclePayload
from crysgroups.entities.certificate import Certificate, CertificateKind
from crysgroups.shared_libraries.errors import (
    CocycleError,
    ComputationError,
    OracleMismatchError,
    ParameterError,
    ShapeError,
)
from crysgroups.tools.cyclotomic import CycloElement, alpha_inverse
from crysgroups.tools.exact_linalg import (
    Domain,
    ExactMatrix,
    kernel_saturated,
    snf,
    solve_linear_integer,
    solve_linear_rational,
)
from crysgroups.tools.groups import (
    GroupElement,
    iter_subgroup_generators,
    prime_order_elements,
)
from crysgroups.tools.reps import (
    Representation,
    build_cyclic_rep,
    build_delta_rep,
    build_extension_rep,
    build_regular_rep,
    build_trivial_rep,
    direct_sum_rep,
)

logger = logging.getLogger(__name__)


def _frac_mod_one(value: Any) -> Fraction:
    value = Fraction(value)
    return value - (value.numerator // value.denominator)


def _fraction_strings(values: Iterable[Any]) -> list[str]:
    return [str(Fraction(v)) for v in values]


@dataclass(frozen=True)
class CosetVector:
    """A coset x + Z^d stored by its representative with entries in [0, 1)."""

    coords: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "coords", tuple(_frac_mod_one(c) for c in self.coords)
        )

    @classmethod
    def zero(cls, d: int) -> "CosetVector":
        return cls((Fraction(0),) * d)

    @classmethod
    def from_strings(cls, values: Sequence[str]) -> "CosetVector":
        return cls(tuple(Fraction(v) for v in values))

    @classmethod
    def unit(cls, d: int, positions: Mapping[int, Any]) -> "CosetVector":
        coords = [Fraction(0)] * d
        for i, v in positions.items():
            coords[i] = Fraction(v)
        return cls(tuple(coords))

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def denominator(self) -> int:
        return lcm(*(c.denominator for c in self.coords)) if self.coords else 1

    def lift(self) -> tuple[Fraction, ...]:
        return self.coords

    def is_zero(self) -> bool:
        return not any(self.coords)

    def _check(self, other: "CosetVector") -> None:
        if other.dim != self.dim:
            raise ShapeError(f"coset vectors of length {self.dim} and {other.dim}")

    def __add__(self, other: "CosetVector") -> "CosetVector":
        self._check(other)
        return CosetVector(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "CosetVector") -> "CosetVector":
        self._check(other)
        return CosetVector(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "CosetVector":
        return CosetVector(tuple(-a for a in self.coords))

    def act(self, matrix: ExactMatrix) -> "CosetVector":
        """Gamma(g) . x, well defined on cosets for integer Gamma(g)."""
        return CosetVector(matrix.apply(self.coords))

    def to_strings(self) -> list[str]:
        return _fraction_strings(self.coords)

    def __str__(self) -> str:
        return "[" + ", ".join(self.to_strings()) + "]"


@dataclass
class Cocycle:
    """A fully tabulated 1-cocycle f: G -> FM/M."""

    rep: Representation
    table: dict[GroupElement, CosetVector]
    gen_values: dict[str, CosetVector] = field(default_factory=dict)

    def __call__(self, g: GroupElement) -> CosetVector:
        return self.table[g]

    @property
    def group(self):
        return self.rep.group

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.gen_values.values())

    def to_payload(self, rep_ref: str = "representation") -> CocyclePayload:
        return CocyclePayload(
            rep=rep_ref,
            gen_values={
                name: v.to_strings() for name, v in self.gen_values.items()
            },
        )

    @classmethod
    def from_payload(
        cls, rep: Representation, payload: CocyclePayload | Mapping
    ) -> "Cocycle":
        if not isinstance(payload, CocyclePayload):
            payload = CocyclePayload.model_validate(payload)
        return extend_cocycle(
            rep,
            {
                name: CosetVector.from_strings(values)
                for name, values in payload.gen_values.items()
            },
        )

    def add_coboundary(self, z: Sequence[Any]) -> "Cocycle":
        """f + (g -> (Gamma(g) - E) z)."""
        z = tuple(Fraction(v) for v in z)
        values = {}
        for name, v in self.gen_values.items():
            image = self.rep.images[name].apply(z)
            values[name] = v + CosetVector(
                tuple(a - b for a, b in zip(image, z))
            )
        return extend_cocycle(self.rep, values)


class TorsionElement(NamedTuple):
    """An explicit pair (h, x) of finite order in Crys(G; M; f)."""

    g: GroupElement
    x: tuple[Fraction, ...]


def _word_value(
    rep: Representation,
    gen_values: Mapping[str, CosetVector],
    word: Sequence[tuple[str, int]],
) -> CosetVector:
    """f of a positive word via f(s w) = f(s) + Gamma(s) f(w), right to left."""
    value = CosetVector.zero(rep.degree)
    for name, exponent in reversed(word):
        for _ in range(exponent):
            value = gen_values[name] + value.act(rep.images[name])
    return value


def extend_cocycle(
    rep: Representation, gen_values: Mapping[str, CosetVector]
) -> Cocycle:
    """Extends generator values to the full cocycle table.

    Every defining relation is evaluated first; for a power relation g^k = 1
    this is the norm condition (E + Gamma(g) + ... + Gamma(g)^(k-1)) f(g) in
    Z^d.

    Raises:
        CocycleError: a relation leaves a non-integral residue.
        ParameterError: generator names or lengths do not match.
    """
    group = rep.group
    if set(gen_values) != set(group.generator_names):
        raise ParameterError(
            f"values for {sorted(gen_values)}, generators "
            f"{list(group.generator_names)}",
            "one value per generator",
        )
    values = {}
    for name, v in gen_values.items():
        if not isinstance(v, CosetVector):
            v = CosetVector(tuple(v))
        if v.dim != rep.degree:
            raise ShapeError(
                f"value of {name} has length {v.dim}, degree is {rep.degree}"
            )
        values[name] = v

    for relation in group.relations:
        residue = _word_value(rep, values, relation.lhs) - _word_value(
            rep, values, relation.rhs
        )
        if not residue.is_zero():
            raise CocycleError(relation.name, residue.to_strings())

    identity = group.identity()
    table = {identity: CosetVector.zero(rep.degree)}
    frontier = [identity]
    while frontier:
        nxt = []
        for g in frontier:
            for name in group.generator_names:
                h = group.multiply(group.generators[name], g)
                if h not in table:
                    table[h] = values[name] + table[g].act(rep.images[name])
                    nxt.append(h)
        frontier = nxt
    logger.debug("tabulated cocycle on %i elements", len(table))
    return Cocycle(rep, table, values)


def cocycle_law_violations(
    f: Cocycle, left: Sequence[GroupElement] | None = None
) -> list[tuple[GroupElement, GroupElement]]:
    """Pairs (g, h) with f(gh) != Gamma(g) f(h) + f(g), g from `left` (all
    elements by default) and h over the whole group."""
    group = f.group
    elements = group.elements()
    left = list(left) if left is not None else elements
    bad = []
    for g in left:
        image = f.rep.image(g)
        for h in elements:
            lhs = f(group.multiply(g, h))
            if lhs != f(h).act(image) + f(g):
                bad.append((g, h))
    return bad


# The shipped cocycles.


def cyclic_gen_values(rep: Representation) -> dict[str, CosetVector]:
    """f(a_i) = (1/p_i^n_i) v with v the first basis vector, fixed by G."""
    return {
        name: CosetVector.unit(rep.degree, {0: Fraction(1, p**n)})
        for name, (p, n) in zip(rep.group.generator_names, rep.group.factors)
    }


def bicyclic_gen_values(rep: Representation) -> dict[str, CosetVector]:
    """f(a) = X carries alpha = (eps - 1)^(-1) in the gamma1 slot; f(b) = Y
    carries alpha in each of the first p slots."""
    p = rep.group.p
    alpha = alpha_inverse(p).coords
    x = [Fraction(0)] * rep.degree
    y = [Fraction(0)] * rep.degree
    for r, c in enumerate(alpha):
        x[p * (p - 1) + r] = c
        for s in range(p):
            y[s * (p - 1) + r] = c
    return {"a": CosetVector(tuple(x)), "b": CosetVector(tuple(y))}


def alternating_gen_values(rep: Representation) -> dict[str, CosetVector]:
    """f_n(b) = 1/3 in the first coordinate; f_n(a) = 1/2 in the two
    coordinates 12n - 8 and 12n - 7, the first two entries of the last
    Delta_3 block acted on by the beta part of U(a)."""
    d = rep.degree
    if d % 12:
        raise ParameterError(f"degree {d}", "degree 12n")
    n = d // 12
    half = Fraction(1, 2)
    return {
        "a": CosetVector.unit(d, {12 * n - 8: half, 12 * n - 7: half}),
        "b": CosetVector.unit(d, {0: Fraction(1, 3)}),
    }


_STANDARD = {
    "cyclic-block": cyclic_gen_values,
    "composite": cyclic_gen_values,
    "bicyclic": bicyclic_gen_values,
    "alternating": alternating_gen_values,
}


def standard_cocycle(rep: Representation) -> Cocycle:
    """The explicit cocycle shipped with each representation family.

    Raises:
        ParameterError: the representation comes from another builder.
    """
    builder = _STANDARD.get(rep.provenance.family)
    if builder is None:
        raise ParameterError(
            f"no standard cocycle for {rep.provenance.family}",
            f"family in {sorted(_STANDARD)}",
        )
    return extend_cocycle(rep, builder(rep))


def zero_cocycle(rep: Representation) -> Cocycle:
    return extend_cocycle(
        rep,
        {name: CosetVector.zero(rep.degree) for name in rep.group.generator_names},
    )


# Decisions on cyclic subgroups.


def _require_nontrivial(f: Cocycle, h: GroupElement) -> int:
    k = f.group.order_of(h)
    if k == 1:
        raise ParameterError("h is the identity", "h != 1")
    return k


def _norm_of_lift(f: Cocycle, h: GroupElement) -> tuple[tuple[Fraction, ...], list[int]]:
    v = f(h).lift()
    u = f.rep.norm_matrix(h).apply(v)
    if any(Fraction(x).denominator != 1 for x in u):
        raise CocycleError(
            f"norm of {f.group.format_element(h)}", _fraction_strings(u)
        )
    return v, [int(x) for x in u]


def is_coboundary_on_cyclic(f: Cocycle, h: GroupElement) -> Certificate:
    """Decides whether f restricted to <h> is a coboundary.

    With v a lift of f(h) and N the norm of h, f|<h> is a coboundary iff
    N x = N v has an integer solution x; then f(h) = (Gamma(h) - E) z + x
    with z solving (Gamma(h) - E) z = v - x over Q.
    """
    _require_nontrivial(f, h)
    rep = f.rep
    label = f.group.format_element(h)
    v, u = _norm_of_lift(f, h)
    norm_snf = rep.norm_snf(h)
    x = solve_linear_integer(rep.norm_matrix(h), u, norm_snf)
    if x is None:
        logger.debug("restriction to <%s> is not a coboundary", label)
        return Certificate(
            kind=CertificateKind.SPLIT,
            verdict=False,
            subject=f"restriction to <{label}>",
            basis="norm-map reduction over Z",
            witnesses={
                "norm_of_lift": [str(c) for c in u],
                "norm_divisors": [str(d) for d in norm_snf.nontrivial_divisors],
            },
        )
    shifted = [a - b for a, b in zip(v, x)]
    z = solve_linear_rational(
        rep.image(h) - ExactMatrix.identity(rep.degree), shifted
    )
    if z is None:
        raise ComputationError(
            f"norm solvable but (h - 1) z = v - x unsolvable for <{label}>"
        )
    return Certificate(
        kind=CertificateKind.SPLIT,
        verdict=True,
        subject=f"restriction to <{label}>",
        basis="norm-map reduction over Z",
        witnesses={
            "z": _fraction_strings(z),
            "translation": [str(c) for c in x],
        },
    )


def norm_lattice_contains(
    rep: Representation, h: GroupElement, w: Sequence[int]
) -> bool:
    """Whether w lies in N Z^d for the norm N of h.

    Decided from the column Hermite normal form of N: its columns are a basis
    of N Z^d, so membership is integrality of the unique rational solution.
    """
    norm = rep.norm_matrix(h)
    if norm.is_zero():
        return not any(w)
    basis = hermite_normal_form(Matrix(norm.to_lists()))
    if basis.cols == 0:
        return not any(w)
    y = solve_linear_rational(
        ExactMatrix([[int(c) for c in row] for row in basis.tolist()]), w
    )
    return y is not None and all(Fraction(c).denominator == 1 for c in y)


def _power_translation(
    rep: Representation, h: GroupElement, x: Sequence[Fraction], k: int
) -> tuple[Fraction, ...]:
    """Translation part of (h, x)^k by the group law."""
    image = rep.image(h)
    acc: tuple[Fraction, ...] = (Fraction(0),) * len(x)
    for _ in range(k):
        acc = tuple(a + b for a, b in zip(x, image.apply(acc)))
    return acc


def torsion_element_search(
    f: Cocycle, h: GroupElement
) -> TorsionElement | None:
    """Looks for an integer m with N (v + m) = 0, making (h, v + m) an element
    of prime order; None when no such element lies over h.

    Existence is decided by Hermite-form lattice membership of -N v, apart
    from the Smith-form solver behind is_coboundary_on_cyclic. The returned
    element is checked by powering it with the group law.

    Raises:
        OracleMismatchError: the lattice contains -N v but the Smith-form
            solver finds no preimage.
        ComputationError: the witness does not power to the identity.
    """
    q = _require_nontrivial(f, h)
    if not isprime(q):
        raise ParameterError(f"order {q} is not prime", "h of prime order")
    v, u = _norm_of_lift(f, h)
    target = [-c for c in u]
    if not norm_lattice_contains(f.rep, h, target):
        return None
    label = f.group.format_element(h)
    m = solve_linear_integer(f.rep.norm_matrix(h), target, f.rep.norm_snf(h))
    if m is None:
        raise OracleMismatchError(
            f"<{label}>: -N v lies in the norm lattice but has no Smith-form "
            "preimage"
        )
    x = tuple(a + b for a, b in zip(v, m))
    if any(_power_translation(f.rep, h, x, q)):
        raise ComputationError(f"({label}, x)^{q} is not the identity")
    return TorsionElement(h, x)


def certify_torsionfree(f: Cocycle, oracle: bool = False) -> Certificate:
    """Crys(G; M; f) is torsionfree iff f restricted to every prime-order
    subgroup is not a coboundary.

    With `oracle` every prime-order element is also run through
    torsion_element_search and must agree with the coboundary verdict.

    Raises:
        OracleMismatchError: the two procedures disagree.
    """
    group = f.group
    subgroups = []
    verdict = True
    witnesses: dict[str, Any] = {}
    for h, q in iter_subgroup_generators(group):
        cert = is_coboundary_on_cyclic(f, h)
        subgroups.append(
            {
                "generator": group.format_element(h),
                "order": q,
                "coboundary": cert.verdict,
                **cert.witnesses,
            }
        )
        if cert.verdict and verdict:
            verdict = False
            element = torsion_element_search(f, h)
            if element is not None:
                witnesses["torsion_element"] = {
                    "g": group.format_element(element.g),
                    "x": _fraction_strings(element.x),
                }
    witnesses["subgroups"] = subgroups

    if oracle:
        for h, _ in prime_order_elements(group):
            split = is_coboundary_on_cyclic(f, h).verdict
            found = torsion_element_search(f, h) is not None
            if split != found:
                raise OracleMismatchError(
                    f"<{group.format_element(h)}>: coboundary={split}, "
                    f"torsion element found={found}"
                )
    logger.info(
        "torsionfree=%s over %i prime-order subgroups (oracle=%s)",
        verdict,
        len(subgroups),
        oracle,
    )
    return Certificate(
        kind=CertificateKind.TORSION_FREE,
        verdict=verdict,
        subject=repr(f.rep),
        basis="no prime-order restriction is a coboundary",
        witnesses=witnesses,
        checked_against_oracle=oracle,
    )


def certify_cocycle(f: Cocycle, exhaustive: bool = True) -> Certificate:
    """Cocycle-law check over all pairs, or over (generator, element) pairs,
    which implies the law for all pairs by induction on word length."""
    group = f.group
    left = None if exhaustive else list(group.generators.values())
    bad = cocycle_law_violations(f, left)
    pairs = group.order * (group.order if exhaustive else len(group.generators))
    return Certificate(
        kind=CertificateKind.COCYCLE_VALID,
        verdict=not bad,
        subject=repr(f.rep),
        basis=f"f(gh) = g f(h) + f(g) on {pairs} pairs",
        witnesses={
            "violations": [
                [f.group.format_element(g), f.group.format_element(h)]
                for g, h in bad[:10]
            ],
            "generator_values": {
                name: v.to_strings() for name, v in f.gen_values.items()
            },
        },
    )


def h1_order_cyclic(rep: Representation, h: GroupElement) -> int:
    """|H^1(<h>, FM/M)| = [M^h : N_h M], via the Smith form of N_h written in
    a saturated basis of the fixed lattice."""
    d = rep.degree
    fixed = kernel_saturated(rep.image(h) - ExactMatrix.identity(d))
    if not fixed:
        return 1
    basis = ExactMatrix([list(v) for v in fixed]).transpose()
    _, rows = basis.transpose().rref()
    square = basis.submatrix(rows, range(basis.ncols)).to_domain(Domain.Q)
    norm = rep.norm_matrix(h)
    coords = square.inverse() @ norm.submatrix(rows, range(d)).to_domain(
        Domain.Q
    )
    if not coords.is_integral():
        raise ComputationError("norm image left the fixed lattice")
    divisors = snf(coords.to_domain(Domain.Z)).diagonal
    if len(divisors) < len(fixed) or any(dv == 0 for dv in divisors):
        raise ComputationError("norm image has infinite index in M^h")
    return prod(abs(int(dv)) for dv in divisors)


def random_cyclic_cocycle(
    rep: Representation, rng: np.random.Generator, spread: int = 3
) -> Cocycle:
    """A random cocycle on a cyclic group of prime-power order: a random
    class representative w/k with w in M^a plus a random coboundary."""
    group = rep.group
    if group.family != "cyclic" or len(group.generator_names) != 1:
        raise ParameterError(f"{group!r}", "cyclic group of prime-power order")
    k = group.order
    d = rep.degree
    g = rep.images["a"]
    fixed = kernel_saturated(g - ExactMatrix.identity(d))
    w = [Fraction(0)] * d
    for vec in fixed:
        t = int(rng.integers(-spread, spread + 1))
        w = [a + Fraction(t * b, k) for a, b in zip(w, vec)]
    z = [Fraction(int(rng.integers(-spread * k, spread * k + 1)), k) for _ in range(d)]
    image = g.apply(z)
    value = [a + b - c for a, b, c in zip(w, image, z)]
    return extend_cocycle(rep, {"a": CosetVector(tuple(value))})


def small_cyclic_modules() -> list[Representation]:
    """Modules of degree at most 8 over C_4 and C_9 for the oracle suite."""
    return [
        build_regular_rep(4),
        build_cyclic_rep(2, 2),
        direct_sum_rep(build_delta_rep(2, 2, 1), build_delta_rep(2, 2, 2)),
        direct_sum_rep(build_delta_rep(2, 2, 0), build_delta_rep(2, 2, 2)),
        build_trivial_rep(build_delta_rep(2, 2, 0).group, 2),
        build_delta_rep(3, 2, 2),
        direct_sum_rep(build_delta_rep(3, 2, 0), build_delta_rep(3, 2, 2)),
        build_extension_rep(3, 0, 1, CycloElement.one(3, 0), n=2),
        direct_sum_rep(build_delta_rep(3, 2, 1), build_delta_rep(3, 2, 1)),
    ]


def oracle_agreement(
    modules: Sequence[Representation], trials: int, rng: np.random.Generator
) -> tuple[int, list[str]]:
    """Runs `trials` random cocycles through the Smith-form coboundary test
    and the Hermite-form torsion search on every prime-order element;
    returns the number of comparisons and the disagreements."""
    compared, mismatches = 0, []
    for t in range(trials):
        rep = modules[t % len(modules)]
        f = random_cyclic_cocycle(rep, rng)
        for h, _ in prime_order_elements(rep.group):
            split = is_coboundary_on_cyclic(f, h).verdict
            try:
                found = torsion_element_search(f, h) is not None
            except OracleMismatchError:
                found = not split
            compared += 1
            if split != found:
                mismatches.append(
                    f"trial {t} {rep!r} <{rep.group.format_element(h)}> "
                    f"f(a)={f.gen_values['a']}"
                )
    logger.info("oracle agreement: %i comparisons, %i mismatches", compared, len(mismatches))
    return compared, mismatches
