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

"""Integral representations of the holonomy groups and their builders.

Block orders are frozen: every cocycle coordinate and every certificate
depends on them.
"""

from __future__ import annotations

import logging
from functools import reduce
from math import gcd
from typing import Any, Mapping, Sequence

from sympy import ZZ, factorint
from sympy.polys.matrices import DomainMatrix

from crysgroups.entities.bundle import (
    GroupSpec,
    Provenance,
    RepresentationPayload,
)
from crysgroups.shared_libraries.errors import ParameterError, ShapeError
from crysgroups.tools.cyclotomic import (
    CycloElement,
    alpha_i,
    column_embed,
    phi,
    xi_matrix,
)
from crysgroups.tools.exact_linalg import (
    Domain,
    ExactMatrix,
    SnfResult,
    block_matrix,
    direct_sum,
    kron,
    poly_invariant_factors,
    snf,
)
from crysgroups.tools.groups import (
    GroupElement,
    HolonomyGroup,
    build_group,
    prime_order_elements,
)

logger = logging.getLogger(__name__)

RING_MARKERS = ("Z", "Z_(p)", "Z_p")
IMAGE_CACHE_MAX_DEGREE = 128


class Representation:
    """A homomorphism from a holonomy group into GL_d(Z), stored by
    generator images.

    Composite cyclic representations also keep their tensor factors; element
    images are then Kronecker products of factor powers.
    """

    def __init__(
        self,
        group: HolonomyGroup,
        images: Mapping[str, ExactMatrix],
        provenance: Provenance,
        ring_marker: str = "Z",
        coprime_ok: bool = True,
        factor_reps: Sequence["Representation"] | None = None,
    ):
        if set(images) != set(group.generator_names):
            raise ParameterError(
                f"images for {sorted(images)}, generators "
                f"{list(group.generator_names)}",
                "one image per generator",
            )
        if ring_marker not in RING_MARKERS:
            raise ParameterError(
                f"unknown ring marker {ring_marker}", "ring in Z, Z_(p), Z_p"
            )
        degrees = {m.shape for m in images.values()}
        if len(degrees) != 1:
            raise ShapeError(f"generator images of shapes {sorted(degrees)}")
        (shape,) = degrees
        if shape[0] != shape[1]:
            raise ShapeError(f"non-square generator image {shape}")
        for name, m in images.items():
            if m.domain is not Domain.Z:
                raise ParameterError(
                    f"image of {name} is over {m.domain.value}",
                    "integer generator images",
                )
        self.group = group
        self.images = {name: images[name] for name in group.generator_names}
        self.degree = shape[0]
        self.provenance = provenance
        self.ring_marker = ring_marker
        self.coprime_ok = coprime_ok
        self.factor_reps = tuple(factor_reps) if factor_reps else None
        self._cache: dict[GroupElement, ExactMatrix] = {}
        self._powers: dict[str, list[ExactMatrix]] = {}
        self._norms: dict[GroupElement, ExactMatrix] = {}
        self._norm_snfs: dict[GroupElement, SnfResult] = {}

    def __repr__(self) -> str:
        return (
            f"Representation<{self.provenance.family} {self.provenance.params}"
            f" degree={self.degree}>"
        )

    def _generator_power(self, name: str, k: int) -> ExactMatrix:
        powers = self._powers.setdefault(
            name, [ExactMatrix.identity(self.degree)]
        )
        while len(powers) <= k:
            powers.append(powers[-1] @ self.images[name])
        return powers[k]

    def image(self, g: GroupElement) -> ExactMatrix:
        """Image of an arbitrary group element."""
        cached = self._cache.get(g)
        if cached is not None:
            return cached
        if self.factor_reps is not None:
            result = reduce(
                kron,
                (
                    f.image(GroupElement("cyclic", (t,)))
                    for f, t in zip(self.factor_reps, g.key)
                ),
            )
        elif self.group.family == "alternating":
            result = ExactMatrix.identity(self.degree)
            for name, _ in self.group.word_of(g):
                result = result @ self.images[name]
        else:
            result = ExactMatrix.identity(self.degree)
            for name, e in self.group.word_of(g):
                result = result @ self._generator_power(name, e)
        if self.degree <= IMAGE_CACHE_MAX_DEGREE:
            self._cache[g] = result
        return result

    def norm_matrix(self, g: GroupElement) -> ExactMatrix:
        """N_g = E + Gamma(g) + ... + Gamma(g)^(k-1) for k = ord(g)."""
        cached = self._norms.get(g)
        if cached is None:
            step = self.image(g)
            power = total = ExactMatrix.identity(self.degree)
            for _ in range(self.group.order_of(g) - 1):
                power = power @ step
                total = total + power
            self._norms[g] = cached = total
        return cached

    def norm_snf(self, g: GroupElement) -> SnfResult:
        cached = self._norm_snfs.get(g)
        if cached is None:
            self._norm_snfs[g] = cached = snf(self.norm_matrix(g))
        return cached

    def word_image(self, word: Sequence[tuple[str, int]]) -> ExactMatrix:
        result = ExactMatrix.identity(self.degree)
        for name, e in word:
            m = self.images[name] if e >= 0 else self.images[name].inverse()
            for _ in range(abs(e)):
                result = result @ m
        return result

    def to_payload(self) -> RepresentationPayload:
        return RepresentationPayload(
            group=self.group.spec,
            degree=self.degree,
            images={
                name: m.to_payload() for name, m in self.images.items()
            },
            ring_marker=self.ring_marker,
            provenance=self.provenance,
            coprime_ok=self.coprime_ok,
        )

    @classmethod
    def from_payload(
        cls, payload: RepresentationPayload | Mapping
    ) -> "Representation":
        """Rebuilds a representation; composite bundles get their tensor
        factors back and must match the builder exactly."""
        if not isinstance(payload, RepresentationPayload):
            payload = RepresentationPayload.model_validate(payload)
        images = {
            name: ExactMatrix.from_payload(m)
            for name, m in payload.images.items()
        }
        group = build_group(payload.group)
        factor_reps = None
        if payload.provenance.family == "composite":
            rebuilt = build_composite_rep(
                [tuple(f) for f in payload.provenance.params["factors"]],
                payload.provenance.params["m"],
            )
            if rebuilt.images != images:
                raise ParameterError(
                    "composite images differ from the builder output",
                    "bundle images match their provenance",
                )
            factor_reps = rebuilt.factor_reps
        rep = cls(
            group,
            images,
            payload.provenance,
            payload.ring_marker,
            payload.coprime_ok,
            factor_reps,
        )
        if rep.degree != payload.degree:
            raise ShapeError(
                f"declared degree {payload.degree}, images of {rep.degree}"
            )
        return rep


# Small helpers.


def _ones_column(p: int) -> ExactMatrix:
    """Coordinates of 1 in B_1 as a (p-1) x 1 column."""
    return ExactMatrix.column(CycloElement.one(p, 1).coords)


def _coords_column(x: CycloElement) -> ExactMatrix:
    return ExactMatrix.column([int(c) for c in x.coords])


def _embed_one(p: int, i: int, j: int) -> ExactMatrix:
    return column_embed(CycloElement.one(p, i), j)


def jordan_lower(m: int) -> ExactMatrix:
    """Lower triangular Jordan block with eigenvalue 1."""
    return ExactMatrix(
        [[1 if i == j or i == j + 1 else 0 for j in range(m)] for i in range(m)]
    )


def jordan_upper(n: int, eigenvalue: int = 1) -> ExactMatrix:
    """Upper triangular Jordan block J_n(eigenvalue)."""
    return ExactMatrix(
        [
            [eigenvalue if i == j else (1 if j == i + 1 else 0) for j in range(n)]
            for i in range(n)
        ]
    )


def _cyclic_group(p: int, n: int) -> HolonomyGroup:
    return build_group(GroupSpec(family="cyclic", factors=[(p, n)]))


# Cyclic p-groups.


def cyclic_blocks(
    p: int, n: int, m: int = 1, a_matrix: ExactMatrix | None = None
) -> tuple[ExactMatrix, ExactMatrix, ExactMatrix]:
    """Diagonal blocks D1, D2 and intertwining block U of the glued
    representation of the cyclic group of order p^n.

    D1 = E_m (x) delta_0 + E_m (x) delta_1, D2 = sum of E_m (x) delta_j for
    j = 2..n. U has block rows (A (x) <1>^0_2, E_m (x) <1>^0_j, ...) and
    (E_m (x) <1>^1_j, ...).
    """
    if n < 2:
        raise ParameterError(f"n = {n}", "n >= 2 required")
    if m < 1:
        raise ParameterError(f"m = {m}", "m >= 1 required")
    if n == 2 and m != 1:
        raise ParameterError(f"n = 2 with m = {m}", "n = 2 requires m = 1")
    if a_matrix is None:
        a_matrix = jordan_lower(m)
    if a_matrix.shape != (m, m) or a_matrix.domain is not Domain.Z:
        raise ParameterError(
            f"A has shape {a_matrix.shape}", "A is an m x m integer matrix"
        )
    em = ExactMatrix.identity(m)
    d1 = direct_sum(kron(em, xi_matrix(p, 0)), kron(em, xi_matrix(p, 1)))
    d2 = direct_sum(*(kron(em, xi_matrix(p, j)) for j in range(2, n + 1)))
    top = [
        kron(a_matrix if j == 2 else em, _embed_one(p, 0, j))
        for j in range(2, n + 1)
    ]
    bottom = [kron(em, _embed_one(p, 1, j)) for j in range(2, n + 1)]
    return d1, d2, block_matrix([top, bottom])


def build_cyclic_rep(
    p: int, n: int, m: int = 1, a_matrix: ExactMatrix | None = None
) -> Representation:
    """Indecomposable representation of the cyclic group of order p^n of
    degree m * p^n.

    For n = 2 only m = 1 is allowed. A defaults to the lower triangular
    Jordan block J_m (the scalar 1 when m = 1).
    """
    d1, d2, u = cyclic_blocks(p, n, m, a_matrix)
    image = block_matrix([[d1, u], [None, d2]])
    params: dict[str, Any] = {"p": p, "n": n, "m": m}
    if a_matrix is not None:
        params["A"] = [list(row) for row in a_matrix.data]
    logger.debug("cyclic block representation %s of degree %i", params, image.nrows)
    return Representation(
        _cyclic_group(p, n),
        {"a": image},
        Provenance(family="cyclic-block", params=params),
    )


def build_composite_rep(
    factors: Sequence[tuple[int, int]], m: int = 1
) -> Representation:
    """Tensor product of the factor representations of a cyclic group of
    composite order; the first factor carries the multiplicity m.

    Raises:
        ParameterError: exponent constraints n_1 >= 3 and n_i >= 2 fail.
    """
    factors = [(int(p), int(n)) for p, n in factors]
    group = build_group(GroupSpec(family="cyclic", factors=factors, strict=True))
    if m < 1:
        raise ParameterError(f"m = {m}", "m >= 1 required")
    factor_reps = [
        build_cyclic_rep(p, n, m if i == 0 else 1)
        for i, (p, n) in enumerate(factors)
    ]
    identities = [ExactMatrix.identity(f.degree) for f in factor_reps]
    images = {}
    for i, name in enumerate(group.generator_names):
        parts = list(identities)
        parts[i] = factor_reps[i].images["a"]
        images[name] = reduce(kron, parts)
    coprime_ok = gcd(m, group.order) == 1
    if not coprime_ok:
        logger.warning(
            "m = %i shares a factor with |G| = %i; indecomposability "
            "certification will refuse this bundle",
            m,
            group.order,
        )
    return Representation(
        group,
        images,
        Provenance(
            family="composite",
            params={"factors": [list(f) for f in factors], "m": m},
        ),
        coprime_ok=coprime_ok,
        factor_reps=factor_reps,
    )


def build_delta_rep(p: int, n: int, i: int) -> Representation:
    """delta_i: a -> xi_i, a representation of the cyclic group of order p^n
    for 0 <= i <= n."""
    if not 0 <= i <= n or n < 1:
        raise ParameterError(f"delta_{i} of order {p}^{n}", "0 <= i <= n")
    return Representation(
        _cyclic_group(p, n),
        {"a": xi_matrix(p, i)},
        Provenance(family="delta", params={"p": p, "n": n, "i": i}),
    )


def build_extension_rep(
    p: int, i: int, j: int, alpha: CycloElement, n: int | None = None
) -> Representation:
    """Two-step extension a -> [[xi_i, <alpha>^i_j], [0, xi_j]] of delta_j by
    delta_i over the cyclic group of order p^n (n defaults to max(j, 1))."""
    n = max(j, 1) if n is None else n
    if not 0 <= i < j <= n:
        raise ParameterError(f"i={i}, j={j}, n={n}", "0 <= i < j <= n")
    if alpha.level != i or alpha.p != p or not alpha.is_integral():
        raise ParameterError(
            "alpha must be an integral element of level i", "alpha in R_i"
        )
    image = block_matrix(
        [[xi_matrix(p, i), column_embed(alpha, j)], [None, xi_matrix(p, j)]]
    )
    return Representation(
        _cyclic_group(p, n),
        {"a": image},
        Provenance(
            family="extension",
            params={
                "p": p,
                "i": i,
                "j": j,
                "n": n,
                "alpha": [str(c) for c in alpha.coords],
            },
        ),
    )


def build_regular_rep(order: int) -> Representation:
    """Regular permutation representation of a cyclic group."""
    factors = sorted(factorint(order).items())
    group = build_group(GroupSpec(family="cyclic", factors=factors))
    shift = ExactMatrix(
        [[1 if i == (j + 1) % order else 0 for j in range(order)] for i in range(order)]
    )
    images = {}
    for name, (q, e) in zip(group.generator_names, factors):
        mod, other = q**e, order // q**e
        images[name] = shift.power(other * pow(other, -1, mod) % order)
    return Representation(
        group, images, Provenance(family="regular", params={"order": order})
    )


def build_trivial_rep(group: HolonomyGroup, degree: int = 1) -> Representation:
    eye = ExactMatrix.identity(degree)
    return Representation(
        group,
        {name: eye for name in group.generator_names},
        Provenance(family="trivial", params={"degree": degree}),
    )


def direct_sum_rep(*reps: Representation) -> Representation:
    group = reps[0].group
    if any(r.group != group for r in reps):
        raise ParameterError("summands over different groups", "same group")
    return Representation(
        group,
        {
            name: direct_sum(*(r.images[name] for r in reps))
            for name in group.generator_names
        },
        Provenance(
            family="direct-sum",
            params={"summands": [r.provenance.model_dump() for r in reps]},
        ),
    )


# C_p x C_p.


def _bicyclic_group(p: int) -> HolonomyGroup:
    return build_group(GroupSpec(family="bicyclic", p=p))


def _require_odd(p: int) -> None:
    if p == 2:
        raise ParameterError(
            "C_2 x C_2 is not covered by this construction; its "
            "indecomposable lattices are classified separately",
            "C_p x C_p holonomy requires p > 2",
        )


def bicyclic_irreducibles(p: int) -> dict[str, tuple[ExactMatrix, ExactMatrix]]:
    """The p + 2 irreducible rational representations of C_p x C_p as
    (image of a, image of b), keyed gamma0..gamma3 and rho2..rho{p-1}."""
    _require_odd(p)
    e = xi_matrix(p, 1)
    ik = ExactMatrix.identity(p - 1)
    irreducibles = {
        "gamma0": (ExactMatrix.identity(1), ExactMatrix.identity(1)),
        "gamma1": (ik, e),
        "gamma2": (e, ik),
        "gamma3": (e, e),
    }
    for i in range(2, p):
        irreducibles[f"rho{i}"] = (e, e.power(i))
    return irreducibles


def build_bicyclic_irreducible(p: int, name: str) -> Representation:
    table = bicyclic_irreducibles(p)
    if name not in table:
        raise ParameterError(f"unknown irreducible {name}", f"one of {sorted(table)}")
    a, b = table[name]
    return Representation(
        _bicyclic_group(p),
        {"a": a, "b": b},
        Provenance(family="bicyclic-irreducible", params={"p": p, "name": name}),
    )


def _bicyclic_base(p: int) -> tuple[ExactMatrix, ExactMatrix]:
    """Degree p^2 glued representation: tau = rho_{p-1} + ... + rho_2 +
    gamma3 + gamma2 + gamma1, then gamma0 last, with the intertwining column
    U(a) = (<1>, ..., <1>, 0) and U(b) = (<alpha_1>, ..., <alpha_p>, <1>)."""
    irr = bicyclic_irreducibles(p)
    order = [f"rho{i}" for i in range(p - 1, 1, -1)] + ["gamma3", "gamma2", "gamma1"]
    ones = _ones_column(p)
    u_a = [ones] * p + [ExactMatrix.zeros(p - 1, 1)]
    u_b = [_coords_column(alpha_i(p, s)) for s in range(1, p + 1)] + [ones]
    sizes = [p - 1] * (p + 1) + [1]
    result = []
    for g, u in ((0, u_a), (1, u_b)):
        grid: list[list[ExactMatrix | None]] = [
            [None] * (p + 2) for _ in range(p + 2)
        ]
        for s, name in enumerate(order):
            grid[s][s] = irr[name][g]
            grid[s][p + 1] = u[s]
        grid[p + 1][p + 1] = ExactMatrix.identity(1)
        result.append(block_matrix(grid, sizes, sizes))
    return result[0], result[1]


def _bicyclic_tail(p: int, n: int) -> tuple[ExactMatrix, ExactMatrix]:
    """Degree (3p-2)n representation on E_n(x)gamma3, E_n(x)gamma2,
    E_n(x)gamma1, E_n(x)gamma0 with u11(a) = E, u12 = J_n(x)<1>,
    u21(a) = E, u21(b) = -E, u22(a) = E_n(x)<1>."""
    k = p - 1
    en, ik = ExactMatrix.identity(n), ExactMatrix.identity(k)
    e = xi_matrix(p, 1)
    g3, g2, g1 = (e, e), (e, ik), (ik, e)
    ones = _ones_column(p)
    eye_nk = kron(en, ik)
    u12 = kron(jordan_upper(n), ones)
    sizes = [n * k] * 3 + [n]
    result = []
    for g in (0, 1):
        grid = [
            [kron(en, g3[g]), None, eye_nk if g == 0 else None, u12],
            [None, kron(en, g2[g]), eye_nk if g == 0 else -eye_nk,
             kron(en, ones) if g == 0 else None],
            [None, None, kron(en, g1[g]), None],
            [None, None, None, en],
        ]
        result.append(block_matrix(grid, sizes, sizes))
    return result[0], result[1]


def build_bicyclic_tail_rep(p: int, n: int) -> Representation:
    """The degree (3p-2)n tail representation glued onto the base block."""
    _require_odd(p)
    if n < 1:
        raise ParameterError(f"n = {n}", "n >= 1 required")
    a, b = _bicyclic_tail(p, n)
    return Representation(
        _bicyclic_group(p),
        {"a": a, "b": b},
        Provenance(family="bicyclic-tail", params={"p": p, "n": n}),
    )


def build_p2_rep(p: int, n: int = 0, ring_marker: str = "Z") -> Representation:
    """Indecomposable representation of C_p x C_p of degree p^2 (n = 0) or
    (3p-2)n + p^2; the tail is glued by a single 1 linking the first row of
    the gamma3 slot to the first gamma0 coordinate of the tail.

    Raises:
        ParameterError: p = 2, p not prime, or n < 0.
    """
    _require_odd(p)
    group = _bicyclic_group(p)
    if n < 0:
        raise ParameterError(f"n = {n}", "n >= 0 required")
    base_a, base_b = _bicyclic_base(p)
    if n == 0:
        images = {"a": base_a, "b": base_b}
    else:
        tail_a, tail_b = _bicyclic_tail(p, n)
        d0, dn = p * p, tail_a.nrows
        v = [[0] * dn for _ in range(d0)]
        v[(p - 2) * (p - 1)][3 * n * (p - 1)] = 1
        glue = ExactMatrix(v)
        images = {
            "a": block_matrix([[base_a, glue], [None, tail_a]]),
            "b": block_matrix([[base_b, glue], [None, tail_b]]),
        }
    return Representation(
        group,
        images,
        Provenance(family="bicyclic", params={"p": p, "n": n}),
        ring_marker=ring_marker,
    )


def condensed_slots(p: int) -> list[tuple[int, int]]:
    """(start, width) of the p + 1 slots of width p - 1 and the final
    width-1 slot of the base block."""
    slots = [(s * (p - 1), p - 1) for s in range(p + 1)]
    slots.append(((p + 1) * (p - 1), 1))
    return slots


def condense(vector: Sequence[Any], p: int) -> list[tuple[Any, ...]]:
    """Splits the base-block part of a vector into condensed slots."""
    return [tuple(vector[s : s + w]) for s, w in condensed_slots(p)]


# A_4.


def alternating_irreducibles() -> dict[int, tuple[ExactMatrix, ExactMatrix]]:
    """The four integral irreducibles Delta_1..Delta_4 as (a, b) images.

    Delta_4(b) is the cyclic permutation matrix; with it Delta_4 satisfies
    the presentation and agrees with Delta_3 on b.
    """
    return {
        1: (ExactMatrix([[1]]), ExactMatrix([[1]])),
        2: (ExactMatrix.identity(2), ExactMatrix([[0, -1], [1, -1]])),
        3: (
            ExactMatrix([[0, -1, 1], [0, -1, 0], [1, -1, 0]]),
            ExactMatrix([[0, 0, 1], [1, 0, 0], [0, 1, 0]]),
        ),
        4: (
            ExactMatrix([[-1, -1, -1], [0, 0, 1], [0, 1, 0]]),
            ExactMatrix([[0, 0, 1], [1, 0, 0], [0, 1, 0]]),
        ),
    }


ALTERNATING_ALPHA = (0, 0, 0, 0, 2, 0, 1, -1, 0, 0, 0)
ALTERNATING_BETA = (0, -2, 0, 0, 0, 0, 0, 1, -1, -1, 0)


def _alternating_group() -> HolonomyGroup:
    return build_group(GroupSpec(family="alternating"))


def _alternating_block() -> tuple[ExactMatrix, ExactMatrix]:
    """Degree 11 block: Delta_3, Delta_3, Delta_2, Delta_4 with off-diagonal
    X_1 at (1, 3), X_3 at (1, 4) and X_2 at (2, 3); X_i(b) = 0."""
    irr = alternating_irreducibles()
    x1 = ExactMatrix([[1, 0], [0, 1], [-1, 1]])
    x2 = ExactMatrix([[0, 1], [-1, 1], [-1, 0]])
    x3 = ExactMatrix([[0, 0, 1], [0, 0, 0], [0, -1, 0]])
    sizes = [3, 3, 2, 3]
    a = block_matrix(
        [
            [irr[3][0], None, x1, x3],
            [None, irr[3][0], x2, None],
            [None, None, irr[2][0], None],
            [None, None, None, irr[4][0]],
        ],
        sizes,
        sizes,
    )
    b = direct_sum(irr[3][1], irr[3][1], irr[2][1], irr[4][1])
    return a, b


def build_alternating_irreducible(k: int) -> Representation:
    irr = alternating_irreducibles()
    if k not in irr:
        raise ParameterError(f"Delta_{k}", "k in 1..4")
    a, b = irr[k]
    return Representation(
        _alternating_group(),
        {"a": a, "b": b},
        Provenance(family="alternating-irreducible", params={"k": k}),
    )


def build_alternating_block_rep() -> Representation:
    a, b = _alternating_block()
    return Representation(
        _alternating_group(),
        {"a": a, "b": b},
        Provenance(family="alternating-block", params={}),
    )


def build_a4_rep(n: int) -> Representation:
    """Degree 12n representation [[E_n, U], [0, E_n (x) Delta]] of A_4 with
    U(a) = E_n (x) alpha + J_n(0) (x) beta and U(b) = 0."""
    if n < 1:
        raise ParameterError(f"n = {n}", "n >= 1 required")
    block_a, block_b = _alternating_block()
    en = ExactMatrix.identity(n)
    alpha = ExactMatrix([list(ALTERNATING_ALPHA)])
    beta = ExactMatrix([list(ALTERNATING_BETA)])
    u_a = kron(en, alpha) + kron(jordan_upper(n, 0), beta)
    images = {
        "a": block_matrix([[en, u_a], [None, kron(en, block_a)]]),
        "b": block_matrix(
            [[en, None], [None, kron(en, block_b)]], [n, 11 * n], [n, 11 * n]
        ),
    }
    return Representation(
        _alternating_group(),
        images,
        Provenance(family="alternating", params={"n": n}),
    )


# Checks.


class RepresentationReport(dict):
    """Plain mapping {relations_ok, faithful, unit_determinants,
    failed_relations}; failures are fields, never exceptions."""

    @property
    def ok(self) -> bool:
        return bool(
            self["relations_ok"] and self["faithful"] and self["unit_determinants"]
        )


def verify_representation(
    rep: Representation, det_max_degree: int = 120
) -> RepresentationReport:
    """Checks defining relations, faithfulness and unit determinants.

    Determinants are computed exactly up to `det_max_degree`; above it they
    follow from Gamma(g)^ord(g) = E for generators of finite order.
    """
    group = rep.group
    failed = [
        rel.name
        for rel in group.relations
        if rep.word_image(rel.lhs) != rep.word_image(rel.rhs)
    ]
    relations_ok = not failed

    faithful = True
    seen: dict[int, GroupElement] = {}
    for g in group.elements():
        m = rep.image(g)
        key = hash(m)
        other = seen.get(key)
        if other is not None and rep.image(other) == m:
            faithful = False
            break
        seen[key] = g

    if rep.degree <= det_max_degree:
        unit = all(
            abs(int(_det(m))) == 1 for m in rep.images.values()
        )
    else:
        unit = all(
            rep.images[name].power(group.order_of(group.generators[name]))
            .is_identity()
            for name in group.generator_names
        )
    logger.info(
        "verified %r: relations=%s faithful=%s unit=%s",
        rep,
        relations_ok,
        faithful,
        unit,
    )
    return RepresentationReport(
        relations_ok=relations_ok,
        faithful=faithful,
        unit_determinants=unit,
        failed_relations=failed,
    )


def _det(m: ExactMatrix) -> int:
    dm = DomainMatrix(
        [[ZZ(int(v)) for v in row] for row in m.data], m.shape, ZZ
    )
    return int(dm.det())


def restrict_to_cyclic(rep: Representation, h: GroupElement) -> Representation:
    """Restriction to the cyclic subgroup generated by h.

    The restricted group uses the CRT generators of its order; for a
    prime-power order the single generator "a" maps to rep(h).
    """
    k = rep.group.order_of(h)
    if k == 1:
        raise ParameterError("cannot restrict to the identity", "h != 1")
    factors = sorted(factorint(k).items())
    group = build_group(GroupSpec(family="cyclic", factors=factors))
    images = {}
    for name, (q, e) in zip(group.generator_names, factors):
        mod, other = q**e, k // q**e
        exponent = other * pow(other, -1, mod) % k
        images[name] = rep.image(rep.group.power(h, exponent))
    return Representation(
        group,
        images,
        Provenance(
            family="restriction",
            params={
                "parent": rep.provenance.model_dump(),
                "element": rep.group.format_element(h),
                "order": k,
            },
        ),
        ring_marker=rep.ring_marker,
    )


def params_equivalent_mod_p(a: ExactMatrix, b: ExactMatrix, p: int) -> bool:
    """True iff A and B are similar over F_p (equal invariant factors of
    xE - A and xE - B)."""
    if a.shape != b.shape or not a.is_square():
        raise ShapeError(f"cannot compare {a.shape} with {b.shape}")
    fa = poly_invariant_factors(a.to_domain(Domain.FP, p))
    fb = poly_invariant_factors(b.to_domain(Domain.FP, p))
    return fa == fb


def character_vector(rep: Representation) -> tuple[int, ...]:
    """Traces of all images in the group's element order."""
    return tuple(int(rep.image(g).trace()) for g in rep.group.elements())


def kernel_elements(rep: Representation) -> list[GroupElement]:
    """Prime-order elements acting trivially; empty iff rep is faithful."""
    return [
        g for g, _ in prime_order_elements(rep.group) if rep.image(g).is_identity()
    ]
