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

"""Centralizer rings, their reductions mod p and indecomposability
certificates."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property, reduce
from typing import Any, Iterator, Sequence

import galois
import numpy as np
from sympy import Poly

from crysgroups.config import SearchSettings
from crysgroups.entities.certificate import Certificate, CertificateKind
from crysgroups.shared_libraries.errors import (
    CertificationRefused,
    ComputationError,
    OracleMismatchError,
    ParameterError,
)
from crysgroups.tools.exact_linalg import (
    X,
    Domain,
    ExactMatrix,
    format_poly,
    kernel_saturated_sparse,
    kron,
    poly_invariant_factors,
)
from crysgroups.tools.reps import Representation, jordan_lower

logger = logging.getLogger(__name__)


def centralizer_basis(rep: Representation) -> list[ExactMatrix]:
    """Saturated Z-basis of {X : X Gamma(g) = Gamma(g) X for all generators}.

    The unknown X[i][k] is variable i * d + k; each generator contributes
    the d^2 equations of X G - G X = 0.
    """
    d = rep.degree
    rows: dict[int, dict[int, int]] = {}
    eq = 0
    for image in rep.images.values():
        data = image.data
        by_col = [
            {k: data[k][j] for k in range(d) if data[k][j]} for j in range(d)
        ]
        by_row = [{k: v for k, v in enumerate(data[i]) if v} for i in range(d)]
        for i in range(d):
            for j in range(d):
                coeffs: dict[int, int] = {}
                for k, g in by_col[j].items():
                    var = i * d + k
                    coeffs[var] = coeffs.get(var, 0) + g
                for k, g in by_row[i].items():
                    var = k * d + j
                    coeffs[var] = coeffs.get(var, 0) - g
                coeffs = {v: c for v, c in coeffs.items() if c}
                if coeffs:
                    rows[eq] = coeffs
                eq += 1
    kernel = kernel_saturated_sparse(rows, eq, d * d)
    logger.info("centralizer of %r has Z-rank %i", rep, len(kernel))
    return [
        ExactMatrix([vec[i * d : (i + 1) * d] for i in range(d)])
        for vec in kernel
    ]


def _poly_from_field(coeffs_low_to_high: Sequence[int], p: int) -> Poly:
    return Poly(list(reversed([int(c) % p for c in coeffs_low_to_high])), X, modulus=p)


@dataclass
class EndoAlgebra:
    """The algebra End(M) (x) F_p, in coordinates over the reduced Z-basis.

    structure[s, t, u] is the coefficient of b_u in b_s b_t.
    """

    rep: Representation
    p: int
    z_basis: list[ExactMatrix]
    structure: np.ndarray
    identity: np.ndarray
    field_cls: Any = field(repr=False, default=None)

    @property
    def dim(self) -> int:
        return len(self.z_basis)

    @property
    def GF(self):
        if self.field_cls is None:
            self.field_cls = galois.GF(self.p)
        return self.field_cls

    def unit(self, s: int) -> np.ndarray:
        e = np.zeros(self.dim, dtype=np.int64)
        e[s] = 1
        return e

    def mul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.einsum("s,t,stu->u", x, y, self.structure) % self.p

    def left_matrix(self, x: np.ndarray) -> np.ndarray:
        """Matrix of y -> x y acting on coordinate columns."""
        return np.einsum("s,stu->ut", x, self.structure) % self.p

    def is_commutative(self) -> bool:
        return bool(
            np.array_equal(self.structure, self.structure.transpose(1, 0, 2))
        )

    def is_associative(self) -> bool:
        c = self.structure
        left = np.einsum("stv,vuw->stuw", c, c) % self.p
        right = np.einsum("tuv,svw->stuw", c, c) % self.p
        return bool(np.array_equal(left, right))

    def evaluate(self, poly: Poly, x: np.ndarray) -> np.ndarray:
        """poly(x) by Horner's rule."""
        result = np.zeros(self.dim, dtype=np.int64)
        for c in poly.all_coeffs():
            result = (self.mul(result, x) + (int(c) % self.p) * self.identity) % self.p
        return result

    def to_matrix(self, x: np.ndarray) -> ExactMatrix:
        """sum x_s b_s reduced mod p, as an F_p matrix of the module."""
        d = self.rep.degree
        total = np.zeros((d, d), dtype=np.int64)
        for s, c in enumerate(x):
            if c:
                total += int(c) * self._basis_arrays[s]
        return ExactMatrix((total % self.p).tolist(), Domain.FP, self.p)

    @cached_property
    def _basis_arrays(self) -> list[np.ndarray]:
        return [np.array(b.to_lists(), dtype=np.int64) for b in self.z_basis]


def _pivot_columns(rref: np.ndarray) -> list[int]:
    pivots = []
    for row in np.asarray(rref):
        nz = np.flatnonzero(row)
        if nz.size == 0:
            break
        pivots.append(int(nz[0]))
    return pivots


def endo_algebra_mod_p(
    rep: Representation, p: int, basis: Sequence[ExactMatrix] | None = None
) -> EndoAlgebra:
    """Structure constants of the centralizer tensored with F_p.

    Coordinates of a product are read off at the pivot positions of the
    reduced basis; saturation makes the reduction injective.
    """
    basis = list(basis) if basis is not None else centralizer_basis(rep)
    GF = galois.GF(p)
    d, r = rep.degree, len(basis)
    stacked = np.array(
        [np.array(b.to_lists(), dtype=np.int64) % p for b in basis]
    )
    flat = GF(stacked.reshape(r, d * d))
    pivots = _pivot_columns(flat.row_reduce())
    if len(pivots) != r:
        raise ComputationError(
            f"centralizer basis has rank {len(pivots)} < {r} mod {p}"
        )
    inv = np.linalg.inv(flat[:, pivots]).view(np.ndarray).astype(np.int64)
    structure = np.zeros((r, r, r), dtype=np.int64)
    for s in range(r):
        products = np.matmul(stacked[s], stacked) % p
        at_pivots = products.reshape(r, d * d)[:, pivots]
        structure[s] = (at_pivots @ inv) % p
    ident = np.eye(d, dtype=np.int64).reshape(d * d)[pivots]
    identity = (ident @ inv) % p
    logger.debug("mod-%i centralizer algebra of dimension %i", p, r)
    return EndoAlgebra(rep, p, basis, structure, identity, GF)


# Radical and locality.


def _trace_forms(alg: EndoAlgebra, elements: np.ndarray, i: int) -> np.ndarray:
    """g_i(w) = (Tr(L(w)^(p^i)) mod p^(i+1)) / p^i for each row w."""
    p = alg.p
    mod = p ** (i + 1)
    mats = np.einsum("bs,stu->but", elements, alg.structure) % p
    result = np.eye(alg.dim, dtype=np.int64)[None].repeat(len(elements), 0)
    base, k = mats, p**i
    while k:
        if k & 1:
            result = np.matmul(result, base) % mod
        k >>= 1
        if k:
            base = np.matmul(base, base) % mod
    traces = np.trace(result, axis1=1, axis2=2) % mod
    if np.any(traces % p**i):
        raise ComputationError(f"trace form g_{i} is not divisible by {p}^{i}")
    return traces // p**i


def jacobson_radical(alg: EndoAlgebra) -> np.ndarray:
    """Row basis (F_p coordinates) of the radical.

    I_{-1} = A and I_i = {z in I_{i-1} : g_i(z y) = 0 for all y}; the
    radical is I_l for l = floor(log_p dim A).
    """
    GF, p, n = alg.GF, alg.p, alg.dim
    current = np.eye(n, dtype=np.int64)
    levels = 0
    while p ** (levels + 1) <= n:
        levels += 1
    for i in range(levels + 1):
        if len(current) == 0:
            break
        products = np.einsum("ts,sju->tju", current, alg.structure) % p
        forms = np.stack(
            [_trace_forms(alg, products[t], i) for t in range(len(current))]
        ) % p
        combos = GF(forms).left_null_space()
        current = (
            (combos.view(np.ndarray).astype(np.int64) @ current) % p
            if len(combos)
            else np.zeros((0, n), dtype=np.int64)
        )
        logger.debug("radical step %i: dimension %i", i, len(current))
    return current


def _express(GF, rows: np.ndarray, target: np.ndarray) -> np.ndarray | None:
    """Coefficients c with c . rows = target over F_p, or None."""
    k, p = len(rows), GF.characteristic
    augmented = np.column_stack([rows.T, target]) if k else target.reshape(-1, 1)
    rref = GF(augmented % p).row_reduce().view(np.ndarray)
    pivots = _pivot_columns(rref)
    if k in pivots:
        return None
    c = np.zeros(k, dtype=np.int64)
    for row, col in enumerate(pivots):
        c[col] = rref[row, k]
    return c


def min_poly(alg: EndoAlgebra, x: np.ndarray, radical: np.ndarray | None = None) -> Poly:
    """Minimal polynomial of x in A, or in A / radical when given."""
    p = alg.p
    base = radical if radical is not None else np.zeros((0, alg.dim), dtype=np.int64)
    powers = [alg.identity % p]
    while True:
        nxt = alg.mul(powers[-1], x)
        rows = np.vstack([base] + [np.array(powers)])
        c = _express(alg.GF, rows, nxt)
        if c is not None:
            lower = [(-int(v)) % p for v in c[len(base) :]]
            return _poly_from_field(lower + [1], p)
        powers.append(nxt)


def _split_idempotent(alg: EndoAlgebra, x: np.ndarray) -> np.ndarray:
    """Idempotent from a coprime split m = g h of the minimal polynomial of
    x in A: e = (t h)(x) where s g + t h = 1."""
    m = min_poly(alg, x)
    _, factors = m.factor_list()
    g = factors[0][0] ** factors[0][1]
    h = reduce(lambda a, b: a * b, (f**e for f, e in factors[1:]))
    _, t, one = g.gcdex(h)
    if one.degree() != 0:
        raise ComputationError("factors of the minimal polynomial are not coprime")
    e = alg.evaluate(t * h, x)
    if not np.array_equal(alg.mul(e, e), e):
        raise ComputationError("CRT element is not idempotent")
    return e


def _candidates(alg: EndoAlgebra, settings: SearchSettings) -> Iterator[np.ndarray]:
    for s in range(alg.dim):
        yield alg.unit(s)
    rng = np.random.default_rng(settings.seed)
    for _ in range(settings.primitive_element_tries):
        yield rng.integers(0, alg.p, size=alg.dim, dtype=np.int64)


def _rank_mod_p(alg: EndoAlgebra, m: ExactMatrix) -> int:
    return int(np.linalg.matrix_rank(alg.GF(np.array(m.to_lists(), dtype=np.int64))))


def is_local_mod_p(
    alg: EndoAlgebra, settings: SearchSettings | None = None
) -> Certificate:
    """Decides whether the algebra has no idempotents besides 0 and 1.

    The quotient by the radical is local iff it is a field, witnessed by an
    element whose minimal polynomial modulo the radical is irreducible of
    full degree. A minimal polynomial with two distinct irreducible factors
    yields an explicit nontrivial idempotent instead.

    Raises:
        ComputationError: the seeded search decided nothing.
    """
    settings = settings or SearchSettings()
    p, n = alg.p, alg.dim
    radical = jacobson_radical(alg)
    quotient_dim = n - len(radical)
    witnesses: dict[str, Any] = {
        "p": p,
        "dimension": n,
        "radical_dimension": len(radical),
        "quotient_dimension": quotient_dim,
    }
    if quotient_dim == 1:
        return Certificate(
            kind=CertificateKind.INDECOMPOSABLE,
            verdict=True,
            subject=repr(alg.rep),
            basis=f"centralizer mod {p} has residue field F_{p}",
            witnesses=witnesses,
        )
    for tried, x in enumerate(_candidates(alg, settings)):
        m = min_poly(alg, x, radical)
        factors = m.factor_list()[1]
        if len(factors) >= 2:
            e = _split_idempotent(alg, x)
            e_matrix = alg.to_matrix(e)
            other = alg.to_matrix((alg.identity - e) % p)
            if _rank_mod_p(alg, other) < _rank_mod_p(alg, e_matrix):
                e, e_matrix = (alg.identity - e) % p, other
            witnesses.update(
                element=[int(v) for v in x],
                min_poly_mod_radical=format_poly(m, p),
                idempotent_coords=[int(v) for v in e],
                idempotent=e_matrix.to_payload().model_dump(),
            )
            logger.info("not local mod %i after %i candidates", p, tried + 1)
            return Certificate(
                kind=CertificateKind.INDECOMPOSABLE,
                verdict=False,
                subject=repr(alg.rep),
                basis=f"nontrivial idempotent mod {p}",
                witnesses=witnesses,
            )
        if m.degree() == quotient_dim:
            witnesses.update(
                primitive_element=[int(v) for v in x],
                min_poly_mod_radical=format_poly(m, p),
            )
            logger.info("local mod %i after %i candidates", p, tried + 1)
            return Certificate(
                kind=CertificateKind.INDECOMPOSABLE,
                verdict=True,
                subject=repr(alg.rep),
                basis=f"centralizer mod {p} modulo its radical is a field",
                witnesses=witnesses,
            )
    raise ComputationError(
        f"no decision after {n + settings.primitive_element_tries} candidates"
    )


def exhaustive_idempotents(
    alg: EndoAlgebra, settings: SearchSettings | None = None
) -> list[np.ndarray] | None:
    """All idempotents by enumeration, or None when p^dim exceeds the limit."""
    settings = settings or SearchSettings()
    p, n = alg.p, alg.dim
    total = p**n
    if total > settings.exhaustive_idempotent_limit:
        return None
    weights = p ** np.arange(n, dtype=np.int64)
    flat = alg.structure.reshape(n, n * n)
    found = []
    for start in range(0, total, settings.exhaustive_chunk):
        idx = np.arange(start, min(start + settings.exhaustive_chunk, total), dtype=np.int64)
        vectors = (idx[:, None] // weights) % p
        left = (vectors @ flat).reshape(-1, n, n) % p
        squares = np.einsum("ct,ctu->cu", vectors, left) % p
        hits = np.flatnonzero(np.all(squares == vectors, axis=1))
        found.extend(vectors[hits])
    return found


# Indecomposability.


def _tensor_shuffle(dims: Sequence[int], i: int) -> list[int]:
    """Old indices listed in the order that moves tensor factor i last."""
    index = np.arange(int(np.prod(dims))).reshape(tuple(dims))
    return [int(v) for v in np.moveaxis(index, i, -1).reshape(-1)]


def _oracle_check(
    alg: EndoAlgebra, cert: Certificate, settings: SearchSettings
) -> Certificate:
    idempotents = exhaustive_idempotents(alg, settings)
    if idempotents is None:
        return cert
    local = len(idempotents) == 2
    if local != cert.verdict:
        raise OracleMismatchError(
            f"locality says {cert.verdict}, enumeration found "
            f"{len(idempotents)} idempotents"
        )
    cert.checked_against_oracle = True
    cert.witnesses["idempotent_count"] = len(idempotents)
    return cert


def _invariant_factor_route(rep: Representation, p: int) -> dict[str, Any] | None:
    params = rep.provenance.params
    if rep.provenance.family != "cyclic-block" or params.get("p") != p:
        return None
    m = params["m"]
    a = ExactMatrix(params["A"]) if "A" in params else jordan_lower(m)
    factors = poly_invariant_factors(a.to_domain(Domain.FP, p))
    single = len(factors) == 1 and len(factors[0].factor_list()[1]) == 1
    return {
        "invariant_factors": [format_poly(f, p) for f in factors],
        "single_irreducible_power": single,
    }


def _direct(
    rep: Representation, p: int, settings: SearchSettings, oracle: bool
) -> tuple[Certificate, EndoAlgebra]:
    alg = endo_algebra_mod_p(rep, p)
    cert = is_local_mod_p(alg, settings)
    if oracle:
        cert = _oracle_check(alg, cert, settings)
    return cert, alg


def certify_indecomposable(
    rep: Representation,
    p: int,
    settings: SearchSettings | None = None,
    oracle: bool = False,
) -> Certificate:
    """Certifies indecomposability through locality of the centralizer mod p.

    Locality mod p gives indecomposability over Z_p, hence over Z_(p) and Z.
    A nontrivial idempotent mod p lifts over Z_p and is reported as a
    Decomposable certificate. Composite cyclic representations are handled
    factorwise: each factor is local at its own prime and the restriction to
    each Sylow subgroup is a multiple of that factor.

    Raises:
        CertificationRefused: m is not coprime to |G|.
        ParameterError: p does not divide |G|.
    """
    settings = settings or SearchSettings()
    group = rep.group
    if group.order % p:
        raise ParameterError(f"{p} does not divide |G| = {group.order}", "p divides |G|")
    if not rep.coprime_ok:
        raise CertificationRefused(
            "indecomposability certificate requires gcd(m, |G|) = 1"
        )
    if rep.factor_reps is not None and len(rep.factor_reps) > 1:
        return _certify_factorwise(rep, settings, oracle)

    cert, alg = _direct(rep, p, settings, oracle)
    route = _invariant_factor_route(rep, p)
    if route is not None:
        cert.witnesses["invariant_factor_route"] = route
    cert.witnesses["centralizer_rank"] = alg.dim
    cert.notes.append(f"ring marker {rep.ring_marker}")
    if cert.verdict:
        return cert
    return Certificate(
        kind=CertificateKind.DECOMPOSABLE,
        verdict=True,
        subject=cert.subject,
        basis=f"idempotent mod {p} lifts over Z_{p}",
        witnesses=cert.witnesses,
        checked_against_oracle=cert.checked_against_oracle,
        notes=cert.notes,
    )


def _certify_factorwise(
    rep: Representation, settings: SearchSettings, oracle: bool
) -> Certificate:
    group = rep.group
    dims = [f.degree for f in rep.factor_reps]
    factors_report = []
    verdict = True
    for i, (name, factor, (q, n)) in enumerate(
        zip(group.generator_names, rep.factor_reps, group.factors)
    ):
        order = _tensor_shuffle(dims, i)
        shuffled = rep.images[name].submatrix(order, order)
        copies = rep.degree // factor.degree
        multiple = shuffled == kron(
            ExactMatrix.identity(copies), factor.images["a"]
        )
        cert, _ = _direct(factor, q, settings, oracle)
        factors_report.append(
            {
                "prime": q,
                "exponent": n,
                "degree": factor.degree,
                "copies": copies,
                "restriction_is_multiple": multiple,
                "local": cert.verdict,
                "checked_against_oracle": cert.checked_against_oracle,
            }
        )
        verdict = verdict and multiple and cert.verdict
    logger.info("factorwise indecomposability of %r: %s", rep, verdict)
    return Certificate(
        kind=CertificateKind.INDECOMPOSABLE,
        verdict=verdict,
        subject=repr(rep),
        basis=(
            "each factor local at its prime, restrictions to Sylow subgroups "
            "are multiples of it, and gcd(m, |G|) = 1"
        ),
        witnesses={"factors": factors_report},
        checked_against_oracle=oracle
        and all(f["checked_against_oracle"] for f in factors_report),
    )
