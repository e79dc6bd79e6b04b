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

"""Exact dense linear algebra over Z, Q, F_p and F_p[x].

Everything else in crysgroups is built on `ExactMatrix`: Smith normal forms
drive the coboundary and torsion tests, saturated kernels drive the
centralizer computation, and the Kronecker and block helpers assemble every
representation.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Any, Callable, Iterable, Mapping, Sequence

from sympy import Poly, QQ, Symbol, isprime, sympify
from sympy.polys.matrices import DomainMatrix

from crysgroups.entities.matrix import MatrixPayload
from crysgroups.shared_libraries.errors import (
    DomainError,
    NotInvertibleError,
    ShapeError,
)

logger = logging.getLogger(__name__)

X = Symbol("x")


class Domain(str, enum.Enum):
    """Coefficient domains supported by `ExactMatrix`."""

    Z = "Z"
    Q = "Q"
    FP = "Fp"
    FPX = "Fp[x]"


def poly_mod_p(value: Any, p: int) -> Poly:
    """Coerces an int, string, expression or Poly into F_p[x]."""
    if isinstance(value, str):
        value = sympify(value)
    elif isinstance(value, Poly):
        value = value.as_expr()
    return Poly(value, X, modulus=p)


def format_poly(poly: Poly, p: int) -> str:
    """Renders a polynomial over F_p with coefficients in [0, p)."""
    coeffs = [int(c) % p for c in poly.all_coeffs()]
    degree = len(coeffs) - 1
    terms = []
    for k, c in enumerate(coeffs):
        e = degree - k
        if c == 0:
            continue
        if e == 0:
            terms.append(str(c))
        else:
            power = "x" if e == 1 else f"x**{e}"
            terms.append(power if c == 1 else f"{c}*{power}")
    return " + ".join(terms) if terms else "0"


def _to_fraction(value: Any) -> Fraction:
    if type(value) is Fraction:
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    try:
        return Fraction(value)
    except TypeError:
        return Fraction(int(value.p), int(value.q))


def _to_int(value: Any) -> int:
    if type(value) is int:
        return value
    f = _to_fraction(value)
    if f.denominator != 1:
        raise DomainError(f"entry {value} is not an integer")
    return f.numerator


def _to_mod(value: Any, p: int) -> int:
    if type(value) is int:
        return value % p
    f = _to_fraction(value)
    if f.denominator % p == 0:
        raise DomainError(f"entry {value} has a denominator divisible by {p}")
    return f.numerator * pow(f.denominator, -1, p) % p


def _canonicalizer(domain: Domain, p: int | None) -> Callable[[Any], Any]:
    if domain is Domain.Z:
        return _to_int
    if domain is Domain.Q:
        return _to_fraction
    if domain is Domain.FP:
        return lambda v: _to_mod(v, p)
    return lambda v: poly_mod_p(v, p)


def _zero(domain: Domain, p: int | None) -> Any:
    if domain is Domain.Q:
        return Fraction(0)
    if domain is Domain.FPX:
        return Poly(0, X, modulus=p)
    return 0


def _one(domain: Domain, p: int | None) -> Any:
    if domain is Domain.Q:
        return Fraction(1)
    if domain is Domain.FPX:
        return Poly(1, X, modulus=p)
    return 1


def _entry_text(value: Any, domain: Domain, p: int | None) -> str:
    if domain is Domain.FPX:
        return format_poly(value, p)
    return str(value)


class ExactMatrix:
    """Immutable matrix with exact entries from one coefficient domain.

    Entries are canonical: integers, reduced fractions, residues in [0, p) or
    polynomials over F_p. Equality is structural and includes the domain.
    """

    __slots__ = ("_data", "_ncols", "domain", "p")

    def __init__(
        self,
        rows: Iterable[Iterable[Any]],
        domain: Domain | str = Domain.Z,
        p: int | None = None,
        ncols: int | None = None,
    ):
        domain = Domain(domain)
        if domain in (Domain.FP, Domain.FPX):
            if p is None or not isprime(p):
                raise DomainError(f"domain {domain.value} needs a prime p")
        else:
            p = None
        canon = _canonicalizer(domain, p)
        data = tuple(tuple(canon(v) for v in row) for row in rows)
        width = len(data[0]) if data else (ncols or 0)
        if any(len(row) != width for row in data):
            raise ShapeError("ragged rows")
        if ncols is not None and width != ncols:
            raise ShapeError(f"expected {ncols} columns, got {width}")
        self._data = data
        self._ncols = width
        self.domain = domain
        self.p = p

    @classmethod
    def _wrap(
        cls,
        data: tuple[tuple[Any, ...], ...],
        domain: Domain,
        p: int | None,
        ncols: int,
    ) -> "ExactMatrix":
        obj = cls.__new__(cls)
        obj._data = data
        obj._ncols = ncols
        obj.domain = domain
        obj.p = p
        return obj

    def _like(self, rows: Iterable[Sequence[Any]], ncols: int) -> "ExactMatrix":
        if self.domain is Domain.FP:
            p = self.p
            data = tuple(tuple(v % p for v in row) for row in rows)
        else:
            data = tuple(tuple(row) for row in rows)
        return ExactMatrix._wrap(data, self.domain, self.p, ncols)

    # Construction helpers.

    @classmethod
    def identity(
        cls, n: int, domain: Domain | str = Domain.Z, p: int | None = None
    ) -> "ExactMatrix":
        domain = Domain(domain)
        zero, one = _zero(domain, p), _one(domain, p)
        return cls._wrap(
            tuple(
                tuple(one if i == j else zero for j in range(n))
                for i in range(n)
            ),
            domain,
            p,
            n,
        )

    @classmethod
    def zeros(
        cls,
        nrows: int,
        ncols: int,
        domain: Domain | str = Domain.Z,
        p: int | None = None,
    ) -> "ExactMatrix":
        domain = Domain(domain)
        zero = _zero(domain, p)
        return cls._wrap(
            tuple((zero,) * ncols for _ in range(nrows)), domain, p, ncols
        )

    @classmethod
    def column(
        cls, values: Sequence[Any], domain: Domain | str = Domain.Z, p=None
    ) -> "ExactMatrix":
        return cls([[v] for v in values], domain, p, ncols=1)

    @classmethod
    def row_vector(
        cls, values: Sequence[Any], domain: Domain | str = Domain.Z, p=None
    ) -> "ExactMatrix":
        return cls([list(values)], domain, p)

    # Shape and access.

    @property
    def nrows(self) -> int:
        return len(self._data)

    @property
    def ncols(self) -> int:
        return self._ncols

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self._data), self._ncols)

    @property
    def data(self) -> tuple[tuple[Any, ...], ...]:
        return self._data

    def __getitem__(self, index: tuple[int, int]) -> Any:
        i, j = index
        return self._data[i][j]

    def row(self, i: int) -> tuple[Any, ...]:
        return self._data[i]

    def col(self, j: int) -> tuple[Any, ...]:
        return tuple(row[j] for row in self._data)

    def to_lists(self) -> list[list[Any]]:
        return [list(row) for row in self._data]

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_zero(self) -> bool:
        zero = _zero(self.domain, self.p)
        return all(v == zero for row in self._data for v in row)

    def is_identity(self) -> bool:
        if not self.is_square():
            return False
        return self == ExactMatrix.identity(self.nrows, self.domain, self.p)

    def submatrix(
        self, rows: Sequence[int] | range, cols: Sequence[int] | range
    ) -> "ExactMatrix":
        return self._like(
            [[self._data[i][j] for j in cols] for i in rows], len(cols)
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return (
            self.domain is other.domain
            and self.p == other.p
            and self.shape == other.shape
            and self._data == other._data
        )

    def __hash__(self) -> int:
        if self.domain is Domain.FPX:
            return hash((self.domain, self.p, self.shape))
        return hash((self.domain, self.p, self._ncols, self._data))

    def __repr__(self) -> str:
        body = "; ".join(
            " ".join(_entry_text(v, self.domain, self.p) for v in row)
            for row in self._data
        )
        suffix = f" mod {self.p}" if self.p else ""
        return f"ExactMatrix<{self.domain.value}{suffix}>[{body}]"

    # Arithmetic.

    def _check_compatible(self, other: "ExactMatrix") -> None:
        if self.domain is not other.domain or self.p != other.p:
            raise DomainError(
                f"domain mismatch: {self.domain.value}/{self.p} vs "
                f"{other.domain.value}/{other.p}"
            )

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_compatible(other)
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        return self._like(
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self._data, other._data)
            ],
            self._ncols,
        )

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_compatible(other)
        if self.shape != other.shape:
            raise ShapeError(f"cannot subtract {other.shape} from {self.shape}")
        return self._like(
            [
                [a - b for a, b in zip(ra, rb)]
                for ra, rb in zip(self._data, other._data)
            ],
            self._ncols,
        )

    def __neg__(self) -> "ExactMatrix":
        return self._like([[-a for a in row] for row in self._data], self._ncols)

    def scale(self, c: Any) -> "ExactMatrix":
        c = _canonicalizer(self.domain, self.p)(c)
        return self._like([[c * a for a in row] for row in self._data], self._ncols)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_compatible(other)
        if self._ncols != other.nrows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        width = other.ncols
        zero = _zero(self.domain, self.p)
        odata = other._data
        out = []
        for row in self._data:
            acc = [zero] * width
            for k, a in enumerate(row):
                if not a:
                    continue
                for j, b in enumerate(odata[k]):
                    if b:
                        acc[j] = acc[j] + a * b
            out.append(acc)
        return self._like(out, width)

    def apply(self, vector: Sequence[Any]) -> tuple[Any, ...]:
        """Returns the product of this matrix with a column vector."""
        if len(vector) != self._ncols:
            raise ShapeError(
                f"vector of length {len(vector)} for {self.shape} matrix"
            )
        support = [(k, v) for k, v in enumerate(vector) if v]
        zero = _zero(self.domain, self.p)
        out = []
        for row in self._data:
            acc = zero
            for k, v in support:
                a = row[k]
                if a:
                    acc = acc + a * v
            out.append(acc)
        if self.domain is Domain.FP:
            return tuple(v % self.p for v in out)
        return tuple(out)

    def transpose(self) -> "ExactMatrix":
        if not self._data:
            return ExactMatrix._wrap((), self.domain, self.p, 0)
        return self._like(list(zip(*self._data)), len(self._data))

    @property
    def T(self) -> "ExactMatrix":
        return self.transpose()

    def power(self, k: int) -> "ExactMatrix":
        if not self.is_square():
            raise ShapeError("only square matrices have powers")
        base = self
        if k < 0:
            base, k = self.inverse(), -k
        result = ExactMatrix.identity(self.nrows, self.domain, self.p)
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    def trace(self) -> Any:
        total = _zero(self.domain, self.p)
        for i in range(min(self.shape)):
            total = total + self._data[i][i]
        return total % self.p if self.domain is Domain.FP else total

    # Domain changes.

    def to_domain(self, domain: Domain | str, p: int | None = None) -> "ExactMatrix":
        """Converts entries, e.g. Z to Q, Z or Q to F_p, F_p to Z (lift)."""
        domain = Domain(domain)
        if domain is Domain.Z and self.domain is Domain.FP:
            return ExactMatrix._wrap(self._data, Domain.Z, None, self._ncols)
        if domain is Domain.FPX and self.domain is not Domain.FPX:
            return ExactMatrix(
                [[int(v) for v in row] for row in self._data],
                domain,
                p,
                ncols=self._ncols,
            )
        if self.domain is Domain.FPX and domain is not Domain.FPX:
            raise DomainError("polynomial matrices cannot leave F_p[x]")
        return ExactMatrix(self._data, domain, p, ncols=self._ncols)

    def is_integral(self) -> bool:
        if self.domain is Domain.Z:
            return True
        if self.domain is Domain.Q:
            return all(v.denominator == 1 for row in self._data for v in row)
        return False

    # Field operations.

    def _field(self) -> tuple[Callable[[Any], Any], Callable[[Any], Any]]:
        """Inverse and reduction maps for Gaussian elimination."""
        if self.domain in (Domain.Z, Domain.Q):
            return (lambda a: 1 / Fraction(a)), (lambda a: a)
        if self.domain is Domain.FP:
            p = self.p
            return (lambda a: pow(a, -1, p)), (lambda a: a % p)
        raise DomainError("Gaussian elimination needs Q or F_p entries")

    def _field_rows(self) -> list[list[Any]]:
        if self.domain is Domain.Z:
            return [[Fraction(v) for v in row] for row in self._data]
        return [list(row) for row in self._data]

    def rref(self) -> tuple["ExactMatrix", tuple[int, ...]]:
        """Reduced row echelon form over Q (integer input is promoted) or F_p."""
        inv, red = self._field()
        rows, pivots = _gauss(self._field_rows(), self._ncols, inv, red)
        domain = Domain.Q if self.domain is Domain.Z else self.domain
        return ExactMatrix._wrap(
            tuple(tuple(r) for r in rows), domain, self.p, self._ncols
        ), tuple(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])

    def inverse(self) -> "ExactMatrix":
        """Inverse over Q or F_p; integer matrices must be unimodular."""
        if not self.is_square():
            raise ShapeError("only square matrices are invertible")
        n = self.nrows
        inv, red = self._field()
        one = _one(Domain.Q if self.domain is Domain.Z else self.domain, self.p)
        zero = one - one
        augmented = [
            row + [one if i == j else zero for j in range(n)]
            for i, row in enumerate(self._field_rows())
        ]
        rows, pivots = _gauss(augmented, 2 * n, inv, red)
        if pivots[:n] != list(range(n)):
            raise NotInvertibleError("matrix is singular")
        result = [row[n:] for row in rows]
        if self.domain is Domain.Z:
            if any(v.denominator != 1 for row in result for v in row):
                raise NotInvertibleError("integer matrix is not unimodular")
            return ExactMatrix(result, Domain.Z, ncols=n)
        return self._like(result, n)

    def det(self) -> Any:
        if not self.is_square():
            raise ShapeError("determinant of a non-square matrix")
        inv, red = self._field()
        rows = self._field_rows()
        n = len(rows)
        det = _one(Domain.Q if self.domain is Domain.Z else self.domain, self.p)
        for t in range(n):
            pivot = next((i for i in range(t, n) if rows[i][t]), None)
            if pivot is None:
                return 0
            if pivot != t:
                rows[t], rows[pivot] = rows[pivot], rows[t]
                det = -det
            det = red(det * rows[t][t])
            scale = inv(rows[t][t])
            for i in range(t + 1, n):
                if rows[i][t]:
                    f = red(rows[i][t] * scale)
                    rows[i] = [red(a - f * b) for a, b in zip(rows[i], rows[t])]
        if self.domain is Domain.Z:
            return int(det)
        return red(det)

    # Serialization.

    def to_payload(self) -> MatrixPayload:
        return MatrixPayload(
            rows=self.nrows,
            cols=self._ncols,
            domain=self.domain.value,
            p=self.p,
            entries=[
                _entry_text(v, self.domain, self.p)
                for row in self._data
                for v in row
            ],
        )

    @classmethod
    def from_payload(cls, payload: MatrixPayload | Mapping) -> "ExactMatrix":
        if not isinstance(payload, MatrixPayload):
            payload = MatrixPayload.model_validate(payload)
        if len(payload.entries) != payload.rows * payload.cols:
            raise ShapeError("entry count does not match rows x cols")
        c = payload.cols
        return cls(
            [payload.entries[i * c : (i + 1) * c] for i in range(payload.rows)],
            payload.domain,
            payload.p,
            ncols=c,
        )

    def to_json(self) -> str:
        return self.to_payload().model_dump_json()


def _gauss(
    rows: list[list[Any]],
    ncols: int,
    inv: Callable[[Any], Any],
    red: Callable[[Any], Any],
) -> tuple[list[list[Any]], list[int]]:
    """In-place reduced row echelon form; returns rows and pivot columns."""
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(rows):
            break
        pivot = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        scale = inv(rows[r][c])
        rows[r] = [red(a * scale) for a in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [red(a - f * b) for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows, pivots


def kron(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """Kronecker product; block (i, j) of the result is a[i, j] * b."""
    a._check_compatible(b)
    rows = [
        [x * y for x in ra for y in rb] for ra in a.data for rb in b.data
    ]
    return a._like(rows, a.ncols * b.ncols)


def block_matrix(
    grid: Sequence[Sequence[ExactMatrix | None]],
    row_sizes: Sequence[int] | None = None,
    col_sizes: Sequence[int] | None = None,
    domain: Domain | str = Domain.Z,
    p: int | None = None,
) -> ExactMatrix:
    """Assembles a matrix from a grid of blocks; None stands for zero.

    Block sizes are read off the non-None blocks unless given explicitly.
    """
    nbr = len(grid)
    nbc = max((len(r) for r in grid), default=0)
    if col_sizes is not None:
        nbc = len(col_sizes)
    rs = list(row_sizes) if row_sizes is not None else [None] * nbr
    cs = list(col_sizes) if col_sizes is not None else [None] * nbc
    blocks = [m for row in grid for m in row if m is not None]
    if blocks:
        domain, p = blocks[0].domain, blocks[0].p
    domain = Domain(domain)
    for i, row in enumerate(grid):
        for j, m in enumerate(row):
            if m is None:
                continue
            if m.domain is not domain or m.p != p:
                raise DomainError("blocks from different domains")
            if rs[i] is None:
                rs[i] = m.nrows
            if cs[j] is None:
                cs[j] = m.ncols
            if (rs[i], cs[j]) != m.shape:
                raise ShapeError(
                    f"block ({i}, {j}) has shape {m.shape}, "
                    f"expected {(rs[i], cs[j])}"
                )
    if None in rs or None in cs:
        raise ShapeError("cannot infer the size of an all-zero block row/col")
    zero = _zero(domain, p)
    out = []
    for i, size in enumerate(rs):
        row_blocks = list(grid[i]) + [None] * (nbc - len(grid[i]))
        for r in range(size):
            line = []
            for j, width in enumerate(cs):
                m = row_blocks[j]
                line.extend(m.data[r] if m is not None else (zero,) * width)
            out.append(tuple(line))
    return ExactMatrix._wrap(tuple(out), domain, p, sum(cs))


def direct_sum(*blocks: ExactMatrix) -> ExactMatrix:
    """Block-diagonal matrix with the given diagonal blocks."""
    n = len(blocks)
    return block_matrix(
        [[blocks[i] if i == j else None for j in range(n)] for i in range(n)],
        [b.nrows for b in blocks],
        [b.ncols for b in blocks],
    )


# Smith normal form.


@dataclass(frozen=True)
class SnfResult:
    """U * A * V = D with U, V unimodular and D a divisibility chain."""

    u: ExactMatrix
    d: ExactMatrix
    v: ExactMatrix
    nontrivial_divisors: tuple[Any, ...]

    @property
    def diagonal(self) -> tuple[Any, ...]:
        return tuple(self.d[i, i] for i in range(min(self.d.shape)))


@dataclass(frozen=True)
class _EuclideanRing:
    zero: Any
    one: Any
    size: Callable[[Any], int]
    divmod: Callable[[Any, Any], tuple[Any, Any]]
    normalizer: Callable[[Any], Any]


def _euclidean_ring(a: ExactMatrix) -> _EuclideanRing:
    if a.domain is Domain.Z:
        return _EuclideanRing(
            0, 1, abs, divmod, lambda v: -1 if v < 0 else 1
        )
    if a.domain is Domain.FPX:
        p = a.p
        return _EuclideanRing(
            _zero(Domain.FPX, p),
            _one(Domain.FPX, p),
            lambda v: v.degree(),
            lambda u, v: u.div(v),
            lambda v: pow(int(v.LC()) % p, -1, p),
        )
    raise DomainError(
        f"Smith normal form needs Z or F_p[x] entries, not {a.domain.value}"
    )


def _is_unit(ring: _EuclideanRing, v: Any) -> bool:
    return ring.size(v) == 0 if not isinstance(v, int) else abs(v) == 1


def _smallest(cells: Iterable[tuple[int, int, Any]], ring: _EuclideanRing):
    best = None
    for i, j, v in cells:
        if not v:
            continue
        k = ring.size(v)
        if best is None or k < best[0]:
            best = (k, i, j)
    return best


def _axpy(rows: list[list[Any]], i: int, t: int, q: Any) -> None:
    """rows[i] -= q * rows[t]."""
    rows[i] = [x - q * y if y else x for x, y in zip(rows[i], rows[t])]


def snf(a: ExactMatrix) -> SnfResult:
    """Smith normal form over Z or F_p[x].

    Pivot rule: a nonzero entry of least Euclidean size (absolute value or
    degree), ties going to the lowest (row, col). Diagonal entries are
    normalized to be positive or monic.

    Raises:
        DomainError: entries live in a field.
    """
    ring = _euclidean_ring(a)
    r, c = a.shape
    s = a.to_lists()
    u = [[ring.one if i == j else ring.zero for j in range(r)] for i in range(r)]
    # Column operations on V are kept as row operations on V^T.
    vt = [[ring.one if i == j else ring.zero for j in range(c)] for i in range(c)]

    def swap(t: int, i: int, j: int) -> None:
        if i != t:
            s[t], s[i] = s[i], s[t]
            u[t], u[i] = u[i], u[t]
        if j != t:
            for row in s:
                row[t], row[j] = row[j], row[t]
            vt[t], vt[j] = vt[j], vt[t]

    for t in range(min(r, c)):
        best = _smallest(
            ((i, j, s[i][j]) for i in range(t, r) for j in range(t, c)), ring
        )
        if best is None:
            break
        swap(t, best[1], best[2])
        while True:
            pivot = s[t][t]
            dirty = False
            for i in range(t + 1, r):
                if s[i][t]:
                    q, rem = ring.divmod(s[i][t], pivot)
                    _axpy(s, i, t, q)
                    _axpy(u, i, t, q)
                    dirty = dirty or bool(rem)
            for j in range(t + 1, c):
                if s[t][j]:
                    q, rem = ring.divmod(s[t][j], pivot)
                    for row in s:
                        if row[t]:
                            row[j] = row[j] - q * row[t]
                    _axpy(vt, j, t, q)
                    dirty = dirty or bool(rem)
            if dirty:
                cells = [(t, t, pivot)]
                cells += [(i, t, s[i][t]) for i in range(t + 1, r)]
                cells += [(t, j, s[t][j]) for j in range(t + 1, c)]
                best = _smallest(sorted(cells, key=lambda x: (x[0], x[1])), ring)
                swap(t, best[1], best[2])
                continue
            if not _is_unit(ring, pivot):
                bad = next(
                    (
                        i
                        for i in range(t + 1, r)
                        for j in range(t + 1, c)
                        if s[i][j] and ring.divmod(s[i][j], pivot)[1]
                    ),
                    None,
                )
                if bad is not None:
                    s[t] = [x + y for x, y in zip(s[t], s[bad])]
                    u[t] = [x + y for x, y in zip(u[t], u[bad])]
                    continue
            break
        unit = ring.normalizer(s[t][t])
        if unit != 1:
            s[t] = [x * unit for x in s[t]]
            u[t] = [x * unit for x in u[t]]

    def wrap(rows: list[list[Any]], ncols: int) -> ExactMatrix:
        return ExactMatrix._wrap(
            tuple(tuple(row) for row in rows), a.domain, a.p, ncols
        )

    d = wrap(s, c)
    divisors = tuple(
        s[i][i]
        for i in range(min(r, c))
        if s[i][i] and not _is_unit(ring, s[i][i])
    )
    return SnfResult(
        u=wrap(u, r),
        d=d,
        v=wrap(vt, c).transpose(),
        nontrivial_divisors=divisors,
    )


def solve_linear_integer(
    a: ExactMatrix, b: Sequence[Any], snf_result: SnfResult | None = None
) -> tuple[int, ...] | None:
    """Integer solution of a * x = b, or None when none exists.

    Args:
        a: Integer matrix.
        b: Integer right-hand side.
        snf_result: A precomputed Smith form of `a`, reused when solving
            several systems with the same matrix.

    Returns:
        A solution vector or None.
    """
    if a.domain is not Domain.Z:
        raise DomainError("solve_linear_integer needs an integer matrix")
    if len(b) != a.nrows:
        raise ShapeError(f"right-hand side of length {len(b)} for {a.shape}")
    b = [_to_int(v) for v in b]
    res = snf_result or snf(a)
    ub = res.u.apply(b)
    y = [0] * a.ncols
    for i, value in enumerate(ub):
        d = res.d[i, i] if i < min(a.shape) else 0
        if d == 0:
            if value:
                return None
            continue
        q, rem = divmod(value, d)
        if rem:
            return None
        y[i] = q
    return res.v.apply(y)


def solve_linear_rational(
    a: ExactMatrix, b: Sequence[Any]
) -> tuple[Fraction, ...] | None:
    """Some rational solution of a * x = b (free variables zero), or None."""
    if len(b) != a.nrows:
        raise ShapeError(f"right-hand side of length {len(b)} for {a.shape}")
    rows = [
        [Fraction(v) for v in row] + [_to_fraction(rhs)]
        for row, rhs in zip(a.data, b)
    ]
    n = a.ncols
    rows, pivots = _gauss(rows, n + 1, lambda v: 1 / v, lambda v: v)
    if pivots and pivots[-1] == n:
        return None
    x = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        x[col] = rows[i][n]
    return tuple(x)


# Saturated kernels.


def _normalize_sign(vector: list[int]) -> tuple[int, ...]:
    lead = next((v for v in vector if v), 0)
    return tuple(-v for v in vector) if lead < 0 else tuple(vector)


def _impose_congruence(basis: list[list[int]], residues: dict, modulus: int):
    """Restricts the lattice spanned by `basis` to sum(c_t * r_t) = 0 mod m."""
    sig = [
        sum(row[t] * r for t, r in residues.items()) % modulus for row in basis
    ]
    while True:
        live = [i for i, v in enumerate(sig) if v]
        if not live:
            return
        if len(live) == 1:
            i = live[0]
            factor = modulus // gcd(sig[i], modulus)
            basis[i] = [v * factor for v in basis[i]]
            sig[i] = 0
            return
        k = min(live, key=lambda i: (sig[i], i))
        for i in live:
            if i != k:
                q = sig[i] // sig[k]
                sig[i] -= q * sig[k]
                basis[i] = [x - q * y for x, y in zip(basis[i], basis[k])]


def kernel_saturated_sparse(
    rows: Mapping[int, Mapping[int, int]], nrows: int, ncols: int
) -> list[tuple[int, ...]]:
    """Saturated Z-basis of the kernel of a sparse integer matrix.

    Args:
        rows: {row: {col: value}} holding the nonzero entries.
        nrows: Row count.
        ncols: Column count (number of unknowns).

    Returns:
        Integer vectors spanning the full kernel lattice, each with a
        positive leading entry.
    """
    entries = {
        i: {j: QQ(int(v)) for j, v in row.items() if v}
        for i, row in rows.items()
    }
    entries = {i: row for i, row in entries.items() if row}
    if not entries:
        return [
            tuple(1 if i == j else 0 for j in range(ncols)) for i in range(ncols)
        ]
    reduced, pivots = DomainMatrix(entries, (nrows, ncols), QQ).rref()
    reduced_rows = reduced.to_sparse().rep
    pivot_set = set(pivots)
    free = [j for j in range(ncols) if j not in pivot_set]
    position = {f: t for t, f in enumerate(free)}
    logger.debug(
        "kernel: %i unknowns, rank %i, %i free", ncols, len(pivots), len(free)
    )

    dependents = []
    conditions = set()
    for i, col in enumerate(pivots):
        coeffs = {
            position[j]: Fraction(int(v.numerator), int(v.denominator))
            for j, v in reduced_rows.get(i, {}).items()
            if j != col and v
        }
        dependents.append((col, coeffs))
        den = lcm(*(f.denominator for f in coeffs.values())) if coeffs else 1
        if den > 1:
            conditions.add(
                (
                    den,
                    tuple(
                        sorted(
                            (t, int(f * den) % den)
                            for t, f in coeffs.items()
                            if int(f * den) % den
                        )
                    ),
                )
            )

    k = len(free)
    basis = [[1 if a == b else 0 for b in range(k)] for a in range(k)]
    for den, residues in sorted(conditions):
        _impose_congruence(basis, dict(residues), den)

    result = []
    for c in basis:
        x = [0] * ncols
        for t, f in enumerate(free):
            x[f] = c[t]
        for col, coeffs in dependents:
            value = -sum(c[t] * f for t, f in coeffs.items())
            if value.denominator != 1:
                raise ArithmeticError("saturation left a fractional entry")
            x[col] = int(value)
        result.append(_normalize_sign(x))
    return result


def kernel_saturated(a: ExactMatrix) -> list[tuple[int, ...]]:
    """Saturated Z-basis of {x : a * x = 0}."""
    if not a.is_integral():
        raise DomainError("kernel_saturated needs an integer matrix")
    rows = {
        i: {j: int(v) for j, v in enumerate(row) if v}
        for i, row in enumerate(a.data)
    }
    return kernel_saturated_sparse(rows, a.nrows, a.ncols)


def poly_invariant_factors(a: ExactMatrix) -> list[Poly]:
    """Nontrivial invariant factors of x*E - A over F_p[x], each dividing the
    next."""
    if a.domain is not Domain.FP:
        raise DomainError("poly_invariant_factors needs an F_p matrix")
    if not a.is_square():
        raise ShapeError("characteristic matrix of a non-square matrix")
    p, n = a.p, a.nrows
    x = Poly(X, X, modulus=p)
    char = ExactMatrix._wrap(
        tuple(
            tuple(
                (x if i == j else _zero(Domain.FPX, p))
                - Poly(a[i, j], X, modulus=p)
                for j in range(n)
            )
            for i in range(n)
        ),
        Domain.FPX,
        p,
        n,
    )
    return [f for f in snf(char).diagonal if f.degree() >= 1]
