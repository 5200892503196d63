"""Exact linear algebra over prime fields GF(p) and the rationals.

Everything downstream (module categories, derived functors, filtration
certificates) reduces to row reduction in this module, so the contract here
is strict:

* arithmetic is exact — ints mod p, or ``fractions.Fraction``; never floats;
* elimination is deterministic (leftmost pivot, first nonzero row), so every
  derived basis is byte-for-byte reproducible;
* all values are immutable after construction and safe to share.

Vectors are *rows* throughout tiltkit; a linear map V -> W is a
``dim V x dim W`` matrix acting by ``v @ F``, and composition "f then g" is
``F @ G``.  Over GF(2) the hot paths (rref / matmul / rank) run on rows
packed into Python ints, which keeps exhaustive fixture sweeps cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence


class Field:
    """GF(p) for a prime p, or the rationals.

    Elements of GF(p) are ints in ``range(p)``; rational elements are
    ``fractions.Fraction``.  Use :meth:`Field.GF` / :meth:`Field.QQ` rather
    than the constructor.
    """

    _cache: dict = {}

    def __init__(self, p: Optional[int], _token: object = None) -> None:
        if _token is not Field._token:
            raise TypeError("use Field.GF(p) or Field.QQ()")
        self.p = p
        if p is None:
            self.zero = Fraction(0)
            self.one = Fraction(1)
            self.order: Optional[int] = None
        else:
            self.zero = 0
            self.one = 1
            self.order = p

    _token = object()

    @staticmethod
    def GF(p: int) -> "Field":
        if not isinstance(p, int) or p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise ValueError(f"GF({p!r}): modulus must be a prime integer")
        key = ("GF", p)
        if key not in Field._cache:
            Field._cache[key] = Field(p, _token=Field._token)
        return Field._cache[key]

    @staticmethod
    def QQ() -> "Field":
        key = ("QQ",)
        if key not in Field._cache:
            Field._cache[key] = Field(None, _token=Field._token)
        return Field._cache[key]

    @property
    def key(self):
        return ("QQ",) if self.p is None else ("GF", self.p)

    def __repr__(self) -> str:
        return "QQ" if self.p is None else f"GF({self.p})"

    def coerce(self, x):
        if self.p is None:
            return Fraction(x)
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p if self.p is not None else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.p is not None else a - b

    def neg(self, a):
        return (-a) % self.p if self.p is not None else -a

    def mul(self, a, b):
        return (a * b) % self.p if self.p is not None else a * b

    def inv(self, a):
        if self.p is None:
            if a == 0:
                raise ZeroDivisionError("inverse of 0")
            return 1 / Fraction(a)
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, -1, self.p)

    def sum(self, xs: Iterable):
        total = self.zero
        for x in xs:
            total = self.add(total, x)
        return total

    def elements(self) -> Iterator:
        if self.order is None:
            raise ValueError("rationals are infinite; elements() needs a finite field")
        return iter(range(self.order))

    def serialize(self, x) -> str:
        return str(x)

    def parse(self, text: str):
        if self.p is None:
            return Fraction(text)
        return int(text) % self.p


def _rows_to_bits(rows: Sequence[Sequence[int]]) -> list[int]:
    return [sum(1 << j for j, x in enumerate(row) if x) for row in rows]


def _bits_to_row(bits: int, ncols: int) -> tuple:
    return tuple((bits >> j) & 1 for j in range(ncols))


class Matrix:
    """Immutable exact matrix; rows are the module-element vectors."""

    __slots__ = ("field", "nrows", "ncols", "rows", "_hash")

    def __init__(self, field: Field, rows: Sequence[Sequence], ncols: Optional[int] = None) -> None:
        self.field = field
        materialized = tuple(tuple(field.coerce(x) for x in row) for row in rows)
        if materialized:
            width = len(materialized[0])
            if any(len(row) != width for row in materialized):
                raise ValueError("ragged rows")
            if ncols is not None and ncols != width:
                raise ValueError("declared ncols does not match the rows")
            ncols = width
        elif ncols is None:
            ncols = 0
        object.__setattr__(self, "rows", materialized)  # type: ignore[misc]
        self.nrows = len(materialized)
        self.ncols = ncols
        self._hash = None

    def __setattr__(self, name, value):
        if name in ("field", "nrows", "ncols", "rows", "_hash") and not hasattr(self, "_hash"):
            object.__setattr__(self, name, value)
        elif name == "_hash":
            object.__setattr__(self, name, value)
        else:
            raise AttributeError("Matrix is immutable")

    # -- constructors -------------------------------------------------------
    @staticmethod
    def zeros(field: Field, nrows: int, ncols: int) -> "Matrix":
        z = field.zero
        return Matrix(field, [[z] * ncols for _ in range(nrows)], ncols)

    @staticmethod
    def identity(field: Field, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return Matrix(field, [[o if i == j else z for j in range(n)] for i in range(n)])

    @staticmethod
    def from_row(field: Field, row: Sequence) -> "Matrix":
        return Matrix(field, [list(row)])

    # -- access -------------------------------------------------------------
    def entry(self, i: int, j: int):
        return self.rows[i][j]

    def row(self, i: int) -> tuple:
        return self.rows[i]

    def column(self, j: int) -> tuple:
        return tuple(row[j] for row in self.rows)

    def is_zero(self) -> bool:
        z = self.field.zero
        return all(x == z for row in self.rows for x in row)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    # -- structural ops ------------------------------------------------------
    def transpose(self) -> "Matrix":
        return Matrix(self.field, [self.column(j) for j in range(self.ncols)], self.nrows)

    def hstack(self, other: "Matrix") -> "Matrix":
        self._check_field(other)
        if self.nrows != other.nrows:
            raise ValueError("hstack: row count mismatch")
        return Matrix(self.field, [a + b for a, b in zip(self.rows, other.rows)], self.ncols + other.ncols)

    def vstack(self, other: "Matrix") -> "Matrix":
        self._check_field(other)
        if self.ncols != other.ncols and self.nrows and other.nrows:
            raise ValueError("vstack: column count mismatch")
        if self.nrows == 0:
            return other
        if other.nrows == 0:
            return self
        return Matrix(self.field, list(self.rows) + list(other.rows))

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "Matrix":
        return Matrix(self.field, [[self.rows[i][j] for j in col_idx] for i in row_idx], len(col_idx))

    # -- arithmetic -----------------------------------------------------------
    def _check_field(self, other: "Matrix") -> None:
        if self.field is not other.field:
            raise ValueError("matrices over different fields")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_field(other)
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch in addition")
        f = self.field
        return Matrix(f, [[f.add(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)], self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_field(other)
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch in subtraction")
        f = self.field
        return Matrix(f, [[f.sub(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)], self.ncols)

    def __neg__(self) -> "Matrix":
        f = self.field
        return Matrix(f, [[f.neg(a) for a in row] for row in self.rows], self.ncols)

    def scale(self, c) -> "Matrix":
        f = self.field
        c = f.coerce(c)
        return Matrix(f, [[f.mul(c, a) for a in row] for row in self.rows], self.ncols)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check_field(other)
        if self.ncols != other.nrows:
            raise ValueError(f"matmul shape mismatch: {self.nrows}x{self.ncols} @ {other.nrows}x{other.ncols}")
        f = self.field
        if f.order == 2:
            bbits = _rows_to_bits(other.rows)
            out = []
            for row in self.rows:
                acc = 0
                for j, x in enumerate(row):
                    if x:
                        acc ^= bbits[j]
                out.append(_bits_to_row(acc, other.ncols))
            return Matrix(f, out, other.ncols)
        bt = other.transpose().rows if other.nrows else []
        out = []
        for row in self.rows:
            out.append([
                f.sum(f.mul(a, b) for a, b in zip(row, col))
                for col in (other.column(j) for j in range(other.ncols))
            ] if other.ncols else [])
        return Matrix(f, out, other.ncols)

    def kron(self, other: "Matrix") -> "Matrix":
        """Kronecker product; index (i1*other.nrows+i2, j1*other.ncols+j2)."""
        self._check_field(other)
        f = self.field
        out = []
        for r1 in self.rows:
            for r2 in other.rows:
                out.append([f.mul(a, b) for a in r1 for b in r2])
        return Matrix(f, out, self.ncols * other.ncols)

    # -- elimination -----------------------------------------------------------
    def rref(self) -> "RrefResult":
        """Reduced row-echelon form with transform: ``transform @ self == matrix``."""
        f = self.field
        if f.order == 2:
            return self._rref_gf2()
        rows = [list(r) for r in self.rows]
        t = [[f.one if i == j else f.zero for j in range(self.nrows)] for i in range(self.nrows)]
        pivots = []
        r = 0
        for c in range(self.ncols):
            pivot_row = None
            for i in range(r, self.nrows):
                if rows[i][c] != f.zero:
                    pivot_row = i
                    break
            if pivot_row is None:
                continue
            rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
            t[r], t[pivot_row] = t[pivot_row], t[r]
            inv = f.inv(rows[r][c])
            rows[r] = [f.mul(inv, x) for x in rows[r]]
            t[r] = [f.mul(inv, x) for x in t[r]]
            for i in range(self.nrows):
                if i != r and rows[i][c] != f.zero:
                    factor = rows[i][c]
                    rows[i] = [f.sub(x, f.mul(factor, y)) for x, y in zip(rows[i], rows[r])]
                    t[i] = [f.sub(x, f.mul(factor, y)) for x, y in zip(t[i], t[r])]
            pivots.append(c)
            r += 1
        return RrefResult(Matrix(f, rows, self.ncols), tuple(pivots), Matrix(f, t, self.nrows))

    def _rref_gf2(self) -> "RrefResult":
        f = self.field
        rows = _rows_to_bits(self.rows)
        t = [1 << i for i in range(self.nrows)]
        pivots = []
        r = 0
        for c in range(self.ncols):
            pivot_row = None
            for i in range(r, self.nrows):
                if (rows[i] >> c) & 1:
                    pivot_row = i
                    break
            if pivot_row is None:
                continue
            rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
            t[r], t[pivot_row] = t[pivot_row], t[r]
            for i in range(self.nrows):
                if i != r and (rows[i] >> c) & 1:
                    rows[i] ^= rows[r]
                    t[i] ^= t[r]
            pivots.append(c)
            r += 1
        return RrefResult(
            Matrix(f, [_bits_to_row(x, self.ncols) for x in rows], self.ncols),
            tuple(pivots),
            Matrix(f, [_bits_to_row(x, self.nrows) for x in t], self.nrows),
        )

    def rank(self) -> int:
        return len(self.rref().pivots)

    def solve_left(self, rhs: "Matrix") -> Optional["Matrix"]:
        """Solve ``X @ self == rhs`` exactly; None if no solution exists.

        Each row of ``rhs`` must lie in the row space of ``self``; the
        returned X is the canonical solution supported on pivot rows.
        """
        self._check_field(rhs)
        if rhs.ncols != self.ncols:
            raise ValueError("solve_left: column mismatch")
        res = self.rref()
        f = self.field
        xs = []
        for i in range(rhs.nrows):
            b = rhs.row(i)
            y = [f.zero] * self.nrows
            residual = list(b)
            for r, p in enumerate(res.pivots):
                coeff = residual[p]
                if coeff != f.zero:
                    y[r] = coeff
                    residual = [f.sub(x, f.mul(coeff, v)) for x, v in zip(residual, res.matrix.row(r))]
            if any(x != f.zero for x in residual):
                return None
            xs.append(y)
        return Matrix(f, xs, self.nrows) @ res.transform

    def inverse(self) -> "Matrix":
        if not self.is_square():
            raise ValueError("inverse of a non-square matrix")
        res = self.rref()
        if len(res.pivots) != self.nrows:
            raise ValueError("matrix is singular")
        return res.transform

    # -- value semantics --------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Matrix)
            and self.field is other.field
            and self.rows == other.rows
            and self.ncols == other.ncols
        )

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.field.key, self.ncols, self.rows)))
        return self._hash

    def __repr__(self) -> str:
        return f"Matrix({self.field}, {self.nrows}x{self.ncols})"

    def pretty(self) -> str:
        return "\n".join(" ".join(self.field.serialize(x) for x in row) for row in self.rows)


@dataclass(frozen=True)
class RrefResult:
    matrix: Matrix
    pivots: tuple
    transform: Matrix


class Subspace:
    """A subspace of k^n stored as a reduced row-echelon basis (rows)."""

    __slots__ = ("field", "ambient_dim", "basis", "pivots", "_hash")

    def __init__(self, field: Field, ambient_dim: int, basis: Matrix, pivots: tuple) -> None:
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "pivots", pivots)
        object.__setattr__(self, "_hash", None)
        if basis.ncols != ambient_dim and basis.nrows:
            raise ValueError("basis width does not match ambient dimension")
        if len(pivots) != basis.nrows:
            raise ValueError("pivot count does not match basis rank")
        if any(pivots[i] >= pivots[i + 1] for i in range(len(pivots) - 1)):
            raise ValueError("pivots must increase strictly")

    def __setattr__(self, name, value):
        raise AttributeError("Subspace is immutable")

    @staticmethod
    def from_rows(field: Field, ambient_dim: int, rows: Sequence[Sequence]) -> "Subspace":
        rows = [row for row in rows]
        if any(len(row) != ambient_dim for row in rows):
            raise ValueError("row width does not match ambient dimension")
        if not rows:
            return Subspace.zero(field, ambient_dim)
        res = Matrix(field, rows).rref()
        rank = len(res.pivots)
        basis = Matrix(field, res.matrix.rows[:rank], ambient_dim) if rank else Matrix(field, [], ambient_dim)
        return Subspace(field, ambient_dim, basis, res.pivots)

    @staticmethod
    def from_matrix_rows(m: Matrix, ambient_dim: Optional[int] = None) -> "Subspace":
        return Subspace.from_rows(m.field, ambient_dim if ambient_dim is not None else m.ncols, m.rows)

    @staticmethod
    def zero(field: Field, ambient_dim: int) -> "Subspace":
        return Subspace(field, ambient_dim, Matrix(field, [], ambient_dim), ())

    @staticmethod
    def full(field: Field, ambient_dim: int) -> "Subspace":
        return Subspace(field, ambient_dim, Matrix.identity(field, ambient_dim), tuple(range(ambient_dim)))

    @property
    def dim(self) -> int:
        return self.basis.nrows

    def is_zero(self) -> bool:
        return self.dim == 0

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def nonpivot_columns(self) -> tuple:
        pivset = set(self.pivots)
        return tuple(c for c in range(self.ambient_dim) if c not in pivset)

    def reduce(self, vector: Sequence) -> tuple:
        """Canonical coset representative of ``vector`` modulo this subspace."""
        f = self.field
        v = [f.coerce(x) for x in vector]
        if len(v) != self.ambient_dim:
            raise ValueError("vector has wrong ambient dimension")
        for r, p in enumerate(self.pivots):
            coeff = v[p]
            if coeff != f.zero:
                brow = self.basis.row(r)
                v = [f.sub(x, f.mul(coeff, y)) for x, y in zip(v, brow)]
        return tuple(v)

    def contains_vector(self, vector: Sequence) -> bool:
        z = self.field.zero
        return all(x == z for x in self.reduce(vector))

    def coords(self, vector: Sequence) -> tuple:
        """Coordinates of ``vector`` in the echelon basis; ValueError if outside."""
        f = self.field
        v = tuple(f.coerce(x) for x in vector)
        cs = tuple(v[p] for p in self.pivots)
        rebuilt = [f.zero] * self.ambient_dim
        for c, row in zip(cs, self.basis.rows):
            rebuilt = [f.add(x, f.mul(c, y)) for x, y in zip(rebuilt, row)]
        if tuple(rebuilt) != v:
            raise ValueError("vector not contained in subspace")
        return cs

    def contains_subspace(self, other: "Subspace") -> bool:
        self._check_compatible(other)
        return all(self.contains_vector(other.basis.row(i)) for i in range(other.dim))

    def _check_compatible(self, other: "Subspace") -> None:
        if self.field is not other.field:
            raise ValueError("subspaces over different fields")
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient dimension mismatch")

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Subspace)
            and self.field is other.field
            and self.ambient_dim == other.ambient_dim
            and self.basis == other.basis
        )

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.field.key, self.ambient_dim, self.basis)))
        return self._hash

    def __le__(self, other: "Subspace") -> bool:
        return other.contains_subspace(self)

    def __repr__(self) -> str:
        return f"Subspace(dim {self.dim} of k^{self.ambient_dim})"

    def key(self) -> tuple:
        """Deterministic sort key (dimension, then basis entries)."""
        return (self.dim, self.basis.rows)


def kernel_basis(m: Matrix) -> Subspace:
    """The right null space {v : m @ v^T = 0} as a subspace of k^ncols."""
    f = m.field
    res = m.rref()
    pivots = res.pivots
    pivset = set(pivots)
    free = [c for c in range(m.ncols) if c not in pivset]
    rows = []
    for fc in free:
        v = [f.zero] * m.ncols
        v[fc] = f.one
        for r, p in enumerate(pivots):
            v[p] = f.neg(res.matrix.entry(r, fc))
        rows.append(v)
    return Subspace.from_rows(f, m.ncols, rows)


def left_kernel_basis(m: Matrix) -> Subspace:
    """The left null space {v : v @ m = 0} as a subspace of k^nrows."""
    return kernel_basis(m.transpose())


def row_space(m: Matrix, ambient_dim: Optional[int] = None) -> Subspace:
    return Subspace.from_rows(m.field, ambient_dim if ambient_dim is not None else m.ncols, m.rows)


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    a._check_compatible(b)
    return Subspace.from_rows(a.field, a.ambient_dim, list(a.basis.rows) + list(b.basis.rows))


def subspace_intersect(a: Subspace, b: Subspace) -> Subspace:
    """Zassenhaus: reduce [[A|A],[B|0]]; rows with zero left half span A∩B on the right."""
    a._check_compatible(b)
    f = a.field
    n = a.ambient_dim
    z = [f.zero] * n
    rows = [list(a.basis.row(i)) + list(a.basis.row(i)) for i in range(a.dim)]
    rows += [list(b.basis.row(i)) + z for i in range(b.dim)]
    if not rows:
        return Subspace.zero(f, n)
    res = Matrix(f, rows).rref()
    out = []
    for i in range(res.matrix.nrows):
        row = res.matrix.row(i)
        if all(x == f.zero for x in row[:n]) and any(x != f.zero for x in row[n:]):
            out.append(row[n:])
    return Subspace.from_rows(f, n, out)
