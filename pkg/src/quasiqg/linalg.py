"""Exact dense and sparse linear algebra over a cyclotomic field.

Matrices are small (weight spaces of modules), so everything is plain
Gaussian elimination with exact zero tests.  Zero entries are the shared
``ctx.zero`` object and are skipped in products.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .cyclo import CycloContext, CycloNum

Vector = list  # list[CycloNum]


class Matrix:
    """A dense matrix over Q(zeta); rows are lists of CycloNum."""

    __slots__ = ("ctx", "nrows", "ncols", "rows")

    def __init__(self, ctx: CycloContext, nrows: int, ncols: int, rows=None):
        self.ctx = ctx
        self.nrows = nrows
        self.ncols = ncols
        if rows is None:
            z = ctx.zero
            rows = [[z] * ncols for _ in range(nrows)]
        self.rows = rows

    # construction --------------------------------------------------------
    @classmethod
    def identity(cls, ctx: CycloContext, size: int) -> "Matrix":
        m = cls(ctx, size, size)
        for i in range(size):
            m.rows[i][i] = ctx.one
        return m

    @classmethod
    def from_columns(cls, ctx: CycloContext, nrows: int, columns: Sequence[Vector]) -> "Matrix":
        m = cls(ctx, nrows, len(columns))
        for j, col in enumerate(columns):
            for i in range(nrows):
                m.rows[i][j] = col[i]
        return m

    @classmethod
    def from_rows(cls, ctx: CycloContext, ncols: int, rows: Sequence[Vector]) -> "Matrix":
        return cls(ctx, len(rows), ncols, [list(r) for r in rows])

    def copy(self) -> "Matrix":
        return Matrix(self.ctx, self.nrows, self.ncols, [list(r) for r in self.rows])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def column(self, j: int) -> Vector:
        return [r[j] for r in self.rows]

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self) -> "Matrix":
        return Matrix.from_columns(self.ctx, self.ncols, self.rows)

    # arithmetic ----------------------------------------------------------
    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            z = self.ctx.zero
            out = []
            orows = other.rows
            for row in self.rows:
                acc = [z] * other.ncols
                for k, a in enumerate(row):
                    if a:
                        for j, b in enumerate(orows[k]):
                            if b:
                                acc[j] = acc[j] + a * b
                out.append(acc)
            return Matrix(self.ctx, self.nrows, other.ncols, out)
        return matvec(self, other)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(self.ctx, self.nrows, self.ncols,
                      [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(self.ctx, self.nrows, self.ncols,
                      [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def scale(self, c) -> "Matrix":
        z = self.ctx.zero
        return Matrix(self.ctx, self.nrows, self.ncols,
                      [[a * c if a else z for a in r] for r in self.rows])

    def _same_shape(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and all(
            a == b for r, s in zip(self.rows, other.rows) for a, b in zip(r, s))

    __hash__ = None

    def is_zero(self) -> bool:
        return not any(a for r in self.rows for a in r)

    def nonzero_entries(self):
        for i, r in enumerate(self.rows):
            for j, a in enumerate(r):
                if a:
                    yield i, j, a

    # elimination ---------------------------------------------------------
    def rank(self) -> int:
        return len(rref(self.rows, self.ncols)[1])

    def nullspace(self) -> list[Vector]:
        return nullspace(self.ctx, self.rows, self.ncols)

    def inverse(self) -> "Matrix":
        if self.nrows != self.ncols:
            raise ValueError("inverse of a non-square matrix")
        size = self.nrows
        aug = [list(r) + [self.ctx.one if i == j else self.ctx.zero for j in range(size)]
               for i, r in enumerate(self.rows)]
        red, piv = rref(aug, 2 * size)
        if piv[:size] != list(range(size)) or (len(piv) > size and piv[size] < size):
            raise ValueError("matrix is singular")
        return Matrix(self.ctx, size, size, [r[size:] for r in red[:size]])

    def __repr__(self) -> str:
        return f"Matrix({self.nrows}x{self.ncols})"


def matvec(A: Matrix, v: Vector) -> Vector:
    z = A.ctx.zero
    out = []
    for row in A.rows:
        acc = z
        for a, b in zip(row, v):
            if a and b:
                acc = acc + a * b
        out.append(acc)
    return out


def vec_add(u: Vector, v: Vector) -> Vector:
    return [a + b for a, b in zip(u, v)]


def vec_sub(u: Vector, v: Vector) -> Vector:
    return [a - b for a, b in zip(u, v)]


def vec_scale(c, v: Vector) -> Vector:
    return [a * c if a else a for a in v]


def is_zero_vector(v: Iterable) -> bool:
    return not any(v)


def rref(rows: Sequence[Vector], ncols: int) -> tuple[list[Vector], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    work = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    nrows = len(work)
    for c in range(ncols):
        if r >= nrows:
            break
        p = next((i for i in range(r, nrows) if work[i][c]), None)
        if p is None:
            continue
        work[r], work[p] = work[p], work[r]
        prow = work[r]
        inv = prow[c].inv()
        prow = [a * inv if a else a for a in prow]
        work[r] = prow
        for i in range(nrows):
            if i != r:
                f = work[i][c]
                if f:
                    row = work[i]
                    work[i] = [a - f * b if b else a for a, b in zip(row, prow)]
        pivots.append(c)
        r += 1
    return work[:r], pivots


def nullspace(ctx: CycloContext, rows: Sequence[Vector], ncols: int) -> list[Vector]:
    """Basis of {x : A x = 0} for A given by ``rows``."""
    red, piv = rref(rows, ncols)
    pivset = set(piv)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [ctx.zero] * ncols
        v[f] = ctx.one
        for row, p in zip(red, piv):
            if row[f]:
                v[p] = -row[f]
        basis.append(v)
    return basis


class Echelon:
    """Incrementally built subspace of k^dim kept in reduced echelon form.

    ``reduce`` returns the residue of a vector modulo the span.  When
    ``track`` is set each stored row also remembers which combination of the
    *added* vectors produced it, which gives coordinates in the added basis.
    """

    def __init__(self, ctx: CycloContext, dim: int, track: bool = False):
        self.ctx = ctx
        self.dim = dim
        self.track = track
        self.rows: list[Vector] = []
        self.pivots: list[int] = []
        self.combos: list[Vector] = []
        self.added: list[Vector] = []

    def __len__(self) -> int:
        return len(self.rows)

    def _reduce(self, v: Vector, combo=None):
        v = list(v)
        for row, p, cmb in zip(self.rows, self.pivots, self.combos or [None] * len(self.rows)):
            f = v[p]
            if f:
                v = [a - f * b if b else a for a, b in zip(v, row)]
                if combo is not None:
                    combo = [a - f * b if b else a for a, b in zip(combo, cmb)]
        return v, combo

    def reduce(self, v: Vector) -> Vector:
        return self._reduce(v)[0]

    def contains(self, v: Vector) -> bool:
        return not any(self.reduce(v))

    def add(self, v: Vector) -> bool:
        """Add v; return True if it enlarged the span."""
        if len(v) != self.dim:
            raise ValueError("dimension mismatch")
        combo = None
        if self.track:
            k = len(self.added)
            z = self.ctx.zero
            combo = [z] * k + [self.ctx.one]
            self.combos = [c + [z] for c in self.combos]
        res, combo = self._reduce(v, combo)
        p = next((i for i, a in enumerate(res) if a), None)
        if p is None:
            if self.track:
                self.combos = [c[:-1] for c in self.combos]
            return False
        inv = res[p].inv()
        res = [a * inv if a else a for a in res]
        if combo is not None:
            combo = [a * inv if a else a for a in combo]
        # keep rows fully reduced so coordinates can be read off pivots
        for idx, row in enumerate(self.rows):
            f = row[p]
            if f:
                self.rows[idx] = [a - f * b if b else a for a, b in zip(row, res)]
                if combo is not None:
                    self.combos[idx] = [a - f * b if b else a for a, b in zip(self.combos[idx], combo)]
        self.rows.append(res)
        self.pivots.append(p)
        if combo is not None:
            self.combos.append(combo)
            self.added.append(list(v))
        return True

    def coordinates(self, v: Vector) -> Vector:
        """Coordinates of v (which must lie in the span) w.r.t. the stored rows."""
        res = self.reduce(v)
        if any(res):
            raise ValueError("vector is not in the span")
        return [v[p] for p in self.pivots]

    def added_coordinates(self, v: Vector) -> Vector:
        """Coordinates of v w.r.t. the independent vectors that were added."""
        if not self.track:
            raise ValueError("echelon was not built with track=True")
        coords = self.coordinates(v)
        z = self.ctx.zero
        out = [z] * len(self.added)
        for c, cmb in zip(coords, self.combos):
            if c:
                out = [a + c * b if b else a for a, b in zip(out, cmb)]
        return out


def solve_in_span(ctx: CycloContext, basis: Sequence[Vector], v: Vector) -> Vector | None:
    """Coefficients c with sum c_i basis_i = v, or None if v is outside the span.

    The basis vectors must be linearly independent.
    """
    dim = len(v)
    ech = Echelon(ctx, dim, track=True)
    for b in basis:
        if not ech.add(b):
            raise ValueError("basis vectors are dependent")
    if not ech.contains(v):
        return None
    return ech.added_coordinates(v)


def sparse_nullspace(ctx: CycloContext, equations: Iterable[dict], nvars: int) -> list[Vector]:
    """Kernel of a sparse homogeneous system.

    Each equation is a dict {variable index: coefficient}.  Returns a basis
    of solutions as dense vectors of length ``nvars``.
    """
    pivot_rows: dict[int, dict] = {}
    order: list[int] = []
    for eq in equations:
        row = {k: v for k, v in eq.items() if v}
        # reduce against existing pivots until the leading variable is new
        while row:
            lead = min(row)
            prow = pivot_rows.get(lead)
            if prow is None:
                break
            f = row[lead]
            for k, v in prow.items():
                nv = row.get(k, ctx.zero) - f * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
        if not row:
            continue
        lead = min(row)
        inv = row[lead].inv()
        row = {k: v * inv for k, v in row.items()}
        pivot_rows[lead] = row
        order.append(lead)
    # back substitution to reduced form, processing larger pivots first
    for lead in sorted(pivot_rows, reverse=True):
        row = pivot_rows[lead]
        for other in list(pivot_rows):
            if other == lead:
                continue
            orow = pivot_rows[other]
            f = orow.get(lead)
            if f:
                for k, v in row.items():
                    nv = orow.get(k, ctx.zero) - f * v
                    if nv:
                        orow[k] = nv
                    else:
                        orow.pop(k, None)
    basis = []
    for free in range(nvars):
        if free in pivot_rows:
            continue
        v = [ctx.zero] * nvars
        v[free] = ctx.one
        for lead, row in pivot_rows.items():
            c = row.get(free)
            if c:
                v[lead] = -c
        basis.append(v)
    return basis
