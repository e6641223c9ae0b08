"""Dense matrices over any of the coefficient rings.

Matrices act on column vectors; ``A @ B`` is the composite "first B, then A"
and multiplies entries in ring order a_ik * b_kj, which matters for the
twisted rings.
"""

from __future__ import annotations

from .errors import RingMismatchError, ShapeError


class Matrix:
    __slots__ = ("ring", "rows", "nrows", "ncols")

    def __init__(self, ring, rows, nrows: int | None = None, ncols: int | None = None):
        rows = [list(r) for r in rows]
        if nrows is None:
            nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if len(rows) != nrows or any(len(r) != ncols for r in rows):
            raise ShapeError(f"ragged or mis-sized matrix, expected {nrows}x{ncols}")
        self.ring = ring
        self.rows = tuple(tuple(ring.coerce(x) for x in r) for r in rows)
        self.nrows = nrows
        self.ncols = ncols

    @classmethod
    def _raw(cls, ring, rows, nrows, ncols):
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.rows = rows
        obj.nrows = nrows
        obj.ncols = ncols
        return obj

    @classmethod
    def zeros(cls, ring, nrows: int, ncols: int) -> "Matrix":
        z = ring.zero
        return cls._raw(ring, tuple((z,) * ncols for _ in range(nrows)), nrows, ncols)

    @classmethod
    def identity(cls, ring, n: int) -> "Matrix":
        z, o = ring.zero, ring.one
        return cls._raw(ring, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)), n, n)

    @classmethod
    def scalar(cls, ring, n: int, x) -> "Matrix":
        x = ring.coerce(x)
        z = ring.zero
        return cls._raw(ring, tuple(tuple(x if i == j else z for j in range(n)) for i in range(n)), n, n)

    @classmethod
    def diagonal(cls, ring, entries) -> "Matrix":
        entries = [ring.coerce(x) for x in entries]
        n = len(entries)
        z = ring.zero
        return cls._raw(ring, tuple(tuple(entries[i] if i == j else z for j in range(n)) for i in range(n)), n, n)

    @classmethod
    def block(cls, ring, grid) -> "Matrix":
        """Assemble from a 2-d grid of matrices with compatible shapes."""
        if not grid:
            return cls.zeros(ring, 0, 0)
        heights = [row[0].nrows for row in grid]
        widths = [m.ncols for m in grid[0]]
        rows = []
        for bi, brow in enumerate(grid):
            if len(brow) != len(widths):
                raise ShapeError("block grid is ragged")
            for bj, m in enumerate(brow):
                if m.nrows != heights[bi] or m.ncols != widths[bj]:
                    raise ShapeError(f"block ({bi},{bj}) has shape {m.shape}, expected "
                                     f"{(heights[bi], widths[bj])}")
                if m.ring != ring:
                    raise RingMismatchError(f"block ({bi},{bj}) over {m.ring}, expected {ring}")
            for r in range(heights[bi]):
                line = ()
                for m in brow:
                    line += m.rows[r]
                rows.append(line)
        return cls._raw(ring, tuple(rows), sum(heights), sum(widths))

    @classmethod
    def hstack(cls, ring, mats) -> "Matrix":
        return cls.block(ring, [list(mats)])

    @classmethod
    def vstack(cls, ring, mats) -> "Matrix":
        return cls.block(ring, [[m] for m in mats])

    # access

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def row(self, i):
        return self.rows[i]

    def col(self, j):
        return tuple(r[j] for r in self.rows)

    def entries(self):
        for i, r in enumerate(self.rows):
            for j, x in enumerate(r):
                yield i, j, x

    def submatrix(self, rows, cols) -> "Matrix":
        rows, cols = list(rows), list(cols)
        return Matrix._raw(self.ring, tuple(tuple(self.rows[i][j] for j in cols) for i in rows),
                           len(rows), len(cols))

    def transpose(self) -> "Matrix":
        return Matrix._raw(self.ring, tuple(zip(*self.rows)) if self.nrows else
                           tuple(() for _ in range(self.ncols)), self.ncols, self.nrows)

    def map(self, f, ring=None) -> "Matrix":
        ring = self.ring if ring is None else ring
        return Matrix._raw(ring, tuple(tuple(f(x) for x in r) for r in self.rows), self.nrows, self.ncols)

    def change_ring(self, ring) -> "Matrix":
        return self.map(ring.coerce, ring)

    def alpha(self, power: int = 1) -> "Matrix":
        if power == 0:
            return self
        R = self.ring
        return self.map(lambda x: R.alpha(x, power))

    # arithmetic

    def _check(self, other, op):
        if not isinstance(other, Matrix):
            raise TypeError(f"cannot {op} Matrix and {type(other).__name__}")
        if other.ring is not self.ring and other.ring != self.ring:
            raise RingMismatchError(f"{self.ring} vs {other.ring}")

    def __add__(self, other):
        self._check(other, "add")
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        return Matrix._raw(self.ring, tuple(tuple(a + b for a, b in zip(r, s))
                                            for r, s in zip(self.rows, other.rows)),
                           self.nrows, self.ncols)

    def __sub__(self, other):
        self._check(other, "subtract")
        if self.shape != other.shape:
            raise ShapeError(f"cannot subtract {self.shape} and {other.shape}")
        return Matrix._raw(self.ring, tuple(tuple(a - b for a, b in zip(r, s))
                                            for r, s in zip(self.rows, other.rows)),
                           self.nrows, self.ncols)

    def __neg__(self):
        return Matrix._raw(self.ring, tuple(tuple(-a for a in r) for r in self.rows),
                           self.nrows, self.ncols)

    def __matmul__(self, other):
        self._check(other, "multiply")
        if self.ncols != other.nrows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        zero = self.ring.zero
        cols = list(zip(*other.rows)) if other.nrows else [()] * other.ncols
        out = []
        for r in self.rows:
            nz = [(k, a) for k, a in enumerate(r) if a]
            line = []
            for c in cols:
                acc = zero
                for k, a in nz:
                    b = c[k]
                    if b:
                        acc = acc + a * b
                line.append(acc)
            out.append(tuple(line))
        return Matrix._raw(self.ring, tuple(out), self.nrows, other.ncols)

    def scale(self, x) -> "Matrix":
        """Left scalar multiple x*M."""
        x = self.ring.coerce(x)
        return self.map(lambda a: x * a)

    def rscale(self, x) -> "Matrix":
        """Right scalar multiple M*x."""
        x = self.ring.coerce(x)
        return self.map(lambda a: a * x)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.ring == other.ring and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, self.rows))

    def is_zero(self) -> bool:
        return not any(x for r in self.rows for x in r)

    def is_identity(self) -> bool:
        return self.nrows == self.ncols and self == Matrix.identity(self.ring, self.nrows)

    def strings(self):
        render = self.ring.render
        return [[render(x) for x in r] for r in self.rows]

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols}, {self.strings()})"
