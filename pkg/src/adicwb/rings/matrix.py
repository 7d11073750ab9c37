"""Dense matrices over any of the exact rings."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Sequence, Tuple

from .base import Ring, RingError


@dataclass(frozen=True)
class Matrix:
    ring: Ring
    nrows: int
    ncols: int
    rows: Tuple[Tuple[Any, ...], ...]

    def __post_init__(self):
        if self.nrows < 0 or self.ncols < 0:
            raise RingError("negative matrix dimension")
        if len(self.rows) != self.nrows or any(len(r) != self.ncols for r in self.rows):
            raise RingError(f"ragged matrix for shape {self.nrows}x{self.ncols}")

    # construction -------------------------------------------------------

    @classmethod
    def from_rows(cls, ring: Ring, rows: Sequence[Sequence[Any]], ncols: int | None = None):
        rows = [tuple(ring.coerce(x) for x in r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        return cls(ring, len(rows), ncols, tuple(rows))

    @classmethod
    def from_columns(cls, ring: Ring, nrows: int, cols: Sequence[Sequence[Any]]):
        cols = [tuple(c) for c in cols]
        for c in cols:
            if len(c) != nrows:
                raise RingError("column of wrong length")
        rows = tuple(tuple(c[i] for c in cols) for i in range(nrows))
        return cls(ring, nrows, len(cols), rows)

    @classmethod
    def zero(cls, ring: Ring, nrows: int, ncols: int):
        z = ring.zero()
        return cls(ring, nrows, ncols, tuple((z,) * ncols for _ in range(nrows)))

    @classmethod
    def identity(cls, ring: Ring, n: int):
        z, o = ring.zero(), ring.one()
        return cls(ring, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def scalar(cls, ring: Ring, n: int, c):
        z = ring.zero()
        return cls(ring, n, n, tuple(tuple(c if i == j else z for j in range(n)) for i in range(n)))

    # access ---------------------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> Tuple[Any, ...]:
        return tuple(r[j] for r in self.rows)

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def is_zero(self) -> bool:
        return all(self.ring.is_zero(x) for r in self.rows for x in r)

    # algebra ----------------------------------------------------------------

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ring != other.ring:
            raise RingError("matrix ring mismatch")
        if self.ncols != other.nrows:
            raise RingError(f"shape mismatch {self.shape} @ {other.shape}")
        R = self.ring
        z = R.zero()
        ocols = other.columns()
        rows = []
        for r in self.rows:
            nz = [(k, a) for k, a in enumerate(r) if not R.is_zero(a)]
            row = []
            for c in ocols:
                s = z
                for k, a in nz:
                    b = c[k]
                    if not R.is_zero(b):
                        s = R.add(s, R.mul(a, b))
                row.append(s)
            rows.append(tuple(row))
        return Matrix(R, self.nrows, other.ncols, tuple(rows))

    def apply(self, vec: Sequence[Any]) -> Tuple[Any, ...]:
        R = self.ring
        out = []
        for r in self.rows:
            s = R.zero()
            for a, b in zip(r, vec):
                if not R.is_zero(a) and not R.is_zero(b):
                    s = R.add(s, R.mul(a, b))
            out.append(s)
        return tuple(out)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise RingError("shape mismatch in addition")
        R = self.ring
        return Matrix(R, self.nrows, self.ncols, tuple(
            tuple(R.add(a, b) for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __neg__(self):
        R = self.ring
        return Matrix(R, self.nrows, self.ncols, tuple(tuple(R.neg(a) for a in r) for r in self.rows))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "Matrix":
        R = self.ring
        return Matrix(R, self.nrows, self.ncols, tuple(tuple(R.mul(c, a) for a in r) for r in self.rows))

    def transpose(self) -> "Matrix":
        return Matrix(self.ring, self.ncols, self.nrows, tuple(zip(*self.rows)) if self.nrows else
                      tuple(() for _ in range(self.ncols)))

    def hstack(self, *others: "Matrix") -> "Matrix":
        out = self
        for o in others:
            if o.nrows != out.nrows:
                raise RingError("hstack row mismatch")
            out = Matrix(out.ring, out.nrows, out.ncols + o.ncols,
                         tuple(a + b for a, b in zip(out.rows, o.rows)))
        return out

    def vstack(self, *others: "Matrix") -> "Matrix":
        out = self
        for o in others:
            if o.ncols != out.ncols:
                raise RingError("vstack column mismatch")
            out = Matrix(out.ring, out.nrows + o.nrows, out.ncols, out.rows + o.rows)
        return out

    def select_columns(self, idx: Sequence[int]) -> "Matrix":
        return Matrix(self.ring, self.nrows, len(idx), tuple(tuple(r[j] for j in idx) for r in self.rows))

    def select_rows(self, idx: Sequence[int]) -> "Matrix":
        return Matrix(self.ring, len(idx), self.ncols, tuple(self.rows[i] for i in idx))

    def map(self, fn: Callable[[Any], Any], ring: Ring | None = None) -> "Matrix":
        ring = ring or self.ring
        return Matrix(ring, self.nrows, self.ncols, tuple(tuple(fn(a) for a in r) for r in self.rows))

    def fmt(self) -> str:
        return "[" + "; ".join(", ".join(self.ring.fmt(a) for a in r) for r in self.rows) + "]"

    def __str__(self):
        return self.fmt()


def block_diag(ring: Ring, blocks: Sequence[Matrix]) -> Matrix:
    nr = sum(b.nrows for b in blocks)
    nc = sum(b.ncols for b in blocks)
    z = ring.zero()
    rows = []
    c0 = 0
    for b in blocks:
        for r in b.rows:
            rows.append((z,) * c0 + tuple(r) + (z,) * (nc - c0 - b.ncols))
        c0 += b.ncols
    return Matrix(ring, nr, nc, tuple(rows))


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product; row index (i, k) -> i * b.nrows + k."""
    R = a.ring
    rows = []
    for ra in a.rows:
        for rb in b.rows:
            rows.append(tuple(R.mul(x, y) for x in ra for y in rb))
    return Matrix(R, a.nrows * b.nrows, a.ncols * b.ncols, tuple(rows))
