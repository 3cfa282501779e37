"""
Dense matrices over R_N.
"""
from dataclasses import dataclass
from typing import Iterable, Sequence

from app.exceptions import ContextMismatch
from app.services.witt.context import ArithmeticContext, RingElement


@dataclass(frozen=True)
class RMatrix:
    ctx: ArithmeticContext
    rows: int
    cols: int
    entries: tuple  # row-major RingElements

    # ---------- Constructors ----------

    @classmethod
    def from_rows(cls, ctx: ArithmeticContext, rows: Sequence[Sequence], cols: int | None = None) -> "RMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("Ragged matrix rows")
        entries = tuple(ctx.coerce(v) for r in rows for v in r)
        return cls(ctx, len(rows), cols, entries)

    @classmethod
    def zero(cls, ctx: ArithmeticContext, rows: int, cols: int) -> "RMatrix":
        return cls(ctx, rows, cols, (ctx.zero(),) * (rows * cols))

    @classmethod
    def identity(cls, ctx: ArithmeticContext, n: int) -> "RMatrix":
        zero, one = ctx.zero(), ctx.one()
        return cls(ctx, n, n, tuple(one if i == j else zero for i in range(n) for j in range(n)))

    @classmethod
    def diagonal(cls, ctx: ArithmeticContext, values: Sequence) -> "RMatrix":
        n = len(values)
        zero = ctx.zero()
        values = [ctx.coerce(v) for v in values]
        return cls(ctx, n, n, tuple(values[i] if i == j else zero for i in range(n) for j in range(n)))

    @classmethod
    def block_diagonal(cls, blocks: Sequence["RMatrix"]) -> "RMatrix":
        ctx = blocks[0].ctx
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        grid = [[ctx.zero()] * cols for _ in range(rows)]
        r0 = c0 = 0
        for b in blocks:
            for i in range(b.rows):
                for j in range(b.cols):
                    grid[r0 + i][c0 + j] = b[i, j]
            r0 += b.rows
            c0 += b.cols
        return cls.from_rows(ctx, grid, cols)

    # ---------- Access ----------

    def __getitem__(self, index) -> RingElement:
        i, j = index
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def row_lists(self) -> list:
        return [list(self.row(i)) for i in range(self.rows)]

    def column(self, j: int) -> tuple:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.entries)

    def flatten(self) -> tuple:
        return self.entries

    def encode(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "entries": [list(e.coeffs) for e in self.entries]}

    def __repr__(self) -> str:
        return f"RMatrix({self.rows}x{self.cols}, {[list(map(repr, self.row(i))) for i in range(self.rows)]})"

    # ---------- Arithmetic ----------

    def _same(self, other: "RMatrix"):
        if other.ctx is not self.ctx and other.ctx != self.ctx:
            raise ContextMismatch(f"{self.ctx} vs {other.ctx}")

    def __add__(self, other: "RMatrix") -> "RMatrix":
        self._same(other)
        return RMatrix(self.ctx, self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "RMatrix") -> "RMatrix":
        self._same(other)
        return RMatrix(self.ctx, self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "RMatrix":
        return RMatrix(self.ctx, self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, factor) -> "RMatrix":
        factor = self.ctx.coerce(factor)
        return RMatrix(self.ctx, self.rows, self.cols, tuple(factor * a for a in self.entries))

    def __matmul__(self, other: "RMatrix") -> "RMatrix":
        self._same(other)
        if self.cols != other.rows:
            raise ValueError(f"Shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        zero = self.ctx.zero()
        out = []
        other_cols = [other.column(j) for j in range(other.cols)]
        for i in range(self.rows):
            row = self.row(i)
            nonzero = [(k, a) for k, a in enumerate(row) if not a.is_zero()]
            for col in other_cols:
                acc = zero
                for k, a in nonzero:
                    b = col[k]
                    if not b.is_zero():
                        acc = acc + a * b
                out.append(acc)
        return RMatrix(self.ctx, self.rows, other.cols, tuple(out))

    def transpose(self) -> "RMatrix":
        return RMatrix(self.ctx, self.cols, self.rows, tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def change_precision(self, N: int) -> "RMatrix":
        ctx = self.ctx.with_precision(N)
        return RMatrix(ctx, self.rows, self.cols, tuple(e.to_precision(N) for e in self.entries))

    def map(self, fn, ctx: ArithmeticContext | None = None) -> "RMatrix":
        values = tuple(fn(e) for e in self.entries)
        return RMatrix(ctx or (values[0].ctx if values else self.ctx), self.rows, self.cols, values)

    def reshape(self, rows: int, cols: int) -> "RMatrix":
        if rows * cols != len(self.entries):
            raise ValueError("Reshape changes the number of entries")
        return RMatrix(self.ctx, rows, cols, self.entries)


def vector_matrix(ctx: ArithmeticContext, vectors: Iterable[Sequence], cols: int) -> RMatrix:
    """Stack vectors as rows (an empty stack keeps the column count)."""
    vectors = [list(v) for v in vectors]
    if not vectors:
        return RMatrix(ctx, 0, cols, ())
    return RMatrix.from_rows(ctx, vectors, cols)
