"""Dense matrices over a :class:`~ringband.fields.Field`.

Sized for the (k-1)- and (2k-3)-square blocks the structured algorithms
work with, not for large dense linear algebra.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import DimensionMismatch, FieldMismatch, IndexOutOfRange
from .instrument import tally


@dataclass(frozen=True)
class DenseMatrix:
    """Immutable ``rows x cols`` matrix; ``data`` is a tuple of row tuples."""

    field: object
    rows: int
    cols: int
    data: tuple

    def __post_init__(self):
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise DimensionMismatch(
                f"data does not have shape {self.rows}x{self.cols}"
            )

    @classmethod
    def from_rows(cls, field, rows, cols=None):
        rows = [tuple(field.convert(v) for v in r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(field, len(rows), cols, tuple(rows))

    @classmethod
    def identity(cls, field, n):
        zero, one = field.zero, field.one
        data = tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))
        return cls(field, n, n, data)

    @classmethod
    def zeros(cls, field, rows, cols):
        return cls(field, rows, cols, tuple((field.zero,) * cols for _ in range(rows)))

    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def entries(self):
        """Row-major flat list of entries."""
        return [v for row in self.data for v in row]

    def __getitem__(self, index):
        r, c = index
        return self.data[r][c]

    def tolist(self):
        return [list(r) for r in self.data]

    def transpose(self):
        if self.rows == 0:
            return DenseMatrix(self.field, self.cols, 0, ((),) * self.cols)
        return DenseMatrix(self.field, self.cols, self.rows, tuple(zip(*self.data)))

    def __matmul__(self, other):
        return mat_mul(self, other)


def _same_field(a, b):
    if a.field != b.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")


def mat_mul(lhs, rhs):
    """Schoolbook product; every call is tallied as one block multiplication."""
    _same_field(lhs, rhs)
    if lhs.cols != rhs.rows:
        raise DimensionMismatch(f"cannot multiply {lhs.shape} by {rhs.shape}")
    tally("block_muls")
    f = lhs.field
    cols = list(zip(*rhs.data)) if rhs.rows else [()] * rhs.cols
    data = tuple(tuple(f.dot(row, col) for col in cols) for row in lhs.data)
    return DenseMatrix(f, lhs.rows, rhs.cols, data)


def mat_pow(t, m):
    """``t ** m`` by left-to-right square-and-multiply.

    Uses at most ``2 * floor(log2(m))`` calls to :func:`mat_mul`.
    """
    if t.rows != t.cols:
        raise DimensionMismatch(f"power of non-square {t.shape} matrix")
    if m < 0:
        raise ValueError("negative exponent")
    if m == 0:
        return DenseMatrix.identity(t.field, t.rows)
    result = t
    for bit in bin(m)[3:]:
        result = mat_mul(result, result)
        if bit == "1":
            result = mat_mul(result, t)
    return result


def mat_sub(a, b):
    _same_field(a, b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"cannot subtract {b.shape} from {a.shape}")
    f = a.field
    data = tuple(tuple(f.sub(x, y) for x, y in zip(ra, rb)) for ra, rb in zip(a.data, b.data))
    return DenseMatrix(f, a.rows, a.cols, data)


class PivotPolicy(enum.Enum):
    FIRST_NONZERO = "first-nonzero"
    PARTIAL = "partial"


def elimination_pivot_policy(field):
    """Exact fields take the first nonzero pivot; floats use partial pivoting."""
    return PivotPolicy.FIRST_NONZERO if field.exact else PivotPolicy.PARTIAL


def _pick_pivot(work, col, policy):
    n = len(work)
    if policy is PivotPolicy.PARTIAL:
        best = max(range(col, n), key=lambda r: abs(work[r][col]))
        return best if work[best][col] != 0 else None
    for r in range(col, n):
        if work[r][col] != 0:
            return r
    return None


def _gauss_jordan(a, want_inverse):
    f = a.field
    n = a.rows
    policy = elimination_pivot_policy(f)
    width = 2 * n if want_inverse else n
    work = []
    for i, row in enumerate(a.data):
        extra = [f.one if j == i else f.zero for j in range(n)] if want_inverse else []
        work.append(list(row) + extra)
    det = f.one
    for col in range(n):
        piv = _pick_pivot(work, col, policy)
        if piv is None:
            return f.zero, None
        if piv != col:
            work[col], work[piv] = work[piv], work[col]
            det = f.neg(det)
        pivot = work[col][col]
        det = f.mul(det, pivot)
        if want_inverse:
            scale = f.inv(pivot)
            prow = [f.mul(v, scale) for v in work[col][col:width]]
            work[col][col:width] = prow
            targets = range(n)
        else:
            # Divide each lead by the pivot instead of scaling by 1/pivot,
            # which overflows for subnormal float pivots.
            prow = work[col][col:width]
            targets = range(col + 1, n)
        for r in targets:
            if r == col:
                continue
            factor = work[r][col]
            if f.is_zero(factor):
                continue
            if not want_inverse:
                factor = f.div(factor, pivot)
            row = work[r]
            row[col:width] = f.axpy(f.neg(factor), prow, row[col:width])
    if not want_inverse:
        return det, None
    inv = DenseMatrix(f, n, n, tuple(tuple(r[n:]) for r in work))
    return det, inv


def mat_det(a):
    if a.rows != a.cols:
        raise DimensionMismatch(f"determinant of non-square {a.shape} matrix")
    return _gauss_jordan(a, want_inverse=False)[0]


def mat_det_inv(a):
    """Return ``(det, inverse)``; ``inverse`` is ``None`` when ``det == 0``."""
    if a.rows != a.cols:
        raise DimensionMismatch(f"inverse of non-square {a.shape} matrix")
    return _gauss_jordan(a, want_inverse=True)


def remove_column(a, idx):
    """Drop column ``idx`` (1-based, as in the cofactor formulas)."""
    if not 1 <= idx <= a.cols:
        raise IndexOutOfRange(f"column {idx} not in 1..{a.cols}")
    c = idx - 1
    data = tuple(r[:c] + r[c + 1 :] for r in a.data)
    return DenseMatrix(a.field, a.rows, a.cols - 1, data)


def assemble_block(tl, tr, bl, br):
    """Concatenate ``[[tl, tr], [bl, br]]``; empty blocks are allowed."""
    for m in (tr, bl, br):
        _same_field(tl, m)
    if tl.rows != tr.rows or bl.rows != br.rows or tl.cols != bl.cols or tr.cols != br.cols:
        raise DimensionMismatch(
            f"blocks {tl.shape} {tr.shape} / {bl.shape} {br.shape} do not tile"
        )
    top = tuple(a + b for a, b in zip(tl.data, tr.data))
    bottom = tuple(a + b for a, b in zip(bl.data, br.data))
    return DenseMatrix(tl.field, tl.rows + bl.rows, tl.cols + tr.cols, top + bottom)
