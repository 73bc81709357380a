"""Ground-truth dense determinant and inverse.

Plain O(n^3) elimination with no structure exploitation, written
independently of :mod:`ringband.smallmat` so that a disagreement between
the two always points at the structured path.  Only the pivot policy is
shared.
"""

from .errors import DimensionMismatch
from .smallmat import DenseMatrix, PivotPolicy, elimination_pivot_policy


def _rows(a):
    if a.rows != a.cols:
        raise DimensionMismatch(f"square matrix required, got {a.shape}")
    return [list(r) for r in a.data]


def _pivot_row(work, col, exact):
    if exact:
        return next((r for r in range(col, len(work)) if work[r][col] != 0), None)
    best = max(range(col, len(work)), key=lambda r: abs(work[r][col]))
    return best if work[best][col] != 0 else None


def _forward(field, work, ncols):
    """Reduce ``work`` to upper-triangular form in place; return the det."""
    exact = elimination_pivot_policy(field) is PivotPolicy.FIRST_NONZERO
    n = len(work)
    det = field.one
    for col in range(n):
        piv = _pivot_row(work, col, exact)
        if piv is None:
            return field.zero
        if piv != col:
            work[col], work[piv] = work[piv], work[col]
            det = field.neg(det)
        head = work[col]
        det = field.mul(det, head[col])
        tail = head[col:ncols]
        for r in range(col + 1, n):
            lead = work[r][col]
            if lead != 0:
                factor = field.neg(field.div(lead, head[col]))
                work[r][col:ncols] = field.axpy(factor, tail, work[r][col:ncols])
    return det


def dense_det(a):
    """Determinant by Gaussian elimination.

    >>> from ringband.fields import RationalField
    >>> dense_det(DenseMatrix.from_rows(RationalField(), [[0, 1], [1, 0]]))
    mpq(-1,1)
    """
    work = _rows(a)
    return _forward(a.field, work, a.cols)


def dense_inverse(a):
    """Inverse via elimination on ``[a | I]`` and back substitution, or ``None``."""
    f = a.field
    n = a.rows
    work = _rows(a)
    for i, row in enumerate(work):
        row.extend(f.one if j == i else f.zero for j in range(n))
    if f.is_zero(_forward(f, work, 2 * n)):
        return None
    for col in range(n - 1, -1, -1):
        row = work[col]
        scale = f.inv(row[col])
        row[:] = [f.mul(v, scale) for v in row]
        right = row[n:]
        for r in range(col):
            lead = work[r][col]
            if lead != 0:
                work[r][col] = f.zero
                work[r][n:] = f.axpy(f.neg(lead), right, work[r][n:])
    return DenseMatrix(f, n, n, tuple(tuple(r[n:]) for r in work))
