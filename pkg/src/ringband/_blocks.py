"""Block builders shared by the circulant and cyclic banded algorithms.

Every builder takes an accessor ``x(j, r)`` returning stencil entry ``j``
of row ``r`` (both 1-based, ``r`` taken cyclically modulo n), so the
circulant path passes an accessor that ignores ``r``.
"""

from .errors import SingularMatrix
from .smallmat import (
    DenseMatrix,
    assemble_block,
    mat_det,
    mat_det_inv,
    mat_mul,
    mat_sub,
    remove_column,
)


def _build(field, rows, cols, entry):
    data = []
    for a in range(rows):
        row = [entry(a, b) for b in range(cols)]
        data.append(tuple(field.zero if v is None else v for v in row))
    return DenseMatrix(field, rows, cols, tuple(data))


def _lower(field, x, rows, k, first_row):
    """Lower-triangular band: x_k on the diagonal, x_{k-1} below, and so on."""
    return _build(field, rows, k - 1, lambda a, b: x(k - (a - b), first_row + a) if b <= a else None)


def _upper(field, x, rows, k, first_row):
    """Upper-triangular band: x_1 on the diagonal, x_2 to the right, and so on."""
    return _build(field, rows, k - 1, lambda a, b: x(1 + b - a, first_row + a) if b >= a else None)


def transfer_matrix(field, x, k, p):
    """T_p: first column ``-x_{k-t}^{(p+t)} / x_k^{(p)}``, ones on the superdiagonal."""
    scale = field.neg(field.inv(x(k, p)))
    size = k - 1
    data = []
    for t in range(1, k):
        row = [field.zero] * size
        row[0] = field.mul(x(k - t, p + t), scale)
        if t < size:
            row[t] = field.one
        data.append(tuple(row))
    return DenseMatrix(field, size, size, tuple(data))


def det_blocks(field, x, n, k):
    """A, B, C, D of the determinant reduction (each (k-1) x (k-1))."""
    a = _lower(field, x, k - 1, k, n - 2 * k + 3)
    b = _upper(field, x, k - 1, k, 1)
    c = _upper(field, x, k - 1, k, n - k + 2)
    d = _lower(field, x, k - 1, k, n - k + 2)
    return a, b, c, d


def seed_blocks(field, x, n, k, j):
    """A_j, B_j, C_j, D_j for the cofactors of row j of an alignment-2 matrix."""
    a = _upper(field, x, k - 1, k, j + 1)
    b = _lower(field, x, k - 1, k, n + j - 2 * k + 3)
    c = _lower(field, x, k - 2, k, n + j - k + 2)
    d = _upper(field, x, k - 2, k, n + j - k + 2)
    return a, b, c, d


def schur_det(blocks, product):
    """``det(D - C A^{-1} P B)`` for the determinant blocks and transfer product P."""
    a, b, c, d = blocks
    det_a, a_inv = mat_det_inv(a)
    if a_inv is None:  # unreachable while x_k != 0: A is triangular with x_k diagonal
        raise SingularMatrix("reduction block A is singular")
    s = mat_sub(d, mat_mul(mat_mul(mat_mul(c, a_inv), product), b))
    return mat_det(s)


def cofactor_block_det(blocks, product, i):
    """Determinant of ``[[P A_i, B], [C_i, D]]``, with column ``i`` removed from A and C."""
    a, b, c, d = blocks
    top_left = mat_mul(product, remove_column(a, i))
    return mat_det(assemble_block(top_left, b, remove_column(c, i), d))
