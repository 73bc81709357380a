"""Shared test utilities: exact dense checks and a Laplace-expansion determinant."""

from ringband.smallmat import DenseMatrix, mat_mul


def identity_rows(field, n):
    return [[field.one if r == c else field.zero for c in range(n)] for r in range(n)]


def is_identity(m):
    return m.tolist() == identity_rows(m.field, m.rows)


def two_sided_identity(a, inv):
    return is_identity(mat_mul(a, inv)) and is_identity(mat_mul(inv, a))


def laplace_det(field, rows):
    """Cofactor expansion along the first row; only for n <= 5."""
    n = len(rows)
    if n == 0:
        return field.one
    total = field.zero
    for c in range(n):
        if field.is_zero(rows[0][c]):
            continue
        minor = [r[:c] + r[c + 1 :] for r in rows[1:]]
        term = field.mul(field.mul(field.sign(c), rows[0][c]), laplace_det(field, minor))
        total = field.add(total, term)
    return total


def dense(field, rows):
    return DenseMatrix.from_rows(field, rows)
