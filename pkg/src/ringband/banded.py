"""k-diagonal cyclic banded matrices: determinant and inverse.

Same reduction as the circulant case, with the transfer-matrix power
replaced by ordered products of per-row transfer matrices T_p.  The
inverse is built from (k-1)^2 cofactor seeds: a column recurrence fills
the first k-1 columns, then a row recurrence (from ``M^-1 M = I``) fills
the remaining n-k+1 columns at k field operations per entry.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property

from . import _blocks
from .circulant import needs_dense_fallback
from .errors import (
    ConsistencyFailure,
    InvalidMatrix,
    NumericallySingular,
    SingularMatrix,
    ZeroFirstStencilEntry,
)
from .instrument import tally
from .oracle import dense_det, dense_inverse
from .smallmat import DenseMatrix, mat_det_inv, mat_mul

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CyclicBandedMatrix:
    """Row r holds its own stencil x^(r)_1..x^(r)_k, x^(r)_j in column ``r + j - alignment (mod n)``."""

    n: int
    k: int
    alignment: int
    rows: tuple
    field: object

    def __post_init__(self):
        n, k = self.n, self.k
        if k < 1:
            raise InvalidMatrix("band width k must be at least 1")
        if not 1 <= self.alignment <= k:
            raise InvalidMatrix(f"alignment {self.alignment} not in 1..{k}")
        if n < k:
            raise InvalidMatrix(f"order n={n} smaller than band width k={k}")
        if len(self.rows) != n:
            raise InvalidMatrix(f"expected {n} rows, got {len(self.rows)}")
        rows = []
        for r, row in enumerate(self.rows, start=1):
            if len(row) != k:
                raise InvalidMatrix(f"row {r} has {len(row)} values, expected k={k}")
            row = tuple(self.field.convert(v) for v in row)
            if self.field.is_zero(row[-1]):
                raise InvalidMatrix(f"x_k of row {r} must be nonzero")
            rows.append(row)
        object.__setattr__(self, "rows", tuple(rows))

    @classmethod
    def from_circulant(cls, m):
        """The same matrix with its stencil repeated on every row."""
        return cls(m.n, m.k, m.alignment, (m.stencil.values,) * m.n, m.field)

    def x(self, j, r):
        """x^(r)_j with 1-based, cyclic row index r."""
        return self.rows[(r - 1) % self.n][j - 1]

    def entry(self, r, c):
        j = (c - r) % self.n + self.alignment
        for jj in (j, j - self.n):
            if 1 <= jj <= self.k:
                return self.rows[r][jj - 1]
        return self.field.zero


@dataclass(frozen=True)
class TransferWindow:
    """``product = T_stop @ ... @ T_start`` (later factors on the left)."""

    matrix: CyclicBandedMatrix
    product: DenseMatrix
    start: int
    stop: int

    @cached_property
    def scalar(self):
        """Product of x^(p)_k over the window."""
        f, m = self.matrix.field, self.matrix
        value = f.one
        for p in range(self.start, self.stop + 1):
            value = f.mul(value, m.x(m.k, p))
        return value


@dataclass(frozen=True)
class InverseMatrix:
    n: int
    entries: tuple
    field: object
    fallback: bool = False

    def to_dense(self):
        return DenseMatrix(self.field, self.n, self.n, self.entries)


def _sign_exponent(n, k, alignment):
    return (k - alignment) * (n - k + alignment)


def cbm_canonicalize(m):
    """Rotate columns so x_2 sits on the diagonal; rows keep their stencils."""
    sign = m.field.sign(_sign_exponent(m.n, m.k, m.alignment))
    if m.k == 1:
        return m, 0, sign
    canonical = CyclicBandedMatrix(m.n, m.k, 2, m.rows, m.field)
    return canonical, (m.alignment - 2) % m.n, sign


def _steps(m):
    return m.n - 2 * m.k + 2


def _transfer(m, p):
    return _blocks.transfer_matrix(m.field, m.x, m.k, p)


def _naive_window(m, j):
    product = DenseMatrix.identity(m.field, m.k - 1)
    for p in range(j + 1, j + _steps(m) + 1):
        product = mat_mul(_transfer(m, p), product)
    return TransferWindow(m, product, j + 1, j + _steps(m))


def _window_chain(m, method="auto"):
    """Windows j = 0..k-1, window j spanning T_{j+1}..T_{j+n-2k+2}.

    ``method="incremental"`` slides window j to j+1 as
    ``T_{j+1+steps} @ W_j @ T_{j+1}^-1`` whenever T_{j+1} is invertible,
    recomputing from scratch otherwise.  ``"auto"`` is incremental for
    exact fields and naive for floats, where the inverse of a nearly
    singular T_{j+1} would amplify rounding error.
    """
    f = m.field
    if method == "auto":
        method = "incremental" if f.exact else "naive"
    if method not in ("incremental", "naive"):
        raise ValueError(f"unknown window method {method!r}")
    steps = _steps(m)
    chain = [_naive_window(m, 0)]
    for j in range(m.k - 1):
        t_inv = None
        if method == "incremental":
            _, t_inv = mat_det_inv(_transfer(m, j + 1))
        if t_inv is None:
            chain.append(_naive_window(m, j + 1))
        else:
            product = mat_mul(mat_mul(_transfer(m, j + 1 + steps), chain[-1].product), t_inv)
            chain.append(TransferWindow(m, product, j + 2, j + 1 + steps))
    for w in chain:
        f.check_finite(w.product.entries, "transfer window product")
    return chain


def cbm_transfer_windows(m, method="auto"):
    """Seed windows j = 1..k-1 of a matrix with n >= 2k - 2."""
    if m.k < 2 or needs_dense_fallback(m.n, m.k):
        raise ValueError("transfer windows need k >= 2 and n >= 2k - 2")
    return _window_chain(m, method)[1:]


def _schur(m, window):
    f = m.field
    value = _blocks.schur_det(_blocks.det_blocks(f, m.x, m.n, m.k), window.product)
    f.check_finite([value], "Schur complement determinant")
    return value


def cbm_det(m):
    """Determinant in O(k^3 n) field operations."""
    f, n, k = m.field, m.n, m.k
    if k == 1:
        value = f.one
        for row in m.rows:
            value = f.mul(value, row[0])
        f.check_finite([value], "determinant")
        return value
    if needs_dense_fallback(n, k):
        return dense_det(cbm_to_dense(m))
    schur = _schur(m, _naive_window(m, 0))
    value = f.mul(f.sign(_sign_exponent(n, k, m.alignment)), schur)
    for p in range(1, n - k + 2):
        value = f.mul(value, m.x(k, p))
    f.check_finite([value], "determinant")
    return value


def _require_canonical(m):
    if m.k < 2 or m.alignment != 2:
        raise ValueError("expected a canonical (alignment 2) matrix with k >= 2")
    if needs_dense_fallback(m.n, m.k):
        raise ValueError(f"n={m.n} below the 2k-2 threshold of the block reduction")


def cbm_inv_seed(m, chain=None):
    """Seed entries ``seeds[j-1][i-1] = M^-1[i+j-1, j]`` (1-based) for i, j in 1..k-1.

    Entry (i+j-1, j) is the cofactor of M[j, i+j-1] over |M|.  The window
    scalar over |M|'s x_k product is cancelled analytically to the k-1
    factors outside the window.
    """
    _require_canonical(m)
    f, n, k = m.field, m.n, m.k
    if chain is None:
        chain = _window_chain(m)
    steps = _steps(m)
    schur = _schur(m, chain[0])
    if f.is_zero(schur):
        raise SingularMatrix() if f.exact else NumericallySingular()
    inv_denom = f.inv(f.mul(f.sign(_sign_exponent(n, k, 2)), schur))
    seeds = []
    for j in range(1, k):
        outside = f.one
        for p in [*range(1, j + 1), *range(steps + j + 1, n - k + 2)]:
            outside = f.mul(outside, m.x(k, p))
        scale = f.mul(inv_denom, f.inv(outside))
        blocks = _blocks.seed_blocks(f, m.x, n, k, j)
        column = []
        for i in range(1, k):
            cof = _blocks.cofactor_block_det(blocks, chain[j].product, i)
            column.append(f.mul(f.mul(f.sign(i + 1 + k * steps), cof), scale))
        seeds.append(tuple(column))
    f.check_finite([v for col in seeds for v in col], "inverse seeds")
    return tuple(seeds)


def cbm_inv_fill_columns(m, seeds):
    """Columns 1..k-1 of the inverse from ``M @ M^-1 = I``, row by row.

    Returns k-1 lists of length n (0-based rows).  The k-1 equations per
    column left unused by the recurrence are checked afterwards.
    """
    _require_canonical(m)
    f, n, k = m.field, m.n, m.k
    columns = []
    for j in range(1, k):
        col = [None] * n
        for t, v in enumerate(seeds[j - 1]):
            col[(j - 1 + t) % n] = v
        for i in range(k - 1 + j, n + j):
            r = i - k + 2
            xs = m.rows[(r - 1) % n]
            vals = [col[(r + t - 3) % n] for t in range(1, k)]
            col[(i - 1) % n] = f.neg(f.div(f.dot(xs[:-1], vals), xs[-1]))
        tally("entry_ops", k * (n - k + 1))
        f.check_finite(col, "column recurrence")
        for r in range(j - k + 2, j + 1):
            vals = [col[(r + t - 3) % n] for t in range(1, k + 1)]
            target = f.one if r == j else f.zero
            if not f.satisfies(m.rows[(r - 1) % n], vals, target):
                raise ConsistencyFailure(f"column {j}: equation of row {(r - 1) % n + 1} fails")
        tally("entry_ops", k * (k - 1))
        columns.append(col)
    return columns


def cbm_inv_fill_rows(m, left_columns, direction=None):
    """Fill columns k..n of the inverse from ``M^-1 @ M = I``.

    ``direction="forward"`` is the recurrence that divides by x^(j)_1 and
    sweeps j = k..n; it raises :class:`ZeroFirstStencilEntry` when some
    such x^(j)_1 is zero.  ``"backward"`` solves the same equations for
    the x_k term instead, sweeping j = n down to k.  The default is forward
    for exact fields and backward for floats: with a dominant x_k the
    forward sweep amplifies rounding error geometrically.

    Every computed entry and every checked entry of the k-1 leftover
    equations costs k operations, so ``entry_ops`` grows by exactly k n^2.
    """
    _require_canonical(m)
    f, n, k = m.field, m.n, m.k
    if direction is None:
        direction = "forward" if f.exact else "backward"
    cols = [list(c) for c in left_columns] + [None] * (n - k + 1)
    x = m.x

    def equation(c):
        # Column c (1-based) of M: x^(c-t+2)_t sits in row c-t+2, t = 1..k.
        return [x(t, c - t + 2) for t in range(1, k + 1)], [(c - t + 1) % n for t in range(1, k + 1)]

    if direction == "forward":
        for j in range(k, n + 1):
            if f.is_zero(x(1, j)):
                raise ZeroFirstStencilEntry(j)
        for j in range(k, n + 1):
            coeffs, idx = equation(j - 1)
            s = f.inv(coeffs[0])
            new = f.combine([f.neg(f.mul(c, s)) for c in coeffs[1:]], [cols[q] for q in idx[1:]])
            new[j - 2] = f.add(new[j - 2], s)
            cols[j - 1] = new
        leftover = [n, *range(1, k - 1)]
    elif direction == "backward":
        for q in range(n, k - 1, -1):
            coeffs, idx = equation(q + k - 2)
            s = f.inv(coeffs[-1])
            new = f.combine([f.neg(f.mul(c, s)) for c in coeffs[:-1]], [cols[p] for p in idx[:-1]])
            e = (q + k - 3) % n
            new[e] = f.add(new[e], s)
            cols[q - 1] = new
        leftover = list(range(k - 1, 2 * k - 2))
    else:
        raise ValueError(f"unknown direction {direction!r}")
    tally("entry_ops", k * n * (n - k + 1))
    for col in cols[k - 1 :]:
        f.check_finite(col, "row recurrence")
    for c in leftover:
        coeffs, idx = equation(c)
        if not f.satisfies_unit(coeffs, [cols[q] for q in idx], (c - 1) % n):
            raise ConsistencyFailure(f"row fill: equation of column {(c - 1) % n + 1} fails")
    tally("entry_ops", k * n * (k - 1))
    return InverseMatrix(n, tuple(zip(*cols)), f)


def _fallback_inverse(m):
    inv = dense_inverse(cbm_to_dense(m))
    if inv is None:
        raise SingularMatrix()
    return InverseMatrix(m.n, inv.data, m.field, fallback=True)


def cbm_inverse(m):
    """Full inverse; ``fallback`` is set when the dense oracle had to be used."""
    f, n, k = m.field, m.n, m.k
    if k == 1:
        diag = [f.inv(row[0]) for row in m.rows]
        entries = tuple(tuple(diag[r] if r == c else f.zero for c in range(n)) for r in range(n))
        return InverseMatrix(n, entries, f)
    if needs_dense_fallback(n, k):
        return _fallback_inverse(m)
    canonical, shift, _ = cbm_canonicalize(m)
    seeds = cbm_inv_seed(canonical)
    columns = cbm_inv_fill_columns(canonical, seeds)
    try:
        inv = cbm_inv_fill_rows(canonical, columns)
    except ZeroFirstStencilEntry as exc:
        log.info("falling back to dense inversion: %s", exc)
        return _fallback_inverse(m)
    if shift == 0:
        return inv
    rows = inv.entries
    return InverseMatrix(n, tuple(rows[(r + shift) % n] for r in range(n)), f)


def cbm_to_dense(m):
    n = m.n
    return DenseMatrix(m.field, n, n, tuple(tuple(m.entry(r, c) for c in range(n)) for r in range(n)))


def cbm_matvec(m, v):
    """``M @ v`` in O(kn) using the band."""
    f, n, i = m.field, m.n, m.alignment
    v = [f.convert(a) for a in v]
    if len(v) != n:
        raise ValueError(f"vector length {len(v)} != n={n}")
    return [
        f.dot(row, [v[(r + j - i) % n] for j in range(1, m.k + 1)])
        for r, row in enumerate(m.rows)
    ]
