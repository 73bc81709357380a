"""k-diagonal circulant matrices: fast determinant and inverse.

The determinant reduces the matrix to a (k-1)-square Schur complement
involving ``T ** (n - 2k + 2)`` for the (k-1)-square transfer matrix T,
so it costs O(k^3 log n).  The inverse is again circulant; its first
column is fixed by k-1 cofactor seeds and a k-term linear recurrence.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import _blocks
from .errors import ConsistencyFailure, InvalidMatrix, NumericallySingular, SingularMatrix
from .instrument import tally
from .oracle import dense_det, dense_inverse
from .smallmat import DenseMatrix, mat_pow


@dataclass(frozen=True)
class Stencil:
    """Band values x_1..x_k; x_alignment sits on the main diagonal."""

    values: tuple
    alignment: int

    @property
    def k(self):
        return len(self.values)

    def x(self, j):
        return self.values[j - 1]


@dataclass(frozen=True)
class CirculantMatrix:
    """Order-n circulant whose row r holds x_j in column ``r + j - alignment (mod n)``."""

    n: int
    stencil: Stencil
    field: object

    def __post_init__(self):
        st = self.stencil
        if st.k < 1:
            raise InvalidMatrix("stencil must have at least one value")
        if not 1 <= st.alignment <= st.k:
            raise InvalidMatrix(f"alignment {st.alignment} not in 1..{st.k}")
        if self.n < st.k:
            raise InvalidMatrix(f"order n={self.n} smaller than band width k={st.k}")
        values = tuple(self.field.convert(v) for v in st.values)
        if self.field.is_zero(values[-1]):
            raise InvalidMatrix("x_k must be nonzero")
        object.__setattr__(self, "stencil", Stencil(values, st.alignment))

    @classmethod
    def from_values(cls, field, values, n, alignment):
        return cls(n, Stencil(tuple(values), alignment), field)

    @property
    def k(self):
        return self.stencil.k

    @property
    def alignment(self):
        return self.stencil.alignment

    def x(self, j, r=None):
        return self.stencil.values[j - 1]

    def entry(self, r, c):
        """Entry at 0-based (r, c)."""
        j = (c - r) % self.n + self.alignment
        for jj in (j, j - self.n):
            if 1 <= jj <= self.k:
                return self.stencil.values[jj - 1]
        return self.field.zero


@dataclass(frozen=True)
class CirculantInverse:
    """Inverse of a circulant, held as its first column y: entry (r, c) is ``y[(r - c) mod n]``."""

    n: int
    first_column: tuple
    field: object
    fallback: bool = False

    def entry(self, r, c):
        return self.first_column[(r - c) % self.n]

    @property
    def first_row(self):
        """Representing vector: row r of the inverse is this row shifted right by r."""
        y, n = self.first_column, self.n
        return tuple(y[-c % n] for c in range(n))

    def to_dense(self):
        y, n = self.first_column, self.n
        return DenseMatrix(self.field, n, n, tuple(tuple(y[(r - c) % n] for c in range(n)) for r in range(n)))


def needs_dense_fallback(n, k):
    """The block reduction needs n >= 2k - 2; smaller orders go to the dense oracle."""
    return k > 1 and n < 2 * k - 2


def _sign_exponent(n, k, alignment):
    return (k - alignment) * (n - k + alignment)


def cm_canonicalize(m):
    """Rotate columns so that x_2 sits on the diagonal.

    Returns ``(canonical, shift, sign)`` where ``canonical = m @ P**shift`` for
    the cyclic column shift P, and ``sign`` is the determinant sign factor
    ``(-1) ** ((k - i) * (n - k + i))`` of the original alignment i.
    """
    sign = m.field.sign(_sign_exponent(m.n, m.k, m.alignment))
    if m.k == 1:
        return m, 0, sign
    canonical = CirculantMatrix(m.n, Stencil(m.stencil.values, 2), m.field)
    return canonical, (m.alignment - 2) % m.n, sign


def _transfer_power(m):
    f = m.field
    t = _blocks.transfer_matrix(f, m.x, m.k, 1)
    power = mat_pow(t, m.n - 2 * m.k + 2)
    f.check_finite(power.entries, "transfer matrix power")
    return power


def _schur(m, power):
    f = m.field
    value = _blocks.schur_det(_blocks.det_blocks(f, m.x, m.n, m.k), power)
    f.check_finite([value], "Schur complement determinant")
    return value


def cm_det(m):
    """Determinant in O(k^3 log n) field operations.

    >>> from ringband.fields import RationalField
    >>> cm_det(CirculantMatrix.from_values(RationalField(), [1, 3, 1], 4, 2))
    mpq(45,1)
    """
    f, n, k = m.field, m.n, m.k
    if k == 1:
        value = f.pow(m.x(1), n)
        f.check_finite([value], "determinant")
        return value
    if needs_dense_fallback(n, k):
        return dense_det(cm_to_dense(m))
    schur = _schur(m, _transfer_power(m))
    scale = f.pow(m.x(k), n - k + 1)
    value = f.mul(f.mul(f.sign(_sign_exponent(n, k, m.alignment)), scale), schur)
    f.check_finite([value], "determinant")
    return value


def _require_canonical(m):
    if m.k < 2 or m.alignment != 2:
        raise ValueError("expected a canonical (alignment 2) matrix with k >= 2")
    if needs_dense_fallback(m.n, m.k):
        raise ValueError(f"n={m.n} below the 2k-2 threshold of the block reduction")


def cm_inv_seed(m):
    """First k-1 entries of the inverse's first column, from cofactors.

    ``m`` must be canonical.  The x_k powers of the cofactor prefactor and
    of |M| are cancelled analytically, leaving ``x_k ** -(k-1)``, so floats
    do not overflow on large n.
    """
    _require_canonical(m)
    f, n, k = m.field, m.n, m.k
    power = _transfer_power(m)
    schur = _schur(m, power)
    if f.is_zero(schur):
        raise SingularMatrix() if f.exact else NumericallySingular()
    steps = n - 2 * k + 2
    # |M| = (-1)^((k-2)(n-k+2)) x_k^(n-k+1) schur for alignment 2.
    denom = f.mul(f.mul(f.sign(_sign_exponent(n, k, 2)), schur), f.pow(m.x(k), k - 1))
    inv_denom = f.inv(denom)
    blocks = _blocks.seed_blocks(f, m.x, n, k, 1)
    seed = []
    for i in range(1, k):
        cof = _blocks.cofactor_block_det(blocks, power, i)
        seed.append(f.mul(f.mul(f.sign(i + 1 + k * steps), cof), inv_denom))
    f.check_finite(seed, "inverse seeds")
    return tuple(seed)


def cm_inv_extend(m, seed):
    """Extend the k-1 seeds to the full first column with the k-term recurrence.

    The k-1 equations of ``M y = e_1`` the recurrence does not use are
    checked afterwards; a violation raises :class:`ConsistencyFailure`.
    """
    _require_canonical(m)
    f, n, k = m.field, m.n, m.k
    if len(seed) != k - 1:
        raise ValueError(f"expected {k - 1} seed values, got {len(seed)}")
    xs = m.stencil.values
    scale = f.neg(f.inv(xs[-1]))
    coeffs = [f.mul(v, scale) for v in xs[:-1]]
    y = list(seed) + [f.zero] * (n - k + 1)
    dot = f.dot
    back = k - 1
    for i in range(back, n):
        y[i] = dot(coeffs, y[i - back : i])
    tally("entry_ops", k * (n - k + 1))
    f.check_finite(y, "inverse recurrence")

    # Row r (1-based) of M y = e_1 reads sum_j x_j y[r + j - 3 mod n] (0-based y).
    for r in [1, *range(n - k + 3, n + 1)]:
        vals = [y[(r + j - 3) % n] for j in range(1, k + 1)]
        target = f.one if r == 1 else f.zero
        if not f.satisfies(xs, vals, target):
            raise ConsistencyFailure(f"circulant inverse: wrap equation for row {r} fails")
    return CirculantInverse(n, tuple(y), f)


def _fallback_inverse(m):
    inv = dense_inverse(cm_to_dense(m))
    if inv is None:
        raise SingularMatrix()
    return CirculantInverse(m.n, tuple(inv.data[r][0] for r in range(m.n)), m.field, fallback=True)


def cm_inverse(m):
    """Inverse of a k-CM, returned in the caller's alignment."""
    f, n, k = m.field, m.n, m.k
    if k == 1:
        return CirculantInverse(n, (f.inv(m.x(1)),) + (f.zero,) * (n - 1), f)
    if needs_dense_fallback(n, k):
        return _fallback_inverse(m)
    canonical, shift, _ = cm_canonicalize(m)
    y = cm_inv_extend(canonical, cm_inv_seed(canonical)).first_column
    # m = canonical @ P^-shift, so m^-1 = P^shift @ canonical^-1: a row rotation.
    return CirculantInverse(n, tuple(y[(r + shift) % n] for r in range(n)), f)


def cm_to_dense(m):
    n = m.n
    return DenseMatrix(m.field, n, n, tuple(tuple(m.entry(r, c) for c in range(n)) for r in range(n)))


def cm_matvec(m, v):
    """``M @ v`` in O(kn) using the band."""
    n, i = m.n, m.alignment
    v = [m.field.convert(a) for a in v]
    if len(v) != n:
        raise ValueError(f"vector length {len(v)} != n={n}")
    shifted = []
    for j in range(1, m.k + 1):
        s = (j - i) % n
        shifted.append(v[s:] + v[:s])
    return m.field.combine(list(m.stencil.values), shifted)
