"""Determinants and inverses of k-diagonal circulant and cyclic banded matrices.

Values live in one of three fields: :class:`Float64Field`,
:class:`RationalField` (exact, via gmpy2) and :class:`PrimeField` (Z_p).

>>> from ringband import CirculantMatrix, RationalField, cm_det
>>> cm_det(CirculantMatrix.from_values(RationalField(), ["1", "3", "1"], 4, 2))
mpq(45,1)
"""

from .banded import (
    CyclicBandedMatrix,
    InverseMatrix,
    TransferWindow,
    cbm_canonicalize,
    cbm_det,
    cbm_inv_fill_columns,
    cbm_inv_fill_rows,
    cbm_inv_seed,
    cbm_inverse,
    cbm_matvec,
    cbm_to_dense,
    cbm_transfer_windows,
)
from .circulant import (
    CirculantInverse,
    CirculantMatrix,
    Stencil,
    cm_canonicalize,
    cm_det,
    cm_inv_extend,
    cm_inv_seed,
    cm_inverse,
    cm_matvec,
    cm_to_dense,
    needs_dense_fallback,
)
from .errors import (
    ConsistencyFailure,
    DimensionMismatch,
    DivisionByZero,
    FieldError,
    FieldMismatch,
    GenerationExhausted,
    IndexOutOfRange,
    InvalidMatrix,
    NumericallySingular,
    NumericOverflow,
    RingbandError,
    SchemaError,
    SingularMatrix,
    ZeroFirstStencilEntry,
)
from .fields import Float64Field, PrimeField, RationalField, field_from_json, is_prime, parse_field
from .instances import RandomInstanceSpec, gen_cbm, gen_cm
from .instrument import OpCounts, counting
from .oracle import dense_det, dense_inverse
from .smallmat import DenseMatrix, mat_det, mat_det_inv, mat_mul, mat_pow
from .structured import determinant, inverse, matvec, to_dense

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
