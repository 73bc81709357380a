"""Exception hierarchy shared by every module."""


class RingbandError(Exception):
    """Base class for all errors raised by ringband."""


class FieldError(RingbandError, ValueError):
    """Invalid field descriptor or a value that does not belong to the field."""


class DivisionByZero(RingbandError, ZeroDivisionError):
    pass


class FieldMismatch(RingbandError, ValueError):
    pass


class DimensionMismatch(RingbandError, ValueError):
    pass


class IndexOutOfRange(RingbandError, IndexError):
    pass


class InvalidMatrix(RingbandError, ValueError):
    """A circulant or cyclic banded matrix violates its construction invariants."""


class SingularMatrix(RingbandError, ArithmeticError):
    def __init__(self, message="matrix is singular (det = 0)"):
        super().__init__(message)


class ConsistencyFailure(RingbandError, ArithmeticError):
    """A wrap-around equation that the recurrences leave unused does not hold.

    Over an exact field this means a seed or an index convention is wrong;
    over floats it means rounding error swamped the result.
    """


class NumericOverflow(RingbandError, OverflowError):
    def __init__(self, where):
        super().__init__(
            f"non-finite intermediate in {where}; use an exact field "
            "(rational or zp) for this instance"
        )
        self.where = where


class ZeroFirstStencilEntry(RingbandError, ArithmeticError):
    """The row-fill recurrence needs x_1 of row ``row`` as a pivot but it is zero."""

    def __init__(self, row):
        super().__init__(f"x_1 of row {row} is zero; row recurrence undefined")
        self.row = row


class GenerationExhausted(RingbandError, RuntimeError):
    pass


class SchemaError(RingbandError, ValueError):
    """A matrix file is malformed; ``path`` is a JSONPath such as ``$.rows[3][0]``."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path


class NumericallySingular(SingularMatrix):
    """Float64 found a zero Schur complement determinant.

    In floating point this cannot be told apart from catastrophic
    cancellation, so the matrix may in fact be invertible.
    """

    def __init__(self):
        super().__init__(
            "matrix is numerically singular in float64 (reduced determinant = 0.0); "
            "if it should be invertible, retry with an exact field"
        )
