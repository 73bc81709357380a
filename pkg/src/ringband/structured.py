"""Type-dispatching front door over the circulant and cyclic banded paths."""

from .banded import CyclicBandedMatrix, cbm_det, cbm_inverse, cbm_matvec, cbm_to_dense
from .circulant import CirculantMatrix, cm_det, cm_inverse, cm_matvec, cm_to_dense, needs_dense_fallback


def _pick(m, cm_fn, cbm_fn):
    if isinstance(m, CirculantMatrix):
        return cm_fn
    if isinstance(m, CyclicBandedMatrix):
        return cbm_fn
    raise TypeError(f"expected CirculantMatrix or CyclicBandedMatrix, got {type(m).__name__}")


def determinant(m):
    return _pick(m, cm_det, cbm_det)(m)


def det_uses_fallback(m):
    """Whether :func:`determinant` goes through the dense oracle for ``m``."""
    return needs_dense_fallback(m.n, m.k)


def inverse(m):
    """``CirculantInverse`` for a k-CM, ``InverseMatrix`` for a k-CBM."""
    return _pick(m, cm_inverse, cbm_inverse)(m)


def to_dense(m):
    return _pick(m, cm_to_dense, cbm_to_dense)(m)


def matvec(m, v):
    return _pick(m, cm_matvec, cbm_matvec)(m, v)
