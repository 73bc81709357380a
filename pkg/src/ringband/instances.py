"""Seeded random instances for property tests, selftest and benchmarks.

A generator is a pure function of its :class:`RandomInstanceSpec`; the
only randomness is a private ``random.Random`` seeded from ``spec.seed``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import gmpy2

from .banded import CyclicBandedMatrix, cbm_to_dense
from .circulant import CirculantMatrix, cm_to_dense
from .errors import GenerationExhausted, InvalidMatrix
from .fields import Field, Float64Field, PrimeField, RationalField
from .oracle import dense_det

MAX_ATTEMPTS = 64


@dataclass(frozen=True)
class RandomInstanceSpec:
    """Everything needed to regenerate one random matrix.

    ``zero_first_entry`` (k-CBM only) zeroes x_1 in one randomly chosen
    row r in k..n.  That is the entry the row recurrence divides by, so it
    pushes the inverse onto the dense fallback.
    """

    seed: int
    k: int
    n: int
    alignment: int
    field: Field
    ensure_invertible: bool = False
    diagonally_dominant: bool = False
    zero_first_entry: bool = False

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise InvalidMatrix(f"need 1 <= k <= n, got k={self.k}, n={self.n}")
        if not 1 <= self.alignment <= self.k:
            raise InvalidMatrix(f"alignment {self.alignment} not in 1..{self.k}")

    def describe(self):
        return (
            f"RandomInstanceSpec(seed={self.seed}, k={self.k}, n={self.n}, "
            f"alignment={self.alignment}, field={self.field.name}, "
            f"ensure_invertible={self.ensure_invertible}, "
            f"diagonally_dominant={self.diagonally_dominant}, "
            f"zero_first_entry={self.zero_first_entry})"
        )


def sample_value(field, rng):
    """One random scalar from the generator distribution of ``field``."""
    if isinstance(field, PrimeField):
        return rng.randrange(field.modulus)
    if isinstance(field, RationalField):
        return gmpy2.mpq(rng.randint(-9, 9), rng.randint(1, 6))
    if isinstance(field, Float64Field):
        return rng.uniform(-1.0, 1.0)
    raise TypeError(f"no sampler for field {field!r}")


def _stencil(spec, rng):
    f, k = spec.field, spec.k
    values = [sample_value(f, rng) for _ in range(k)]
    while f.is_zero(f.convert(values[-1])):
        values[-1] = sample_value(f, rng)
    if spec.diagonally_dominant:
        if f.exact:
            raise ValueError("diagonal dominance only applies to float instances")
        off = sum(abs(v) for j, v in enumerate(values, 1) if j != spec.alignment)
        sign = -1.0 if values[spec.alignment - 1] < 0 else 1.0
        values[spec.alignment - 1] = sign * (off + 1.0)
    return [f.convert(v) for v in values]


def _attempts(spec, build, densify):
    rng = random.Random(spec.seed)
    for _ in range(MAX_ATTEMPTS):
        m = build(rng)
        if not spec.ensure_invertible or not spec.field.is_zero(dense_det(densify(m))):
            return m
    raise GenerationExhausted(f"no invertible instance in {MAX_ATTEMPTS} attempts: {spec.describe()}")


def gen_cm(spec):
    """Random k-CM for ``spec``."""
    return _attempts(
        spec,
        lambda rng: CirculantMatrix.from_values(spec.field, _stencil(spec, rng), spec.n, spec.alignment),
        cm_to_dense,
    )


def gen_cbm(spec):
    """Random k-CBM for ``spec``, each row drawn independently."""

    def build(rng):
        rows = [_stencil(spec, rng) for _ in range(spec.n)]
        if spec.zero_first_entry and spec.k >= 2:
            r = rng.randint(spec.k, spec.n)
            rows[r - 1][0] = spec.field.zero
        return CyclicBandedMatrix(spec.n, spec.k, spec.alignment, tuple(map(tuple, rows)), spec.field)

    return _attempts(spec, build, cbm_to_dense)

