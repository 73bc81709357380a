"""Scalar fields.

Values are plain Python objects: ``float`` for :class:`Float64Field`,
``gmpy2.mpq`` for :class:`RationalField` and ``int`` residues in ``[0, p)``
for :class:`PrimeField`.  A field instance doubles as the descriptor that
tells every matrix how to interpret its entries; field instances are
immutable and compare by value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Integral
from operator import mul

import gmpy2

from .errors import DivisionByZero, FieldError, NumericOverflow
from .instrument import tally

DEFAULT_ATOL = 1e-12
DEFAULT_RTOL = 1e-9

# Deterministic for every n < 3.3e24, far beyond the 2**62 modulus cap.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
MAX_MODULUS = 1 << 62


def is_prime(n):
    """Deterministic Miller-Rabin primality test."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Field:
    """Common interface; subclasses supply the arithmetic."""

    kind: str = ""
    exact: bool = True

    @property
    def name(self):
        return self.kind

    def to_json(self):
        return self.kind

    def convert(self, value):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, m):
        """``a ** m`` by binary exponentiation; ``pow(0, 0) == 1``."""
        if m < 0:
            raise ValueError("negative exponent")
        result = self.one
        base = a
        while m:
            if m & 1:
                result = self.mul(result, base)
            m >>= 1
            if m:
                base = self.mul(base, base)
        return result

    def is_zero(self, a):
        return a == 0

    def eq(self, a, b):
        return a == b

    def normalize(self, a):
        return self.convert(a)

    def sign(self, exponent):
        """``(-1) ** exponent`` as a field element."""
        return self.neg(self.one) if exponent % 2 else self.one

    def satisfies(self, coeffs, values, target):
        """Whether ``sum(coeffs * values) == target`` (to tolerance for floats)."""
        return self.dot(coeffs, values) == target

    def satisfies_unit(self, coeffs, vectors, unit_index):
        """Whether the entrywise combination of ``vectors`` is the unit vector e_unit_index."""
        lhs = self.combine(coeffs, vectors)
        one, zero = self.one, self.zero
        return all(v == (one if i == unit_index else zero) for i, v in enumerate(lhs))

    def check_finite(self, values, where):
        """Raise :class:`NumericOverflow` on non-finite values (floats only)."""

    def format(self, a):
        """JSON-ready representation of ``a``."""
        raise NotImplementedError

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Float64Field(Field):
    """IEEE double precision.  ``eq`` is tolerance based."""

    atol: float = field(default=DEFAULT_ATOL, compare=False)
    rtol: float = field(default=DEFAULT_RTOL, compare=False)

    kind = "f64"
    exact = False
    zero = 0.0
    one = 1.0

    def convert(self, value):
        if isinstance(value, bool):
            raise FieldError(f"not a float64 value: {value!r}")
        if isinstance(value, (int, float, Fraction)) or type(value).__name__ == "mpq":
            return float(value)
        if isinstance(value, str):
            try:
                return float(value)
            except ValueError:
                pass
        raise FieldError(f"not a float64 value: {value!r}")

    def add(self, a, b):
        tally("float_ops")
        return a + b

    def sub(self, a, b):
        tally("float_ops")
        return a - b

    def neg(self, a):
        tally("float_ops")
        return -a

    def mul(self, a, b):
        tally("float_ops")
        return a * b

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of 0.0")
        tally("float_ops")
        return 1.0 / a

    def div(self, a, b):
        if b == 0:
            raise DivisionByZero("division by 0.0")
        tally("float_ops")
        return a / b

    def pow(self, a, m):
        if m < 0:
            raise ValueError("negative exponent")
        tally("float_ops", max(1, m.bit_length()))
        try:
            return float(a) ** m
        except OverflowError:
            return math.copysign(math.inf, a) if m % 2 else math.inf

    def dot(self, a, b):
        tally("float_ops", 2 * len(a))
        if not a:
            return 0.0
        try:
            return math.fsum(map(mul, a, b))
        except (OverflowError, ValueError):  # inf - inf or an overflowing partial sum
            return math.nan

    def combine(self, coeffs, vectors):
        """Entrywise ``sum(c * v for c, v in zip(coeffs, vectors))``."""
        if not vectors:
            raise ValueError("combine needs at least one vector")
        tally("float_ops", 2 * len(coeffs) * len(vectors[0]))
        return [sum(map(mul, coeffs, vals)) for vals in zip(*vectors)]

    def axpy(self, alpha, x, y):
        """Entrywise ``y + alpha * x``."""
        tally("float_ops", 2 * len(x))
        return [yi + alpha * xi for xi, yi in zip(x, y)]

    def eq(self, a, b):
        return abs(a - b) <= self.atol + self.rtol * abs(b)

    def satisfies(self, coeffs, values, target):
        lhs = self.dot(coeffs, values)
        scale = max(math.fsum(abs(c * v) for c, v in zip(coeffs, values)), abs(target))
        return abs(lhs - target) <= self.atol + self.rtol * scale

    def satisfies_unit(self, coeffs, vectors, unit_index):
        lhs = self.combine(coeffs, vectors)
        scale = self.combine([abs(c) for c in coeffs], [[abs(v) for v in vec] for vec in vectors])
        for i, (v, s) in enumerate(zip(lhs, scale)):
            target = 1.0 if i == unit_index else 0.0
            if not abs(v - target) <= self.atol + self.rtol * max(s, abs(target)):
                return False
        return True

    def check_finite(self, values, where):
        for v in values:
            if not math.isfinite(v):
                raise NumericOverflow(where)

    def format(self, a):
        return float(a)


@dataclass(frozen=True)
class RationalField(Field):
    """Exact rationals backed by ``gmpy2.mpq`` (always in lowest terms)."""

    kind = "rational"
    exact = True
    zero = gmpy2.mpq(0)
    one = gmpy2.mpq(1)

    def convert(self, value):
        if isinstance(value, bool):
            raise FieldError(f"not a rational value: {value!r}")
        try:
            if isinstance(value, str):
                return gmpy2.mpq(value.strip())
            if isinstance(value, Fraction):
                return gmpy2.mpq(value.numerator, value.denominator)
            if isinstance(value, float) and not math.isfinite(value):
                raise FieldError(f"not a rational value: {value!r}")
            return gmpy2.mpq(value)
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise FieldError(f"not a rational value: {value!r}") from exc

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of 0")
        return 1 / a

    def div(self, a, b):
        if b == 0:
            raise DivisionByZero("division by 0")
        return a / b

    def pow(self, a, m):
        if m < 0:
            raise ValueError("negative exponent")
        return a**m

    def dot(self, a, b):
        return sum(map(mul, a, b), self.zero)

    def combine(self, coeffs, vectors):
        zero = self.zero
        return [sum(map(mul, coeffs, vals), zero) for vals in zip(*vectors)]

    def axpy(self, alpha, x, y):
        return [yi + alpha * xi for xi, yi in zip(x, y)]

    def format(self, a):
        return f"{a.numerator}/{a.denominator}"


@dataclass(frozen=True)
class PrimeField(Field):
    """Integers modulo a prime ``modulus < 2**62``."""

    modulus: int = 998244353

    kind = "zp"
    exact = True
    zero = 0
    one = 1

    def __post_init__(self):
        p = self.modulus
        if isinstance(p, bool) or not isinstance(p, Integral):
            raise FieldError(f"modulus must be an integer, got {p!r}")
        if not 2 <= p < MAX_MODULUS:
            raise FieldError(f"modulus {p} outside [2, 2**62)")
        if not is_prime(int(p)):
            raise FieldError(f"modulus {p} is not prime")

    @property
    def name(self):
        return f"zp:{self.modulus}"

    def to_json(self):
        return {"zp": self.modulus}

    def convert(self, value):
        p = self.modulus
        if isinstance(value, bool):
            raise FieldError(f"not a Z_{p} value: {value!r}")
        if isinstance(value, Integral):
            return int(value) % p
        if isinstance(value, str):
            try:
                return int(value.strip()) % p
            except ValueError as exc:
                raise FieldError(f"not a Z_{p} value: {value!r}") from exc
        if isinstance(value, Fraction) or type(value).__name__ == "mpq":
            den = int(value.denominator) % p
            if den == 0:
                raise DivisionByZero(f"denominator divisible by {p}")
            return int(value.numerator) * pow(den, -1, p) % p
        raise FieldError(f"not a Z_{p} value: {value!r}")

    def add(self, a, b):
        return (a + b) % self.modulus

    def sub(self, a, b):
        return (a - b) % self.modulus

    def neg(self, a):
        return -a % self.modulus

    def mul(self, a, b):
        return a * b % self.modulus

    def inv(self, a):
        # pow(a, -1, p) runs the extended Euclidean algorithm.
        if a % self.modulus == 0:
            raise DivisionByZero(f"inverse of 0 in Z_{self.modulus}")
        return pow(a, -1, self.modulus)

    def pow(self, a, m):
        if m < 0:
            raise ValueError("negative exponent")
        return pow(a, m, self.modulus)

    def dot(self, a, b):
        return sum(map(mul, a, b)) % self.modulus

    def combine(self, coeffs, vectors):
        p = self.modulus
        return [sum(map(mul, coeffs, vals)) % p for vals in zip(*vectors)]

    def axpy(self, alpha, x, y):
        p = self.modulus
        return [(yi + alpha * xi) % p for xi, yi in zip(x, y)]

    def format(self, a):
        return int(a)


def field_from_json(obj):
    """Build a field from its JSON form: ``"f64"``, ``"rational"`` or ``{"zp": p}``."""
    if obj == "f64":
        return Float64Field()
    if obj == "rational":
        return RationalField()
    if isinstance(obj, dict) and set(obj) == {"zp"}:
        return PrimeField(obj["zp"])
    raise FieldError(f"unknown field descriptor {obj!r}")


def parse_field(text):
    """Parse the command-line spelling ``f64``, ``rational`` or ``zp:<p>``."""
    text = text.strip().lower()
    if text in ("f64", "rational"):
        return field_from_json(text)
    if text.startswith("zp:"):
        try:
            p = int(text[3:])
        except ValueError as exc:
            raise FieldError(f"bad modulus in {text!r}") from exc
        return PrimeField(p)
    raise FieldError(f"unknown field {text!r}; expected f64, rational or zp:<prime>")
