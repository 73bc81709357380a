"""Randomized equivalence suite: every fast path against the dense oracle."""

from __future__ import annotations

import os
import random
from collections import Counter
from dataclasses import dataclass, field as dc_field

from .circulant import needs_dense_fallback
from .errors import RingbandError, SingularMatrix
from .fields import PrimeField, RationalField, parse_field
from .instances import RandomInstanceSpec, gen_cbm, gen_cm
from .instrument import OpCounts, counting
from .oracle import dense_det, dense_inverse
from .structured import det_uses_fallback, determinant, inverse, to_dense

SEED_ENV = "RINGBAND_SEED"
DEFAULT_SEED = 20240601
DEFAULT_FIELDS = ("rational", "zp:998244353", "zp:7")


def default_seed():
    """Seed from ``$RINGBAND_SEED`` when set, else a fixed constant."""
    raw = os.environ.get(SEED_ENV)
    return DEFAULT_SEED if raw in (None, "") else int(raw, 0)


@dataclass(frozen=True)
class Failure:
    kind: str
    spec: RandomInstanceSpec
    reason: str

    def __str__(self):
        return f"FAIL {self.kind} {self.spec.describe()}: {self.reason}"


@dataclass
class SelftestReport:
    passed: Counter = dc_field(default_factory=Counter)  # keyed by (k, n, field name)
    failed: Counter = dc_field(default_factory=Counter)
    failures: list = dc_field(default_factory=list)
    counts: OpCounts = dc_field(default_factory=OpCounts)

    @property
    def ok(self):
        return not self.failures

    @property
    def total(self):
        return sum(self.passed.values()) + sum(self.failed.values())

    def lines(self):
        keys = sorted(set(self.passed) | set(self.failed), key=lambda t: (t[0], t[1], t[2]))
        out = [f"k={k} n={n} field={f}: pass={self.passed[k, n, f]} fail={self.failed[k, n, f]}" for k, n, f in keys]
        out.extend(str(fl) for fl in self.failures)
        out.append(f"total: {self.total} cases, {len(self.failures)} failed")
        return out


def _value_type_ok(f, values):
    if isinstance(f, PrimeField):
        return all(type(v) is int and 0 <= v < f.modulus for v in values)
    if isinstance(f, RationalField):
        return all(type(v) is type(f.zero) for v in values)
    return all(isinstance(v, float) for v in values)


def _has_zero_x1(m):
    return any(m.field.is_zero(row[0]) for row in m.rows[m.k - 1 :])


def check_case(kind, spec):
    """Return ``None`` if the instance passes every comparison, else a reason string."""
    m = gen_cm(spec) if kind == "kcm" else gen_cbm(spec)
    f = m.field
    dense = to_dense(m)
    want_det = dense_det(dense)
    got_det = determinant(m)
    if not f.eq(got_det, want_det):
        return f"det {got_det} != oracle {want_det}"
    if f.exact and not _value_type_ok(f, [got_det]):
        return f"det has type {type(got_det).__name__}"
    if f.is_zero(want_det):
        try:
            inverse(m)
        except SingularMatrix:
            return None
        return "singular matrix was inverted"
    want = dense_inverse(dense)
    got = inverse(m)
    got_dense = got.to_dense()
    bad = [
        (r, c)
        for r in range(m.n)
        for c in range(m.n)
        if not f.eq(got_dense.data[r][c], want.data[r][c])
    ]
    if bad:
        r, c = bad[0]
        return f"{len(bad)} inverse entries differ, first at ({r}, {c})"
    if f.exact and not _value_type_ok(f, got_dense.entries):
        return "inverse entries have the wrong scalar type"
    expected = needs_dense_fallback(m.n, m.k)
    if kind == "kcbm" and f.exact and m.k >= 2 and _has_zero_x1(m):
        expected = True
    if got.fallback != expected:
        return f"fallback flag {got.fallback}, expected {expected}"
    if det_uses_fallback(m) != needs_dense_fallback(m.n, m.k):
        return "det fallback flag inconsistent"
    return None


def iter_cases(max_k=5, max_n=24, cases=200, seed=None, fields=DEFAULT_FIELDS):
    """Yield ``(kind, spec)`` pairs; fields rotate round-robin."""
    if seed is None:
        seed = default_seed()
    parsed = [parse_field(fl) if isinstance(fl, str) else fl for fl in fields]
    if cases and not parsed:
        raise ValueError("at least one field is required")
    if max_k < 1 or max_n < 1:
        raise ValueError("max_k and max_n must be positive")
    rng = random.Random(seed)
    for c in range(cases):
        f = parsed[c % len(parsed)]
        kind = "kcm" if rng.random() < 0.5 else "kcbm"
        k = rng.randint(1, min(max_k, max_n))
        n = rng.randint(k, max(k, max_n))
        if f.exact:
            alignment = rng.randint(1, k)
            dominant = False
        else:
            alignment, dominant = k, True
        zero_first = kind == "kcbm" and f.exact and rng.random() < 0.2
        yield kind, RandomInstanceSpec(
            seed=rng.getrandbits(64),
            k=k,
            n=n,
            alignment=alignment,
            field=f,
            diagonally_dominant=dominant,
            zero_first_entry=zero_first,
        )


def run_selftest(max_k=5, max_n=24, cases=200, seed=None, fields=DEFAULT_FIELDS, checker=check_case):
    report = SelftestReport()
    with counting() as counts:
        for kind, spec in iter_cases(max_k, max_n, cases, seed, fields):
            try:
                reason = checker(kind, spec)
            except (RingbandError, ArithmeticError) as exc:
                reason = f"{type(exc).__name__}: {exc}"
            key = (spec.k, spec.n, spec.field.name)
            if reason is None:
                report.passed[key] += 1
            else:
                report.failed[key] += 1
                report.failures.append(Failure(kind, spec, reason))
    report.counts = counts
    return report

