"""Scaling benchmarks with exact operation counters.

Wall time is machine dependent; the counter columns are deterministic
and are what the scaling checks rely on.
"""

from __future__ import annotations

import csv
import random
import time
from dataclasses import dataclass

from .banded import CyclicBandedMatrix, cbm_det, cbm_inverse
from .circulant import CirculantMatrix, cm_det, cm_inverse, needs_dense_fallback
from .errors import GenerationExhausted
from .instrument import counting
from .instances import MAX_ATTEMPTS, sample_value

CSV_HEADER = ("op", "k", "n", "field", "ns", "block_muls", "entry_ops", "fallback")


@dataclass(frozen=True)
class BenchRecord:
    op: str
    k: int
    n: int
    field: str
    ns: int
    block_muls: int
    entry_ops: int
    fallback: bool

    def row(self):
        return [self.op, self.k, self.n, self.field, self.ns, self.block_muls, self.entry_ops,
                "true" if self.fallback else "false"]


def _stencil(field, k, rng):
    """Stencil with x_k on the diagonal; for floats x_k dominates so products stay finite.

    Entries are resampled until nonzero so that no instance is pushed onto
    the dense fallback by a zero x_1.
    """
    values = []
    while len(values) < k:
        v = field.convert(sample_value(field, rng))
        if not field.is_zero(v):
            values.append(v)
    if not field.exact:
        values[-1] = sum(abs(v) for v in values[:-1]) + 1.0
    return values


def _instance(op, field, k, n, rng):
    if op == "inv-kcbm":
        rows = tuple(tuple(_stencil(field, k, rng)) for _ in range(n))
        return CyclicBandedMatrix(n, k, k, rows, field)
    return CirculantMatrix.from_values(field, _stencil(field, k, rng), n, k)


def _run_det_kcm(m):
    cm_det(m)
    return needs_dense_fallback(m.n, m.k)


def _run_inv_kcm(m):
    return cm_inverse(m).fallback


def _run_inv_kcbm(m):
    return cbm_inverse(m).fallback


OPS = {"det-kcm": _run_det_kcm, "inv-kcm": _run_inv_kcm, "inv-kcbm": _run_inv_kcbm}


def _invertible_instance(op, field, k, n, rng):
    # Invertibility is decided by the fast determinant; the dense oracle
    # would dominate the benchmark at large n.
    det = cbm_det if op == "inv-kcbm" else cm_det
    for _ in range(MAX_ATTEMPTS):
        m = _instance(op, field, k, n, rng)
        if op == "det-kcm" or not field.is_zero(det(m)):
            return m
    raise GenerationExhausted(f"no invertible {op} instance for k={k}, n={n}")


def bench_one(op, field, k, n, seed=0, repeat=3):
    """Time ``op`` on one seeded instance; returns a :class:`BenchRecord`."""
    if op not in OPS:
        raise ValueError(f"unknown op {op!r}; expected one of {', '.join(OPS)}")
    rng = random.Random(f"{seed}:{op}:{k}:{n}:{field.name}")
    m = _invertible_instance(op, field, k, n, rng)
    run = OPS[op]
    best = None
    for _ in range(max(1, repeat)):
        with counting() as counts:
            start = time.perf_counter_ns()
            fallback = run(m)
            elapsed = time.perf_counter_ns() - start
        best = elapsed if best is None else min(best, elapsed)
    return BenchRecord(op, k, n, field.name, best, counts.block_muls, counts.entry_ops, fallback)


def run_bench(op, field, k, n_list, seed=0, repeat=3):
    n_list = list(n_list)
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ValueError("n values must be strictly ascending")
    return [bench_one(op, field, k, n, seed, repeat) for n in n_list]


def write_csv(records, stream):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for rec in records:
        writer.writerow(rec.row())
