import io

import pytest

from ringband.bench import CSV_HEADER, bench_one, run_bench, write_csv
from ringband.fields import Float64Field, PrimeField, RationalField

ZP = PrimeField()


def counters(records):
    return [(r.op, r.k, r.n, r.block_muls, r.entry_ops, r.fallback) for r in records]


def test_counters_are_deterministic():
    for op in ("det-kcm", "inv-kcm", "inv-kcbm"):
        a = run_bench(op, ZP, 4, [16, 32], repeat=1)
        b = run_bench(op, ZP, 4, [16, 32], repeat=2)
        assert counters(a) == counters(b)


def test_inverse_counters():
    (rec,) = run_bench("inv-kcm", ZP, 5, [500], repeat=1)
    assert rec.entry_ops == 5 * (500 - 5 + 1)
    (rec,) = run_bench("inv-kcbm", RationalField(), 4, [40], repeat=1)
    assert 4 * 40**2 <= rec.entry_ops <= 4 * 40**2 + 8 * 4 * 40
    (rec,) = run_bench("inv-kcbm", Float64Field(), 4, [40], repeat=1)
    assert not rec.fallback


def test_small_orders_report_fallback():
    (rec,) = run_bench("inv-kcm", ZP, 5, [6], repeat=1)
    assert rec.fallback
    (rec,) = run_bench("det-kcm", ZP, 5, [6], repeat=1)
    assert rec.fallback


def test_csv_layout():
    buf = io.StringIO()
    write_csv(run_bench("det-kcm", ZP, 3, [8], repeat=1), buf)
    lines = buf.getvalue().split("\n")
    assert lines[0] == ",".join(CSV_HEADER)
    assert lines[1].startswith("det-kcm,3,8,zp:998244353,") and lines[1].endswith(",false")
    assert lines[2] == ""


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        bench_one("inv-xyz", ZP, 3, 8)
    with pytest.raises(ValueError):
        run_bench("det-kcm", ZP, 3, [16, 16])
