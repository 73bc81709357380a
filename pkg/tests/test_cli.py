import csv
import io
import json
import subprocess
import sys

import gmpy2
import pytest

from ringband import cli, selftest
from ringband.banded import cbm_to_dense
from ringband.circulant import cm_to_dense
from ringband.fields import RationalField
from ringband.io import loads_matrix
from ringband.smallmat import DenseMatrix, mat_mul


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(path)


def kcm(stencil, n, alignment=2, field="rational"):
    return {"field": field, "type": "kcm", "n": n, "k": len(stencil), "alignment": alignment, "stencil": stencil}


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_det_examples(tmp_path, capsys):
    code, out, _ = run(["det", write(tmp_path, "a.json", kcm([2], 3, 1))], capsys)
    assert code == 0 and json.loads(out) == {"det": "8/1", "fallback": False}
    code, out, _ = run(["det", write(tmp_path, "b.json", kcm([1, 3, 1], 4))], capsys)
    assert code == 0 and json.loads(out)["det"] == "45/1"


def test_det_output_file_and_fallback(tmp_path, capsys):
    target = tmp_path / "out.json"
    src = write(tmp_path, "a.json", kcm([1, 2, 3, 4, 5], 6, 3, {"zp": 7}))
    code, out, _ = run(["det", src, "--output", str(target)], capsys)
    assert code == 0 and out == ""
    result = json.loads(target.read_text())
    assert result["fallback"] is True and isinstance(result["det"], int)


def test_det_errors(tmp_path, capsys):
    code, _, err = run(["det", write(tmp_path, "m.json", '{"field": "rational", "type"')], capsys)
    assert code == 1 and "$" in err
    code, _, err = run(["det", write(tmp_path, "s.json", {**kcm([1, 3, 1], 4), "n": -1})], capsys)
    assert code == 1 and "$.n" in err
    code, _, err = run(["det", write(tmp_path, "p.json", kcm([1, 3, 1], 4, 2, {"zp": 9}))], capsys)
    assert code == 2 and "not prime" in err
    code, _, _ = run(["det", str(tmp_path / "missing.json")], capsys)
    assert code == 1


def test_det_float_overflow_exit_code(tmp_path, capsys):
    code, _, err = run(["det", write(tmp_path, "f.json", kcm([10.0, 0.5, 1.0], 4096, 3, "f64"))], capsys)
    assert code == 2 and "exact field" in err


def test_inv_examples(tmp_path, capsys):
    src = write(tmp_path, "a.json", kcm([1, 3, 1], 4))
    code, out, _ = run(["inv", src, "--format", "vector"], capsys)
    assert code == 0 and json.loads(out)["inverse"] == ["7/15", "-1/5", "2/15", "-1/5"]
    code, _, err = run(["inv", write(tmp_path, "s.json", kcm([1, 1], 4))], capsys)
    assert code == 3 and "matrix is singular (det = 0)" in err
    band = {"field": "rational", "type": "kcbm", "n": 3, "k": 2, "alignment": 2, "rows": [[1, 2]] * 3}
    code, _, _ = run(["inv", write(tmp_path, "b.json", band), "--format", "vector"], capsys)
    assert code == 1


@pytest.mark.parametrize(
    "doc",
    [
        kcm(["1/2", 3, -1, "2/3"], 9, 3),
        {"field": "rational", "type": "kcbm", "n": 7, "k": 3, "alignment": 1,
         "rows": [[r, "1/3", r + 2] for r in range(7)]},
        {"field": {"zp": 998244353}, "type": "kcbm", "n": 8, "k": 4, "alignment": 4,
         "rows": [[r * 7 % 11, 3, r, 5] for r in range(8)]},
    ],
)
def test_inv_round_trip_is_identity(tmp_path, capsys, doc):
    src = write(tmp_path, "a.json", doc)
    code, out, _ = run(["inv", src], capsys)
    assert code == 0
    m = loads_matrix(json.dumps(doc))
    f = m.field
    inv = DenseMatrix.from_rows(f, [[gmpy2.mpq(v) if f == RationalField() else v for v in row]
                                    for row in json.loads(out)["inverse"]])
    a = cm_to_dense(m) if doc["type"] == "kcm" else cbm_to_dense(m)
    assert mat_mul(a, inv) == DenseMatrix.identity(f, m.n)


def test_deterministic_output(tmp_path, capsys):
    src = write(tmp_path, "a.json", kcm(["1/2", 3, -1, "2/3"], 9, 3))
    first = run(["inv", src], capsys)
    assert run(["inv", src], capsys) == first
    a = run(["selftest", "--cases", "12", "--seed", "5"], capsys)
    assert run(["selftest", "--cases", "12", "--seed", "5"], capsys) == a


def test_selftest(capsys, monkeypatch):
    code, out, _ = run(["selftest", "--cases", "0"], capsys)
    assert code == 0 and "total: 0 cases" in out
    code, out, _ = run(["selftest", "--cases", "30", "--max-k", "4", "--max-n", "12"], capsys)
    assert code == 0 and "pass=" in out and "fail=0" in out
    monkeypatch.setenv("RINGBAND_SEED", "99")
    code, out, _ = run(["selftest", "--cases", "3"], capsys)
    assert code == 0 and out.startswith("seed=99")
    code, _, _ = run(["selftest", "--cases", "3", "--field", "zp:10"], capsys)
    assert code == 2


def test_selftest_detects_a_corrupted_build(capsys, monkeypatch):
    import ringband.circulant as circulant

    real = circulant.cm_inv_extend

    def corrupted(m, seed):
        inv = real(m, seed)
        y = list(inv.first_column)
        y[-1] = m.field.add(y[-1], m.field.one)
        return circulant.CirculantInverse(inv.n, tuple(y), inv.field)

    # Patch the recurrence but drop its self-check so the wrong column escapes to the oracle comparison.
    monkeypatch.setattr(circulant, "cm_inv_extend", corrupted)
    code, out, _ = run(["selftest", "--cases", "40"], capsys)
    assert code == 4
    assert "RandomInstanceSpec(seed=" in out


def test_bench_csv(tmp_path, capsys):
    out_path = tmp_path / "b.csv"
    code, _, _ = run(["bench", "--op", "inv-kcm", "--k", "3", "--n-list", "16,32", "--out", str(out_path),
                      "--repeat", "1"], capsys)
    assert code == 0
    raw = out_path.read_bytes()
    assert raw.startswith(b"op,k,n,field,ns,block_muls,entry_ops,fallback\n")
    assert b"\r" not in raw and not raw.startswith(b"\xef\xbb\xbf")
    assert all(not line.endswith(b",") for line in raw.splitlines())
    rows = list(csv.DictReader(io.StringIO(raw.decode())))
    assert [int(r["entry_ops"]) for r in rows] == [3 * 14, 3 * 30]
    assert {r["fallback"] for r in rows} == {"false"}


def test_bench_errors(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["bench", "--op", "det-xyz", "--k", "3", "--n-list", "16"])
    assert info.value.code == 1
    code, _, err = run(["bench", "--op", "det-kcm", "--k", "3", "--n-list", "32,16"], capsys)
    assert code == 1 and "ascending" in err
    code, _, _ = run(["bench", "--op", "det-kcm", "--k", "3", "--n-list", "16", "--field", "zp:4"], capsys)
    assert code == 2


def test_module_entry_point(tmp_path):
    src = write(tmp_path, "a.json", kcm([1, 3, 1], 4))
    proc = subprocess.run([sys.executable, "-m", "ringband", "det", src], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["det"] == "45/1"


def test_default_seed(monkeypatch):
    monkeypatch.delenv("RINGBAND_SEED", raising=False)
    assert selftest.default_seed() == selftest.DEFAULT_SEED
    monkeypatch.setenv("RINGBAND_SEED", "0x10")
    assert selftest.default_seed() == 16
