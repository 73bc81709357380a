import json

import gmpy2
import pytest

from ringband.banded import CyclicBandedMatrix
from ringband.circulant import CirculantMatrix, cm_inverse
from ringband.errors import FieldError, InvalidMatrix, SchemaError
from ringband.fields import Float64Field, PrimeField, RationalField
from ringband.io import dump_matrix, inverse_document, loads_matrix, matrix_from_document

BASE = {"field": "rational", "type": "kcm", "n": 4, "k": 3, "alignment": 2, "stencil": [1, "3", "1/1"]}


def doc(**kw):
    d = dict(BASE)
    d.update(kw)
    return {k: v for k, v in d.items() if v is not None}


def test_parses_kcm_and_kcbm():
    m = matrix_from_document(doc())
    assert isinstance(m, CirculantMatrix) and m.stencil.values == (1, 3, 1)
    b = matrix_from_document(doc(type="kcbm", stencil=None, n=3, k=2, rows=[[1, 2], ["1/2", 3], [0, 1]]))
    assert isinstance(b, CyclicBandedMatrix) and b.rows[1][0] == gmpy2.mpq(1, 2)


@pytest.mark.parametrize(
    "bad,path",
    [
        (doc(type="kcx"), "$.type"),
        (doc(n="4"), "$.n"),
        (doc(stencil=[1, 3]), "$.stencil"),
        (doc(stencil=[1, [3], 1]), "$.stencil[1]"),
        (doc(stencil=[1, 3, 1.5]), "$.stencil[2]"),
        (doc(field={"zp": 7}, stencil=[1, "3", 1]), "$.stencil[1]"),
        (doc(field="f64", stencil=[1, "3", 1]), "$.stencil[1]"),
        (doc(stencil=[1, True, 1]), "$.stencil[1]"),
        (doc(alignment=4), "$.alignment"),
        (doc(k=5), "$.k"),
        (doc(extra=1), "$"),
        (doc(stencil=None), "$"),
        (doc(type="kcbm", rows=[[1, 1]] * 4), "$"),
        (doc(type="kcbm", stencil=None, rows=[[1, 1, 1]] * 3), "$.rows"),
        (doc(type="kcbm", stencil=None, rows=[[1, 1, 1]] * 3 + [[1, 1]]), "$.rows[3]"),
        (doc(field={"zp": "7"}), "$.field.zp"),
    ],
)
def test_schema_errors_name_the_path(bad, path):
    with pytest.raises(SchemaError) as info:
        matrix_from_document(bad)
    assert info.value.path == path
    assert str(info.value).startswith(path)


def test_value_errors():
    with pytest.raises(FieldError):
        matrix_from_document(doc(field={"zp": 8}, stencil=[1, 3, 1]))
    with pytest.raises(FieldError):
        matrix_from_document(doc(stencil=[1, "3/0", 1]))
    with pytest.raises(InvalidMatrix):
        matrix_from_document(doc(stencil=[1, 3, 0]))


def test_malformed_json():
    with pytest.raises(SchemaError) as info:
        loads_matrix('{"field": ')
    assert info.value.path == "$"


@pytest.mark.parametrize("field", [RationalField(), PrimeField(7), Float64Field()])
def test_dump_round_trip(field):
    m = CirculantMatrix.from_values(field, [1, 2, 3], 5, 3)
    assert loads_matrix(json.dumps(dump_matrix(m))) == m
    b = CyclicBandedMatrix.from_circulant(m)
    assert loads_matrix(json.dumps(dump_matrix(b))) == b


def test_inverse_document():
    inv = cm_inverse(CirculantMatrix.from_values(RationalField(), [1, 3, 1], 4, 2))
    out = inverse_document(RationalField(), inv, "vector")
    assert out == {"format": "vector", "inverse": ["7/15", "-1/5", "2/15", "-1/5"], "fallback": False}
    full = inverse_document(RationalField(), inv)
    assert full["inverse"][1] == ["-1/5", "7/15", "-1/5", "2/15"]
    with pytest.raises(ValueError):
        inverse_document(RationalField(), inv, "sparse")
