from __future__ import annotations

import pytest

from nilcomm.tabledsl import (ParseError, load_catalog, parse, parse_catalog, parse_cocycle,
                              serialize, serialize_catalog)
from nilcomm.scalar import PolyRing

N3S_02 = "algebra N3s_02 dim 3\ne1*e1 = e2\ne1*e2 = e3\n"
N4S_13 = ("algebra N4s_13 dim 4\nparams lambda\ne1*e1=e2\ne1*e2=e3\ne1*e3=e4\n"
          "e2*e2 = lambda e4\n")


def test_parse_n3s_02(table):
    p = parse(N3S_02)
    assert p.name == "N3s_02" and p.dim == 3
    assert p.table() == table("N3s_02")


def test_zero_algebra():
    p = parse("algebra Z dim 2")
    assert p.equations == () and p.table().dim == 2


def test_parametric():
    p = parse(N4S_13)
    assert p.param_names == ("lambda",)
    lam = p.ring.gen("lambda")
    assert p.table().product(2, 2) == {4: lam}


@pytest.mark.parametrize("text", [N3S_02, N4S_13,
                                  "algebra P dim 3\nparams alpha (alpha != 0, alpha != 1)\n"
                                  "e1*e1 = e2\ne1*e2 = (alpha - 1) e3 + 3/4 e2\n"])
def test_round_trip(text):
    p = parse(text)
    assert parse(serialize(p)) == p


def test_constraints_survive_round_trip():
    p = parse("algebra P dim 2\nparams lambda (lambda != 1)\ne1*e1 = lambda e2\n")
    q = parse(serialize(p))
    assert q.constraints == p.constraints and len(q.constraints) == 1


def test_canonical_order():
    p = parse("algebra S dim 3\ne2*e1 = e3\ne1*e1 = e2\n")
    out = serialize(p)
    assert "e1*e2 = e3" in out and "e2*e1" not in out
    assert out.index("e1*e1") < out.index("e1*e2")


@pytest.mark.parametrize("text,line,col,frag", [
    ("algebra X dim 2\ne1*e3 = e2", 2, 4, "out of range"),
    ("algebra X dim 2\ne1*e1 = e3", 2, 9, "out of range"),
    ("algebra X dim 2\ne1*e1 = e2\ne1*e1 = e2", 3, 1, "duplicate product"),
    ("algebra X dim 2\ne1*e1 = a e2", 2, 9, "unknown parameter"),
    ("algebra X dim 2\n  e1*e1 = 3/ e2", 2, 14, "coefficient"),
    ("algebra X dim 2\ne1*e1 = i e2", 2, 9, "zeta(4)"),
    ("algebra X dim 2\nparams 3a\ne1*e1 = e2", 2, 8, "parameter name"),
    ("algebra X dim 2\ne1*e1 = e2\nexpect\n  witness [1, 0; 0, q] maps D11 to D11", 4, 21,
     "unknown variable"),
    ("algebra X dim 2\ne1*e1 = e2\nexpect\n  cd maybe", 4, 6, "true or false"),
])
def test_errors_carry_position(text, line, col, frag):
    with pytest.raises(ParseError) as ei:
        parse(text)
    assert ei.value.line == line and ei.value.col == col
    assert frag in str(ei.value)


def test_catalog_counts(dim3, tmp_path):
    assert [e.name for e in dim3] == ["N3s_01", "N3s_02", "N3s_03", "N3s_04"]
    f = tmp_path / "empty.nil"
    f.write_text("")
    assert load_catalog(f) == []


def test_duplicate_names():
    with pytest.raises(ParseError, match="duplicate entry name 'N_12'"):
        parse_catalog("algebra N_12 dim 1\n\nalgebra N_12 dim 1\n")


def test_shipped_round_trip(dim3, dim4, dim5):
    for entries in (dim3, dim4, dim5):
        for e in entries:
            assert parse(serialize(e.presentation)) == e.presentation
        again = parse_catalog(serialize_catalog(entries))
        assert [x.presentation for x in again] == [e.presentation for e in entries]


def test_cocycle_literals():
    (v,) = parse_cocycle("D13 + 2 D22", 3)
    assert list(v) == [0, 0, 1, 2, 0, 0]
    a, b = parse_cocycle("D11; -D23", 3)
    assert a[0] == 1 and b[4] == -1
    (w,) = parse_cocycle("eta(3) D12", 2)
    assert w[1] == PolyRing((), 6).field.eta(3)
