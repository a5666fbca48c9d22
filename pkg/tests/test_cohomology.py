from __future__ import annotations

import random

import pytest

from nilcomm.algebra import AlgebraTable, check_identity, powers, specialize
from nilcomm.catalog import sample_assignments
from nilcomm.cohomology import (SymCocycle, ann_of_cocycle, cd_cocycle_space, class_coords,
                                coboundary_space, delta_index, delta_pairs, format_form, h2_dims,
                                is_cd_class, square_dim, ts_check)
from nilcomm.linalg import RequiresSpecializationError, Subspace
from nilcomm.scalar import mpq


def D(n, *pairs):
    return SymCocycle.from_dict(n, *[{p: 1} for p in pairs])


def span_forms(n, *pairs):
    size = n * (n + 1) // 2
    return Subspace(size, [tuple(mpq(1) if t == delta_index(i, j, n) else mpq(0)
                                 for t in range(size)) for i, j in pairs])


def test_delta_order():
    assert delta_pairs(3) == ((1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3))
    assert format_form(span_forms(3, (1, 3)).basis[0], 3) == "D13"


def test_coboundaries(table):
    assert coboundary_space(table("N3s_02")) == span_forms(3, (1, 1), (1, 2))
    assert coboundary_space(AlgebraTable(2)).dim == 0
    assert coboundary_space(table("N4s_04")) == span_forms(4, (1, 1), (2, 2))


def test_cd_cocycles(table):
    assert cd_cocycle_space(table("N3s_01")) == Subspace.full(6)
    assert cd_cocycle_space(table("N3s_02")).dim == 4
    assert cd_cocycle_space(table("N3s_04")).dim == 3


@pytest.mark.parametrize("name,dims", [("N3s_02", (4, 2)), ("N4s_02", (8, 5)), ("N3s_04", (4, 1)),
                                       ("N4s_04", (8, 4))])
def test_h2_dims(table, name, dims):
    assert h2_dims(table(name)) == dims


def test_parametric_refused(table):
    with pytest.raises(RequiresSpecializationError):
        h2_dims(table("N4s_13"))


def test_class_coords(table):
    A = table("N3s_02")
    assert not any(class_coords(A, D(3, (1, 1)))[0])
    assert any(class_coords(A, D(3, (1, 3)))[0])
    assert not any(class_coords(A, SymCocycle(3, [[0] * 6]))[0])


def test_ann_of_cocycle(table):
    A = table("N3s_02")
    e = lambda i: tuple(mpq(1) if k == i else mpq(0) for k in (1, 2, 3))
    assert ann_of_cocycle(A, D(3, (1, 3))) == Subspace(3, [e(2)])
    assert ann_of_cocycle(A, D(3, (2, 2))) == Subspace(3, [e(1), e(3)])
    assert ann_of_cocycle(A, SymCocycle(3, [[0] * 6])) == Subspace.full(3)


def test_ts_check(table):
    A = table("N3s_02")
    assert ts_check(A, [D(3, (1, 3)), D(3, (2, 2))], 2)
    r = ts_check(A, [D(3, (1, 1))], 1)
    assert not r and len(r.reasons) == 2
    assert not ts_check(A, [], 0)


def test_is_cd_class(table):
    A = table("N3s_02")
    assert is_cd_class(A, D(3, (2, 2)))
    assert not is_cd_class(A, D(3, (3, 3)))
    for b in coboundary_space(A).basis:
        assert is_cd_class(A, SymCocycle(3, [b]))


def _numeric(entries):
    for entry in entries:
        A = entry.table()
        for s in sample_assignments(A):
            yield specialize(A, s) if s else A


def test_cocycle_chain_on_catalog(dim3, dim4):
    for A in _numeric(dim3 + dim4):
        B, Z = coboundary_space(A), cd_cocycle_space(A)
        # delta f is a CD cocycle iff f kills every CD defect of A
        assert B.is_subspace_of(Z) == check_identity(A, "cd").holds
        P, _ = powers(A)
        assert B.dim == P[1].dim == square_dim(A)


def test_class_coords_linear(table):
    rng = random.Random(3)
    A = table("N4s_08")
    for _ in range(30):
        u = [mpq(rng.randint(-3, 3)) for _ in range(10)]
        v = [mpq(rng.randint(-3, 3)) for _ in range(10)]
        a, b = mpq(rng.randint(-3, 3)), mpq(rng.randint(-3, 3))
        w = [a * x + b * y for x, y in zip(u, v)]
        cu, cv, cw = (class_coords(A, SymCocycle(4, [z]))[0] for z in (u, v, w))
        assert list(cw) == [a * x + b * y for x, y in zip(cu, cv)]
