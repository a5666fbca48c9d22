from __future__ import annotations

import pytest

from nilcomm.algebra import AlgebraTable, specialize
from nilcomm.catalog import sample_assignments
from nilcomm.cohomology import SymCocycle
from nilcomm.extension import NoAnnihilatorError, central_extend, round_trip, split_annihilator


def D(n, *forms):
    return SymCocycle.from_dict(n, *[{p: 1} for p in forms])


def test_extensions_reproduce_catalog(table):
    A = table("N3s_02")
    assert central_extend(A, D(3, (2, 2))) == table("N4s_08")
    assert central_extend(A, D(3, (1, 3))) == specialize(table("N4s_13"), {"lambda": 0})


def test_zero_cocycle_is_split(table):
    A = table("N3s_02")
    B = central_extend(A, SymCocycle(3, [[0] * 6]))
    assert B.dim == 4 and B == AlgebraTable(4, {(1, 1): {2: 1}, (1, 2): {3: 1}})


def test_dimension_mismatch(table):
    with pytest.raises(ValueError):
        central_extend(table("N3s_02"), D(2, (1, 1)))


def test_split_n3s_02(table):
    S = split_annihilator(table("N3s_02"))
    assert S.quotient == AlgebraTable(2, {(1, 1): {2: 1}})
    assert S.thetas == D(2, (1, 2))
    assert round_trip(table("N3s_02"))[0]


def test_split_n4s_08(table):
    S = split_annihilator(table("N4s_08"))
    assert S.quotient == AlgebraTable(2, {(1, 1): {2: 1}})
    assert S.thetas == D(2, (1, 2), (2, 2))
    assert S.reextend() == table("N4s_08")


def test_split_zero_algebra():
    S = split_annihilator(AlgebraTable(1))
    assert S.quotient.dim == 0 and S.thetas.s == 1


def test_no_annihilator():
    # not nilpotent, but it has a trivial annihilator
    with pytest.raises(NoAnnihilatorError):
        split_annihilator(AlgebraTable(1, {(1, 1): {1: 1}}))


def test_round_trip_whole_catalog(dim3, dim4, dim5):
    n = 0
    for e in dim3 + dim4 + dim5:
        A = e.table()
        for s in sample_assignments(A)[:1]:
            As = specialize(A, s) if s else A
            ok, _ = round_trip(As)
            assert ok, e.name
            n += 1
    assert n == len(dim3) + len(dim4) + len(dim5)


def test_cd_criterion_on_starred_bases(dim3, dim4):
    import random

    from nilcomm.algebra import check_identity
    from nilcomm.cohomology import cohomology, is_cd_class
    from nilcomm.scalar import mpq

    rng = random.Random(1)
    for e in dim3 + dim4:
        if "s_" not in e.name:
            continue
        A = e.table()
        s = sample_assignments(A)[0]
        A = specialize(A, s) if s else A
        Z = cohomology(A).z2d
        size = A.dim * (A.dim + 1) // 2
        for k in range(10):
            if k % 2:
                v = [sum((mpq(rng.randint(-2, 2)) * z[i] for z in Z.basis), mpq(0)) for i in range(size)]
            else:
                v = [mpq(rng.randint(-2, 2)) for _ in range(size)]
            th = SymCocycle(A.dim, [v])
            assert check_identity(central_extend(A, th), "cd").holds == is_cd_class(A, th), e.name
