from __future__ import annotations

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from nilcomm.cohomology import SymCocycle, ann_of_cocycle, coboundary_space, delta_index
from nilcomm.linalg import (AmbientMismatchError, RequiresSpecializationError, Subspace,
                            identity, inverse, kernel, mat_mul, quotient_coords, rref,
                            subspace_ops)
from nilcomm.scalar import PolyRing, mpq


def q(rows):
    return [[mpq(x) for x in r] for r in rows]


def e(n, *idx):
    return tuple(mpq(1) if i + 1 in idx else mpq(0) for i in range(n))


def test_rref_identity():
    R, rank = rref(identity(3))
    assert rank == 3
    assert [list(r) for r in R] == identity(3)


def test_rref_rank_one():
    R, rank = rref(q([[1, 2], [2, 4]]))
    assert rank == 1
    assert [list(r) for r in R] == q([[1, 2], [0, 0]])


def test_coboundary_matrix_rank(table):
    # rows: delta(f) for f = e1*, e2*, e3*; columns Delta11..Delta33
    A = table("N3s_02")
    rows = []
    for k in range(3):
        rows.append([A.mt[i - 1][j - 1].get(k, 0) for i in range(1, 4) for j in range(i, 4)])
    cols = list(map(list, zip(*rows)))  # the 6x3 matrix
    assert rref(cols, 3)[1] == 2


def test_kernel_trivial_cases():
    assert kernel(identity(3), 3).dim == 0
    assert kernel(q([[0, 0, 0], [0, 0, 0]]), 3) == Subspace.full(3)


def test_kernel_of_gram_delta13(table):
    A = table("N3s_02")
    assert ann_of_cocycle(A, SymCocycle.from_dict(3, {(1, 3): 1})) == Subspace(3, [e(3, 2)])


def test_parametric_rank_refused():
    L = PolyRing(("lambda",))
    with pytest.raises(RequiresSpecializationError):
        rref([[L.gen("lambda"), L.one()]])


def test_subspace_ops():
    U = Subspace(3, [e(3, 1), e(3, 3)])
    W = Subspace(3, [e(3, 2)])
    assert subspace_ops(U, U, "intersect") == U
    assert subspace_ops(W, U, "intersect").dim == 0
    assert subspace_ops(U, W, "sum") == Subspace.full(3)
    assert subspace_ops(U, Subspace(3, [e(3, 1)]), "contains")
    assert not subspace_ops(U, W, "equals")
    with pytest.raises(AmbientMismatchError):
        subspace_ops(U, Subspace(4), "sum")


def test_ann_delta13_meets_ann_delta22_trivially(table):
    A = table("N3s_02")
    a = ann_of_cocycle(A, SymCocycle.from_dict(3, {(1, 3): 1}))
    b = ann_of_cocycle(A, SymCocycle.from_dict(3, {(2, 2): 1}))
    assert b == Subspace(3, [e(3, 1), e(3, 3)])
    assert a.intersect(b).dim == 0


def test_quotient_coords(table):
    B = coboundary_space(table("N3s_02"))
    d = lambda i, j: tuple(mpq(1) if t == delta_index(i, j, 3) else mpq(0) for t in range(6))
    assert not any(quotient_coords(B, d(1, 1)))
    assert any(quotient_coords(B, d(1, 3)))
    assert not any(quotient_coords(B, (mpq(0),) * 6))


def test_inverse_round_trip():
    M = q([[2, 1, 0], [0, 1, 3], [1, 0, 1]])
    assert mat_mul(M, inverse(M)) == identity(3)
    with pytest.raises(ZeroDivisionError):
        inverse(q([[1, 2], [2, 4]]))


entries = st.integers(-3, 3)


@st.composite
def matrices(draw, max_rows=5, max_cols=5):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    return [[draw(entries) for _ in range(c)] for _ in range(r)], c


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_rank_nullity_against_sympy(mc):
    M, c = mc
    _, rank = rref(q(M), c)
    assert rank == sympy.Matrix(M).rank()
    assert rank + kernel(q(M), c).dim == c
    for v in kernel(q(M), c).basis:
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in q(M))


@settings(max_examples=60, deadline=None)
@given(matrices(4, 4), st.integers(1, 3))
def test_canonical_basis(mc, k):
    M, c = mc
    U = Subspace(c, q(M))
    # another spanning set via an invertible row transformation
    rows = q(M)
    mixed = [list(r) for r in rows]
    for i in range(1, len(mixed)):
        mixed[i] = [a + k * b for a, b in zip(mixed[i], mixed[i - 1])]
    mixed = [[k * a for a in r] for r in mixed]
    assert Subspace(c, mixed) == U
    assert Subspace(c, list(reversed(rows))) == U


@settings(max_examples=80, deadline=None)
@given(matrices(3, 4), matrices(3, 4))
def test_dimension_formula(m1, m2):
    (M1, c1), (M2, c2) = m1, m2
    n = max(c1, c2)
    pad = lambda M: [r + [0] * (n - len(r)) for r in M]
    U, W = Subspace(n, q(pad(M1))), Subspace(n, q(pad(M2)))
    assert (U + W).dim + U.intersect(W).dim == U.dim + W.dim
    assert U.intersect(W).is_subspace_of(U) and U.intersect(W).is_subspace_of(W)
