from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from nilcomm.autaction import (AutMap, UnverifiedAutomorphismError, act_on_cocycle,
                               act_on_subspace, classes_equal_under, is_automorphism,
                               verify_witness)
from nilcomm.cohomology import SymCocycle, coboundary_space, cohomology
from nilcomm.linalg import identity, mat_mul
from nilcomm.scalar import mpq
from nilcomm.tabledsl import parse


def diag(*d):
    n = len(d)
    return [[mpq(d[i]) if i == j else mpq(0) for j in range(n)] for i in range(n)]


def D(n, *pairs, coef=1):
    return SymCocycle.from_dict(n, *[{p: coef} for p in pairs])


def test_is_automorphism(table):
    A = table("N3s_02")
    assert is_automorphism(A, diag(2, 4, 8))
    r = is_automorphism(A, diag(1, 2, 1))
    assert not r and r.witness == (1, 1)
    assert is_automorphism(A, identity(3))
    assert not is_automorphism(A, diag(0, 0, 0))


def test_size_mismatch(table):
    with pytest.raises(ValueError):
        is_automorphism(table("N3s_02"), identity(2))


def test_act_on_cocycle(table):
    A = table("N3s_02")
    th = D(3, (2, 3))
    assert act_on_cocycle(A, identity(3), th) == th
    phi = diag(-1, 1, -1)
    assert act_on_cocycle(A, phi, th) == D(3, (2, 3), coef=-1)
    assert act_on_cocycle(A, phi, D(3, (1, 3))) == D(3, (1, 3))
    with pytest.raises(UnverifiedAutomorphismError):
        act_on_cocycle(A, diag(1, 2, 1), th)


def test_classes_equal_under(table):
    A = table("N3s_02")
    assert classes_equal_under(A, identity(3), D(3, (1, 3)), D(3, (1, 3)))
    assert classes_equal_under(A, diag(-1, 1, -1), D(3, (2, 3)), D(3, (2, 3), coef=-1))
    assert not classes_equal_under(A, identity(3), D(3, (1, 3)), D(3, (2, 2)))


def test_shipped_sign_flip_witness(reg):
    e = reg["N3s_02"]
    w = e.expect.witnesses[0]
    assert w.source and verify_witness(e, w).status == "verified"


def _entry(witness_line):
    return parse("algebra N3s_02 dim 3\ne1*e1 = e2\ne1*e2 = e3\nexpect\n  " + witness_line)


def test_identity_witness():
    p = _entry("witness [1, 0, 0; 0, 1, 0; 0, 0, 1] maps D13 to D13")
    assert verify_witness(p.table(), p.expect.witnesses[0]).status == "verified"


def test_radical_witness_is_unverifiable():
    p = _entry("witness [sqrt(2), 0, 0; 0, 2, 0; 0, 0, 2*sqrt(2)] maps D22 to 4 D22")
    r = verify_witness(p.table(), p.expect.witnesses[0])
    assert r.status == "unverifiable" and r.ok


def test_wrong_witness_fails():
    p = _entry("witness [-1, 0, 0; 0, 1, 0; 0, 0, -1] maps D23 to D23")
    r = verify_witness(p.table(), p.expect.witnesses[0])
    assert r.status == "failed" and not r.ok


def test_group_law_violation_fails(table):
    # box matrix of N4s_10 at x = 2, r = 3 breaks r^2 = x^3
    A = table("N4s_10")
    bad = diag(2, 4, 3, 8)
    r = is_automorphism(A, bad)
    assert not r and r.witness == (3, 3)
    p = parse("algebra N4s_10 dim 4\ne1*e1 = e2\ne1*e2 = e4\ne3*e3 = e4\nexpect\n"
              "  witness [2, 0, 0, 0; 0, 4, 0, 0; 0, 0, 3, 0; 0, 0, 0, 8] maps D13 to D13")
    assert verify_witness(p.table(), p.expect.witnesses[0]).status == "failed"
    assert is_automorphism(A, diag(4, 16, 8, 64))


def _family_points(reg, name):
    """Numeric matrices of the boxed aut families of a parameter-free entry."""
    from nilcomm.catalog import policy_samples
    from nilcomm.scalar import PolyRing
    from nilcomm.tabledsl import eval_expr
    e = reg[name]
    out = []
    for fam in e.expect.auts:
        for s in policy_samples(fam.variables, ()):
            out.append([[eval_expr(x, PolyRing(), s).constant_value() for x in r]
                        for r in fam.matrix])
    return out


@pytest.mark.parametrize("name", ["N3s_02", "N3s_04", "N4s_02", "N4s_04", "N4s_08"])
def test_boxed_families_stabilize_spaces(reg, name):
    A = reg[name].table()
    B, Z = coboundary_space(A), cohomology(A).z2d
    pts = _family_points(reg, name)
    assert pts
    for M in pts:
        assert is_automorphism(A, M)
        assert act_on_subspace(A, M, B) == B
        assert act_on_subspace(A, M, Z) == Z


@settings(max_examples=30, deadline=None)
@given(st.integers(-3, 3).filter(bool), st.integers(-3, 3), st.integers(-3, 3),
       st.integers(-3, 3).filter(bool), st.integers(-3, 3), st.integers(-3, 3),
       st.lists(st.integers(-4, 4), min_size=6, max_size=6))
def test_pullback_composition(table, x1, y1, z1, x2, y2, z2, c):
    A = table("N3s_02")
    fam = lambda x, y, z: [[mpq(x), 0, 0], [mpq(y), mpq(x * x), 0], [mpq(z), mpq(2 * x * y), mpq(x**3)]]
    phi, psi = fam(x1, y1, z1), fam(x2, y2, z2)
    th = SymCocycle(3, [[mpq(v) for v in c]])
    lhs = act_on_cocycle(A, mat_mul(phi, psi), th)
    rhs = act_on_cocycle(A, psi, act_on_cocycle(A, phi, th))
    assert lhs == rhs


def test_identity_fixes_every_class(table):
    rng = random.Random(5)
    A = table("N4s_08")
    for _ in range(20):
        th = SymCocycle(4, [[mpq(rng.randint(-5, 5)) for _ in range(10)]])
        assert classes_equal_under(A, identity(4), th, th)


def test_autmap_compose(table):
    A = table("N3s_02")
    f = AutMap(A, diag(2, 4, 8))
    g = AutMap(A, diag(-1, 1, -1))
    assert f.compose(g).verified
