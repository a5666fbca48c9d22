"""Central extensions and their inverse (splitting off the annihilator)."""
from __future__ import annotations

from dataclasses import dataclass

from .algebra import AlgebraTable, annihilator, change_basis
from .cohomology import SymCocycle, delta_pairs
from .linalg import to_scalar
from .scalar import mpq

__all__ = ["central_extend", "split_annihilator", "SplitResult", "NoAnnihilatorError",
           "round_trip"]


class NoAnnihilatorError(ValueError):
    pass


def central_extend(A: AlgebraTable, thetas, name: str | None = None) -> AlgebraTable:
    """A_theta: e_i e_j = sum_k c_ij^k e_k + sum_t theta_t(e_i, e_j) e_{n+t}."""
    if isinstance(thetas, SymCocycle):
        thetas = [thetas]
    n = A.dim
    comps = []
    for th in thetas:
        if th.n != n:
            raise ValueError(f"cocycle over dim {th.n}, algebra has dim {n}")
        comps.extend(th.coords)
    if not comps:
        raise ValueError("central_extend needs at least one cocycle")
    R = A.ring
    prods = {key: dict(row) for key, row in A._sc.items()}
    for t, vec in enumerate(comps):
        for pos, (i, j) in enumerate(delta_pairs(n)):
            c = R.coerce(vec[pos])
            if c:
                prods.setdefault((i, j), {})[n + t + 1] = c
    return AlgebraTable(n + len(comps), prods, R, A.constraints, name)


@dataclass(frozen=True)
class SplitResult:
    quotient: AlgebraTable
    thetas: SymCocycle | None
    basis: tuple  # n x n, columns are the new basis vectors in old coordinates
    complement: tuple[int, ...]  # 1-based positions kept in the quotient

    def reextend(self) -> AlgebraTable:
        if self.thetas is None:
            return self.quotient
        return central_extend(self.quotient, self.thetas)


def split_annihilator(A: AlgebraTable) -> SplitResult:
    """Write A as a central extension of A / Ann(A).

    The complement of Ann(A) is spanned by the standard vectors at the
    non-pivot positions of Ann(A)'s RREF basis.  The new basis lists those
    vectors first, then the RREF rows of Ann(A).
    """
    A.require_numeric("split_annihilator")
    n = A.dim
    Ann = annihilator(A)
    m = Ann.dim
    if m == 0:
        raise NoAnnihilatorError(f"{A.name or 'algebra'} has zero annihilator")
    comp = Ann.complement_positions()
    q = len(comp)
    cols = []
    for c in comp:
        cols.append([mpq(1) if r == c else mpq(0) for r in range(n)])
    cols.extend(list(b) for b in Ann.basis)
    T = tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))

    prods = {}
    forms = [[mpq(0)] * (q * (q + 1) // 2) for _ in range(m)]
    pairs = delta_pairs(q)
    for pos, (i, j) in enumerate(pairs):
        # product of complement vectors e_{comp[i-1]} e_{comp[j-1]}
        v = [to_scalar(x) for x in _row(A, comp[i - 1], comp[j - 1], n)]
        lam = [v[p] for p in Ann.pivots]
        for r, b in enumerate(Ann.basis):
            if lam[r]:
                v = [a - lam[r] * x for a, x in zip(v, b)]
        row = {t + 1: v[c] for t, c in enumerate(comp) if v[c]}
        if row:
            prods[(i, j)] = row
        for r in range(m):
            forms[r][pos] = lam[r]
    Aq = AlgebraTable(q, prods, A.ring, (), None)
    thetas = SymCocycle(q, forms)
    return SplitResult(Aq, thetas, T, tuple(c + 1 for c in comp))


def _row(A, i, j, n):
    d = A.mt[i][j]
    return [d.get(k, mpq(0)) for k in range(n)]


def round_trip(A: AlgebraTable) -> tuple[bool, SplitResult]:
    """split_annihilator then central_extend; compare with A in the new basis."""
    S = split_annihilator(A)
    return S.reextend() == change_basis(A, S.basis), S
