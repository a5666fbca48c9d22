"""Exact linear algebra over Q(zeta_m).

Matrices are plain sequences of rows.  Entries may be scalars or constant
``Poly`` values; a non-constant polynomial entry raises
``RequiresSpecializationError`` because rank is not defined without fixing
the parameters.  ``Subspace`` keeps its basis in reduced row echelon form, so
two subspaces are equal iff their bases are identical.
"""
from __future__ import annotations

from .scalar import Cyc, Poly, mpq

__all__ = [
    "RequiresSpecializationError",
    "AmbientMismatchError",
    "to_scalar",
    "rref",
    "kernel",
    "Subspace",
    "subspace_ops",
    "quotient_coords",
    "mat_mul",
    "transpose",
    "identity",
    "inverse",
    "reduce_vector",
]

_MPQ = type(mpq(0))


class RequiresSpecializationError(ValueError):
    """A rank-sensitive routine received parametric entries."""


class AmbientMismatchError(ValueError):
    pass


def to_scalar(x):
    t = type(x)
    if t is _MPQ or t is Cyc:
        return x
    if t is Poly:
        if not x.is_constant():
            raise RequiresSpecializationError(
                f"entry {x} depends on parameters {x.variables()}; specialize first")
        return x.constant_value()
    return mpq(x)


class _Echelon:
    """Incrementally maintained RREF over a fixed number of columns."""

    __slots__ = ("n", "rows")

    def __init__(self, n: int):
        self.n = n
        self.rows: dict[int, list] = {}  # pivot -> row

    def reduce(self, v: list) -> list:
        for p, r in self.rows.items():
            c = v[p]
            if c:
                for j in range(p, self.n):
                    if r[j]:
                        v[j] = v[j] - c * r[j]
        return v

    def insert(self, v) -> bool:
        v = self.reduce(list(v))
        p = next((j for j in range(self.n) if v[j]), None)
        if p is None:
            return False
        inv = 1 / v[p]
        v = [x * inv if x else x for x in v]
        v[p] = mpq(1)
        for q, r in self.rows.items():
            c = r[p]
            if c:
                for j in range(p, self.n):
                    if v[j]:
                        r[j] = r[j] - c * v[j]
        self.rows[p] = v
        return True

    def basis(self):
        return [tuple(self.rows[p]) for p in sorted(self.rows)]


def _scalar_rows(M, ncols=None):
    rows = [[to_scalar(x) for x in r] for r in M]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    for r in rows:
        if len(r) != ncols:
            raise ValueError("ragged matrix")
    return rows, ncols


def rref(M, ncols=None):
    """Reduced row echelon form and rank.  Zero rows are kept at the bottom."""
    rows, n = _scalar_rows(M, ncols)
    E = _Echelon(n)
    for r in rows:
        E.insert(r)
    B = E.basis()
    zero = tuple(mpq(0) for _ in range(n))
    return B + [zero] * (len(rows) - len(B)), len(B)


def kernel(M, ncols=None) -> "Subspace":
    """{v : M v = 0}."""
    rows, n = _scalar_rows(M, ncols)
    E = _Echelon(n)
    for r in rows:
        E.insert(r)
    piv = E.rows
    vecs = []
    for f in range(n):
        if f in piv:
            continue
        v = [mpq(0)] * n
        v[f] = mpq(1)
        for p, r in piv.items():
            if r[f]:
                v[p] = -r[f]
        vecs.append(v)
    return Subspace(n, vecs)


def reduce_vector(basis_rows: dict, v):
    """Reduce v (scalars or Poly entries) by an RREF basis keyed by pivot."""
    v = list(v)
    n = len(v)
    for p, r in basis_rows.items():
        c = v[p]
        if c:
            for j in range(p, n):
                if r[j]:
                    v[j] = v[j] - c * r[j]
    return tuple(v)


class Subspace:
    """Subspace of K^n with a canonical RREF basis."""

    __slots__ = ("ambient", "basis", "pivots", "_rows", "_h")

    def __init__(self, ambient: int, vectors=()):
        E = _Echelon(ambient)
        for v in vectors:
            if len(v) != ambient:
                raise AmbientMismatchError(f"vector of length {len(v)} in {ambient}-space")
            E.insert([to_scalar(x) for x in v])
        self.ambient = ambient
        self.pivots = tuple(sorted(E.rows))
        self.basis = tuple(tuple(E.rows[p]) for p in self.pivots)
        self._rows = {p: self.basis[i] for i, p in enumerate(self.pivots)}
        self._h = None

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n)

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, [[mpq(1) if i == j else mpq(0) for j in range(n)] for i in range(n)])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return self.dim

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.ambient == other.ambient
                and self.basis == other.basis)

    def __hash__(self):
        if self._h is None:
            self._h = hash((self.ambient, self.basis))
        return self._h

    def __repr__(self):
        return f"Subspace(ambient={self.ambient}, dim={self.dim})"

    def _check(self, other):
        if self.ambient != other.ambient:
            raise AmbientMismatchError(f"ambient {self.ambient} vs {other.ambient}")

    def reduce(self, v):
        if len(v) != self.ambient:
            raise AmbientMismatchError(f"vector of length {len(v)} in {self.ambient}-space")
        return reduce_vector(self._rows, v)

    def contains(self, v) -> bool:
        return not any(self.reduce(v))

    def __contains__(self, v):
        return self.contains(v)

    def coords(self, v):
        """Coefficients of v in the RREF basis (v must lie in the subspace)."""
        if not self.contains(v):
            raise ValueError("vector not in subspace")
        return tuple(v[p] for p in self.pivots)

    def is_subspace_of(self, other: "Subspace") -> bool:
        self._check(other)
        return all(other.contains(b) for b in self.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace(self.ambient, self.basis + other.basis)

    def perp(self) -> "Subspace":
        """Annihilator in the dual space, in coordinates of the dual basis."""
        return kernel(self.basis, self.ambient)

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if not self.dim or not other.dim:
            return Subspace(self.ambient)
        duals = self.perp().basis + other.perp().basis
        return kernel(duals, self.ambient)

    def complement_positions(self) -> tuple[int, ...]:
        return tuple(j for j in range(self.ambient) if j not in self._rows)


def subspace_ops(U: Subspace, W: Subspace, op: str):
    if op == "sum":
        return U + W
    if op == "intersect":
        return U.intersect(W)
    if op == "contains":
        return W.is_subspace_of(U)
    if op == "equals":
        U._check(W)
        return U == W
    raise ValueError(f"unknown op {op!r}")


def quotient_coords(V: Subspace, v):
    """Reduction of v modulo V; congruent vectors have equal reductions."""
    return V.reduce(v)


# small dense helpers, generic over scalars and Poly entries


def transpose(M):
    return [list(c) for c in zip(*M)] if M else []


def mat_mul(A, B):
    Bt = transpose(B)
    out = []
    for r in A:
        row = []
        for c in Bt:
            acc = 0
            for a, b in zip(r, c):
                if a and b:
                    acc = a * b + acc
            row.append(acc if not isinstance(acc, int) else mpq(acc))
        out.append(row)
    return out


def identity(n: int):
    return [[mpq(1) if i == j else mpq(0) for j in range(n)] for i in range(n)]


def inverse(M):
    n = len(M)
    rows, _ = _scalar_rows(M, n)
    aug = [r + [mpq(1) if i == j else mpq(0) for j in range(n)] for i, r in enumerate(rows)]
    R, rank = rref(aug, 2 * n)
    if rank < n or any(R[i][j] != (i == j) for i in range(n) for j in range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [list(R[i][n:]) for i in range(n)]
