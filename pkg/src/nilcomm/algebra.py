"""Commutative algebras given by structure constants.

Indices in the public API are 1-based (``e1 .. en``); storage is 0-based.
Only the products with i <= j are given, the table is mirrored on
construction, so commutativity holds by construction.
"""
from __future__ import annotations

from dataclasses import dataclass

from .linalg import RequiresSpecializationError, Subspace, inverse, kernel, to_scalar
from .scalar import Poly, PolyRing, mpq

__all__ = [
    "AlgebraTable",
    "IdentityReport",
    "NotNilpotentError",
    "InadmissibleSpecializationError",
    "DimensionMismatchError",
    "basis_vector",
    "multiply",
    "subspace_product",
    "powers",
    "annihilator",
    "annihilator_series",
    "check_identity",
    "specialize",
    "change_basis",
]


class NotNilpotentError(ArithmeticError):
    pass


class InadmissibleSpecializationError(ValueError):
    pass


class DimensionMismatchError(ValueError):
    pass


class AlgebraTable:
    """Structure constants c_ij^k with entries in ``ring``.

    ``products`` maps 1-based pairs (i, j) to {k: coefficient}.  Pairs may be
    given in either order; giving both (i, j) and (j, i) is an error.
    Missing products are zero.
    """

    def __init__(self, dim: int, products=None, ring: PolyRing | None = None,
                 constraints=(), name: str | None = None):
        self.dim = dim
        self.ring = ring if ring is not None else PolyRing()
        self.name = name
        R = self.ring
        sc: dict = {}
        for (i, j), rhs in (products or {}).items():
            if not (1 <= i <= dim and 1 <= j <= dim):
                raise IndexError(f"product e{i}*e{j} out of range for dim {dim}")
            key = (min(i, j), max(i, j))
            if key in sc:
                raise ValueError(f"product e{key[0]}*e{key[1]} given twice")
            row = {}
            for k, c in rhs.items():
                if not 1 <= k <= dim:
                    raise IndexError(f"basis vector e{k} out of range for dim {dim}")
                c = R.coerce(c)
                if c:
                    row[k] = c
            if row:
                sc[key] = row
        self._sc = sc
        cons = []
        for c in constraints:
            c = R.coerce(c)
            if c.is_zero():
                raise ValueError("constraint polynomial is identically zero")
            cons.append(c)
        self.constraints = tuple(cons)
        # mirrored 0-based table, scalars when parameter-free
        numeric = not R.params
        mt = [[{} for _ in range(dim)] for _ in range(dim)]
        for (i, j), row in sc.items():
            d = {k - 1: (c.constant_value() if numeric else c) for k, c in row.items()}
            mt[i - 1][j - 1] = d
            mt[j - 1][i - 1] = d
        self.mt = mt
        self._cache: dict = {}

    # -- views
    @property
    def params(self) -> tuple[str, ...]:
        return self.ring.params

    @property
    def is_parametric(self) -> bool:
        return bool(self.ring.params)

    def require_numeric(self, what: str = "this operation"):
        if self.ring.params:
            raise RequiresSpecializationError(
                f"{what} needs a parameter-free table; specialize {list(self.ring.params)} first")

    def product(self, i: int, j: int) -> dict:
        """{k: coefficient} of e_i e_j, 1-based."""
        return dict(self._sc.get((min(i, j), max(i, j)), {}))

    def equations(self):
        """Sorted [((i, j), [(k, Poly), ...]), ...] with i <= j."""
        return [(key, sorted(row.items())) for key, row in sorted(self._sc.items())]

    def structure(self):
        """Canonical hashable form of the constants (constants as scalars)."""
        out = []
        for (i, j), row in sorted(self._sc.items()):
            for k, c in sorted(row.items()):
                out.append((i, j, k, c.constant_value() if c.is_constant() else c))
        return (self.dim, tuple(out))

    def __eq__(self, other):
        if not isinstance(other, AlgebraTable):
            return NotImplemented
        return self.structure() == other.structure()

    def __hash__(self):
        return hash(self.structure())

    def __repr__(self):
        nm = self.name or "AlgebraTable"
        return f"<{nm} dim={self.dim} products={len(self._sc)}>"

    def __str__(self):
        lines = []
        for (i, j), row in self.equations():
            rhs = ""
            for k, c in row:
                t = _term(c, f"e{k}")
                if not rhs:
                    rhs = t
                elif t.startswith("-"):
                    rhs += " - " + t[1:]
                else:
                    rhs += " + " + t
            lines.append(f"e{i}*e{j} = {rhs}")
        return "\n".join(lines) if lines else "(zero product)"

    def to_ring(self, ring: PolyRing) -> "AlgebraTable":
        if ring == self.ring:
            return self
        prods = {key: {k: c.to_ring(ring) for k, c in row.items()} for key, row in self._sc.items()}
        return AlgebraTable(self.dim, prods, ring, [c.to_ring(ring) for c in self.constraints],
                            self.name)

    def zero_vector(self):
        return tuple(mpq(0) for _ in range(self.dim))


def basis_vector(n: int, i: int):
    """e_i in K^n, 1-based."""
    return tuple(mpq(1) if k == i - 1 else mpq(0) for k in range(n))


def _check_len(A, *vs):
    for v in vs:
        if len(v) != A.dim:
            raise DimensionMismatchError(f"element of length {len(v)} for dim {A.dim}")


def _mul(mt, n, x, y):
    out = [mpq(0)] * n
    for i, xi in enumerate(x):
        if not xi:
            continue
        row = mt[i]
        for j, yj in enumerate(y):
            if not yj:
                continue
            d = row[j]
            if d:
                f = xi * yj
                for k, c in d.items():
                    out[k] = out[k] + f * c
    return out


def multiply(A: AlgebraTable, x, y):
    _check_len(A, x, y)
    return tuple(_mul(A.mt, A.dim, x, y))


def subspace_product(A: AlgebraTable, U: Subspace, W: Subspace) -> Subspace:
    A.require_numeric("subspace_product")
    if U.ambient != A.dim or W.ambient != A.dim:
        raise DimensionMismatchError("subspace ambient differs from algebra dimension")
    vecs = [_mul(A.mt, A.dim, u, w) for u in U.basis for w in W.basis]
    return Subspace(A.dim, vecs)


def powers(A: AlgebraTable):
    """([A^1, A^2, ..., A^k = 0], k) with A^k = sum_{i+j=k} A^i A^j."""
    A.require_numeric("powers")
    if "powers" in A._cache:
        return A._cache["powers"]
    n = A.dim
    P = [None, Subspace.full(n)]
    if n == 0:
        res = ([P[1]], 1)
        A._cache["powers"] = res
        return res
    k = 1
    cutoff = 2 ** n
    while P[k].dim:
        k += 1
        if k > cutoff:
            raise NotNilpotentError(
                f"power chain of {A.name or 'algebra'} did not reach 0 by A^{cutoff}")
        S = Subspace(n)
        for i in range(1, k // 2 + 1):
            S = S + subspace_product(A, P[i], P[k - i])
        P.append(S)
    res = (P[1:], k)
    A._cache["powers"] = res
    return res


def annihilator(A: AlgebraTable) -> Subspace:
    """{x : x e_j = 0 for all j}."""
    A.require_numeric("annihilator")
    if "ann" in A._cache:
        return A._cache["ann"]
    n = A.dim
    rows = []
    for j in range(n):
        for k in range(n):
            r = [A.mt[i][j].get(k, 0) for i in range(n)]
            if any(r):
                rows.append(r)
    S = kernel(rows, n)
    A._cache["ann"] = S
    return S


def annihilator_series(A: AlgebraTable) -> list[Subspace]:
    """Ann_1 = Ann(A) and Ann_{i+1} = {x : xA in Ann_i}, until it stabilizes."""
    A.require_numeric("annihilator_series")
    n = A.dim
    out = [annihilator(A)]
    while True:
        duals = out[-1].perp().basis
        rows = []
        for f in duals:
            for j in range(n):
                r = [sum((f[k] * c for k, c in A.mt[p][j].items()), mpq(0)) for p in range(n)]
                if any(r):
                    rows.append(r)
        nxt = kernel(rows, n)
        if nxt == out[-1]:
            return out
        out.append(nxt)


# ---------------------------------------------------------------------------
# identities


@dataclass(frozen=True)
class IdentityReport:
    identity: str
    holds: bool
    witness: tuple = ()
    defect: tuple = ()

    def __str__(self):
        if self.holds:
            return f"{self.identity}: holds"
        w = ", ".join(self.witness)
        d = " + ".join(_term(c, f"e{k + 1}") for k, c in enumerate(self.defect) if c)
        return f"{self.identity}: fails at ({w}), defect {d}"


def _term(c, sym: str) -> str:
    if c == 1:
        return sym
    s = str(c)
    if any(ch in s[1:] for ch in " +-"):
        return f"({s}) {sym}"
    return f"{s} {sym}"


def _sadd(u: dict, v: dict, sign=1):
    for k, c in v.items():
        w = u.get(k)
        w = c * sign if w is None else w + c * sign
        if w:
            u[k] = w
        else:
            u.pop(k, None)
    return u


def _vec_times_basis(mt, v: dict, r: int) -> dict:
    out: dict = {}
    for k, c in v.items():
        d = mt[k][r]
        for t, e in d.items():
            w = out.get(t)
            w = c * e if w is None else w + c * e
            if w:
                out[t] = w
            else:
                out.pop(t, None)
    return out


def triple_products(A: AlgebraTable) -> dict:
    """{(p, q, r): (e_p e_q) e_r} as sparse dicts, 0-based."""
    if "P3" in A._cache:
        return A._cache["P3"]
    n, mt = A.dim, A.mt
    P3 = {}
    for p in range(n):
        for q in range(p, n):
            v = mt[p][q]
            for r in range(n):
                w = _vec_times_basis(mt, v, r) if v else {}
                P3[(p, q, r)] = w
                P3[(q, p, r)] = w
    A._cache["P3"] = P3
    return P3


def _defect_report(A, name, witness, vec):
    R = A.ring
    defect = tuple(R.coerce(vec.get(k, 0)) for k in range(A.dim))
    return IdentityReport(name, False, witness, defect)


def _check_associative(A):
    n, mt = A.dim, A.mt
    P3 = triple_products(A)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                lhs = P3[(i, j, k)]
                rhs = P3[(j, k, i)]  # e_i (e_j e_k) = (e_j e_k) e_i
                d = _sadd(dict(lhs), rhs, -1)
                if d:
                    return _defect_report(A, "associative", (f"e{i+1}", f"e{j+1}", f"e{k+1}"), d)
    return IdentityReport("associative", True)


def _check_cd(A):
    n, mt = A.dim, A.mt
    P3 = triple_products(A)
    P4: dict = {}

    def q4(p, q, r, s):
        key = (p, q, r, s)
        v = P4.get(key)
        if v is None:
            v = _vec_times_basis(mt, P3[(p, q, r)], s)
            P4[key] = v
        return v

    for x in range(n):
        for y in range(n):
            for a in range(n):
                for b in range(n):
                    d: dict = {}
                    _sadd(d, q4(x, y, a, b))
                    _sadd(d, q4(x, b, a, y))
                    _sadd(d, q4(y, b, a, x))
                    _sadd(d, q4(x, y, b, a), -1)
                    _sadd(d, q4(x, a, b, y), -1)
                    _sadd(d, q4(y, a, b, x), -1)
                    if d:
                        w = tuple(f"e{t + 1}" for t in (x, y, a, b))
                        return _defect_report(A, "cd", w, d)
    return IdentityReport("cd", True)


def _check_jordan(A):
    # (xy)x^2 = x(yx^2); linear in y, so y runs over the basis
    n = A.dim
    names = [f"_x{i + 1}" for i in range(n)]
    R = A.ring.with_params(names)
    B = A.to_ring(R)
    x = [R.gen(nm) for nm in names]
    x2 = _mul(B.mt, n, x, x)
    for j in range(n):
        y = [R.one() if k == j else R.zero() for k in range(n)]
        xy = _mul(B.mt, n, x, y)
        lhs = _mul(B.mt, n, xy, x2)
        rhs = _mul(B.mt, n, x, _mul(B.mt, n, y, x2))
        d = [R.coerce(a) - R.coerce(b) for a, b in zip(lhs, rhs)]
        if any(d):
            return IdentityReport("jordan", False, ("x", f"e{j + 1}"), tuple(d))
    return IdentityReport("jordan", True)


def check_identity(A: AlgebraTable, which: str) -> IdentityReport:
    """Check 'associative', 'jordan' or 'cd' as a polynomial identity."""
    key = ("identity", which)
    if key in A._cache:
        return A._cache[key]
    if which == "associative":
        rep = _check_associative(A)
    elif which == "cd":
        rep = _check_cd(A)
    elif which == "jordan":
        rep = _check_jordan(A)
    else:
        raise ValueError(f"unknown identity {which!r}")
    A._cache[key] = rep
    return rep


# ---------------------------------------------------------------------------
# specialization and basis change


def specialize(A: AlgebraTable, assignment: dict) -> AlgebraTable:
    """Substitute parameter values; the remaining parameters form a smaller ring."""
    unknown = set(assignment) - set(A.ring.params)
    if unknown:
        raise KeyError(f"unknown parameters {sorted(unknown)}")
    new_ring = A.ring.without(assignment)
    cons = []
    for c in A.constraints:
        v = c.substitute(assignment)
        if v.is_zero():
            raise InadmissibleSpecializationError(
                f"{A.name or 'algebra'}: constraint {c} != 0 violated by {_fmt_assign(assignment)}")
        if not v.is_constant():
            cons.append(v.to_ring(new_ring))
    prods = {}
    for (i, j), row in A._sc.items():
        prods[(i, j)] = {k: c.substitute(assignment).to_ring(new_ring) for k, c in row.items()}
    return AlgebraTable(A.dim, prods, new_ring, cons, A.name)


def _fmt_assign(a: dict) -> str:
    return ", ".join(f"{k}={v}" for k, v in a.items())


def change_basis(A: AlgebraTable, T) -> AlgebraTable:
    """Table in the basis f_j = sum_i T[i][j] e_i (columns of T)."""
    A.require_numeric("change_basis")
    n = A.dim
    T = [[to_scalar(x) for x in r] for r in T]
    Ti = inverse(T)
    cols = [[T[i][j] for i in range(n)] for j in range(n)]
    prods = {}
    for i in range(n):
        for j in range(i, n):
            v = _mul(A.mt, n, cols[i], cols[j])
            w = [sum((Ti[r][k] * v[k] for k in range(n) if v[k]), mpq(0)) for r in range(n)]
            row = {k + 1: c for k, c in enumerate(w) if c}
            if row:
                prods[(i + 1, j + 1)] = row
    return AlgebraTable(n, prods, A.ring, (), A.name)
