"""Symmetric cocycles, coboundaries and the CD-cocycle subspace.

Bilinear forms are written in the basis Delta_ij (i <= j), enumerated
lexicographically: D11, D12, ..., D1n, D22, ..., Dnn.  A cocycle with values
in an s-dimensional space is a ``SymCocycle`` holding s such vectors.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .algebra import AlgebraTable, annihilator, powers, triple_products
from .linalg import Subspace, kernel, to_scalar
from .scalar import Poly, mpq

__all__ = [
    "delta_pairs",
    "delta_index",
    "delta_label",
    "format_form",
    "SymCocycle",
    "CohomologySpaces",
    "coboundary_space",
    "cd_cocycle_space",
    "cohomology",
    "h2_dims",
    "class_coords",
    "ann_of_cocycle",
    "ts_check",
    "TsResult",
    "is_cd_class",
]


@lru_cache(maxsize=None)
def delta_pairs(n: int) -> tuple[tuple[int, int], ...]:
    """1-based pairs (i, j), i <= j, in lexicographic order."""
    return tuple((i, j) for i in range(1, n + 1) for j in range(i, n + 1))


@lru_cache(maxsize=None)
def _pos_table(n: int):
    pos = [[0] * n for _ in range(n)]
    for t, (i, j) in enumerate(delta_pairs(n)):
        pos[i - 1][j - 1] = t
        pos[j - 1][i - 1] = t
    return pos


def delta_index(i: int, j: int, n: int) -> int:
    """Position of Delta_ij (1-based i, j in either order)."""
    if not (1 <= i <= n and 1 <= j <= n):
        raise IndexError(f"D{i}{j} out of range for dim {n}")
    return _pos_table(n)[i - 1][j - 1]


def delta_label(t: int, n: int) -> str:
    i, j = delta_pairs(n)[t]
    return f"D{i}{j}"


class SymCocycle:
    """theta = sum_t theta_t e_{n+t}, each theta_t a vector in the Delta basis."""

    __slots__ = ("n", "coords")

    def __init__(self, n: int, coords):
        size = n * (n + 1) // 2
        coords = tuple(tuple(c) for c in coords)
        for c in coords:
            if len(c) != size:
                raise ValueError(f"cocycle vector of length {len(c)}, expected {size}")
        self.n = n
        self.coords = coords

    @classmethod
    def from_dict(cls, n: int, *forms) -> "SymCocycle":
        """Each form maps (i, j) pairs to coefficients, e.g. {(1, 3): 1}."""
        size = n * (n + 1) // 2
        out = []
        for f in forms:
            v = [mpq(0)] * size
            for (i, j), c in f.items():
                t = delta_index(i, j, n)
                v[t] = v[t] + c
            out.append(v)
        return cls(n, out)

    @classmethod
    def single(cls, n: int, vec) -> "SymCocycle":
        return cls(n, [vec])

    @property
    def s(self) -> int:
        return len(self.coords)

    def value(self, t: int, i: int, j: int):
        """theta_t(e_i, e_j), 0-based t and 1-based i, j."""
        return self.coords[t][delta_index(i, j, self.n)]

    def gram(self, t: int):
        n = self.n
        pos = _pos_table(n)
        c = self.coords[t]
        return [[c[pos[i][j]] for j in range(n)] for i in range(n)]

    def components(self) -> list["SymCocycle"]:
        return [SymCocycle(self.n, [c]) for c in self.coords]

    def __eq__(self, other):
        return isinstance(other, SymCocycle) and self.n == other.n and self.coords == other.coords

    def __hash__(self):
        return hash((self.n, self.coords))

    def __str__(self):
        return "; ".join(format_form(c, self.n) for c in self.coords)

    def __repr__(self):
        return f"SymCocycle({self})"


def format_form(vec, n: int) -> str:
    parts = []
    for t, c in enumerate(vec):
        if not c:
            continue
        lab = delta_label(t, n)
        if c == 1:
            parts.append(("+", lab))
        elif c == -1:
            parts.append(("-", lab))
        elif isinstance(c, Poly) and len(c.terms) > 1 or not isinstance(c, Poly) and not _plain(c):
            parts.append(("+", f"({c}) {lab}"))
        else:
            s = str(c)
            if s.startswith("-"):
                parts.append(("-", f"{s[1:]} {lab}"))
            else:
                parts.append(("+", f"{s} {lab}"))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sg, body in parts[1:]:
        out += f" {sg} {body}"
    return out


def _plain(c) -> bool:
    return type(c) is type(mpq(0))


def _as_cocycle(A: AlgebraTable, theta) -> SymCocycle:
    if isinstance(theta, SymCocycle):
        if theta.n != A.dim:
            raise ValueError(f"cocycle over dim {theta.n}, algebra has dim {A.dim}")
        return theta
    return SymCocycle(A.dim, [theta])


# ---------------------------------------------------------------------------
# spaces


@dataclass(frozen=True)
class CohomologySpaces:
    ambient: int
    b2: Subspace
    z2d: Subspace

    @property
    def h2c(self) -> int:
        return self.ambient - self.b2.dim

    @property
    def h2d(self) -> int:
        return self.z2d.dim - self.b2.dim


def coboundary_space(A: AlgebraTable) -> Subspace:
    """B^2: spanned by delta(e_k^*) = sum_{i<=j} c_ij^k Delta_ij."""
    A.require_numeric("coboundary_space")
    if "b2" in A._cache:
        return A._cache["b2"]
    n = A.dim
    pairs = delta_pairs(n)
    vecs = []
    for k in range(n):
        vecs.append([A.mt[i - 1][j - 1].get(k, mpq(0)) for i, j in pairs])
    S = Subspace(len(pairs), vecs)
    A._cache["b2"] = S
    return S


def cd_cocycle_space(A: AlgebraTable) -> Subspace:
    """Z^2_D: forms satisfying the CD cocycle condition on all basis quadruples.

    th((xy)a,b) + th((xb)a,y) + th(x,(yb)a) = th((xy)b,a) + th((xa)b,y) + th(x,(ya)b)
    """
    A.require_numeric("cd_cocycle_space")
    if "z2d" in A._cache:
        return A._cache["z2d"]
    n = A.dim
    size = n * (n + 1) // 2
    pos = _pos_table(n)
    P3 = triple_products(A)
    seen = set()
    rows = []
    terms = ((0, 1, 2, 3, 1), (0, 3, 2, 1, 1), (1, 3, 2, 0, 1),
             (0, 1, 3, 2, -1), (0, 2, 3, 1, -1), (1, 2, 3, 0, -1))
    for x in range(n):
        for y in range(n):
            for a in range(n):
                for b in range(n):
                    q = (x, y, a, b)
                    row: dict = {}
                    for p0, p1, p2, other, sg in terms:
                        v = P3[(q[p0], q[p1], q[p2])]
                        o = q[other]
                        for k, c in v.items():
                            t = pos[k][o]
                            w = row.get(t, 0) + (c if sg > 0 else -c)
                            if w:
                                row[t] = w
                            else:
                                row.pop(t, None)
                    if row:
                        key = tuple(sorted(row.items()))
                        if key not in seen:
                            seen.add(key)
                            rows.append([row.get(t, mpq(0)) for t in range(size)])
    S = kernel(rows, size)
    A._cache["z2d"] = S
    return S


def cohomology(A: AlgebraTable) -> CohomologySpaces:
    n = A.dim
    return CohomologySpaces(n * (n + 1) // 2, coboundary_space(A), cd_cocycle_space(A))


def h2_dims(A: AlgebraTable) -> tuple[int, int]:
    C = cohomology(A)
    return C.h2c, C.h2d


def class_coords(A: AlgebraTable, theta):
    """Per-coordinate reduction of theta modulo B^2."""
    th = _as_cocycle(A, theta)
    B = coboundary_space(A)
    return tuple(B.reduce(c) for c in th.coords)


def ann_of_cocycle(A: AlgebraTable, theta) -> Subspace:
    """{x : theta(x, A) = 0}: kernel of the stacked Gram matrices."""
    th = _as_cocycle(A, theta)
    rows = []
    for t in range(th.s):
        rows.extend([to_scalar(v) for v in r] for r in th.gram(t))
    return kernel(rows, A.dim) if rows else Subspace.full(A.dim)


@dataclass(frozen=True)
class TsResult:
    ok: bool
    reasons: tuple[str, ...] = ()

    def __bool__(self):
        return self.ok


def ts_check(A: AlgebraTable, thetas, s: int) -> TsResult:
    """Independent classes mod B^2 and (cap Ann(theta_i)) cap Ann(A) = 0."""
    thetas = [_as_cocycle(A, t) for t in thetas]
    reasons = []
    if s < 1:
        return TsResult(False, ("s must be positive",))
    if len(thetas) != s:
        return TsResult(False, (f"expected {s} cocycles, got {len(thetas)}",))
    if any(t.s != 1 for t in thetas):
        return TsResult(False, ("each cocycle must be scalar valued",))
    B = coboundary_space(A)
    span = Subspace(B.ambient, list(B.basis) + [t.coords[0] for t in thetas])
    if span.dim - B.dim != s:
        reasons.append("classes are linearly dependent in H^2")
    inter = annihilator(A)
    for t in thetas:
        inter = inter.intersect(ann_of_cocycle(A, t))
    if inter.dim:
        reasons.append("Ann(theta) meets Ann(A) nontrivially")
    return TsResult(not reasons, tuple(reasons))


def is_cd_class(A: AlgebraTable, theta) -> bool:
    th = _as_cocycle(A, theta)
    Z = cd_cocycle_space(A)
    return all(Z.contains(c) for c in th.coords)


def square_dim(A: AlgebraTable) -> int:
    P, _ = powers(A)
    return P[1].dim if len(P) > 1 else 0
