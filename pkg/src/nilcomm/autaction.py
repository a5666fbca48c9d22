"""Automorphisms acting on cocycles, and orbit-witness verification.

A matrix phi acts on the basis by phi(e_j) = sum_i phi[i][j] e_i, so its
columns are the images of the basis vectors.  The action on a bilinear form
is the pullback (phi theta)(x, y) = theta(phi x, phi y), i.e. on Gram
matrices G -> phi^T G phi.
"""
from __future__ import annotations

from dataclasses import dataclass

from .algebra import AlgebraTable, _mul, specialize
from .cohomology import SymCocycle, coboundary_space, delta_pairs
from .linalg import RequiresSpecializationError, Subspace, to_scalar
from .scalar import Poly, PolyRing, mpq

__all__ = [
    "AutCheck",
    "AutMap",
    "UnverifiedAutomorphismError",
    "determinant",
    "is_automorphism",
    "act_on_cocycle",
    "act_on_subspace",
    "classes_equal_under",
    "classes_span_equal",
    "WitnessReport",
    "verify_witness",
]


class UnverifiedAutomorphismError(ValueError):
    pass


def _ring_of(*objs) -> PolyRing | None:
    ring = None
    stack = list(objs)
    while stack:
        o = stack.pop()
        if isinstance(o, Poly):
            ring = o.ring if ring is None else ring.union(o.ring)
        elif isinstance(o, AlgebraTable):
            ring = o.ring if ring is None else ring.union(o.ring)
        elif isinstance(o, SymCocycle):
            stack.extend(x for c in o.coords for x in c)
        elif isinstance(o, (list, tuple)):
            stack.extend(o)
    return ring


def _lift(x, ring):
    if ring is None:
        return x
    if isinstance(x, Poly):
        return x.to_ring(ring)
    return ring.const(x)


def determinant(M):
    """Laplace expansion along rows, memoized on column subsets."""
    n = len(M)
    if n == 0:
        return mpq(1)
    memo = {}

    def rec(row, cols):
        if row == n:
            return mpq(1)
        key = (row, cols)
        if key in memo:
            return memo[key]
        acc = mpq(0)
        sign = 1
        for j in range(n):
            if cols & (1 << j):
                continue
            a = M[row][j]
            if a:
                sub = rec(row + 1, cols | (1 << j))
                if sub:
                    acc = acc + a * sub if sign > 0 else acc - a * sub
            sign = -sign
        memo[key] = acc
        return acc

    return rec(0, 0)


@dataclass(frozen=True)
class AutCheck:
    ok: bool
    witness: tuple = ()  # (i, j) 1-based where the homomorphism law fails
    defect: tuple = ()
    det: object = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def is_automorphism(A: AlgebraTable, phi) -> AutCheck:
    """phi(e_i) phi(e_j) = phi(e_i e_j) for i <= j, and det(phi) != 0."""
    n = A.dim
    if len(phi) != n or any(len(r) != n for r in phi):
        raise ValueError(f"matrix must be {n}x{n}")
    ring = _ring_of(A, phi)
    B = A.to_ring(ring) if ring is not None and ring != A.ring else A
    M = [[_lift(x, ring) for x in r] for r in phi]
    cols = [[M[i][j] for i in range(n)] for j in range(n)]
    for i in range(n):
        for j in range(i, n):
            lhs = _mul(B.mt, n, cols[i], cols[j])
            rhs = [mpq(0)] * n
            for k, c in B.mt[i][j].items():
                for r in range(n):
                    if cols[k][r]:
                        rhs[r] = rhs[r] + c * cols[k][r]
            d = tuple(a - b for a, b in zip(lhs, rhs))
            if any(d):
                return AutCheck(False, (i + 1, j + 1), d, None,
                                f"phi(e{i+1})phi(e{j+1}) != phi(e{i+1}e{j+1})")
    det = determinant(M)
    if not det:
        return AutCheck(False, (), (), det, "determinant is zero")
    return AutCheck(True, (), (), det)


class AutMap:
    """A matrix together with the result of verifying it on an algebra."""

    def __init__(self, A: AlgebraTable, matrix):
        self.algebra = A
        self.matrix = tuple(tuple(r) for r in matrix)
        self.check = is_automorphism(A, self.matrix)
        self.verified = self.check.ok

    def __repr__(self):
        return f"AutMap(verified={self.verified})"

    def compose(self, other: "AutMap") -> "AutMap":
        """self o other (apply other first)."""
        from .linalg import mat_mul
        return AutMap(self.algebra, mat_mul(self.matrix, other.matrix))


def _as_map(A, phi) -> AutMap:
    if isinstance(phi, AutMap):
        if not phi.verified:
            raise UnverifiedAutomorphismError(f"not an automorphism: {phi.check.reason}")
        return phi
    m = AutMap(A, phi)
    if not m.verified:
        raise UnverifiedAutomorphismError(f"not an automorphism: {m.check.reason}")
    return m


def _pullback(M, vec, n):
    """Delta-coordinates of (x, y) -> theta(Mx, My)."""
    pairs = delta_pairs(n)
    G = [[None] * n for _ in range(n)]
    for t, (i, j) in enumerate(pairs):
        G[i - 1][j - 1] = vec[t]
        G[j - 1][i - 1] = vec[t]
    # H = G M, then out_ij = sum_r M[r][i] H[r][j]
    H = [[mpq(0)] * n for _ in range(n)]
    for r in range(n):
        for k in range(n):
            g = G[r][k]
            if not g:
                continue
            for j in range(n):
                if M[k][j]:
                    H[r][j] = H[r][j] + g * M[k][j]
    out = []
    for i, j in pairs:
        acc = mpq(0)
        for r in range(n):
            if M[r][i - 1] and H[r][j - 1]:
                acc = acc + M[r][i - 1] * H[r][j - 1]
        out.append(acc)
    return tuple(out)


def act_on_cocycle(A: AlgebraTable, phi, theta) -> SymCocycle:
    m = _as_map(A, phi)
    th = theta if isinstance(theta, SymCocycle) else SymCocycle(A.dim, [theta])
    ring = _ring_of(m.matrix, th)
    M = [[_lift(x, ring) for x in r] for r in m.matrix]
    coords = [_pullback(M, [_lift(x, ring) for x in c], A.dim) for c in th.coords]
    return SymCocycle(A.dim, coords)


def act_on_subspace(A: AlgebraTable, phi, S: Subspace) -> Subspace:
    """Image of a parameter-free subspace of forms under the pullback."""
    m = _as_map(A, phi)
    M = [[to_scalar(x) for x in r] for r in m.matrix]
    return Subspace(S.ambient, [_pullback(M, b, A.dim) for b in S.basis])


def _reduce_all(A, vecs, ring):
    B = coboundary_space(A)
    return [tuple(_lift(x, ring) for x in B.reduce(tuple(_lift(y, ring) for y in v)))
            for v in vecs]


def classes_equal_under(A: AlgebraTable, phi, theta1, theta2) -> bool:
    """[phi theta1] = [theta2] coordinate by coordinate (phi theta1 - theta2 in B^2)."""
    A.require_numeric("classes_equal_under")
    img = act_on_cocycle(A, phi, theta1)
    th2 = theta2 if isinstance(theta2, SymCocycle) else SymCocycle(A.dim, [theta2])
    if img.s != th2.s:
        return False
    ring = _ring_of(img, th2)
    B = coboundary_space(A)
    for u, v in zip(img.coords, th2.coords):
        d = tuple(_lift(a, ring) - _lift(b, ring) for a, b in zip(u, v))
        if any(B.reduce(d)):
            return False
    return True


def _rank_numeric(vecs, ambient):
    return Subspace(ambient, vecs).dim


def classes_span_equal(A: AlgebraTable, phi, theta1, theta2, samples=()) -> bool:
    """span{[phi theta1_t]} = span{[theta2_t]} in H^2.

    For one class this is checked symbolically: the two reduced vectors are
    proportional (all 2x2 minors vanish) and nonzero.  For several classes the
    parameters are fixed at each assignment in ``samples``.
    """
    A.require_numeric("classes_span_equal")
    img = act_on_cocycle(A, phi, theta1)
    th2 = theta2 if isinstance(theta2, SymCocycle) else SymCocycle(A.dim, [theta2])
    ring = _ring_of(img, th2)
    U = _reduce_all(A, img.coords, ring)
    V = _reduce_all(A, th2.coords, ring)
    if len(U) == 1 and len(V) == 1:
        u, v = U[0], V[0]
        if not any(u) or not any(v):
            return False
        for a in range(len(u)):
            for b in range(a + 1, len(u)):
                if u[a] * v[b] - u[b] * v[a]:
                    return False
        return True
    if ring is None or not ring.params:
        samples = ({},)
    if not samples:
        raise RequiresSpecializationError("span equality of several parametric classes needs samples")
    amb = A.dim * (A.dim + 1) // 2
    for s in samples:
        Us = [[_ev(x, s) for x in v] for v in U]
        Vs = [[_ev(x, s) for x in v] for v in V]
        ru, rv = _rank_numeric(Us, amb), _rank_numeric(Vs, amb)
        if ru != len(U) or rv != len(V) or _rank_numeric(Us + Vs, amb) != rv:
            return False
    return True


def _ev(x, assignment):
    if isinstance(x, Poly):
        return x.evaluate(assignment)
    return x


# ---------------------------------------------------------------------------
# witness annotations


@dataclass(frozen=True)
class WitnessReport:
    status: str  # "verified", "failed", "unverifiable"
    detail: str
    samples: tuple = ()

    @property
    def ok(self) -> bool:
        return self.status != "failed"


def _matrix_polys(w, ring, assignment=None):
    from .tabledsl import eval_expr
    return [[eval_expr(x, ring, assignment) for x in r] for r in w.matrix]


def verify_witness(entry, w, samples=None) -> WitnessReport:
    """Check an orbit-equality annotation on its base algebra.

    ``entry`` is a CatalogEntry or an AlgebraTable.  Parametric base algebras
    are checked at each assignment in ``samples`` (default: the catalog
    sample policy).  Witness variables stay symbolic where possible.
    """
    from .tabledsl import NonPolynomialError, UnsupportedRadicalError

    A = entry if isinstance(entry, AlgebraTable) else entry.table()
    if w.unverifiable:
        return WitnessReport("unverifiable", "witness matrix uses radicals (sqrt/root)")
    wring = w.ring
    base_params = [p for p in A.ring.params]
    if samples is None:
        from .catalog import sample_assignments
        samples = sample_assignments(A) if base_params else [{}]
    var_samples = None
    if w.variables:
        from .catalog import policy_samples
        var_samples = policy_samples(w.variables, ())
    used = []
    for s in samples:
        As = specialize(A, s) if s else A
        # ring of the specialized check: witness variables only
        r = PolyRing(tuple(w.variables), wring.m)
        try:
            M = _matrix_polys(w, r, {k: v for k, v in s.items()})
        except (NonPolynomialError, UnsupportedRadicalError) as e:
            return WitnessReport("unverifiable", f"matrix is not polynomial: {e}")
        src = SymCocycle(A.dim, [[_sub(x, s, r) for x in v] for v in w.source])
        dst = SymCocycle(A.dim, [[_sub(x, s, r) for x in v] for v in w.target])
        phi = AutMap(As, M)
        label = _fmt(s)
        if not phi.verified:
            return WitnessReport("failed", f"not an automorphism{label}: {phi.check.reason}",
                                 tuple(samples))
        if w.relation == "class":
            ok = classes_equal_under(As, phi, src, dst)
        else:
            ok = classes_span_equal(As, phi, src, dst, var_samples or ())
        if not ok:
            kind = "classes" if w.relation == "class" else "spans of classes"
            return WitnessReport("failed", f"{kind} differ{label}", tuple(samples))
        used.append(s)
    if w.relation == "span" and len(w.source) > 1 and var_samples:
        how = f"at {len(var_samples)} samples of the witness variables"
    else:
        how = "symbolically"
    if any(used):
        how += f" ({len(used)} parameter samples)"
    return WitnessReport("verified", f"{w.relation} equality holds {how}", tuple(used))


def _sub(x, assignment, ring):
    """Substitute base-algebra parameters and move into ``ring``."""
    if isinstance(x, Poly):
        keep = {k: v for k, v in assignment.items() if k in x.ring.params}
        y = x.substitute(keep) if keep else x
        return y.to_ring(ring)
    return ring.const(x)


def _fmt(s):
    if not s:
        return ""
    return " at " + ", ".join(f"{k}={v}" for k, v in s.items())
