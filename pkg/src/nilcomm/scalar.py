"""Exact scalars and polynomials.

Rationals are ``gmpy2.mpq``.  Elements of Q(zeta_m) that are not rational are
``Cyc`` instances holding a coefficient vector reduced modulo the cyclotomic
polynomial Phi_m.  Any arithmetic result that happens to be rational is
returned as a plain ``mpq``, so a scalar is a ``Cyc`` iff it is irrational.

``Poly`` is a sparse multivariate polynomial over a ``PolyRing`` (an ordered
tuple of parameter names plus the cyclotomic order m of its coefficients).
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import lcm

from gmpy2 import mpq

__all__ = [
    "mpq",
    "RingMismatchError",
    "cyclotomic_poly",
    "cyclotomic_order",
    "CyclotomicField",
    "Cyc",
    "PolyRing",
    "Poly",
    "as_scalar",
    "is_scalar",
    "poly_arith",
    "substitute",
    "is_zero",
]


class RingMismatchError(ValueError):
    """Operands live in different parameter rings or cyclotomic fields."""


# ---------------------------------------------------------------------------
# cyclotomic polynomials


def _divexact(num: list[int], den: tuple[int, ...]) -> list[int]:
    # den is monic
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for k in range(len(num) - 1, dd - 1, -1):
        c = num[k]
        if c:
            out[k - dd] = c
            for t in range(dd + 1):
                num[k - dd + t] -= c * den[t]
    if any(num[:dd]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_m, lowest degree first."""
    if m < 1:
        raise ValueError(f"cyclotomic order must be positive, got {m}")
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            num = _divexact(num, cyclotomic_poly(d))
    return tuple(num)


@lru_cache(maxsize=None)
def cyclotomic_order(m: int) -> "CyclotomicField":
    """Field context Q(zeta_m).  m = 1 is the rationals."""
    return CyclotomicField(m)


def as_scalar(x):
    """Coerce ints and Fractions to mpq; pass mpq and Cyc through."""
    if isinstance(x, (Cyc,)) or type(x) is type(mpq(0)):
        return x
    if isinstance(x, (int, Fraction)):
        return mpq(x)
    raise TypeError(f"not a scalar: {x!r}")


_MPQ = type(mpq(0))


def is_scalar(x) -> bool:
    return isinstance(x, (_MPQ, Cyc, int, Fraction))


class CyclotomicField:
    """Q(zeta_m) as Q[x]/Phi_m."""

    def __init__(self, m: int):
        if m < 1:
            raise ValueError(f"cyclotomic order must be positive, got {m}")
        self.m = m
        self.phi = cyclotomic_poly(m)
        self.degree = len(self.phi) - 1
        d = self.degree
        # x^k mod Phi_m for k < 2d - 1
        red = []
        for k in range(max(2 * d - 1, 1)):
            v = [0] * (2 * d + 1)
            v[k] = 1
            for p in range(len(v) - 1, d - 1, -1):
                c = v[p]
                if c:
                    for t in range(d + 1):
                        v[p - d + t] -= c * self.phi[t]
            red.append(tuple(mpq(c) for c in v[:d]))
        self._red = red

    def __repr__(self):
        return f"CyclotomicField({self.m})"

    def __eq__(self, other):
        return isinstance(other, CyclotomicField) and other.m == self.m

    def __hash__(self):
        return hash(("CyclotomicField", self.m))

    def element(self, coeffs):
        """sum(coeffs[k] * zeta_m**k)."""
        acc = mpq(0)
        for k, a in enumerate(coeffs):
            if a:
                acc = acc + as_scalar(a) * self.zeta(k)
        return acc

    def zeta(self, k: int = 1):
        """zeta_m ** k."""
        if self.degree == 1:
            return mpq(1) if self.m == 1 else mpq((-1) ** (k % 2))
        k %= self.m
        if k < len(self._red):
            return _make(self.m, list(self._red[k]))
        base = _make(self.m, list(self._red[1]))
        return base ** k

    def eta(self, k: int):
        """eta_k, a primitive 2k-th root of unity (so eta_k^k = -1)."""
        if k < 1 or self.m % (2 * k):
            raise RingMismatchError(f"eta({k}) needs 2*{k} | m, but m = {self.m}")
        return self.zeta(self.m // (2 * k))

    def lift(self, x):
        """Embed an element of Q(zeta_d), d | m, into this field."""
        if not isinstance(x, Cyc):
            return as_scalar(x)
        if x.m == self.m:
            return x
        if self.m % x.m:
            raise RingMismatchError(f"cannot embed Q(zeta_{x.m}) into Q(zeta_{self.m})")
        step = self.m // x.m
        acc = mpq(0)
        for k, a in enumerate(x.c):
            if a:
                acc = acc + a * self.zeta(k * step)
        return acc


class Cyc:
    """Irrational element of Q(zeta_m); use CyclotomicField to build one."""

    __slots__ = ("m", "c", "_h")

    def __init__(self, m: int, c: tuple):
        self.m = m
        self.c = c
        self._h = None

    # arithmetic helpers
    def _other(self, o):
        if isinstance(o, Cyc):
            if o.m != self.m:
                raise RingMismatchError(f"Q(zeta_{self.m}) vs Q(zeta_{o.m})")
            return o.c
        if isinstance(o, (_MPQ, int, Fraction)):
            return None
        return NotImplemented

    def __add__(self, o):
        oc = self._other(o)
        if oc is NotImplemented:
            return NotImplemented
        if oc is None:
            c = list(self.c)
            c[0] += mpq(o)
            return _make(self.m, c)
        return _make(self.m, [a + b for a, b in zip(self.c, oc)])

    __radd__ = __add__

    def __neg__(self):
        return Cyc(self.m, tuple(-a for a in self.c))

    def __sub__(self, o):
        if isinstance(o, (Cyc, _MPQ, int, Fraction)):
            return self + (-o)
        return NotImplemented

    def __rsub__(self, o):
        if isinstance(o, (_MPQ, int, Fraction)):
            return (-self) + o
        return NotImplemented

    def __mul__(self, o):
        oc = self._other(o)
        if oc is NotImplemented:
            return NotImplemented
        if oc is None:
            if not o:
                return mpq(0)
            o = mpq(o)
            return Cyc(self.m, tuple(a * o for a in self.c))
        F = cyclotomic_order(self.m)
        d = F.degree
        out = [mpq(0)] * d
        conv = [mpq(0)] * (2 * d - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(oc):
                    if b:
                        conv[i + j] += a * b
        for k, v in enumerate(conv):
            if v:
                for t, r in enumerate(F._red[k]):
                    if r:
                        out[t] += v * r
        return _make(self.m, out)

    __rmul__ = __mul__

    def inverse(self):
        F = cyclotomic_order(self.m)
        d = F.degree
        # columns: self * x^k mod Phi_m; solve M u = e_0
        cols = []
        for k in range(d):
            p = self * F.zeta(k)
            cols.append(p.c if isinstance(p, Cyc) else (p,) + (mpq(0),) * (d - 1))
        aug = [[cols[k][r] for k in range(d)] + [mpq(1 if r == 0 else 0)] for r in range(d)]
        for col in range(d):
            piv = next(r for r in range(col, d) if aug[r][col])
            aug[col], aug[piv] = aug[piv], aug[col]
            inv = 1 / aug[col][col]
            aug[col] = [v * inv for v in aug[col]]
            for r in range(d):
                if r != col and aug[r][col]:
                    f = aug[r][col]
                    aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
        return _make(self.m, [aug[r][d] for r in range(d)])

    def __truediv__(self, o):
        if isinstance(o, Cyc):
            return self * o.inverse()
        if isinstance(o, (_MPQ, int, Fraction)):
            if not o:
                raise ZeroDivisionError("division by zero")
            return self * (1 / mpq(o))
        return NotImplemented

    def __rtruediv__(self, o):
        if isinstance(o, (_MPQ, int, Fraction)):
            return self.inverse() * o
        return NotImplemented

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        acc, base = mpq(1), self
        while e:
            if e & 1:
                acc = base * acc
            e >>= 1
            if e:
                base = base * base
        return acc

    def __eq__(self, o):
        if isinstance(o, Cyc):
            return self.m == o.m and self.c == o.c
        if isinstance(o, (_MPQ, int, Fraction)):
            return False
        return NotImplemented

    def __hash__(self):
        if self._h is None:
            self._h = hash((self.m, self.c))
        return self._h

    def __bool__(self):
        return True

    def __repr__(self):
        return f"Cyc({self})"

    def __str__(self):
        parts = []
        for k, a in enumerate(self.c):
            if not a:
                continue
            z = "" if k == 0 else ("zeta(%d)" % self.m if k == 1 else "zeta(%d)^%d" % (self.m, k))
            parts.append(_signed_term(a, z))
        return _join_terms(parts)


def _make(m, c):
    if all(not a for a in c[1:]):
        return mpq(c[0]) if c else mpq(0)
    return Cyc(m, tuple(mpq(a) for a in c))


def _fmt_q(a) -> str:
    a = mpq(a)
    return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"


def _signed_term(a, mono: str) -> tuple[str, str]:
    """(sign, body) for coefficient a times monomial text."""
    sign = "-" if a < 0 else "+"
    a = abs(a)
    if not mono:
        return sign, _fmt_q(a)
    if a == 1:
        return sign, mono
    return sign, f"{_fmt_q(a)}*{mono}"


def _join_terms(parts) -> str:
    if not parts:
        return "0"
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sg, body in parts[1:]:
        s += f" {sg} {body}"
    return s


def scalar_str(x) -> str:
    if isinstance(x, Cyc):
        return str(x)
    return _fmt_q(x) if x >= 0 else "-" + _fmt_q(-x)


# ---------------------------------------------------------------------------
# polynomials


class PolyRing:
    """Ordered parameter names plus cyclotomic order m of the coefficients."""

    __slots__ = ("params", "m", "_index", "_zero_exp")

    def __init__(self, params=(), m: int = 1):
        params = tuple(params)
        if len(set(params)) != len(params):
            raise ValueError(f"duplicate parameter names in {params}")
        if m < 1:
            raise ValueError(f"cyclotomic order must be positive, got {m}")
        self.params = params
        self.m = m
        self._index = {p: i for i, p in enumerate(params)}
        self._zero_exp = (0,) * len(params)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.params == other.params and self.m == other.m

    def __hash__(self):
        return hash((self.params, self.m))

    def __repr__(self):
        return f"PolyRing({list(self.params)}, m={self.m})"

    @property
    def field(self) -> CyclotomicField:
        return cyclotomic_order(self.m)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown parameter {name!r}") from None

    def gen(self, name: str) -> "Poly":
        e = [0] * len(self.params)
        e[self.index(name)] = 1
        return Poly(self, {tuple(e): mpq(1)})

    def gens(self):
        return [self.gen(p) for p in self.params]

    def const(self, c) -> "Poly":
        c = self.field.lift(as_scalar(c))
        return Poly(self, {self._zero_exp: c} if c else {})

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.const(1)

    def union(self, other: "PolyRing") -> "PolyRing":
        params = self.params + tuple(p for p in other.params if p not in self._index)
        return PolyRing(params, lcm(self.m, other.m))

    def with_params(self, extra) -> "PolyRing":
        return PolyRing(self.params + tuple(p for p in extra if p not in self._index), self.m)

    def with_order(self, m: int) -> "PolyRing":
        return PolyRing(self.params, lcm(self.m, m))

    def without(self, names) -> "PolyRing":
        names = set(names)
        return PolyRing(tuple(p for p in self.params if p not in names), self.m)

    def coerce(self, x) -> "Poly":
        if isinstance(x, Poly):
            if x.ring != self:
                raise RingMismatchError(f"{x.ring!r} vs {self!r}")
            return x
        return self.const(x)


class Poly:
    """Sparse polynomial: {exponent tuple: nonzero scalar}."""

    __slots__ = ("ring", "terms", "_h")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._h = None

    # -- coercion
    def _co(self, o):
        if isinstance(o, Poly):
            if o.ring != self.ring:
                raise RingMismatchError(f"{self.ring!r} vs {o.ring!r}")
            return o
        if isinstance(o, (_MPQ, int, Fraction, Cyc)):
            return self.ring.const(o)
        return None

    def __add__(self, o):
        o = self._co(o)
        if o is None:
            return NotImplemented
        if not o.terms:
            return self
        t = dict(self.terms)
        for e, c in o.terms.items():
            v = t.get(e)
            if v is None:
                t[e] = c
            else:
                v = v + c
                if v:
                    t[e] = v
                else:
                    del t[e]
        return Poly(self.ring, t)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, o):
        o = self._co(o)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, o):
        o = self._co(o)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, o):
        if isinstance(o, (_MPQ, int, Fraction, Cyc)):
            if not o:
                return Poly(self.ring, {})
            o = self.ring.field.lift(as_scalar(o))
            return Poly(self.ring, {e: c * o for e, c in self.terms.items()})
        o = self._co(o)
        if o is None:
            return NotImplemented
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = t.get(e)
                t[e] = c1 * c2 if v is None else v + c1 * c2
        return Poly(self.ring, {e: c for e, c in t.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, o):
        if isinstance(o, Poly):
            if not o.is_constant():
                raise ZeroDivisionError(f"division by non-constant polynomial {o}")
            o = o.constant_value()
        if isinstance(o, (_MPQ, int, Fraction, Cyc)):
            if not o:
                raise ZeroDivisionError("division by zero")
            return self * (1 / self.ring.field.lift(as_scalar(o)))
        return NotImplemented

    def __pow__(self, e: int):
        if e < 0:
            if self.is_constant() and self.terms:
                return self.ring.const(1 / self.constant_value() ** (-e))
            raise ValueError("negative power of a non-constant polynomial")
        acc, base = self.ring.one(), self
        while e:
            if e & 1:
                acc = acc * base
            e >>= 1
            if e:
                base = base * base
        return acc

    # -- predicates
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.ring._zero_exp in self.terms)

    def constant_value(self):
        if not self.terms:
            return mpq(0)
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.terms[self.ring._zero_exp]

    def variables(self) -> tuple[str, ...]:
        used = set()
        for e in self.terms:
            used.update(i for i, k in enumerate(e) if k)
        return tuple(p for i, p in enumerate(self.ring.params) if i in used)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def __eq__(self, o):
        if isinstance(o, Poly):
            return self.ring == o.ring and self.terms == o.terms
        if isinstance(o, (_MPQ, int, Fraction, Cyc)):
            return self.is_constant() and self.constant_value() == o
        return NotImplemented

    def __hash__(self):
        if self._h is None:
            if self.is_constant():
                self._h = hash(self.constant_value())
            else:
                self._h = hash((self.ring, frozenset(self.terms.items())))
        return self._h

    # -- substitution and ring changes
    def substitute(self, assignment: dict) -> "Poly":
        """Replace listed parameters by scalars or polynomials of this ring."""
        if not assignment:
            return self
        ring = self.ring
        idx = {ring.index(k): v for k, v in assignment.items()}
        polys = {i: v for i, v in idx.items() if isinstance(v, Poly)}
        scal = {i: ring.field.lift(as_scalar(v)) for i, v in idx.items() if not isinstance(v, Poly)}
        out = ring.zero()
        acc: dict = {}
        for e, c in self.terms.items():
            f = c
            ne = list(e)
            for i, v in scal.items():
                if e[i]:
                    f = f * v ** e[i]
                    ne[i] = 0
                    if not f:
                        break
            if not f:
                continue
            if polys:
                m = Poly(ring, {ring._zero_exp: f})
                for i, v in polys.items():
                    if e[i]:
                        m = m * ring.coerce(v) ** e[i]
                        ne[i] = 0
                mono = Poly(ring, {tuple(ne): mpq(1)})
                out = out + m * mono
            else:
                k = tuple(ne)
                v = acc.get(k)
                acc[k] = f if v is None else v + f
        res = Poly(ring, {e: c for e, c in acc.items() if c})
        return res + out if polys else res

    def evaluate(self, assignment: dict):
        """Substitute and return a scalar; every used parameter must be assigned."""
        p = self.substitute({k: v for k, v in assignment.items() if k in self.ring._index})
        if not p.is_constant():
            raise ValueError(f"parameters {p.variables()} left unassigned in {self}")
        return p.constant_value()

    def to_ring(self, ring: PolyRing) -> "Poly":
        if ring == self.ring:
            return self
        if ring.m % self.ring.m:
            raise RingMismatchError(f"cannot move {self.ring!r} into {ring!r}")
        pos = []
        for i, p in enumerate(self.ring.params):
            pos.append(ring._index.get(p))
        t = {}
        F = ring.field
        for e, c in self.terms.items():
            ne = [0] * len(ring.params)
            for i, k in enumerate(e):
                if k:
                    if pos[i] is None:
                        raise RingMismatchError(
                            f"parameter {self.ring.params[i]!r} missing from {ring!r}")
                    ne[pos[i]] = k
            t[tuple(ne)] = F.lift(c)
        return Poly(ring, t)

    # -- display
    def _mono(self, e) -> str:
        out = []
        for p, k in zip(self.ring.params, e):
            if k == 1:
                out.append(p)
            elif k:
                out.append(f"{p}^{k}")
        return "*".join(out)

    def sorted_terms(self):
        """Terms in decreasing lex order of exponents (the canonical order)."""
        return sorted(self.terms.items(), key=lambda t: t[0], reverse=True)

    def __str__(self):
        parts = []
        for e, c in self.sorted_terms():
            mono = self._mono(e)
            if isinstance(c, Cyc):
                body = f"({c})" if mono else str(c)
                if mono:
                    body += "*" + mono
                parts.append(("+", body))
            else:
                parts.append(_signed_term(c, mono))
        return _join_terms(parts)

    def __repr__(self):
        return f"Poly({self})"


def poly_arith(a: Poly, b: Poly, op: str) -> Poly:
    if not isinstance(a, Poly) or not isinstance(b, Poly):
        raise TypeError("poly_arith takes two Poly operands")
    if a.ring != b.ring:
        raise RingMismatchError(f"{a.ring!r} vs {b.ring!r}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def substitute(p: Poly, assignment: dict) -> Poly:
    return p.substitute(assignment)


def is_zero(x) -> bool:
    if isinstance(x, Poly):
        return x.is_zero()
    return not x
