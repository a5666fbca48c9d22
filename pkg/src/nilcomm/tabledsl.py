"""Line-oriented text format for algebra presentations and catalogs.

See docs/catalog-format.md for the grammar.  A short example::

    algebra N4s_13 dim 4
    params lambda
    e1*e1 = e2
    e1*e2 = e3
    e1*e3 = e4
    e2*e2 = lambda e4
    expect
      cd true
      h2d 3 if lambda = 2
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from math import lcm
from pathlib import Path

from .algebra import AlgebraTable
from .cohomology import delta_index
from .scalar import Poly, PolyRing, cyclotomic_order, mpq

__all__ = [
    "ParseError",
    "NonPolynomialError",
    "UnsupportedRadicalError",
    "Expr",
    "ParamDecl",
    "AutFamily",
    "WitnessAnnotation",
    "ExtendsCheck",
    "Expect",
    "Presentation",
    "CatalogEntry",
    "parse",
    "parse_catalog",
    "serialize",
    "serialize_catalog",
    "load_catalog",
    "parse_expr",
    "parse_cocycle",
    "eval_expr",
    "expr_str",
]


class ParseError(ValueError):
    def __init__(self, msg: str, line: int | None = None, col: int | None = None,
                 entry: str | None = None):
        self.msg, self.line, self.col, self.entry = msg, line, col, entry
        where = []
        if entry:
            where.append(f"entry {entry}")
        if line is not None:
            where.append(f"line {line}" + (f", col {col}" if col is not None else ""))
        super().__init__(f"{'; '.join(where)}: {msg}" if where else msg)


class NonPolynomialError(ValueError):
    """Expression divides by something that is not a nonzero constant."""


class UnsupportedRadicalError(ValueError):
    """Expression uses sqrt/root, which the scalar layer does not support."""


# ---------------------------------------------------------------------------
# tokens

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>!=|[-+*/^()\[\],;=:])
""", re.X)

_BASIS = re.compile(r"^(e\d+|D\d\d)$")
_RESERVED = {"eta", "zeta", "sqrt", "root", "maps", "to", "at", "if", "span", "by"}


@dataclass(frozen=True)
class Tok:
    kind: str  # int, name, op, end
    text: str
    col: int


def _tokenize(s: str, line: int, col0: int = 1) -> list[Tok]:
    out = []
    pos = 0
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m:
            raise ParseError(f"unexpected character {s[pos]!r}", line, col0 + pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append(Tok(kind, m.group(), col0 + pos))
        pos = m.end()
    out.append(Tok("end", "", col0 + len(s)))
    return out


class _Cursor:
    def __init__(self, toks: list[Tok], line: int):
        self.toks = toks
        self.i = 0
        self.line = line

    def peek(self, k: int = 0) -> Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> Tok:
        t = self.toks[self.i]
        if t.kind != "end":
            self.i += 1
        return t

    def at(self, text: str) -> bool:
        t = self.peek()
        return t.kind in ("op", "name") and t.text == text

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.next()
            return True
        return False

    def expect(self, text: str) -> Tok:
        if not self.at(text):
            self.fail(f"expected {text!r}")
        return self.next()

    def fail(self, msg: str, tok: Tok | None = None):
        t = tok or self.peek()
        got = t.text or "end of line"
        raise ParseError(f"{msg}, got {got!r}", self.line, t.col)

    def done(self) -> bool:
        return self.peek().kind == "end"


# ---------------------------------------------------------------------------
# expressions
#
# AST nodes are tuples:
#   ("num", int) ("var", name) ("eta", k) ("zeta", m)
#   ("add"|"sub"|"mul"|"div", a, b) ("neg", a) ("pow", a, int)
#   ("sqrt", a) ("root", k, a)

Expr = tuple


def _is_basis(t: Tok) -> bool:
    return t.kind == "name" and bool(_BASIS.match(t.text))


def _expr(c: _Cursor) -> Expr:
    if c.accept("-"):
        node = ("neg", _term(c))
    else:
        c.accept("+")
        node = _term(c)
    while c.at("+") or c.at("-"):
        op = c.next().text
        node = ("add" if op == "+" else "sub", node, _term(c))
    return node


def _term(c: _Cursor) -> Expr:
    node = _factor(c)
    while c.at("*") or c.at("/"):
        if c.at("*") and _is_basis(c.peek(1)):
            break
        op = c.next().text
        node = ("mul" if op == "*" else "div", node, _factor(c))
    return node


def _factor(c: _Cursor) -> Expr:
    if c.accept("-"):
        return ("neg", _factor(c))
    base = _atom(c)
    if c.accept("^"):
        neg = c.accept("-")
        t = c.next()
        if t.kind != "int":
            c.fail("expected integer exponent", t)
        return ("pow", base, -int(t.text) if neg else int(t.text))
    return base


def _atom(c: _Cursor) -> Expr:
    t = c.peek()
    if t.kind == "int":
        c.next()
        return ("num", int(t.text))
    if t.kind == "name":
        if _is_basis(t):
            c.fail("basis vector where a coefficient was expected")
        c.next()
        if t.text in ("eta", "zeta"):
            c.expect("(")
            k = c.next()
            if k.kind != "int" or int(k.text) < 1:
                c.fail(f"{t.text}() takes a positive integer", k)
            c.expect(")")
            return (t.text, int(k.text))
        if t.text == "sqrt":
            c.expect("(")
            a = _expr(c)
            c.expect(")")
            return ("sqrt", a)
        if t.text == "root":
            c.expect("(")
            k = c.next()
            if k.kind != "int":
                c.fail("root() takes an integer index first", k)
            c.expect(",")
            a = _expr(c)
            c.expect(")")
            return ("root", int(k.text), a)
        if t.text in _RESERVED:
            c.fail("reserved word in expression", t)
        if t.text == "i":
            c.fail("'i' is not a coefficient; write zeta(4) for a primitive 4th root of unity", t)
        return ("var", t.text)
    if c.accept("("):
        node = _expr(c)
        c.expect(")")
        return node
    c.fail("expected a number, parameter or '('")


def parse_expr(text: str, line: int = 1) -> Expr:
    c = _Cursor(_tokenize(text, line), line)
    node = _expr(c)
    if not c.done():
        c.fail("trailing input")
    return node


def expr_vars(node: Expr) -> set[str]:
    k = node[0]
    if k == "var":
        return {node[1]}
    if k in ("num", "eta", "zeta"):
        return set()
    out = set()
    for ch in node[1:]:
        if isinstance(ch, tuple):
            out |= expr_vars(ch)
    return out


def expr_orders(node: Expr) -> set[int]:
    """Cyclotomic orders needed by eta/zeta literals."""
    k = node[0]
    if k == "eta":
        return {2 * node[1]}
    if k == "zeta":
        return {node[1]}
    out = set()
    for ch in node[1:]:
        if isinstance(ch, tuple):
            out |= expr_orders(ch)
    return out


def has_radical(node: Expr) -> bool:
    if node[0] in ("sqrt", "root"):
        return True
    return any(isinstance(ch, tuple) and has_radical(ch) for ch in node[1:])


def eval_expr(node: Expr, ring: PolyRing, assignment: dict | None = None):
    """Evaluate to a Poly of ``ring``; assigned variables become scalars."""
    k = node[0]
    if k == "num":
        return ring.const(node[1])
    if k == "var":
        if assignment and node[1] in assignment:
            v = assignment[node[1]]
            return v if isinstance(v, Poly) else ring.const(v)
        return ring.gen(node[1])
    if k == "eta":
        return ring.const(ring.field.eta(node[1]))
    if k == "zeta":
        m = node[1]
        if ring.m % m:
            raise ValueError(f"zeta({m}) is not in Q(zeta_{ring.m})")
        return ring.const(ring.field.zeta(ring.m // m))
    if k in ("sqrt", "root"):
        raise UnsupportedRadicalError("radicals are not supported by the scalar layer")
    if k == "neg":
        return -eval_expr(node[1], ring, assignment)
    if k == "pow":
        base = eval_expr(node[1], ring, assignment)
        if node[2] < 0 and not base.is_constant():
            raise NonPolynomialError("negative power of a non-constant expression")
        if node[2] < 0 and base.is_zero():
            raise ZeroDivisionError("zero to a negative power")
        return base ** node[2]
    a = eval_expr(node[1], ring, assignment)
    b = eval_expr(node[2], ring, assignment)
    if k == "add":
        return a + b
    if k == "sub":
        return a - b
    if k == "mul":
        return a * b
    if k == "div":
        if not b.is_constant():
            raise NonPolynomialError(f"division by non-constant {b}")
        if b.is_zero():
            raise ZeroDivisionError("division by zero")
        return a / b
    raise ValueError(f"bad node {node!r}")


_PREC = {"add": 1, "sub": 1, "mul": 2, "div": 2, "neg": 3, "pow": 4}


def expr_str(node: Expr) -> str:
    """Text that parses back to the same AST."""
    k = node[0]
    if k == "num":
        return str(node[1])
    if k == "var":
        return node[1]
    if k in ("eta", "zeta"):
        return f"{k}({node[1]})"
    if k == "sqrt":
        return f"sqrt({expr_str(node[1])})"
    if k == "root":
        return f"root({node[1]}, {expr_str(node[2])})"
    if k == "neg":
        inner = node[1]
        s = expr_str(inner)
        # the parser reads "-a op b" as neg(a op b) only for + and -,
        # so wrap anything that is not an atom or power
        if inner[0] in ("add", "sub", "mul", "div", "neg"):
            s = f"({s})"
        return f"-{s}"
    if k == "pow":
        b = node[1]
        s = expr_str(b)
        if b[0] not in ("num", "var", "eta", "zeta", "sqrt", "root"):
            s = f"({s})"
        return f"{s}^{node[2]}"
    p = _PREC[k]
    a, b = node[1], node[2]
    sa, sb = expr_str(a), expr_str(b)
    if _PREC.get(a[0], 9) < p or a[0] == "neg":
        sa = f"({sa})"
    if _PREC.get(b[0], 9) <= p or b[0] == "neg":
        sb = f"({sb})"
    op = {"add": " + ", "sub": " - ", "mul": "*", "div": "/"}[k]
    return f"{sa}{op}{sb}"


# ---------------------------------------------------------------------------
# linear combinations of e_k or D_ij


def _lincomb(c: _Cursor, letter: str):
    """[(coefficient Expr, basis text)]."""
    terms = []
    sign = 1
    if c.accept("-"):
        sign = -1
    else:
        c.accept("+")
    while True:
        t = c.peek()
        if _is_basis(t):
            c.next()
            coef = ("num", 1)
        else:
            coef = _term(c)
            c.accept("*")
            t = c.peek()
            if not _is_basis(t):
                c.fail(f"expected a basis symbol {letter}..")
            c.next()
        if t.text[0] != letter:
            c.fail(f"expected a {letter}-symbol", t)
        terms.append((("neg", coef) if sign < 0 else coef, t.text, t.col))
        if c.at("+") or c.at("-"):
            sign = 1 if c.next().text == "+" else -1
            continue
        return terms


# ---------------------------------------------------------------------------
# data model


@dataclass(frozen=True)
class ParamDecl:
    name: str
    constraints: tuple[Poly, ...] = ()


@dataclass(frozen=True)
class AutFamily:
    """A boxed automorphism family with explicit sample points."""
    variables: tuple[str, ...]
    matrix: tuple[tuple[Expr, ...], ...]
    samples: tuple[tuple[tuple[str, Expr], ...], ...] = ()


@dataclass(frozen=True)
class WitnessAnnotation:
    """phi maps the classes of ``source`` to those of ``target``.

    relation "class": [phi theta_t] = [target_t] for each t.
    relation "span": the spans of the classes agree (equal orbits of subspaces).
    Cocycle vectors are Polys over ``ring`` (entry parameters + variables).
    """
    variables: tuple[str, ...]
    matrix: tuple[tuple[Expr, ...], ...]
    source: tuple[tuple[Poly, ...], ...]
    target: tuple[tuple[Poly, ...], ...]
    relation: str = "class"
    ring: PolyRing = field(default_factory=PolyRing, compare=False)

    @property
    def unverifiable(self) -> bool:
        return any(has_radical(x) for r in self.matrix for x in r)


@dataclass(frozen=True)
class ExtendsCheck:
    base: str
    cocycles: tuple[tuple[Poly, ...], ...]
    base_dim: int
    at: tuple[tuple[str, Expr], ...] = ()


@dataclass(frozen=True)
class Expect:
    cd: bool | None = None
    ann: int | None = None
    h2c: int | None = None
    h2d: tuple = ()  # ((value, cond), ...) cond None or (param, op, Expr)
    h2eq: bool | None = None
    h2d_basis: tuple = ()
    h2c_basis: tuple = ()
    auts: tuple[AutFamily, ...] = ()
    witnesses: tuple[WitnessAnnotation, ...] = ()
    extends: tuple[ExtendsCheck, ...] = ()
    source: str | None = None
    notes: tuple[str, ...] = ()

    def is_empty(self) -> bool:
        return self == Expect()


@dataclass(frozen=True)
class Presentation:
    name: str
    dim: int
    params: tuple[ParamDecl, ...]
    equations: tuple  # (((i, j), ((k, Poly), ...)), ...), i <= j, sorted
    expect: Expect
    ring: PolyRing

    @property
    def param_names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.params)

    @property
    def constraints(self) -> tuple[Poly, ...]:
        return tuple(c for p in self.params for c in p.constraints)

    def table(self) -> AlgebraTable:
        prods = {ij: dict(rhs) for ij, rhs in self.equations}
        return AlgebraTable(self.dim, prods, self.ring, self.constraints, self.name)


@dataclass(frozen=True)
class CatalogEntry:
    presentation: Presentation

    @property
    def name(self) -> str:
        return self.presentation.name

    @property
    def dim(self) -> int:
        return self.presentation.dim

    @property
    def expect(self) -> Expect:
        return self.presentation.expect

    @property
    def source(self) -> str | None:
        return self.presentation.expect.source

    def table(self) -> AlgebraTable:
        return self.presentation.table()


# ---------------------------------------------------------------------------
# parsing


_HEADER = re.compile(r"^algebra\s+(\S+)\s+dim\s+(\d+)\s*$")
_EQ = re.compile(r"^e(\d+)\s*\*\s*e(\d+)\s*=\s*(.*)$")
_STRING = re.compile(r'^"((?:[^"\\]|\\.)*)"\s*$')


def _strip_comment(s: str) -> str:
    out, inq = [], False
    for k, ch in enumerate(s):
        if ch == '"':
            inq = not inq
        if ch == "#" and not inq and (k == 0 or s[k - 1].isspace()):
            break
        out.append(ch)
    return "".join(out).rstrip()


class _EntryParser:
    def __init__(self, lines: list[tuple[int, str]]):
        self.lines = lines
        self.name = None

    def err(self, msg, line=None, col=None):
        raise ParseError(msg, line, col, self.name)

    def run(self) -> Presentation:
        try:
            return self._run()
        except ParseError as e:
            if e.entry is None and self.name is not None:
                raise ParseError(e.msg, e.line, e.col, self.name) from None
            raise

    def _run(self) -> Presentation:
        ln, head = self.lines[0]
        m = _HEADER.match(head.strip())
        if not m:
            self.err("expected 'algebra NAME dim N'", ln, 1)
        self.name = m.group(1)
        dim = int(m.group(2))
        if dim > 9:
            self.err("dimensions above 9 are not supported (single-digit indices)", ln)
        self.dim = dim
        rest = self.lines[1:]
        params: list[tuple[str, list]] = []
        k = 0
        if rest and rest[0][1].strip().startswith("params"):
            params = self._params(*rest[0])
            k = 1
        self.pnames = [p for p, _ in params]
        for p in self.pnames:
            if _BASIS.match(p) or p in _RESERVED:
                self.err(f"parameter name {p!r} is reserved", rest[0][0])
        if len(set(self.pnames)) != len(self.pnames):
            self.err("duplicate parameter", rest[0][0])
        eq_raw = []
        exp_lines = []
        while k < len(rest):
            ln, s = rest[k]
            st = s.strip()
            if st == "expect":
                exp_lines = rest[k + 1:]
                break
            m = _EQ.match(st)
            if not m:
                self.err("expected 'ei*ej = ...', 'params', or 'expect'", ln, 1)
            i, j = int(m.group(1)), int(m.group(2))
            indent = len(s) - len(s.lstrip())
            for idx, g in ((i, 1), (j, 2)):
                if not 1 <= idx <= dim:
                    self.err(f"index e{idx} out of range 1..{dim}", ln, indent + m.start(g))
            c = _Cursor(_tokenize(m.group(3), ln, indent + m.start(3) + 1), ln)
            terms = self._wrap(lambda: _lincomb(c, "e"))
            if not c.done():
                self._wrap(lambda: c.fail("trailing input"))
            eq_raw.append((ln, (min(i, j), max(i, j)), terms, indent + 1))
            k += 1
        # ring: declared parameters plus the cyclotomic order the entry needs
        orders = {1}
        for _, cons in params:
            for lhs, rhs, _ln in cons:
                orders |= expr_orders(lhs) | expr_orders(rhs)
        for _, _, terms, _ in eq_raw:
            for coef, _, _ in terms:
                orders |= expr_orders(coef)
        ring = PolyRing(self.pnames, lcm(*orders))
        self.ring = ring
        decls = []
        for p, cons in params:
            polys = []
            for lhs, rhs, ln2 in cons:
                poly = self._eval(("sub", lhs, rhs), ring, ln2)
                if poly.is_zero():
                    self.err(f"constraint on {p} is identically false", ln2)
                polys.append(poly)
            decls.append(ParamDecl(p, tuple(polys)))
        eqs: dict = {}
        for ln, ij, terms, col0 in eq_raw:
            if ij in eqs:
                self.err(f"duplicate product e{ij[0]}*e{ij[1]}", ln, col0)
            row: dict = {}
            for coef, sym, col in terms:
                kk = int(sym[1:])
                if not 1 <= kk <= dim:
                    self.err(f"index {sym} out of range 1..{dim}", ln, col)
                row[kk] = row.get(kk, ring.zero()) + self._eval(coef, ring, ln)
            eqs[ij] = tuple(sorted((kk, v) for kk, v in row.items() if v))
        equations = tuple(sorted((ij, rhs) for ij, rhs in eqs.items() if rhs))
        expect = self._expect(exp_lines)
        return Presentation(self.name, dim, tuple(decls), equations, expect, ring)

    def _wrap(self, fn):
        try:
            return fn()
        except ParseError as e:
            raise ParseError(e.msg, e.line, e.col, self.name) from None

    def _eval(self, node, ring, ln, assignment=None):
        unknown = expr_vars(node) - set(ring.params) - set(assignment or ())
        if unknown:
            self.err(f"unknown parameter(s) {sorted(unknown)}", ln, self._col_of(ln, sorted(unknown)[0]))
        try:
            return eval_expr(node, ring, assignment)
        except (NonPolynomialError, UnsupportedRadicalError, ZeroDivisionError, ValueError) as e:
            self.err(f"malformed coefficient: {e}", ln)

    def _col_of(self, ln, name):
        for n, text in self.lines:
            if n == ln:
                m = re.search(rf"\b{re.escape(name)}\b", text)
                return m.start() + 1 if m else None
        return None

    def _params(self, ln, s):
        col = s.index("params") + 7
        c = _Cursor(_tokenize(s[s.index("params") + 6:], ln, col), ln)
        out = []
        while not c.done():
            t = c.next()
            if t.kind != "name":
                self._wrap(lambda: c.fail("expected a parameter name", t))
            cons = []
            if c.accept("("):
                while True:
                    lhs = self._wrap(lambda: _expr(c))
                    self._wrap(lambda: c.expect("!="))
                    rhs = self._wrap(lambda: _expr(c))
                    cons.append((lhs, rhs, ln))
                    if c.accept(")"):
                        break
                    self._wrap(lambda: c.expect(","))
            out.append((t.text, cons))
            c.accept(",")
        return out

    # -- expect block

    def _expect(self, lines) -> Expect:
        d: dict = {"h2d": [], "h2d_basis": [], "h2c_basis": [], "auts": [], "witnesses": [],
                   "extends": [], "notes": []}
        for ln, s in lines:
            st = s.strip()
            key, _, rest = st.partition(" ")
            rest = rest.strip()
            off = s.index(key) + len(key) + 2
            if key in ("cd", "h2eq"):
                if rest not in ("true", "false"):
                    self.err(f"'{key}' takes true or false", ln, off)
                if d.get(key) is not None:
                    self.err(f"duplicate '{key}'", ln)
                d[key] = rest == "true"
            elif key in ("ann", "h2c"):
                if not rest.isdigit():
                    self.err(f"'{key}' takes a non-negative integer", ln, off)
                if d.get(key) is not None:
                    self.err(f"duplicate '{key}'", ln)
                d[key] = int(rest)
            elif key == "h2d":
                d["h2d"].append(self._h2d(ln, rest, off))
            elif key in ("h2d-basis", "h2c-basis"):
                c = _Cursor(_tokenize(rest, ln, off), ln)
                ring = self.ring.with_order(lcm(*({1} | _orders_in_tokens(c.toks))))
                vecs = self._wrap(lambda: self._cocycles(c, ring, ln))
                d[key.replace("-", "_")].extend(vecs)
            elif key == "aut":
                d["auts"].append(self._aut(ln, rest, off))
            elif key == "witness":
                d["witnesses"].append(self._witness(ln, rest, off))
            elif key == "extends":
                d["extends"].append(self._extends(ln, rest, off))
            elif key in ("from", "note"):
                m = _STRING.match(rest)
                if not m:
                    self.err(f"'{key}' takes a double-quoted string", ln, off)
                text = m.group(1).replace('\\"', '"')
                if key == "from":
                    if d.get("source") is not None:
                        self.err("duplicate 'from'", ln)
                    d["source"] = text
                else:
                    d["notes"].append(text)
            else:
                self.err(f"unknown expect item {key!r}", ln, s.index(key) + 1)
        for k in ("h2d", "h2d_basis", "h2c_basis", "auts", "witnesses", "extends", "notes"):
            d[k] = tuple(d[k])
        return Expect(**d)

    def _h2d(self, ln, rest, off):
        c = _Cursor(_tokenize(rest, ln, off), ln)
        t = c.next()
        if t.kind != "int":
            self._wrap(lambda: c.fail("'h2d' takes an integer", t))
        cond = None
        if c.accept("if"):
            p = c.next()
            if p.text not in self.pnames:
                self.err(f"unknown parameter {p.text!r} in condition", ln, p.col)
            if c.accept("="):
                op = "="
            else:
                self._wrap(lambda: c.expect("!="))
                op = "!="
            val = self._wrap(lambda: _expr(c))
            cond = (p.text, op, val)
        if not c.done():
            self._wrap(lambda: c.fail("trailing input"))
        return (int(t.text), cond)

    def _vars(self, c):
        """Optional 'v1, v2 :' prefix."""
        save = c.i
        names = []
        while c.peek().kind == "name":
            names.append(c.next().text)
            if c.accept(":"):
                for v in names:
                    if v in self.pnames or _BASIS.match(v) or v in _RESERVED:
                        self.err(f"variable name {v!r} clashes with a parameter or keyword",
                                 c.line)
                return tuple(names)
            if not c.accept(","):
                break
        c.i = save
        return ()

    def _matrix(self, c):
        c.expect("[")
        rows = [[_expr(c)]]
        while True:
            if c.accept(","):
                rows[-1].append(_expr(c))
            elif c.accept(";"):
                rows.append([_expr(c)])
            else:
                c.expect("]")
                break
        if len(rows) != self.dim or any(len(r) != self.dim for r in rows):
            c.fail(f"matrix must be {self.dim}x{self.dim}")
        return tuple(tuple(r) for r in rows)

    def _assign(self, c, allowed):
        out = []
        while True:
            t = c.next()
            if t.kind != "name" or t.text not in allowed:
                c.fail(f"expected one of {sorted(allowed)}", t)
            c.expect("=")
            out.append((t.text, _expr(c)))
            if not c.accept(","):
                return tuple(out)

    def _aut(self, ln, rest, off):
        c = _Cursor(_tokenize(rest, ln, off), ln)
        vs = self._wrap(lambda: self._vars(c))
        mat = self._wrap(lambda: self._matrix(c))
        used = set().union(*(expr_vars(x) for r in mat for x in r))
        unknown = used - set(vs) - set(self.pnames)
        if unknown:
            self.err(f"unknown variable(s) {sorted(unknown)} in aut matrix", ln,
                     self._col_of(ln, sorted(unknown)[0]))
        samples = []
        if c.accept("at"):
            while True:
                samples.append(self._wrap(lambda: self._assign(c, set(vs) | set(self.pnames))))
                if not c.accept(";"):
                    break
        if not c.done():
            self._wrap(lambda: c.fail("trailing input"))
        return AutFamily(vs, mat, tuple(samples))

    def _cocycles(self, c, ring, ln):
        vecs = []
        n = self.dim
        size = n * (n + 1) // 2
        while True:
            terms = _lincomb(c, "D")
            v = [ring.zero()] * size
            for coef, sym, col in terms:
                i, j = int(sym[1]), int(sym[2])
                if not (1 <= i <= n and 1 <= j <= n):
                    raise ParseError(f"{sym} out of range for dim {n}", ln, col)
                t = delta_index(i, j, n)
                v[t] = v[t] + self._eval(coef, ring, ln)
            vecs.append(tuple(v))
            if not c.accept(";"):
                return tuple(vecs)

    def _witness(self, ln, rest, off):
        c = _Cursor(_tokenize(rest, ln, off), ln)
        vs = self._wrap(lambda: self._vars(c))
        mat = self._wrap(lambda: self._matrix(c))
        self._wrap(lambda: c.expect("maps"))
        # the cocycles decide the ring: entry params + variables, with any
        # cyclotomic order used anywhere in the line
        toks = c.toks[c.i:]
        orders = {self.ring.m}
        for r in mat:
            for x in r:
                orders |= expr_orders(x)
        orders |= _orders_in_tokens(toks)
        ring = PolyRing(self.pnames + list(vs), lcm(*orders))
        used = set().union(*(expr_vars(x) for r in mat for x in r))
        unknown = used - set(ring.params)
        if unknown:
            self.err(f"unknown variable(s) {sorted(unknown)} in witness matrix", ln,
                     self._col_of(ln, sorted(unknown)[0]))
        src = self._wrap(lambda: self._cocycles(c, ring, ln))
        self._wrap(lambda: c.expect("to"))
        dst = self._wrap(lambda: self._cocycles(c, ring, ln))
        rel = "span" if c.accept("span") else "class"
        if not c.done():
            self._wrap(lambda: c.fail("trailing input"))
        if len(src) != len(dst):
            self.err("witness source and target have different numbers of cocycles", ln)
        return WitnessAnnotation(vs, mat, src, dst, rel, ring)

    def _extends(self, ln, rest, off):
        m = re.match(r"^(\S+)\s+by\s+(.*?)(?:\s+at\s+(.*))?$", rest)
        if not m:
            self.err("expected 'extends NAME by COCYCLES [at p=v]'", ln, off)
        base = m.group(1)
        # base dimension: number of new vectors is the number of cocycles
        body = m.group(2)
        nco = body.count(";") + 1
        bdim = self.dim - nco
        saved = self.dim
        self.dim = bdim
        try:
            c = _Cursor(_tokenize(body, ln, off), ln)
            ring = PolyRing((), lcm(*({1} | _orders_in_tokens(c.toks))))
            vecs = self._wrap(lambda: self._cocycles(c, ring, ln))
            if not c.done():
                self._wrap(lambda: c.fail("trailing input"))
        finally:
            self.dim = saved
        at = ()
        if m.group(3):
            c2 = _Cursor(_tokenize(m.group(3), ln, off), ln)
            at = self._wrap(lambda: self._assign(c2, set(self.pnames)))
        return ExtendsCheck(base, vecs, bdim, at)


def _orders_in_tokens(toks) -> set[int]:
    out = set()
    for a, b, k in zip(toks, toks[1:], toks[2:]):
        if a.kind == "name" and a.text in ("eta", "zeta") and b.text == "(" and k.kind == "int":
            out.add(2 * int(k.text) if a.text == "eta" else int(k.text))
    return out


def _split_entries(text: str):
    """Yield lists of (line number, text) for each entry."""
    cur: list = []
    for ln, raw in enumerate(text.split("\n"), 1):
        s = _strip_comment(raw)
        if not s.strip():
            if cur:
                yield cur
                cur = []
            continue
        if s.lstrip().startswith("algebra ") and cur:
            yield cur
            cur = []
        if not cur and not s.lstrip().startswith("algebra"):
            raise ParseError("expected 'algebra NAME dim N'", ln, 1)
        cur.append((ln, s))
    if cur:
        yield cur


def parse(text: str) -> Presentation:
    """Parse exactly one presentation."""
    entries = list(_split_entries(text))
    if len(entries) != 1:
        raise ParseError(f"expected one presentation, found {len(entries)}")
    return _EntryParser(entries[0]).run()


def parse_catalog(text: str) -> list[CatalogEntry]:
    out, seen = [], {}
    for lines in _split_entries(text):
        p = _EntryParser(lines).run()
        if p.name in seen:
            raise ParseError(f"duplicate entry name {p.name!r} (first at line {seen[p.name]})",
                             lines[0][0], 1, p.name)
        seen[p.name] = lines[0][0]
        out.append(CatalogEntry(p))
    return out


def load_catalog(path) -> list[CatalogEntry]:
    text = Path(path).read_text(encoding="utf-8")
    return parse_catalog(text)


# ---------------------------------------------------------------------------
# serialization


def _coef_text(c: Poly) -> str:
    s = str(c)
    if len(c.terms) > 1 or s.startswith("(") or "zeta" in s:
        return f"({s})"
    return s


def _lincomb_text(pairs) -> str:
    parts = []
    for sym, c in pairs:
        if c == 1:
            parts.append(("+", sym))
        elif c == -1:
            parts.append(("-", sym))
        else:
            t = _coef_text(c)
            if t.startswith("-"):
                parts.append(("-", f"{t[1:]} {sym}"))
            else:
                parts.append(("+", f"{t} {sym}"))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sg, body in parts[1:]:
        out += f" {sg} {body}"
    return out


def _cocycle_text(vec, n: int) -> str:
    from .cohomology import delta_pairs
    pairs = [(f"D{i}{j}", c) for (i, j), c in zip(delta_pairs(n), vec) if c]
    if not pairs:
        raise ValueError("cannot serialize the zero cocycle")
    return _lincomb_text(pairs)


def _matrix_text(mat) -> str:
    return "[" + "; ".join(", ".join(expr_str(x) for x in r) for r in mat) + "]"


def _assign_text(a) -> str:
    return ", ".join(f"{k}={expr_str(v)}" for k, v in a)


def _quote(s: str) -> str:
    return '"' + s.replace('"', '\\"') + '"'


def serialize(p: Presentation) -> str:
    lines = [f"algebra {p.name} dim {p.dim}"]
    if p.params:
        parts = []
        for d in p.params:
            if d.constraints:
                parts.append(f"{d.name} (" + ", ".join(f"{c} != 0" for c in d.constraints) + ")")
            else:
                parts.append(d.name)
        lines.append("params " + " ".join(parts))
    for (i, j), rhs in p.equations:
        lines.append(f"e{i}*e{j} = " + _lincomb_text([(f"e{k}", c) for k, c in rhs]))
    e = p.expect
    if not e.is_empty():
        lines.append("expect")
        if e.cd is not None:
            lines.append(f"  cd {'true' if e.cd else 'false'}")
        if e.ann is not None:
            lines.append(f"  ann {e.ann}")
        if e.h2c is not None:
            lines.append(f"  h2c {e.h2c}")
        for v, cond in e.h2d:
            s = f"  h2d {v}"
            if cond:
                s += f" if {cond[0]} {cond[1]} {expr_str(cond[2])}"
            lines.append(s)
        if e.h2eq is not None:
            lines.append(f"  h2eq {'true' if e.h2eq else 'false'}")
        if e.h2d_basis:
            lines.append("  h2d-basis " + "; ".join(_cocycle_text(v, p.dim) for v in e.h2d_basis))
        if e.h2c_basis:
            lines.append("  h2c-basis " + "; ".join(_cocycle_text(v, p.dim) for v in e.h2c_basis))
        for a in e.auts:
            s = "  aut "
            if a.variables:
                s += ", ".join(a.variables) + " : "
            s += _matrix_text(a.matrix)
            if a.samples:
                s += " at " + "; ".join(_assign_text(x) for x in a.samples)
            lines.append(s)
        for w in e.witnesses:
            s = "  witness "
            if w.variables:
                s += ", ".join(w.variables) + " : "
            s += _matrix_text(w.matrix)
            s += " maps " + "; ".join(_cocycle_text(v, p.dim) for v in w.source)
            s += " to " + "; ".join(_cocycle_text(v, p.dim) for v in w.target)
            if w.relation == "span":
                s += " span"
            lines.append(s)
        for x in e.extends:
            s = f"  extends {x.base} by " + "; ".join(_cocycle_text(v, x.base_dim) for v in x.cocycles)
            if x.at:
                s += " at " + _assign_text(x.at)
            lines.append(s)
        if e.source is not None:
            lines.append(f"  from {_quote(e.source)}")
        for note in e.notes:
            lines.append(f"  note {_quote(note)}")
    return "\n".join(lines) + "\n"


def serialize_catalog(entries) -> str:
    return "\n".join(serialize(e.presentation if isinstance(e, CatalogEntry) else e)
                     for e in entries)


def parse_cocycle(text: str, n: int, ring: PolyRing | None = None):
    """Parse 'D13 + 2 D22; D23' into a tuple of Delta-coordinate vectors."""
    toks = _tokenize(text, 1)
    if ring is None:
        ring = PolyRing((), lcm(*({1} | _orders_in_tokens(toks))))
    p = _EntryParser([(1, f"algebra cocycle dim {n}")])
    p.name, p.dim, p.pnames, p.ring = None, n, list(ring.params), ring
    c = _Cursor(toks, 1)
    vecs = p._cocycles(c, ring, 1)
    if not c.done():
        c.fail("trailing input")
    return vecs
