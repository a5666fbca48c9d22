"""Catalog verification: fingerprints, per-entry reports, whole-file summaries."""
from __future__ import annotations

import re
from math import lcm
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .algebra import (AlgebraTable, InadmissibleSpecializationError, NotNilpotentError,
                      annihilator, annihilator_series, check_identity, powers, specialize)
from .autaction import act_on_subspace, is_automorphism, verify_witness
from .cohomology import SymCocycle, coboundary_space, cohomology
from .extension import NoAnnihilatorError, central_extend, round_trip, split_annihilator
from .linalg import Subspace
from .scalar import Poly, PolyRing, mpq
from .tabledsl import (CatalogEntry, NonPolynomialError, UnsupportedRadicalError, eval_expr,
                       expr_orders, load_catalog)

__all__ = [
    "CatalogEntry",
    "Fingerprint",
    "Check",
    "EntryReport",
    "CatalogSummary",
    "SAMPLE_VALUES",
    "policy_samples",
    "sample_assignments",
    "fingerprint",
    "verify_entry",
    "verify_catalog",
    "shipped_path",
    "shipped_entries",
    "registry",
]

SAMPLE_VALUES = (2, 3, 5)
DATA = Path(__file__).with_name("data")
SHIPPED = ("dim3", "dim4", "dim5")


def shipped_path(name: str) -> Path:
    """Path of a shipped catalog ('dim3', 'dim4', 'dim5')."""
    p = DATA / f"{name}.nil"
    if not p.exists():
        raise FileNotFoundError(f"no shipped catalog named {name!r}")
    return p


_SHIPPED_CACHE: dict = {}


def shipped_entries(name: str) -> list[CatalogEntry]:
    if name not in _SHIPPED_CACHE:
        _SHIPPED_CACHE[name] = load_catalog(shipped_path(name))
    return _SHIPPED_CACHE[name]


def registry(extra=()) -> dict[str, CatalogEntry]:
    """Name -> entry for the shipped 3- and 4-dimensional catalogs plus ``extra``."""
    reg = {}
    for nm in ("dim3", "dim4"):
        for e in shipped_entries(nm):
            reg[e.name] = e
    for e in extra:
        reg[e.name] = e
    return reg


# ---------------------------------------------------------------------------
# samples


def _zero_at(c: Poly, a: dict, assigned: set) -> bool:
    if not set(c.variables()) <= assigned:
        return False
    return not c.evaluate({k: v for k, v in a.items() if k in c.ring.params})


def policy_samples(params, constraints, count: int = 3) -> list[dict]:
    """Joint samples: parameter i in sample j starts at SAMPLE_VALUES[(i + j) % 3]
    and is bumped upward while an assigned constraint vanishes."""
    params = tuple(params)
    if not params:
        return [{}]
    out = []
    for j in range(count):
        a = {}
        for i, p in enumerate(params):
            a[p] = SAMPLE_VALUES[(i + j) % len(SAMPLE_VALUES)]
            assigned = set(params[: i + 1])
            while any(_zero_at(c, a, assigned) for c in constraints):
                a[p] += 1
        if a not in out:
            out.append(a)
    return out


def sample_assignments(A) -> list[dict]:
    if isinstance(A, CatalogEntry):
        A = A.table()
    return policy_samples(A.ring.params, A.constraints)


# ---------------------------------------------------------------------------
# fingerprints


@dataclass(frozen=True)
class Fingerprint:
    dim: int
    power_dims: tuple
    nilindex: int
    ann_dim: int
    ann_series: tuple
    associative: bool
    jordan: bool
    cd: bool
    h2c: int
    h2d: int

    def as_dict(self):
        return asdict(self)


def fingerprint(A: AlgebraTable, assignment: dict | None = None) -> Fingerprint:
    if assignment:
        A = specialize(A, assignment)
    A.require_numeric("fingerprint")
    P, k = powers(A)
    C = cohomology(A)
    return Fingerprint(
        dim=A.dim,
        power_dims=tuple(S.dim for S in P),
        nilindex=k,
        ann_dim=annihilator(A).dim,
        ann_series=tuple(S.dim for S in annihilator_series(A)),
        associative=check_identity(A, "associative").holds,
        jordan=check_identity(A, "jordan").holds,
        cd=check_identity(A, "cd").holds,
        h2c=C.h2c,
        h2d=C.h2d,
    )


# ---------------------------------------------------------------------------
# reports


@dataclass
class Check:
    kind: str
    status: str  # pass, fail, unverifiable, info
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status != "fail"

    def as_dict(self):
        return {"kind": self.kind, "pass": self.passed, "status": self.status,
                "detail": self.detail}


@dataclass
class EntryReport:
    name: str
    checks: list = field(default_factory=list)
    fingerprint: Fingerprint | None = None
    samples: tuple = ()

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def add(self, kind, ok, detail="", status=None):
        self.checks.append(Check(kind, status or ("pass" if ok else "fail"), detail))

    def as_dict(self):
        return {
            "name": self.name,
            "checks": [c.as_dict() for c in self.checks],
            "fingerprint": self.fingerprint.as_dict() if self.fingerprint else None,
            "samples": [{k: str(v) for k, v in s.items()} for s in self.samples],
        }


def _fmt_sample(s: dict) -> str:
    return "(" + ", ".join(f"{k}={v}" for k, v in s.items()) + ")" if s else ""


def _eval_vec(vec, ring: PolyRing, assignment: dict):
    out = []
    for x in vec:
        if isinstance(x, Poly):
            keep = {k: v for k, v in assignment.items() if k in x.ring.params}
            y = x.substitute(keep)
            if not y.is_constant():
                raise ValueError(f"coefficient {x} is not fixed by {assignment}")
            out.append(y.constant_value())
        else:
            out.append(x)
    return out


def _cond_holds(cond, s: dict, ring) -> bool:
    if cond is None:
        return True
    p, op, val = cond
    if p not in s:
        return False
    v = eval_expr(val, PolyRing((), ring.m)).constant_value()
    return (s[p] == v) if op == "=" else (s[p] != v)


def _h2_samples(entry, A, samples):
    """Policy samples plus one sample per '=' condition on h2d."""
    extra = []
    for _, cond in entry.expect.h2d:
        if cond and cond[1] == "=":
            v = eval_expr(cond[2], PolyRing((), A.ring.m)).constant_value()
            base = dict(samples[0]) if samples and samples[0] else {}
            base[cond[0]] = v
            if base not in samples and base not in extra:
                extra.append(base)
    return extra


_FROM = re.compile(r"^(\d+)-dim central extensions? of (\S+)(?: at (.+))?$")


def verify_entry(entry: CatalogEntry, reg: dict | None = None, samples=None,
                 with_fingerprint: bool = True) -> EntryReport:
    """Run every check the entry's expectations call for."""
    rep = EntryReport(entry.name)
    try:
        A = entry.table()
    except (ValueError, IndexError) as e:
        rep.add("validate", False, str(e))
        return rep
    rep.add("commutative", True, "structural: only i <= j products are stored")
    ex = entry.expect

    # CD identity, symbolic in the parameters
    cd = check_identity(A, "cd")
    if ex.cd is None:
        rep.add("cd", True, str(cd), "info")
    else:
        ok = cd.holds == ex.cd
        rep.add("cd", ok, str(cd) + ("" if ok else f" (expected cd {str(ex.cd).lower()})"))

    if samples is None:
        try:
            samples = sample_assignments(A)
        except (ValueError, ZeroDivisionError) as e:
            rep.add("samples", False, str(e))
            return rep
    samples = list(samples)
    samples += _h2_samples(entry, A, samples)
    rep.samples = tuple(samples)

    specs = []
    for s in samples:
        try:
            specs.append((s, specialize(A, s) if s else A))
        except InadmissibleSpecializationError as e:
            rep.add("samples", False, str(e))
    for s, As in specs:
        tag = _fmt_sample(s)
        try:
            P, k = powers(As)
            rep.add("nilpotent", True, f"power dims {tuple(S.dim for S in P)}, nilindex {k} {tag}".rstrip())
        except NotNilpotentError as e:
            rep.add("nilpotent", False, f"{e} {tag}".rstrip())
            continue
        ann = annihilator(As).dim
        if ex.ann is not None:
            rep.add("ann", ann == ex.ann, f"dim Ann = {ann}, expected {ex.ann} {tag}".rstrip())
        if ann:
            ok, _ = round_trip(As)
            rep.add("round-trip", ok, f"split/extend round trip {tag}".rstrip())
        _check_cohomology(rep, entry, As, s, tag)
    if with_fingerprint and specs:
        try:
            rep.fingerprint = fingerprint(specs[0][1])
        except NotNilpotentError:
            rep.fingerprint = None

    _check_auts(rep, entry, A, samples)
    for w in ex.witnesses:
        wr = verify_witness(A, w, [s for s, _ in specs] or [{}])
        status = {"verified": "pass", "failed": "fail", "unverifiable": "unverifiable"}[wr.status]
        rep.add("witness", wr.ok, wr.detail, status)
    _check_extends(rep, entry, A, reg)
    _check_from(rep, entry, specs, reg)
    return rep


def _check_cohomology(rep, entry, As, s, tag):
    ex = entry.expect
    want_h2 = ex.h2c is not None or ex.h2d or ex.h2eq is not None or ex.h2d_basis or ex.h2c_basis
    if not want_h2:
        return
    C = cohomology(As)
    h2c, h2d = C.h2c, C.h2d
    if ex.h2c is not None:
        rep.add("h2c", h2c == ex.h2c, f"h2c = {h2c}, expected {ex.h2c} {tag}".rstrip())
    for v, cond in ex.h2d:
        if _cond_holds(cond, s, entry.presentation.ring):
            rep.add("h2d", h2d == v, f"h2d = {h2d}, expected {v} {tag}".rstrip())
    if ex.h2eq is not None:
        rep.add("h2eq", (h2c == h2d) == ex.h2eq,
                f"H2_C {'=' if h2c == h2d else '!='} H2_D, expected "
                f"{'=' if ex.h2eq else '!='} {tag}".rstrip())
    if ex.h2d_basis or ex.h2c_basis:
        B, Z = C.b2, C.z2d
        try:
            dvecs = [_eval_vec(v, entry.presentation.ring, s) for v in ex.h2d_basis]
            cvecs = [_eval_vec(v, entry.presentation.ring, s) for v in ex.h2c_basis]
        except ValueError as e:
            rep.add("h2-basis", False, str(e))
            return
        if dvecs:
            inZ = all(Z.contains(v) for v in dvecs)
            indep = Subspace(B.ambient, list(B.basis) + dvecs).dim - B.dim == len(dvecs)
            # a basis shorter than a conditional h2d value applying here only
            # has to sit inside H2_D
            applicable = [v for v, cond in ex.h2d if _cond_holds(cond, s, entry.presentation.ring)]
            need_full = not applicable or len(dvecs) in applicable
            full = len(dvecs) == h2d or not need_full
            rep.add("h2d-basis", inZ and indep and full,
                    f"{len(dvecs)} classes: in Z2_D {inZ}, independent mod B2 {indep}, "
                    f"span H2_D {full} {tag}".rstrip())
        if cvecs:
            allv = dvecs + cvecs
            indep = Subspace(B.ambient, list(B.basis) + allv).dim - B.dim == len(allv)
            full = len(allv) == h2c
            outside = not any(Z.contains(v) for v in cvecs) if len(cvecs) == 1 else True
            rep.add("h2c-basis", indep and full and outside,
                    f"{len(allv)} classes: independent mod B2 {indep}, span H2_C {full} {tag}".rstrip())


def _aut_points(fam, table_samples):
    """Numeric assignments for an aut family: explicit 'at' points or policy samples."""
    if fam.samples:
        pts = []
        for k, a in enumerate(fam.samples):
            d = dict(table_samples[k % len(table_samples)]) if table_samples else {}
            d.update({n: v for n, v in a})
            pts.append(d)
        return pts, True
    vs = policy_samples(fam.variables, ())
    pts = []
    for k, v in enumerate(vs):
        d = dict(table_samples[k % len(table_samples)]) if table_samples else {}
        d.update(v)
        pts.append(d)
    return pts, False


def _check_auts(rep, entry, A, samples):
    for idx, fam in enumerate(entry.expect.auts, 1):
        pts, explicit = _aut_points(fam, samples)
        for pt in pts:
            ring = PolyRing((), lcm(A.ring.m, _family_order(fam)))
            vals = {}
            bad = None
            for k, v in pt.items():
                if isinstance(v, tuple):
                    v = eval_expr(v, ring).constant_value()
                vals[k] = v
            try:
                M = [[eval_expr(x, ring, vals).constant_value() for x in r] for r in fam.matrix]
            except (NonPolynomialError, ZeroDivisionError, UnsupportedRadicalError) as e:
                bad = str(e)
            tag = _fmt_sample({k: vals[k] for k in fam.variables if k in vals})
            if bad:
                rep.add("aut", False, f"family {idx} cannot be evaluated {tag}: {bad}")
                continue
            table_s = {k: vals[k] for k in A.ring.params}
            As = specialize(A, table_s) if table_s else A
            if As.ring.m != ring.m:
                As = As.to_ring(PolyRing(As.ring.params, ring.m))
            chk = is_automorphism(As, M)
            if not chk.ok:
                rep.add("aut", False, f"family {idx} {tag}: {chk.reason}")
                continue
            Ar = As
            B = coboundary_space(Ar)
            Z = cohomology(Ar).z2d
            okB = act_on_subspace(Ar, M, B) == B
            okZ = act_on_subspace(Ar, M, Z) == Z
            rep.add("aut", okB and okZ,
                    f"family {idx} {tag}: automorphism, phi(B2) = B2 {okB}, phi(Z2_D) = Z2_D {okZ}")


def _family_order(fam):
    orders = {1}
    for r in fam.matrix:
        for x in r:
            orders |= expr_orders(x)
    for a in fam.samples:
        for _, x in a:
            orders |= expr_orders(x)
    return lcm(*orders)


def _check_extends(rep, entry, A, reg):
    for x in entry.expect.extends:
        base = (reg or {}).get(x.base)
        if base is None:
            rep.add("extends", False, f"base {x.base} not found")
            continue
        at = {k: eval_expr(v, PolyRing()).constant_value() for k, v in x.at}
        try:
            target = specialize(A, at) if at else A
        except InadmissibleSpecializationError as e:
            rep.add("extends", False, str(e))
            continue
        Bt = base.table()
        m = lcm(Bt.ring.m, *[c.ring.m for v in x.cocycles for c in v if isinstance(c, Poly)])
        if m != Bt.ring.m:
            Bt = Bt.to_ring(PolyRing(Bt.ring.params, m))
        th = SymCocycle(Bt.dim, [[_const(c) for c in v] for v in x.cocycles])
        ext = central_extend(Bt, th)
        ok = ext == target
        rep.add("extends", ok, f"{x.base} extended by {th} {'equals' if ok else 'differs from'} "
                               f"this table{(' at ' + _fmt_sample(at)) if at else ''}")


def _const(c):
    if isinstance(c, Poly):
        return c.constant_value()
    return c


def _check_from(rep, entry, specs, reg):
    src = entry.expect.source
    if not src or not specs:
        return
    m = _FROM.match(src)
    if not m:
        return
    s_dim, base_name = int(m.group(1)), m.group(2)
    base = (reg or {}).get(base_name)
    if base is None:
        rep.add("from", True, f"base {base_name} not in registry", "info")
        return
    Bt = base.table()
    s, As = specs[0]
    fixed = {}
    for part in (m.group(3) or "").split(","):
        if part.strip():
            k, v = part.split("=")
            fixed[k.strip()] = mpq(v.strip())
    try:
        bassign = {p: fixed[p] if p in fixed else s[p] for p in Bt.ring.params}
    except KeyError:
        rep.add("from", True, f"base {base_name} parameters not tied to this entry", "info")
        return
    try:
        Bs = specialize(Bt, bassign) if bassign else Bt
        S = split_annihilator(As)
    except (NoAnnihilatorError, InadmissibleSpecializationError, NotNilpotentError) as e:
        rep.add("from", False, str(e))
        return
    if S.quotient.dim != Bt.dim or As.dim - Bt.dim != s_dim:
        rep.add("from", False, f"A/Ann(A) has dim {S.quotient.dim}, base {base_name} has dim {Bt.dim}")
        return
    try:
        f1, f2 = fingerprint(S.quotient), fingerprint(Bs)
    except NotNilpotentError as e:
        rep.add("from", False, str(e))
        return
    ok = f1 == f2
    diff = "" if ok else ": " + ", ".join(
        f"{k} {getattr(f1, k)} vs {getattr(f2, k)}" for k in f1.as_dict() if getattr(f1, k) != getattr(f2, k))
    rep.add("from", ok, f"A/Ann(A) fingerprint {'matches' if ok else 'differs from'} "
                        f"{base_name} {_fmt_sample(s)}{diff}")


# ---------------------------------------------------------------------------
# whole catalogs


@dataclass
class CatalogSummary:
    reports: list
    collisions: list  # groups of names with equal fingerprints

    @property
    def failures(self) -> int:
        return sum(1 for r in self.reports if not r.ok)

    @property
    def passes(self) -> int:
        return len(self.reports) - self.failures

    @property
    def unverifiable(self) -> int:
        return sum(1 for r in self.reports for c in r.checks if c.status == "unverifiable")

    @property
    def ok(self) -> bool:
        return self.failures == 0


def verify_catalog(source, reg: dict | None = None, with_fingerprint: bool = True) -> CatalogSummary:
    """Verify every entry of a catalog file (or list of entries)."""
    entries = load_catalog(source) if isinstance(source, (str, Path)) else list(source)
    reg = registry(entries) if reg is None else reg
    reports = [verify_entry(e, reg, with_fingerprint=with_fingerprint) for e in entries]
    groups: dict = {}
    for r in reports:
        if r.fingerprint is not None:
            groups.setdefault(r.fingerprint, []).append(r.name)
    collisions = [names for names in groups.values() if len(names) > 1]
    return CatalogSummary(reports, collisions)
