"""Command line entry point: ``nilcomm <command> FILE ...``.

Exit status is 0 when nothing failed, 1 when a check failed, 2 on usage,
I/O or parse errors.
"""
from __future__ import annotations

import argparse
import json
import sys

from .algebra import NotNilpotentError, specialize
from .autaction import verify_witness
from .catalog import fingerprint, registry, sample_assignments, verify_catalog
from .cohomology import SymCocycle, class_coords, cohomology, format_form
from .extension import central_extend
from .linalg import RequiresSpecializationError
from .scalar import mpq
from .tabledsl import ParseError, eval_expr, load_catalog, parse_cocycle, parse_expr


def _load(path):
    return load_catalog(path)


def _find(entries, name):
    for e in entries:
        if e.name == name:
            return e
    raise LookupError(f"no entry named {name!r}")


def _params(items):
    out = {}
    for it in items or ():
        if "=" not in it:
            raise ValueError(f"--param expects NAME=VALUE, got {it!r}")
        k, v = it.split("=", 1)
        out[k.strip()] = mpq(v.strip())
    return out


def _numeric_table(entry, params):
    A = entry.table()
    if A.ring.params:
        if not params:
            params = sample_assignments(A)[0]
            print(f"# parameters fixed by the sample policy: "
                  + ", ".join(f"{k}={v}" for k, v in params.items()), file=sys.stderr)
        A = specialize(A, params)
    return A


def _cocycle(text, A) -> SymCocycle:
    """'D13 + 2 D22' (';' separates components) or 'c11,c12,...' coordinates."""
    if "D" in text:
        return SymCocycle(A.dim, parse_cocycle(text, A.dim, A.ring))
    size = A.dim * (A.dim + 1) // 2
    vals = [eval_expr(parse_expr(x), A.ring) for x in text.split(",")]
    if len(vals) != size:
        raise ValueError(f"expected {size} coordinates for dim {A.dim}, got {len(vals)}")
    return SymCocycle(A.dim, [vals])


def cmd_validate(args):
    entries = _load(args.file)
    for e in entries:
        e.table()
    print(f"{args.file}: {len(entries)} entries OK")
    return 0


def cmd_verify(args):
    entries = _load(args.file)
    S = verify_catalog(entries, registry(entries))
    if args.json:
        for r in S.reports:
            d = r.as_dict()
            print(json.dumps({k: d[k] for k in ("name", "checks", "fingerprint")}))
        return 0 if S.ok else 1
    for r in S.reports:
        mark = "ok  " if r.ok else "FAIL"
        print(f"{mark} {r.name}")
        for c in r.checks:
            if c.status in ("fail", "unverifiable") or args.verbose:
                print(f"       [{c.status}] {c.kind}: {c.detail}")
    print(f"\n{len(S.reports)} entries: {S.passes} passed, {S.failures} failed, "
          f"{S.unverifiable} unverifiable witness checks")
    if S.collisions:
        print(f"{len(S.collisions)} fingerprint collisions (informational):")
        for names in S.collisions:
            print("  " + ", ".join(names))
    return 0 if S.ok else 1


def cmd_cohomology(args):
    e = _find(_load(args.file), args.name)
    A = _numeric_table(e, _params(args.param))
    C = cohomology(A)
    n = A.dim
    print(f"{e.name}: dim H2_C = {C.h2c}, dim H2_D = {C.h2d}")
    print("B2   = <" + ", ".join(format_form(b, n) for b in C.b2.basis) + ">")
    print("Z2_D = <" + ", ".join(format_form(b, n) for b in C.z2d.basis) + ">")
    return 0


def cmd_extend(args):
    entries = _load(args.file)
    e = _find(entries, args.name)
    A = _numeric_table(e, _params(args.param))
    th = [_cocycle(c, A) for c in args.cocycle]
    B = central_extend(A, th, name=f"{e.name}_ext")
    print(f"algebra {B.name} dim {B.dim}")
    print(str(B))
    if args.check:
        print("classes mod B2: " + "; ".join(format_form(v, A.dim)
                                             for t in th for v in class_coords(A, t)))
    return 0


def cmd_fingerprint(args):
    e = _find(_load(args.file), args.name)
    A = _numeric_table(e, _params(args.param))
    f = fingerprint(A)
    print(json.dumps(f.as_dict()))
    return 0


def cmd_witness(args):
    entries = _load(args.file)
    e = _find(entries, args.name)
    if not e.expect.witnesses:
        print(f"{e.name}: no witness annotations")
        return 0
    failed = 0
    for k, w in enumerate(e.expect.witnesses, 1):
        r = verify_witness(e, w)
        failed += r.status == "failed"
        print(f"witness {k}: {r.status} ({r.detail})")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nilcomm", description="Nilpotent commutative algebra catalogs.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="parse a catalog file and build every table")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("verify", help="run every check on a catalog file")
    s.add_argument("file")
    s.add_argument("--json", action="store_true", help="one JSON object per entry")
    s.add_argument("-v", "--verbose", action="store_true", help="list passing checks too")
    s.set_defaults(func=cmd_verify)

    for name, fn, hlp in (("cohomology", cmd_cohomology, "B2, Z2_D and the H2 dimensions"),
                          ("fingerprint", cmd_fingerprint, "invariant fingerprint as JSON")):
        s = sub.add_parser(name, help=hlp)
        s.add_argument("file")
        s.add_argument("name")
        s.add_argument("--param", action="append", metavar="P=V")
        s.set_defaults(func=fn)

    s = sub.add_parser("extend", help="central extension by one or more cocycles")
    s.add_argument("file")
    s.add_argument("name")
    s.add_argument("--cocycle", action="append", required=True,
                   help='"D13 + 2 D22" or comma-separated Delta coordinates')
    s.add_argument("--param", action="append", metavar="P=V")
    s.add_argument("--check", action="store_true", help="also print the classes mod B2")
    s.set_defaults(func=cmd_extend)

    s = sub.add_parser("witness", help="verify the orbit witnesses of one entry")
    s.add_argument("file")
    s.add_argument("name")
    s.set_defaults(func=cmd_witness)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, OSError, LookupError, ValueError, RequiresSpecializationError,
            NotNilpotentError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
