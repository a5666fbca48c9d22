"""Exact computations with nilpotent commutative algebras and their central extensions."""
from __future__ import annotations

from .algebra import (AlgebraTable, IdentityReport, annihilator, annihilator_series,
                      change_basis, check_identity, multiply, powers, specialize)
from .autaction import (AutMap, act_on_cocycle, classes_equal_under, classes_span_equal,
                        is_automorphism, verify_witness)
from .catalog import Fingerprint, fingerprint, verify_catalog, verify_entry
from .cohomology import (SymCocycle, cd_cocycle_space, coboundary_space, cohomology, h2_dims,
                         is_cd_class, ts_check)
from .extension import central_extend, round_trip, split_annihilator
from .scalar import Cyc, CyclotomicField, Poly, PolyRing, mpq
from .tabledsl import CatalogEntry, load_catalog, parse, parse_catalog, serialize

__all__ = [
    "AlgebraTable", "IdentityReport", "annihilator", "annihilator_series", "change_basis",
    "check_identity", "multiply", "powers", "specialize",
    "AutMap", "act_on_cocycle", "classes_equal_under", "classes_span_equal", "is_automorphism",
    "verify_witness",
    "Fingerprint", "fingerprint", "verify_catalog", "verify_entry",
    "SymCocycle", "cd_cocycle_space", "coboundary_space", "cohomology", "h2_dims", "is_cd_class",
    "ts_check",
    "central_extend", "round_trip", "split_annihilator",
    "Cyc", "CyclotomicField", "Poly", "PolyRing", "mpq",
    "CatalogEntry", "load_catalog", "parse", "parse_catalog", "serialize",
]
