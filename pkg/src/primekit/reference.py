"""Published worked-example columns for the three constructions, bound 119.

These are regression fixtures: each column records the parameters as
printed alongside the value they are supposed to produce. Two relation1
columns are internally inconsistent (the printed parameters evaluate to
-1139 and -31, not 71 and 31); those stay flagged as errata rather than
being encoded as golden values, and a bounded grid search recovers
parameters that genuinely reach the printed targets.
"""

from __future__ import annotations

from dataclasses import dataclass

from .oracle import PrimeBasis, primes_leq_sqrt
from .relations import (
    CandidateCertificate,
    Parity,
    Relation1Params,
    Relation2Params,
    Relation3Params,
    eval_relation1,
    eval_relation2,
    eval_relation3,
    find_relation1_params,
)

REFERENCE_BOUND = 119

_E = Parity.EVEN
_O = Parity.ODD

# (b1, b2, K, exponent map, printed R)
RELATION1_COLUMNS = (
    (_E, _O, 1, ((1, 2),), 89),
    (_O, _E, 6, ((1, 2),), 71),
    (_E, _O, 1, ((1, 1), (2, 1)), 67),
    (_O, _E, 9, ((1, 1), (2, 2)), 31),
    (_O, _E, 7, ((1, 2), (2, 1)), 103),
)

# (b1, b2, b3, k1, k2, k3, printed R) over the split {2, 7} / {3, 5}
RELATION2_GROUPS = ((2, 7), (3, 5))
RELATION2_COLUMNS = (
    (_E, _E, _E, 1, 3, 0, 59),
    (_E, _E, _E, 2, 3, 0, 73),
    (_E, _E, _E, 1, 5, 0, 89),
    (_E, _O, _E, 11, 5, 0, 79),
    (_E, _E, _E, 2, 1, 0, 43),
    (_O, _E, _E, 2, 3, 0, 17),
    (_O, _E, _E, 1, 5, 0, 61),
)

# (signs, multipliers, printed R); the full-product term is fixed at k = 0
RELATION3_COLUMNS = (
    ((_E, _O, _E, _E, _E), (1, 1, 1, 1, 0), 107),
    ((_E, _E, _O, _O, _E), (1, 1, 2, 1, 0), 61),
    ((_E, _E, _O, _O, _E), (1, 1, 1, 1, 0), 103),
    ((_E, _E, _O, _O, _E), (1, 2, 2, 2, 0), 101),
)

ERRATA_SEARCH_BUDGET = 10


@dataclass(frozen=True)
class ReferenceEntry:
    column: int
    printed_value: int
    certificate: CandidateCertificate
    consistent: bool
    replacement: Relation1Params | None = None


def reference_basis() -> PrimeBasis:
    return primes_leq_sqrt(REFERENCE_BOUND)


def relation1_report(include_errata: bool = True) -> list[ReferenceEntry]:
    """Evaluate each relation1 column; for inconsistent ones, search the
    bounded grid for parameters that do reach the printed value."""
    basis = reference_basis()
    entries = []
    for index, (b1, b2, k, exps, printed) in enumerate(RELATION1_COLUMNS, start=1):
        cert = eval_relation1(Relation1Params(basis, b1, b2, k, exps))
        consistent = cert.accepted and cert.signed_value == printed
        if consistent:
            entries.append(ReferenceEntry(index, printed, cert, True))
        elif include_errata:
            replacement = find_relation1_params(basis, printed, ERRATA_SEARCH_BUDGET, 2)
            entries.append(ReferenceEntry(index, printed, cert, False, replacement))
    return entries


def relation2_report() -> list[ReferenceEntry]:
    basis = reference_basis()
    group1, group2 = RELATION2_GROUPS
    entries = []
    for index, (b1, b2, b3, k1, k2, k3, printed) in enumerate(RELATION2_COLUMNS, start=1):
        cert = eval_relation2(
            Relation2Params(basis, group1, group2, b1, b2, b3, k1, k2, k3)
        )
        entries.append(
            ReferenceEntry(index, printed, cert, cert.accepted and cert.signed_value == printed)
        )
    return entries


def relation3_report() -> list[ReferenceEntry]:
    basis = reference_basis()
    entries = []
    for index, (signs, ks, printed) in enumerate(RELATION3_COLUMNS, start=1):
        cert = eval_relation3(Relation3Params(basis, signs, ks))
        entries.append(
            ReferenceEntry(index, printed, cert, cert.accepted and cert.signed_value == printed)
        )
    return entries
