"""Exhaustive enumeration of dormant rank-2 opers on P^1 with three marked points.

With trivial determinant connection every rank-2 oper on (P^1, {0, 1, inf})
is a companion system ``nabla^2 b = -q b`` with ``deg q <= 2``, so the p^3
choices of q exhaust the candidates.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

from ..errors import DomainError
from ..fpcalc import RadiusClass, radius_canonicalize
from ..funcfield import RF, Poly
from . import detdata
from .base import MarkedLine
from .oper import OperData, companion_oper, oper_check, star_oper


@dataclass
class DormantTable:
    p: int
    opers: list = field(default_factory=list)
    radii: list = field(default_factory=list)
    candidates: int = 0

    @property
    def total(self) -> int:
        return len(self.opers)

    def counts(self) -> Counter:
        return Counter(self.radii)


def sl2_opers(p: int):
    """Every candidate rank-2 oper with trivial determinant connection."""
    base = MarkedLine.standard(p)
    U = detdata.construct(base, 2, (0, 0, 0))
    for coeffs in product(range(p), repeat=3):
        q = RF(Poly(p, coeffs))
        yield coeffs, companion_oper(U, [-q, RF.const(p, 0)])


def radii_of(F: OperData) -> tuple[RadiusClass, ...]:
    return tuple(radius_canonicalize(e) for e in F.exponents())


def brute_force_sl2(p: int, check_axioms: bool = True) -> DormantTable:
    table = DormantTable(p)
    for _, F in sl2_opers(p):
        table.candidates += 1
        if not F.is_dormant():
            continue
        if check_axioms:
            oper_check(F, require_dormant=True)
        table.opers.append(F)
        table.radii.append(radii_of(F))
    return table


@lru_cache(maxsize=None)
def _cached_table(p: int) -> DormantTable:
    return brute_force_sl2(p)


def brute_force_sl2_count(p: int, radii) -> int:
    """Number of dormant rank-2 opers on P^1 / {0, 1, inf} with the given radii."""
    if len(radii) != 3:
        raise DomainError("exactly three radii are needed")
    target = tuple(radii)
    return sum(1 for r in _cached_table(p).radii if r == target)


def star_table(table: DormantTable) -> list[OperData]:
    """Apply the star duality to every dormant oper of a table."""
    return [star_oper(F) for F in table.opers]
