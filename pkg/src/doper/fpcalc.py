"""Multisets over F_p, their shift classes, and the complement/negation dualities.

A multiset of residues is the basic bookkeeping device for exponents of
logarithmic connections; its class modulo simultaneous shift is a radius.
The star operation (complement, then negate) exchanges cardinality ``n``
with ``p - n`` and is an involution on subsets.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, combinations_with_replacement
from typing import Iterable, Sequence

from .errors import DomainError, NotDistinctClass, RepeatedEntries

MAX_PRIME = 65521


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    """Deterministic trial-division primality test (enough for 16-bit values)."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def check_prime(p: int) -> int:
    """Validate that ``p`` is an odd prime in the supported range."""
    if not isinstance(p, int) or isinstance(p, bool):
        raise DomainError(f"p must be an integer, got {p!r}")
    if p < 3 or p > MAX_PRIME or not is_prime(p):
        raise DomainError(f"p must be an odd prime with 3 <= p <= {MAX_PRIME}, got {p}")
    return p


@dataclass(frozen=True, order=True)
class ExponentMultiset:
    """A sorted multiset of residues mod ``p``."""

    p: int
    entries: tuple[int, ...]

    def __post_init__(self):
        ent = tuple(sorted(int(e) % self.p for e in self.entries))
        object.__setattr__(self, "entries", ent)

    @classmethod
    def of(cls, p: int, entries: Iterable[int]) -> "ExponentMultiset":
        return cls(p, tuple(entries))

    @property
    def n(self) -> int:
        return len(self.entries)

    def is_distinct(self) -> bool:
        return len(set(self.entries)) == len(self.entries)

    def total(self) -> int:
        return sum(self.entries) % self.p

    def encode(self) -> str:
        return f"p={self.p}:{_bracket(self.entries)}"

    def __str__(self) -> str:
        return _bracket(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True, order=True)
class RadiusClass:
    """Shift class of a multiset, stored through its canonical representative."""

    p: int
    rep: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.rep)

    def is_distinct(self) -> bool:
        return len(set(self.rep)) == len(self.rep)

    def as_multiset(self) -> ExponentMultiset:
        return ExponentMultiset(self.p, self.rep)

    def encode(self) -> str:
        return f"p={self.p}:{_bracket(self.rep)}"

    def __str__(self) -> str:
        return _bracket(self.rep)


def _bracket(entries: Sequence[int]) -> str:
    return "[" + ",".join(str(e) for e in entries) + "]"


_ENC = re.compile(r"^\s*p\s*=\s*(\d+)\s*:\s*\[([^\]]*)\]\s*$")


def parse_entries(text: str) -> tuple[int, ...]:
    """Parse ``"[0,1]"`` (or ``"0,1"``) into a tuple of integers."""
    body = text.strip()
    if body.startswith("[") and body.endswith("]"):
        body = body[1:-1]
    body = body.strip()
    if not body:
        return ()
    try:
        return tuple(int(tok) for tok in body.split(","))
    except ValueError as exc:
        raise DomainError(f"cannot parse entries from {text!r}") from exc


def decode_multiset(text: str) -> ExponentMultiset:
    """Inverse of :meth:`ExponentMultiset.encode`."""
    m = _ENC.match(text)
    if not m:
        raise DomainError(f"not a multiset encoding: {text!r}")
    p = check_prime(int(m.group(1)))
    return ExponentMultiset(p, parse_entries("[" + m.group(2) + "]"))


def decode_radius(text: str) -> RadiusClass:
    return radius_canonicalize(decode_multiset(text))


def _require_subset(tau: ExponentMultiset) -> None:
    if not tau.is_distinct():
        raise RepeatedEntries(f"{tau} has repeated entries")


def multiset_shift(tau: ExponentMultiset, a: int) -> ExponentMultiset:
    return ExponentMultiset(tau.p, tuple(e + a for e in tau.entries))


def complement(tau: ExponentMultiset) -> ExponentMultiset:
    _require_subset(tau)
    present = set(tau.entries)
    return ExponentMultiset(tau.p, tuple(e for e in range(tau.p) if e not in present))


def negate(tau: ExponentMultiset) -> ExponentMultiset:
    return ExponentMultiset(tau.p, tuple(-e for e in tau.entries))


def star(tau: ExponentMultiset) -> ExponentMultiset:
    return negate(complement(tau))


def shift_vector(taus: Sequence[ExponentMultiset], shifts: Sequence[int]) -> tuple[ExponentMultiset, ...]:
    if len(taus) != len(shifts):
        raise DomainError("exponent vector and shift vector differ in length")
    return tuple(multiset_shift(t, a) for t, a in zip(taus, shifts))


def star_vector(taus: Sequence[ExponentMultiset]) -> tuple[ExponentMultiset, ...]:
    return tuple(star(t) for t in taus)


def radius_canonicalize(m: ExponentMultiset) -> RadiusClass:
    p = m.p
    best = None
    for a in range(p):
        cand = tuple(sorted((e + a) % p for e in m.entries))
        if best is None or cand < best:
            best = cand
    return RadiusClass(p, best if best is not None else ())


def exponent_lift(rho: RadiusClass, a: int) -> ExponentMultiset:
    """The shift of the representative whose entries sum to ``a`` mod p."""
    p, n = rho.p, rho.n
    if n % p == 0:
        raise DomainError(f"lift needs n prime to p (n={n}, p={p})")
    delta = (a - sum(rho.rep)) * pow(n, -1, p) % p
    return ExponentMultiset(p, tuple(e + delta for e in rho.rep))


def radius_star(rho: RadiusClass) -> RadiusClass:
    if not rho.is_distinct():
        raise NotDistinctClass(f"{rho} has repeated entries")
    if rho.n % rho.p == 0:
        raise DomainError("radius_star needs 0 < n < p")
    return radius_canonicalize(star(exponent_lift(rho, 0)))


def enumerate_radii(p: int, n: int, distinct_only: bool = False) -> list[RadiusClass]:
    if not 1 <= n <= p:
        raise DomainError(f"need 1 <= n <= p, got n={n}, p={p}")
    seen = set()
    # every class has a representative containing 0
    pool = combinations(range(p), n) if distinct_only else combinations_with_replacement(range(p), n)
    for tup in pool:
        if tup[0] != 0:
            break
        seen.add(radius_canonicalize(ExponentMultiset(p, tup)))
    return sorted(seen)


def label_set(p: int) -> list[int]:
    """The labels 0, 1, ..., (p-3)/2 indexing distinct rank-2 radii."""
    return list(range((p - 1) // 2))


def iota(p: int, a: int) -> RadiusClass:
    """Class of F_p minus {0, -2a-1}, a radius of cardinality p - 2."""
    drop = {0, (-2 * a - 1) % p}
    return radius_canonicalize(ExponentMultiset(p, tuple(e for e in range(p) if e not in drop)))


def w_label(p: int, a: int) -> RadiusClass:
    """Class of {0, 2a+1}, the cardinality-2 radius matched to ``iota(p, a)``."""
    return radius_canonicalize(ExponentMultiset(p, (0, 2 * a + 1)))


def f_set_embeddings(p: int):
    """Return the label list with the two embeddings as dictionaries."""
    if p < 5:
        raise DomainError("the label set is only used for p >= 5")
    labels = label_set(p)
    return labels, {a: iota(p, a) for a in labels}, {a: w_label(p, a) for a in labels}


def w_inverse(rho: RadiusClass) -> int | None:
    """Label ``a`` with ``w_label(p, a) == rho``, or None."""
    if rho.n != 2:
        return None
    for a in label_set(rho.p):
        if w_label(rho.p, a) == rho:
            return a
    return None
