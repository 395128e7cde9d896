"""Three-point tables, fusion rings and genus-g counts of dormant sl_n opers.

The rank-2 three-point numbers are the indicator of the set W of label
triples (s, t, u) satisfying the triangle inequalities and s + t + u <= p - 2.
Labels a in {0, ..., (p-3)/2} stand for the radius class of {0, 2a + 1}.
The star duality transports a table at rank n to one at rank p - n.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations_with_replacement, permutations, product
from typing import Iterable, Sequence

import mpmath

from .errors import DegenerateSpectrum, DomainError, IntegralityFailure, NoUnit, NotAssociative
from .fpcalc import (
    RadiusClass,
    check_prime,
    decode_radius,
    label_set,
    radius_canonicalize,
    radius_star,
    w_label,
    ExponentMultiset,
    parse_entries,
)

DEFAULT_DPS = 40
INTEGRALITY_TOL = 1e-6


def in_W(p: int, s: int, t: int, u: int) -> bool:
    return s <= t + u and t <= u + s and u <= s + t and s + t + u <= p - 2


def sl2_three_point(p: int, a: int, b: int, c: int) -> int:
    check_prime(p)
    labels = label_set(p)
    for x in (a, b, c):
        if x not in labels:
            raise DomainError(f"label {x} outside 0..{(p - 3) // 2}")
    return 1 if in_W(p, a, b, c) else 0


@dataclass(frozen=True)
class ThreePointTable:
    """Symmetric three-point numbers on an index set of radius classes.

    ``values`` maps sorted index triples to their (nonzero) value.
    """

    p: int
    n: int
    basis: tuple
    values: dict = field(hash=False, compare=True)

    def index(self, rho: RadiusClass) -> int | None:
        try:
            return self.basis.index(rho)
        except ValueError:
            return None

    def N(self, i: int, j: int, k: int) -> int:
        return self.values.get(tuple(sorted((i, j, k))), 0)

    def value(self, r1: RadiusClass, r2: RadiusClass, r3: RadiusClass) -> int:
        idx = [self.index(r) for r in (r1, r2, r3)]
        if None in idx:
            return 0
        return self.N(*idx)

    def ordered_mass(self) -> int:
        m = len(self.basis)
        return sum(self.N(i, j, k) for i, j, k in product(range(m), repeat=3))

    def to_json(self) -> str:
        doc = {
            "p": self.p,
            "n": self.n,
            "basis": [str(b) for b in self.basis],
            "three_point": [[i, j, k, v] for (i, j, k), v in sorted(self.values.items())],
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ThreePointTable":
        doc = json.loads(text)
        p, n = int(doc["p"]), int(doc["n"])
        basis = tuple(radius_canonicalize(ExponentMultiset(p, parse_entries(b))) for b in doc["basis"])
        values = {}
        for i, j, k, v in doc["three_point"]:
            if not i <= j <= k:
                raise DomainError("three-point indices must be sorted")
            if v:
                values[(i, j, k)] = int(v)
        return cls(p, n, basis, values)


def sl2_table(p: int) -> ThreePointTable:
    check_prime(p)
    labels = label_set(p)
    basis = tuple(w_label(p, a) for a in labels)
    values = {}
    for i, j, k in combinations_with_replacement(range(len(labels)), 3):
        if in_W(p, labels[i], labels[j], labels[k]):
            values[(i, j, k)] = 1
    return ThreePointTable(p, 2, basis, values)


def transport_star(table: ThreePointTable) -> ThreePointTable:
    """Re-index a table by the star duality of radii (rank n becomes p - n)."""
    basis = tuple(radius_star(b) for b in table.basis)
    return ThreePointTable(table.p, table.p - table.n, basis, dict(table.values))


def table_for(p: int, n: int) -> ThreePointTable:
    if n == 2:
        return sl2_table(p)
    if n == p - 2:
        return transport_star(sl2_table(p))
    raise DomainError(f"three-point data is only available for n = 2 and n = p - 2 (got n={n}, p={p})")


# ---------------------------------------------------------------------------
# rings


@dataclass(frozen=True, eq=False)
class FusionRing:
    table: ThreePointTable
    unit: int

    @property
    def rank(self) -> int:
        return len(self.table.basis)

    @property
    def basis(self) -> tuple:
        return self.table.basis

    def product(self, i: int, j: int) -> list[int]:
        return [self.table.N(i, j, k) for k in range(self.rank)]

    def mul(self, x: Sequence[int], y: Sequence[int]) -> list[int]:
        out = [0] * self.rank
        for i, a in enumerate(x):
            if not a:
                continue
            for j, b in enumerate(y):
                if not b:
                    continue
                for k, c in enumerate(self.product(i, j)):
                    out[k] += a * b * c
        return out

    def basis_vector(self, i: int) -> list[int]:
        v = [0] * self.rank
        v[i] = 1
        return v

    def mult_matrix(self, i: int) -> list[list[int]]:
        """Matrix of multiplication by e_i (column j is e_i * e_j)."""
        return [[self.table.N(i, j, k) for j in range(self.rank)] for k in range(self.rank)]

    @cached_property
    def casimir(self) -> list[int]:
        out = [0] * self.rank
        for i in range(self.rank):
            for k, c in enumerate(self.product(i, i)):
                out[k] += c
        return out

    @cached_property
    def characters(self) -> "CharacterTable":
        return characters(self)


def build_fusion_ring(table: ThreePointTable) -> FusionRing:
    m = len(table.basis)
    unit = None
    for u in range(m):
        if all(table.N(u, b, k) == (1 if k == b else 0) for b in range(m) for k in range(m)):
            unit = u
            break
    if unit is None:
        raise NoUnit("no basis element acts as a unit")
    for a, b, c in product(range(m), repeat=3):
        # (e_a e_b) e_c == e_a (e_b e_c)
        for d in range(m):
            lhs = sum(table.N(a, b, k) * table.N(k, c, d) for k in range(m))
            rhs = sum(table.N(b, c, k) * table.N(a, k, d) for k in range(m))
            if lhs != rhs:
                raise NotAssociative(f"associativity fails for basis elements {a}, {b}, {c}")
    return FusionRing(table, unit)


# ---------------------------------------------------------------------------
# characters


@dataclass(frozen=True)
class CharacterTable:
    """Rows are characters; ``values[c][i]`` is the value on basis element i."""

    values: tuple
    eps: float
    dps: int

    def __len__(self) -> int:
        return len(self.values)

    def evaluate(self, c: int, x: Sequence[int]):
        return mpmath.fsum(a * v for a, v in zip(x, self.values[c]))


def characters(ring: FusionRing, eps: float = 1e-20, dps: int = DEFAULT_DPS, attempts: int = 4) -> CharacterTable:
    """Simultaneous eigenvectors of the commuting (symmetric) multiplication matrices."""
    m = ring.rank
    for attempt in range(attempts):
        with mpmath.workdps(dps):
            weights = [mpmath.mpf(1) / (mpmath.mpf(i + 2 + attempt) + mpmath.pi) for i in range(m)]
            combo = mpmath.zeros(m, m)
            mats = [mpmath.matrix(ring.mult_matrix(i)) for i in range(m)]
            for w, M in zip(weights, mats):
                combo += w * M
            evals, evecs = mpmath.eigsy(combo)
            gap = min((abs(evals[i] - evals[j]) for i in range(m) for j in range(i + 1, m)), default=mpmath.mpf(1))
            if gap < mpmath.mpf(10) ** (-(dps // 3)):
                dps *= 2
                continue
            rows = []
            for c in range(m):
                v = evecs[:, c]
                norm = (v.T * v)[0]
                row = tuple(((v.T * mats[i] * v)[0] / norm) for i in range(m))
                rows.append(row)
            table = CharacterTable(tuple(rows), eps, dps)
            if _multiplicative(ring, table, eps):
                return table
            dps *= 2
    raise DegenerateSpectrum("could not separate the characters of the fusion ring")


def _multiplicative(ring: FusionRing, table: CharacterTable, eps: float) -> bool:
    m = ring.rank
    for row in table.values:
        if abs(row[ring.unit] - 1) > eps:
            return False
        for i in range(m):
            for j in range(i, m):
                lhs = mpmath.fsum(c * row[k] for k, c in enumerate(ring.product(i, j)))
                if abs(lhs - row[i] * row[j]) > eps:
                    return False
    return True


# ---------------------------------------------------------------------------
# genus-g counts


def _indices(ring: FusionRing, radii: Iterable) -> list[int] | None:
    out = []
    for r in radii:
        if isinstance(r, int):
            out.append(r)
            continue
        if isinstance(r, str):
            r = decode_radius(r) if "=" in r else radius_canonicalize(ExponentMultiset(ring.table.p, parse_entries(r)))
        i = ring.table.index(r)
        if i is None:
            return None
        out.append(i)
    return out


def character_sum(ring: FusionRing, g: int, idx: Sequence[int]):
    table = ring.characters
    cas = ring.casimir
    with mpmath.workdps(table.dps):
        total = mpmath.mpf(0)
        for c in range(len(table)):
            row = table.values[c]
            chi_cas = table.evaluate(c, cas)
            term = chi_cas ** (g - 1)
            for i in idx:
                term *= row[i]
            total += term
        return total


def genus_degree(ring: FusionRing, g: int, radii: Sequence = (), method: str = "character") -> int:
    """Number of dormant opers of genus g with the given radii (as an integer)."""
    if g < 0:
        raise DomainError("genus must be non-negative")
    if g == 0 and len(radii) < 3:
        raise DomainError("genus 0 needs at least three marked points")
    idx = _indices(ring, radii)
    if idx is None:
        return 0
    if method == "factorization":
        return factorization_degree(ring, g, idx)
    if method != "character":
        raise DomainError(f"unknown method {method!r}")
    val = character_sum(ring, g, idx)
    nearest = int(mpmath.nint(val))
    residual = abs(val - nearest)
    if residual > INTEGRALITY_TOL:
        raise IntegralityFailure(mpmath.nstr(val, 20), mpmath.nstr(residual, 5))
    if nearest < 0:
        raise IntegralityFailure(mpmath.nstr(val, 20), "negative")
    return nearest


def factorization_degree(ring: FusionRing, g: int, idx: Sequence[int]) -> int:
    """Exact genus-0 count by repeatedly splitting off two points.

    Uses N(a, b, rest) = sum_l N(a, b, l) N(l, rest); only genus 0 is
    reachable this way.
    """
    if g != 0:
        raise DomainError("the factorization method only reduces genus 0 counts")
    vec = ring.basis_vector(idx[0])
    for i in idx[1:-1]:
        vec = ring.mul(vec, ring.basis_vector(i))
    last = idx[-1]
    # pairing with trivial involution: coefficient of the unit in vec * e_last
    return ring.mul(vec, ring.basis_vector(last))[ring.unit]


def verify_factorization(ring: FusionRing, g1: int, g2: int, x: Sequence, y: Sequence) -> bool:
    """Separating gluing rule: N_{g1+g2}(x + y) = sum_l N_{g1}(x + l) N_{g2}(y + l)."""
    if len(x) + 1 < 3 - 2 * g1 or len(y) + 1 < 3 - 2 * g2:
        raise DomainError("arity below the stability bound")
    xi, yi = _indices(ring, x), _indices(ring, y)
    if xi is None or yi is None:
        return True
    lhs = genus_degree(ring, g1 + g2, list(xi) + list(yi))
    rhs = sum(genus_degree(ring, g1, list(xi) + [l]) * genus_degree(ring, g2, list(yi) + [l]) for l in range(ring.rank))
    return lhs == rhs


def fusion_ring(p: int, n: int = 2) -> FusionRing:
    return build_fusion_ring(table_for(p, n))
