"""The marked projective line, its log tangent field, and line bundles on it.

Every vector bundle is modelled by two lattices in F_p(x)^m: the standard
lattice F_p[x]^m over the affine chart and, near infinity, the span of the
columns of a matrix ``G`` over the local ring at infinity.  Line bundles are
kept symbolically as ``T^k (D)``: the k-th power of the log tangent bundle
twisted by a divisor D.  Their affine generator is ``d^k / prod (x - l)^{D_l}``
where ``d = h d/dx`` is the global log vector field.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from ..errors import DomainError
from ..fpcalc import check_prime
from ..funcfield import INF, RF, Poly, RatMatrix, as_rf, derivative


def parse_point(tok, p: int):
    if isinstance(tok, str):
        t = tok.strip().lower()
        if t in ("inf", "infinity", "oo"):
            return INF
        try:
            return int(t) % p
        except ValueError as exc:
            raise DomainError(f"bad marked point {tok!r}") from exc
    return int(tok) % p


@dataclass(frozen=True)
class MarkedLine:
    """P^1 over F_p with r >= 3 distinct marked points, infinity among them."""

    p: int
    points: tuple

    def __post_init__(self):
        check_prime(self.p)
        pts = tuple(parse_point(t, self.p) for t in self.points)
        object.__setattr__(self, "points", pts)
        if len(set(pts)) != len(pts):
            raise DomainError("marked points must be distinct")
        if INF not in pts:
            raise DomainError("infinity must be a marked point")
        if len(pts) < 3:
            raise DomainError("need at least three marked points")

    @classmethod
    def parse(cls, p: int, text: str) -> "MarkedLine":
        return cls(p, tuple(t for t in text.split(",") if t.strip()))

    @classmethod
    def standard(cls, p: int) -> "MarkedLine":
        return cls(p, (0, 1, INF))

    @property
    def r(self) -> int:
        return len(self.points)

    @property
    def finite(self) -> tuple[int, ...]:
        return tuple(t for t in self.points if t != INF)

    @cached_property
    def h(self) -> Poly:
        return Poly.from_roots(self.p, self.finite)

    @cached_property
    def h_rf(self) -> RF:
        return as_rf(self.h, self.p)

    @cached_property
    def u(self) -> RF:
        """Ratio with t d/dt = u * d at infinity (t = 1/x)."""
        return -(RF.x(self.p) / self.h_rf)

    @property
    def tangent_degree(self) -> int:
        return 2 - self.r

    @property
    def field(self) -> "LogVectorField":
        return LogVectorField(self.p, self.h_rf)

    def describe(self) -> str:
        return ",".join(str(t) for t in self.points)


@dataclass(frozen=True)
class LogVectorField:
    """The derivation h * d/dx on F_p(x)."""

    p: int
    h: RF

    def apply(self, f) -> RF:
        return self.h * derivative(as_rf(f, self.p))

    def apply_matrix(self, M: RatMatrix) -> RatMatrix:
        return M.derive(self.h)

    @cached_property
    def symbolic_power(self) -> RF:
        return symbolic_power(self)


def symbolic_power(field_: LogVectorField) -> RF:
    """g with (h d/dx)^p = g * (h d/dx) as derivations, g = d^p(x) / h."""
    f = RF.x(field_.p)
    for _ in range(field_.p):
        f = field_.apply(f)
    return f / field_.h


def _norm_divisor(divisor, p: int) -> tuple:
    items: dict = {}
    pairs = divisor.items() if isinstance(divisor, Mapping) else divisor
    for pt, m in pairs:
        q = parse_point(pt, p)
        items[q] = items.get(q, 0) + int(m)
    keyed = sorted(((k, v) for k, v in items.items() if v), key=lambda kv: (kv[0] == INF, kv[0] if kv[0] != INF else 0))
    return tuple(keyed)


@dataclass(frozen=True)
class LineBundleDatum:
    """The line bundle T^k(D) on a marked line."""

    base: MarkedLine
    tangent_power: int = 0
    divisor: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "divisor", _norm_divisor(self.divisor, self.base.p))

    @property
    def p(self) -> int:
        return self.base.p

    @property
    def degree(self) -> int:
        return self.tangent_power * self.base.tangent_degree + sum(m for _, m in self.divisor)

    def multiplicity(self, pt) -> int:
        return dict(self.divisor).get(pt, 0)

    @cached_property
    def affine_twist(self) -> RF:
        """prod (x - l)^{-D_l}: the factor in front of d^k in the affine generator."""
        p = self.p
        out = RF.const(p, 1)
        for pt, m in self.divisor:
            if pt == INF:
                continue
            lin = as_rf(Poly.linear(p, pt), p)
            out = out * lin ** (-m)
        return out

    @cached_property
    def infinity_ratio(self) -> RF:
        """The generator at infinity as a multiple of the affine generator."""
        p = self.p
        g = self.base.u ** self.tangent_power
        m_inf = self.multiplicity(INF)
        if m_inf:
            g = g * RF.x(p) ** m_inf
        return g / self.affine_twist

    def tensor(self, other: "LineBundleDatum") -> "LineBundleDatum":
        if other.base != self.base:
            raise DomainError("line bundles live on different bases")
        div = dict(self.divisor)
        for pt, m in other.divisor:
            div[pt] = div.get(pt, 0) + m
        return LineBundleDatum(self.base, self.tangent_power + other.tangent_power, tuple(div.items()))

    def dual(self) -> "LineBundleDatum":
        return LineBundleDatum(self.base, -self.tangent_power, tuple((pt, -m) for pt, m in self.divisor))

    def power(self, n: int) -> "LineBundleDatum":
        return LineBundleDatum(self.base, n * self.tangent_power, tuple((pt, n * m) for pt, m in self.divisor))

    def twist(self, divisor: Iterable) -> "LineBundleDatum":
        return self.tensor(LineBundleDatum(self.base, 0, tuple(divisor)))

    @classmethod
    def tangent(cls, base: MarkedLine, k: int = 1) -> "LineBundleDatum":
        return cls(base, k, ())

    @classmethod
    def trivial(cls, base: MarkedLine) -> "LineBundleDatum":
        return cls(base, 0, ())

    def describe(self) -> str:
        div = ",".join(f"{pt}:{m}" for pt, m in self.divisor) or "-"
        return f"T^{self.tangent_power}({div})"


@dataclass(frozen=True)
class LineConnection:
    """A log connection on a line bundle: d(generator) = omega * generator."""

    bundle: LineBundleDatum
    omega: RF

    @property
    def base(self) -> MarkedLine:
        return self.bundle.base

    def tensor(self, other: "LineConnection") -> "LineConnection":
        return LineConnection(self.bundle.tensor(other.bundle), self.omega + other.omega)

    def dual(self) -> "LineConnection":
        return LineConnection(self.bundle.dual(), -self.omega)

    def power(self, n: int) -> "LineConnection":
        return LineConnection(self.bundle.power(n), self.omega * n)

    def to_connection(self):
        from .connection import LogConnection

        p = self.bundle.p
        return LogConnection(
            self.base,
            RatMatrix(p, [[self.omega]], 1),
            RatMatrix(p, [[self.bundle.infinity_ratio]], 1),
        )

    @classmethod
    def frobenius_tangent(cls, base: MarkedLine, s: int = 1) -> "LineConnection":
        """T^{ps} with its canonical connection (the frame d^{ps} is horizontal)."""
        return cls(LineBundleDatum.tangent(base, base.p * s), RF.const(base.p, 0))

    @classmethod
    def from_divisor_twist(cls, base: MarkedLine, divisor) -> "LineConnection":
        """O(D) with the connection induced from the trivial one."""
        bundle = LineBundleDatum(base, 0, tuple(divisor))
        psi = bundle.affine_twist
        return cls(bundle, base.field.apply(psi) / psi)
