"""Exact arithmetic in Q(zeta_p) in the power basis 1, zeta, ..., zeta^{p-2}."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import DomainError
from .fpcalc import check_prime


def _trim(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


def _pmul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _pdivmod(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple[list, list]:
    a = list(a)
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    db, lead = len(b) - 1, b[-1]
    q = [Fraction(0)] * max(len(a) - db, 0)
    while len(a) - 1 >= db and a:
        k = len(a) - 1 - db
        f = a[-1] / lead
        q[k] = f
        for j, y in enumerate(b):
            a[k + j] -= f * y
        _trim(a)
    return _trim(q), a


def _psub(a: Sequence[Fraction], b: Sequence[Fraction]) -> list:
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


class CyclotomicRational:
    """An element sum_i a_i zeta^i (0 <= i <= p-2) with rational a_i."""

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs: Sequence = ()):
        self.p = check_prime(p)
        c = [Fraction(v) for v in coeffs]
        if len(c) > p - 1:
            c = _reduce(c, p)
        self.coeffs = tuple(c + [Fraction(0)] * (p - 1 - len(c)))

    @classmethod
    def zeta(cls, p: int, k: int = 1) -> "CyclotomicRational":
        k %= p
        c = [0] * p
        c[k] = 1
        return cls(p, c)

    @classmethod
    def integer(cls, p: int, a) -> "CyclotomicRational":
        return cls(p, [a])

    def _coerce(self, other) -> "CyclotomicRational":
        if isinstance(other, CyclotomicRational):
            if other.p != self.p:
                raise DomainError("elements of different cyclotomic fields")
            return other
        return CyclotomicRational(self.p, [other])

    def __eq__(self, other) -> bool:
        try:
            o = self._coerce(other)
        except (DomainError, TypeError):
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self) -> int:
        return hash((self.p, self.coeffs))

    def __add__(self, other):
        o = self._coerce(other)
        return CyclotomicRational(self.p, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicRational(self.p, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return CyclotomicRational(self.p, _pmul(_trim(list(self.coeffs)), _trim(list(o.coeffs))))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def inverse(self) -> "CyclotomicRational":
        """Inverse through the extended Euclidean algorithm against Phi_p."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta_p)")
        phi = [Fraction(1)] * self.p
        a = _trim(list(self.coeffs))
        r0, r1 = phi, a
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _pdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _psub(s0, _pmul(q, s1))
        if not r1:
            raise ZeroDivisionError("element shares a factor with the cyclotomic polynomial")
        c = r1[0]
        return CyclotomicRational(self.p, [v / c for v in s1])

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = CyclotomicRational.integer(self.p, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def is_rational_integer(self) -> int | None:
        if any(self.coeffs[1:]):
            return None
        a0 = self.coeffs[0]
        if a0.denominator != 1:
            return None
        return int(a0)

    def __repr__(self) -> str:
        terms = [f"{a}*z^{i}" for i, a in enumerate(self.coeffs) if a]
        return f"CyclotomicRational(p={self.p}, {' + '.join(terms) or '0'})"


def _reduce(c: list, p: int) -> list:
    """Fold exponents >= p with zeta^p = 1, then subtract the top coefficient times Phi_p."""
    folded = [Fraction(0)] * p
    for i, v in enumerate(c):
        folded[i % p] += v
    top = folded[p - 1]
    return [v - top for v in folded[: p - 1]]


def cyclo_add(x: CyclotomicRational, y: CyclotomicRational) -> CyclotomicRational:
    return x + y


def cyclo_mul(x: CyclotomicRational, y: CyclotomicRational) -> CyclotomicRational:
    return x * y


def cyclo_inv(x: CyclotomicRational) -> CyclotomicRational:
    return x.inverse()


def is_rational_integer(x: CyclotomicRational) -> int | None:
    return x.is_rational_integer()
