"""Exact arithmetic in F_p[x], F_p(x) and small matrices over them.

Polynomials are dense coefficient tuples (lowest degree first).  Rational
functions keep a monic denominator coprime to the numerator.  The matrix
helpers at the bottom work on polynomial matrices over the principal ideal
domain F_p[x] by unimodular column operations; they provide kernels that are
saturated sublattices, which is what sub-bundles on the affine line are.
"""

from __future__ import annotations

import math
import re
from itertools import combinations
from typing import Iterable, Sequence

from . import kernels as _k
from .errors import DomainError, HigherOrderPole, SaturationFailure

INF = "inf"


# ---------------------------------------------------------------------------
# Polynomials


class Poly:
    """Dense polynomial over F_p.  The zero polynomial has degree -1."""

    __slots__ = ("p", "c")

    def __init__(self, p: int, coeffs: Iterable[int] = ()):
        c = [int(v) % p for v in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.p = p
        self.c = tuple(c)

    @classmethod
    def _raw(cls, p: int, c) -> "Poly":
        obj = object.__new__(cls)
        obj.p = p
        obj.c = tuple(c)
        return obj

    @classmethod
    def x(cls, p: int) -> "Poly":
        return cls._raw(p, (0, 1))

    @classmethod
    def const(cls, p: int, a: int) -> "Poly":
        a %= p
        return cls._raw(p, (a,) if a else ())

    @classmethod
    def linear(cls, p: int, root: int) -> "Poly":
        """The monic polynomial x - root."""
        return cls(p, (-root, 1))

    @classmethod
    def from_roots(cls, p: int, roots: Iterable[int]) -> "Poly":
        out = cls.const(p, 1)
        for r in roots:
            out = out * cls.linear(p, r)
        return out

    # basic queries
    def degree(self) -> int:
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def is_one(self) -> bool:
        return self.c == (1,)

    def is_constant(self) -> bool:
        return len(self.c) <= 1

    def lc(self) -> int:
        return self.c[-1] if self.c else 0

    def __bool__(self) -> bool:
        return bool(self.c)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.c == ((other % self.p,) if other % self.p else ())
        return isinstance(other, Poly) and self.p == other.p and self.c == other.c

    def __hash__(self) -> int:
        return hash((self.p, self.c))

    # arithmetic
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, int):
            return Poly.const(self.p, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Poly._raw(self.p, _k.poly_add(self.c, other.c, self.p))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Poly._raw(self.p, _k.poly_sub(self.c, other.c, self.p))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __neg__(self):
        p = self.p
        return Poly._raw(p, tuple((-v) % p for v in self.c))

    def __mul__(self, other):
        if isinstance(other, int):
            a = other % self.p
            if a == 0:
                return Poly._raw(self.p, ())
            return Poly._raw(self.p, tuple(v * a % self.p for v in self.c))
        if not isinstance(other, Poly):
            return NotImplemented
        return Poly._raw(self.p, _k.poly_mul(self.c, other.c, self.p))

    __rmul__ = __mul__

    def __divmod__(self, other):
        other = self._coerce(other)
        q, r = _k.poly_divmod(self.c, other.c, self.p)
        return Poly._raw(self.p, q), Poly._raw(self.p, r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly.const(self.p, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q

    def monic(self) -> "Poly":
        if not self.c or self.c[-1] == 1:
            return self
        return self * pow(self.c[-1], -1, self.p)

    def derivative(self) -> "Poly":
        p = self.p
        return Poly(p, (i * v for i, v in enumerate(self.c) if i))

    def __call__(self, a: int) -> int:
        return _k.poly_eval(self.c, a % self.p, self.p)

    def reverse(self, n: int | None = None) -> "Poly":
        """x^n * f(1/x) with n defaulting to deg f."""
        if n is None:
            n = self.degree()
        if n < self.degree():
            raise ValueError("reverse length shorter than degree")
        padded = list(self.c) + [0] * (n + 1 - len(self.c))
        return Poly(self.p, reversed(padded))

    def valuation_at(self, root: int) -> int:
        """Multiplicity of (x - root) as a factor; infinite for zero."""
        if not self.c:
            return math.inf  # type: ignore[return-value]
        lin = Poly.linear(self.p, root)
        k, f = 0, self
        while True:
            q, r = divmod(f, lin)
            if r:
                return k
            f, k = q, k + 1

    def compose(self, other: "Poly") -> "Poly":
        out = Poly.const(self.p, 0)
        for coef in reversed(self.c):
            out = out * other + coef
        return out

    # printing
    def expr(self, var: str = "x") -> str:
        if not self.c:
            return "0"
        parts = []
        for i in range(len(self.c) - 1, -1, -1):
            v = self.c[i]
            if not v:
                continue
            if i == 0:
                parts.append(str(v))
            else:
                coef = "" if v == 1 else str(v)
                mono = var if i == 1 else f"{var}^{i}"
                parts.append(coef + mono)
        return "+".join(parts)

    def __str__(self) -> str:
        return f"{self.expr()} (mod {self.p})"

    def __repr__(self) -> str:
        return f"Poly({self.p}, {list(self.c)})"


_TERM = re.compile(r"([+-]?)\s*(\d*)\s*(?:\*?\s*([a-z])(?:\^(\d+))?)?")


def parse_poly(text: str, p: int) -> Poly:
    """Parse expressions such as ``"x^2+3x+1"`` or ``"2*x - 1"``."""
    s = text.strip().replace(" ", "")
    m = re.match(r"^(.*)\(mod(\d+)\)$", s)
    if m:
        s = m.group(1)
        if int(m.group(2)) != p:
            raise DomainError(f"modulus {m.group(2)} does not match p={p}")
    if s in ("", "0"):
        return Poly(p)
    coeffs: dict[int, int] = {}
    pos = 0
    while pos < len(s):
        mt = _TERM.match(s, pos)
        if not mt or mt.end() == pos:
            raise DomainError(f"cannot parse polynomial {text!r}")
        sign, num, var, power = mt.groups()
        if not num and not var:
            raise DomainError(f"cannot parse polynomial {text!r}")
        c = int(num) if num else 1
        if sign == "-":
            c = -c
        e = (int(power) if power else 1) if var else 0
        coeffs[e] = coeffs.get(e, 0) + c
        pos = mt.end()
    top = max(coeffs) if coeffs else 0
    return Poly(p, (coeffs.get(i, 0) for i in range(top + 1)))


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while b:
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """Return (g, s, t) with s*a + t*b = g, g monic."""
    p = a.p
    r0, r1 = a, b
    s0, s1 = Poly.const(p, 1), Poly.const(p, 0)
    t0, t1 = Poly.const(p, 0), Poly.const(p, 1)
    while r1:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if not r0:
        return r0, s0, t0
    inv = pow(r0.lc(), -1, p)
    return r0 * inv, s0 * inv, t0 * inv


# ---------------------------------------------------------------------------
# Rational functions


class RationalFunction:
    """Element of F_p(x) as num/den with den monic and gcd(num, den) = 1."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if isinstance(num, RationalFunction):
            if den is not None:
                raise TypeError("unexpected denominator")
            self.num, self.den = num.num, num.den
            return
        if den is None:
            self.num = num
            self.den = Poly._raw(num.p, (1,))
            return
        if isinstance(den, int):
            den = Poly.const(num.p, den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            self.num, self.den = num, Poly._raw(num.p, (1,))
            return
        if not den.is_constant():
            g = poly_gcd(num, den)
            if not g.is_one():
                num, den = num.exact_div(g), den.exact_div(g)
        lc = den.lc()
        if lc != 1:
            inv = pow(lc, -1, num.p)
            num, den = num * inv, den * inv
        self.num, self.den = num, den

    @classmethod
    def _raw(cls, num: Poly, den: Poly) -> "RationalFunction":
        obj = object.__new__(cls)
        obj.num, obj.den = num, den
        return obj

    @classmethod
    def const(cls, p: int, a: int) -> "RationalFunction":
        return cls._raw(Poly.const(p, a), Poly._raw(p, (1,)))

    @classmethod
    def x(cls, p: int) -> "RationalFunction":
        return cls._raw(Poly.x(p), Poly._raw(p, (1,)))

    @property
    def p(self) -> int:
        return self.num.p

    def is_zero(self) -> bool:
        return not self.num

    def is_polynomial(self) -> bool:
        return self.den.c == (1,)

    def is_constant(self) -> bool:
        return self.is_polynomial() and self.num.is_constant()

    def constant_value(self) -> int:
        if not self.is_constant():
            raise DomainError(f"{self} is not a constant")
        return self.num.c[0] if self.num.c else 0

    def __bool__(self) -> bool:
        return bool(self.num)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.is_polynomial() and self.num == other
        if isinstance(other, Poly):
            return self.is_polynomial() and self.num == other
        return isinstance(other, RationalFunction) and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Poly):
            return RationalFunction._raw(other, Poly._raw(other.p, (1,)))
        if isinstance(other, int):
            return RationalFunction.const(self.p, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.den.c == (1,) and o.den.c == (1,):
            return RationalFunction._raw(self.num + o.num, self.den)
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._raw(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, int):
            return RationalFunction._raw(self.num * other, self.den) if other % self.p else RationalFunction.const(self.p, 0)
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.den.c == (1,) and o.den.c == (1,):
            return RationalFunction._raw(self.num * o.num, self.den)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return RationalFunction(self.den ** (-e), self.num ** (-e))
        return RationalFunction._raw(self.num**e, self.den**e)

    def __call__(self, a: int) -> int:
        d = self.den(a)
        if d == 0:
            raise ZeroDivisionError(f"pole at {a}")
        return self.num(a) * pow(d, -1, self.p) % self.p

    def order_at(self, point) -> float:
        """Valuation at a finite point or at INF; +inf for the zero function."""
        if not self.num:
            return math.inf
        if point == INF:
            return self.den.degree() - self.num.degree()
        return self.num.valuation_at(point) - self.den.valuation_at(point)

    def value_at(self, point) -> int:
        """Value at a point where the function is regular."""
        if point != INF:
            return self(point)
        o = self.order_at(INF)
        if o > 0:
            return 0
        if o < 0:
            raise ZeroDivisionError("pole at infinity")
        return self.num.lc() * pow(self.den.lc(), -1, self.p) % self.p

    def derivative(self) -> "RationalFunction":
        return derivative(self)

    def expr(self, var: str = "x") -> str:
        if self.den.c == (1,):
            return self.num.expr(var)
        n = self.num.expr(var)
        d = self.den.expr(var)
        return f"({n})/({d})"

    def __str__(self) -> str:
        return f"{self.expr()} (mod {self.p})"

    def __repr__(self) -> str:
        return f"RationalFunction({self.expr()!r}, p={self.p})"


RF = RationalFunction


def as_rf(obj, p: int) -> RationalFunction:
    if isinstance(obj, RationalFunction):
        return obj
    if isinstance(obj, Poly):
        return RationalFunction._raw(obj, Poly._raw(p, (1,)))
    if isinstance(obj, int):
        return RationalFunction.const(p, obj)
    raise TypeError(f"cannot interpret {obj!r} as a rational function")


def parse_rf(text: str, p: int) -> RationalFunction:
    """Parse ``"num"`` or ``"(num)/(den)"``."""
    s = text.strip()
    m = re.match(r"^\((.*)\)/\((.*)\)$", s)
    if m:
        return RationalFunction(parse_poly(m.group(1), p), parse_poly(m.group(2), p))
    return as_rf(parse_poly(s, p), p)


def derivative(f: RationalFunction) -> RationalFunction:
    """Formal d/dx by the quotient rule."""
    if f.den.c == (1,):
        return RationalFunction._raw(f.num.derivative(), f.den)
    num = f.num.derivative() * f.den - f.num * f.den.derivative()
    return RationalFunction(num, f.den * f.den)


def chart_swap(f: RationalFunction) -> RationalFunction:
    """Substitute x -> 1/t (the result is returned in the same variable)."""
    dn, dd = f.num.degree(), f.den.degree()
    if not f.num:
        return f
    num = f.num.reverse()
    den = f.den.reverse()
    p = f.p
    tpow = Poly._raw(p, (0,) * abs(dd - dn) + (1,))
    if dd >= dn:
        return RationalFunction(num * tpow, den)
    return RationalFunction(num, den * tpow)


def residue_at(omega: RationalFunction, point) -> int:
    """Residue of omega dx at a finite point or at INF, assuming a simple pole."""
    p = omega.p
    if not omega.num:
        return 0
    if point == INF:
        t = RationalFunction.x(p)
        local = -(chart_swap(omega) / (t * t))
        if local.order_at(0) < -1:
            raise HigherOrderPole("pole of order > 1 at infinity")
        return (local * t).value_at(0)
    if omega.order_at(point) < -1:
        raise HigherOrderPole(f"pole of order > 1 at {point}")
    lin = as_rf(Poly.linear(p, point), p)
    return (omega * lin).value_at(point)


# ---------------------------------------------------------------------------
# Matrices


class RatMatrix:
    """Immutable rectangular matrix of rational functions over a common F_p."""

    __slots__ = ("p", "rows", "nrows", "ncols")

    def __init__(self, p: int, rows: Sequence[Sequence], ncols: int | None = None):
        self.p = p
        self.rows = tuple(tuple(as_rf(v, p) for v in r) for r in rows)
        self.nrows = len(self.rows)
        if ncols is None:
            ncols = len(self.rows[0]) if self.rows else 0
        self.ncols = ncols
        for r in self.rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix")

    @classmethod
    def zeros(cls, p: int, m: int, n: int) -> "RatMatrix":
        z = RationalFunction.const(p, 0)
        return cls(p, [[z] * n for _ in range(m)], n)

    @classmethod
    def identity(cls, p: int, n: int) -> "RatMatrix":
        z, o = RationalFunction.const(p, 0), RationalFunction.const(p, 1)
        return cls(p, [[o if i == j else z for j in range(n)] for i in range(n)], n)

    @classmethod
    def column(cls, p: int, entries: Sequence) -> "RatMatrix":
        return cls(p, [[e] for e in entries], 1)

    @classmethod
    def from_columns(cls, p: int, cols: Sequence[Sequence], nrows: int | None = None) -> "RatMatrix":
        if not cols:
            return cls(p, [[] for _ in range(nrows or 0)], 0)
        m = len(cols[0])
        return cls(p, [[c[i] for c in cols] for i in range(m)], len(cols))

    @classmethod
    def diagonal(cls, p: int, entries: Sequence) -> "RatMatrix":
        n = len(entries)
        z = RationalFunction.const(p, 0)
        return cls(p, [[entries[i] if i == j else z for j in range(n)] for i in range(n)], n)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def cols(self) -> list[tuple]:
        return [self.col(j) for j in range(self.ncols)]

    def select_cols(self, idx: Sequence[int]) -> "RatMatrix":
        return RatMatrix(self.p, [[r[j] for j in idx] for r in self.rows], len(idx))

    def select_rows(self, idx: Sequence[int]) -> "RatMatrix":
        return RatMatrix(self.p, [self.rows[i] for i in idx], self.ncols)

    def hstack(self, other: "RatMatrix") -> "RatMatrix":
        if self.nrows != other.nrows:
            raise ValueError("row mismatch in hstack")
        return RatMatrix(self.p, [a + b for a, b in zip(self.rows, other.rows)], self.ncols + other.ncols)

    def __eq__(self, other) -> bool:
        return isinstance(other, RatMatrix) and self.p == other.p and self.rows == other.rows and self.ncols == other.ncols

    def __hash__(self) -> int:
        return hash((self.p, self.rows))

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def T(self) -> "RatMatrix":
        return RatMatrix(self.p, [self.col(j) for j in range(self.ncols)], self.nrows)

    def map(self, fn) -> "RatMatrix":
        return RatMatrix(self.p, [[fn(v) for v in r] for r in self.rows], self.ncols)

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return RatMatrix(self.p, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return RatMatrix(self.p, [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __neg__(self) -> "RatMatrix":
        return self.map(lambda v: -v)

    def scale(self, f) -> "RatMatrix":
        f = as_rf(f, self.p)
        return self.map(lambda v: v * f)

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        p = self.p
        zero = RationalFunction.const(p, 0)
        ocols = [other.col(j) for j in range(other.ncols)]
        out = []
        for r in self.rows:
            nz = [(k, v) for k, v in enumerate(r) if v.num]
            row = []
            for c in ocols:
                acc = zero
                for k, v in nz:
                    w = c[k]
                    if w.num:
                        acc = acc + v * w
                row.append(acc)
            out.append(row)
        return RatMatrix(p, out, other.ncols)

    def is_zero(self) -> bool:
        return all(not v.num for r in self.rows for v in r)

    def is_polynomial(self) -> bool:
        return all(v.den.c == (1,) for r in self.rows for v in r)

    def trace(self) -> RationalFunction:
        acc = RationalFunction.const(self.p, 0)
        for i in range(min(self.nrows, self.ncols)):
            acc = acc + self.rows[i][i]
        return acc

    def evaluate(self, point) -> list[list[int]]:
        return [[v.value_at(point) for v in r] for r in self.rows]

    def derive(self, h=None) -> "RatMatrix":
        """Entrywise h * d/dx (h defaults to 1)."""
        if h is None:
            return self.map(derivative)
        h = as_rf(h, self.p)
        return self.map(lambda v: h * derivative(v))

    def chart_swap(self) -> "RatMatrix":
        return self.map(chart_swap)

    def min_order_at(self, point) -> float:
        return min((v.order_at(point) for r in self.rows for v in r), default=math.inf)

    def to_str_rows(self) -> list[list[str]]:
        return [[v.expr() for v in r] for r in self.rows]

    def __repr__(self) -> str:
        return f"RatMatrix(p={self.p}, {self.to_str_rows()})"

    # --- linear algebra over F_p(x) -------------------------------------
    def _echelon(self):
        """Row-reduce a copy; returns (rows, pivot columns, det sign/scale)."""
        p = self.p
        a = [list(r) for r in self.rows]
        piv = []
        det = RationalFunction.const(p, 1)
        r = 0
        for c in range(self.ncols):
            k = next((i for i in range(r, self.nrows) if a[i][c].num), None)
            if k is None:
                det = RationalFunction.const(p, 0)
                continue
            if k != r:
                a[r], a[k] = a[k], a[r]
                det = -det
            pv = a[r][c]
            det = det * pv
            inv = pv.inverse()
            a[r] = [v * inv for v in a[r]]
            for i in range(self.nrows):
                if i != r and a[i][c].num:
                    f = a[i][c]
                    a[i] = [vi - f * vr for vi, vr in zip(a[i], a[r])]
            piv.append(c)
            r += 1
            if r == self.nrows:
                break
        return a, piv, det

    def rank(self) -> int:
        return len(self._echelon()[1])

    def det(self) -> RationalFunction:
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        if self.nrows == 0:
            return RationalFunction.const(self.p, 1)
        a, piv, det = self._echelon()
        if len(piv) < self.nrows:
            return RationalFunction.const(self.p, 0)
        return det

    def inverse(self) -> "RatMatrix":
        n = self.nrows
        if n != self.ncols:
            raise ValueError("inverse of a non-square matrix")
        aug = self.hstack(RatMatrix.identity(self.p, n))
        a, piv, _ = aug._echelon()
        if piv[:n] != list(range(n)):
            raise ZeroDivisionError("singular matrix")
        return RatMatrix(self.p, [row[n:] for row in a], n)

    def nullspace(self) -> "RatMatrix":
        """Basis (columns) of the kernel over F_p(x)."""
        a, piv, _ = self._echelon()
        free = [c for c in range(self.ncols) if c not in piv]
        p = self.p
        cols = []
        for f in free:
            v = [RationalFunction.const(p, 0)] * self.ncols
            v[f] = RationalFunction.const(p, 1)
            for r, c in enumerate(piv):
                v[c] = -a[r][f]
            cols.append(v)
        return RatMatrix.from_columns(p, cols, self.ncols)

    def solve(self, rhs: "RatMatrix") -> "RatMatrix":
        """X with self @ X == rhs; self must have full column rank."""
        aug = self.hstack(rhs)
        a, piv, _ = aug._echelon()
        n = self.ncols
        if piv[:n] != list(range(n)) or any(c >= n for c in piv):
            raise DomainError("system is singular or inconsistent")
        return RatMatrix(self.p, [row[n:] for row in a[:n]], rhs.ncols)

    def contains_columns(self, other: "RatMatrix") -> bool:
        """Whether every column of ``other`` lies in the F_p(x)-span of self."""
        return self.hstack(other).rank() == self.rank()


def kron(a: RatMatrix, b: RatMatrix) -> RatMatrix:
    rows = []
    for ra in a.rows:
        for rb in b.rows:
            rows.append([x * y for x in ra for y in rb])
    return RatMatrix(a.p, rows, a.ncols * b.ncols)


# ---------------------------------------------------------------------------
# Polynomial matrices over F_p[x]


def _clear_row_denominators(M: RatMatrix) -> list[list[Poly]]:
    out = []
    for r in M.rows:
        d = Poly.const(M.p, 1)
        for v in r:
            if v.den.c != (1,):
                d = (d * v.den).exact_div(poly_gcd(d, v.den))
        out.append([(v * d).num for v in r])
    return out


def _clear_col_denominators(M: RatMatrix) -> list[list[Poly]]:
    return [list(c) for c in zip(*_clear_row_denominators(M.T()))] if M.ncols else [[] for _ in range(M.nrows)]


def column_reduce(M: list[list[Poly]], p: int, ncols: int, track: bool = True):
    """Unimodular column reduction of a polynomial matrix.

    Returns ``(H, W, pivots, free)`` where ``H = M W`` is in column echelon
    form with monic pivots and reduced entries to the left of each pivot,
    ``pivots`` lists (row, col) pairs and ``free`` lists the columns of H
    that vanish identically.  W is unimodular.
    """
    H = [list(r) for r in M]
    W = [[Poly.const(p, 1 if i == j else 0) for j in range(ncols)] for i in range(ncols)] if track else []
    active = list(range(ncols))
    pivots: list[tuple[int, int]] = []
    mats = [H, W] if track else [H]

    def axpy(j: int, k: int, q: Poly) -> None:
        # column j -= q * column k
        for mat in mats:
            for row in mat:
                if row[k]:
                    row[j] = row[j] - q * row[k]

    def scale(k: int, a: int) -> None:
        for mat in mats:
            for row in mat:
                row[k] = row[k] * a

    for i in range(len(H)):
        while True:
            nz = [j for j in active if H[i][j]]
            if len(nz) <= 1:
                break
            k = min(nz, key=lambda j: (H[i][j].degree(), j))
            for j in nz:
                if j != k:
                    q = H[i][j] // H[i][k]
                    axpy(j, k, q)
        nz = [j for j in active if H[i][j]]
        if not nz:
            continue
        k = nz[0]
        lc = H[i][k].lc()
        if lc != 1:
            scale(k, pow(lc, -1, p))
        for _, k0 in pivots:
            if H[i][k0] and H[i][k0].degree() >= H[i][k].degree():
                axpy(k0, k, H[i][k0] // H[i][k])
        pivots.append((i, k))
        active.remove(k)
    return H, W, pivots, active


def _poly_rows_to_matrix(rows: list[list[Poly]], p: int, ncols: int) -> RatMatrix:
    return RatMatrix(p, [[as_rf(v, p) for v in r] for r in rows], ncols)


def hermite_form(K: RatMatrix) -> RatMatrix:
    """Canonical column echelon basis of the F_p[x]-span of polynomial columns."""
    if not K.is_polynomial():
        raise DomainError("hermite_form needs polynomial entries")
    rows = [[v.num for v in r] for r in K.rows]
    H, _, pivots, _ = column_reduce(rows, K.p, K.ncols, track=False)
    order = [k for _, k in pivots]
    return RatMatrix(K.p, [[as_rf(r[k], K.p) for k in order] for r in H], len(order))


def hermite_kernel_basis(M: RatMatrix) -> RatMatrix:
    """Saturated F_p[x]-basis (as columns) of the kernel of M."""
    p, m = M.p, M.ncols
    if m == 0:
        return RatMatrix(p, [], 0)
    if M.nrows == 0:
        return RatMatrix.identity(p, m)
    rows = _clear_row_denominators(M)
    _, W, _, free = column_reduce(rows, p, m, track=True)
    if not free:
        return RatMatrix(p, [[] for _ in range(m)], 0)
    K = RatMatrix(p, [[as_rf(W[i][j], p) for j in free] for i in range(m)], len(free))
    return hermite_form(K)


def saturate(K: RatMatrix) -> RatMatrix:
    """Basis of (F_p(x)-span of the columns of K) intersected with F_p[x]^m."""
    p, m = K.p, K.nrows
    if K.ncols == 0:
        return K
    ann = hermite_kernel_basis(K.T())  # columns: functionals killing span K
    if ann.ncols == 0:
        return RatMatrix.identity(p, m)
    sat = hermite_kernel_basis(ann.T())
    if sat.ncols != K.rank():
        raise SaturationFailure("saturation changed the rank")
    return sat


def maximal_minor_gcd(K: RatMatrix) -> Poly:
    """gcd of the maximal minors of a polynomial matrix of full column rank.

    A polynomial basis is saturated exactly when this gcd is 1.
    """
    rows = [[v.num for v in r] for r in K.T().rows]
    H, _, pivots, _ = column_reduce(rows, K.p, K.nrows, track=False)
    d = Poly.const(K.p, 1)
    if len(pivots) < K.ncols:
        return Poly.const(K.p, 0)
    for i, k in pivots:
        d = d * H[i][k]
    return d.monic()


def is_saturated(K: RatMatrix) -> bool:
    return K.is_polynomial() and maximal_minor_gcd(K).is_one()


def minors(K: RatMatrix, k: int):
    for rows in combinations(range(K.nrows), k):
        yield K.select_rows(rows).det()


def saturate_at_infinity(G: RatMatrix, K: RatMatrix) -> RatMatrix:
    """Basis of the infinity-lattice of the sub-bundle spanned by K.

    ``G`` holds the infinity frame of the ambient bundle (columns in affine
    coordinates) and ``K`` spans the generic fibre of the sub-bundle.  The
    result is a basis of (O_inf-span of G) intersected with span(K),
    written in affine coordinates.
    """
    p = G.p
    coords = G.inverse() @ K
    local = coords.chart_swap()
    cleared = RatMatrix(p, _clear_col_denominators(local), local.ncols)
    sat_t = saturate(cleared)
    back = sat_t.chart_swap()
    return G @ back


def subbundle_degree(G: RatMatrix, K: RatMatrix) -> int:
    """Degree of the sub-bundle with saturated affine basis K.

    Uses the minimum order at infinity of the maximal minors of G^{-1} K,
    which needs no infinity saturation.
    """
    coords = G.inverse() @ K
    k = K.ncols
    if k == 0:
        return 0
    return int(min(m.order_at(INF) for m in minors(coords, k)))


def roots_with_multiplicity(f: Poly) -> list[int] | None:
    """All roots in F_p with multiplicity, or None if f does not split."""
    p = f.p
    out: list[int] = []
    g = f
    for a in range(p):
        lin = Poly.linear(p, a)
        while g.degree() > 0:
            q, r = divmod(g, lin)
            if r:
                break
            out.append(a)
            g = q
    if g.degree() > 0:
        return None
    return out


def charpoly(mat: Sequence[Sequence[int]], p: int) -> Poly:
    """det(t I - mat) for a matrix over F_p (Hessenberg-free, by Gaussian
    elimination over F_p(t))."""
    n = len(mat)
    t = Poly.x(p)
    rows = [[(t if i == j else Poly.const(p, 0)) - Poly.const(p, mat[i][j]) for j in range(n)] for i in range(n)]
    d = RatMatrix(p, rows, n).det()
    if not d.is_polynomial():
        raise ArithmeticError("characteristic polynomial is not a polynomial")
    return d.num
