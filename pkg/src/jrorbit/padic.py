"""Exact arithmetic in Q_p and in the unramified quadratic extension Q_p(sqrt d).

Everything is carried out in the global model Q(sqrt d): an element is a pair of
rationals (a, b) standing for a + b*sqrt(d).  Because p is odd and d is a unit
nonresidue mod p, the p-adic valuation on Q(sqrt d) is simply the minimum of the
valuations of the two coordinates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import InvalidContext, ZeroArgument

INF = math.inf

Rational = Union[int, Fraction]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


def is_squarefree(n: int) -> bool:
    n = abs(n)
    if n == 0:
        return False
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def vp_int(n: int, p: int) -> float:
    if n == 0:
        return INF
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def vp(x: Rational, p: int):
    """p-adic valuation of a rational; +inf for zero."""
    x = Fraction(x)
    if x == 0:
        return INF
    return vp_int(x.numerator, p) - vp_int(x.denominator, p)


def unit_part(x: Rational, p: int) -> Fraction:
    x = Fraction(x)
    v = vp(x, p)
    return x / Fraction(p) ** v


def frac_mod(x: Rational, p: int, k: int) -> int:
    """Residue in [0, p^k) of a p-integral rational x modulo p^k."""
    x = Fraction(x)
    mod = p ** k
    if k <= 0:
        return 0
    return (x.numerator * pow(x.denominator, -1, mod)) % mod


def hilbert_symbol(a: Rational, b: Rational, p: int) -> int:
    """Hilbert symbol (a, b)_p for nonzero rationals, p prime (2 allowed)."""
    a = Fraction(a)
    b = Fraction(b)
    if a == 0 or b == 0:
        raise ZeroArgument("Hilbert symbol of zero")
    al, bl = vp(a, p), vp(b, p)
    u = unit_part(a, p)
    w = unit_part(b, p)
    ui = u.numerator * u.denominator
    wi = w.numerator * w.denominator
    if p != 2:
        s = (-1) ** (al * bl * ((p - 1) // 2) % 2)
        s *= legendre(ui, p) if bl % 2 else 1
        s *= legendre(wi, p) if al % 2 else 1
        return s

    def eps(t):
        return ((t - 1) // 2) % 2

    def omega(t):
        return ((t * t - 1) // 8) % 2

    ui %= 8
    wi %= 8
    e = eps(ui) * eps(wi) + al * omega(wi) + bl * omega(ui)
    return -1 if e % 2 else 1


@dataclass(frozen=True)
class LocalFieldCtx:
    """An odd prime p with a unit nonresidue d, so that Q_p(sqrt d) is unramified."""

    p: int
    d: int
    psi_level: int = 0

    def __post_init__(self):
        if not is_prime(self.p) or self.p == 2:
            raise InvalidContext(f"p={self.p} must be an odd prime")
        if not is_squarefree(self.d) or self.d in (0, 1):
            raise InvalidContext(f"d={self.d} must be squarefree and not 0 or 1")
        if self.d % self.p == 0 or legendre(self.d, self.p) != -1:
            raise InvalidContext(f"d={self.d} is not a unit nonresidue mod {self.p}")

    @property
    def q(self) -> int:
        return self.p

    def elem(self, a: Rational = 0, b: Rational = 0) -> "QuadExtElem":
        return QuadExtElem(Fraction(a), Fraction(b), self.d)

    @property
    def sqrt_d(self) -> "QuadExtElem":
        return QuadExtElem(Fraction(0), Fraction(1), self.d)

    @classmethod
    def default(cls, p: int, imaginary: bool = False) -> "LocalFieldCtx":
        return cls(p, default_nonresidue(p, imaginary))


def default_nonresidue(p: int, imaginary: bool = False) -> int:
    """Smallest candidate from -1, 2, -2, 3, -3, 5, ... that is a unit nonresidue."""
    k = 1
    while True:
        for cand in ((-k,) if k == 1 else (k, -k)):
            if imaginary and cand > 0:
                continue
            if is_squarefree(cand) and cand % p and legendre(cand, p) == -1:
                return cand
        k += 1


class QuadExtElem:
    """a + b*sqrt(d) with rational a, b."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a: Rational = 0, b: Rational = 0, d: int = -1):
        self.a = a if type(a) is Fraction else Fraction(a)
        self.b = b if type(b) is Fraction else Fraction(b)
        self.d = d

    def _coerce(self, other) -> "QuadExtElem":
        if isinstance(other, QuadExtElem):
            return other
        if isinstance(other, (int, Fraction)):
            return QuadExtElem(other, 0, self.d)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExtElem(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExtElem(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExtElem(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuadExtElem(self.a * other, self.b * other, self.d)
        if not isinstance(other, QuadExtElem):
            return NotImplemented
        a, b, c, e = self.a, self.b, other.a, other.b
        if not b and not e:
            return QuadExtElem(a * c, 0, self.d)
        return QuadExtElem(a * c + self.d * b * e, a * e + b * c, self.d)

    __rmul__ = __mul__

    def conj(self) -> "QuadExtElem":
        return QuadExtElem(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a

    def inverse(self) -> "QuadExtElem":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return QuadExtElem(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuadExtElem(self.a / other, self.b / other, self.d)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not o.b:
            return QuadExtElem(self.a / o.a, self.b / o.a, self.d)
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        r = QuadExtElem(1, 0, self.d)
        x = self
        while n:
            if n & 1:
                r = r * x
            x = x * x
            n >>= 1
        return r

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if isinstance(other, QuadExtElem):
            return self.a == other.a and self.b == other.b
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def is_rational(self) -> bool:
        return self.b == 0

    def __repr__(self):
        if self.b == 0:
            return f"{self.a}"
        return f"({self.a} + {self.b}*sqrt({self.d}))"

    def to_json(self) -> dict:
        return {"a": rat_str(self.a), "b": rat_str(self.b)}


def rat_str(x: Rational) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def parse_rat(s) -> Fraction:
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    if isinstance(s, float):
        raise ValueError("floating-point values are not accepted; use 'num/den'")
    return Fraction(str(s).strip())


def parse_elem(obj, d: int) -> QuadExtElem:
    """Accept {"a":..,"b":..}, a rational string, or an int."""
    if isinstance(obj, QuadExtElem):
        return obj
    if isinstance(obj, dict):
        return QuadExtElem(parse_rat(obj.get("a", 0)), parse_rat(obj.get("b", 0)), d)
    return QuadExtElem(parse_rat(obj), 0, d)


def valuation(x, ctx: LocalFieldCtx):
    """Valuation on F = Q_p(sqrt d); +inf at zero."""
    if isinstance(x, QuadExtElem):
        return min(vp(x.a, ctx.p), vp(x.b, ctx.p))
    return vp(x, ctx.p)


def quad_character(x, ctx: LocalFieldCtx, side: str = "eta_on_F0") -> int:
    """eta on Q_p^x (side 'eta_on_F0') or its extension (-1)^v on F^x ('eta_tilde_on_F')."""
    if not x:
        raise ZeroArgument("quadratic character of zero")
    if side == "eta_on_F0":
        if isinstance(x, QuadExtElem):
            if x.b != 0:
                raise ValueError("eta_on_F0 needs an element of the base field")
            x = x.a
        return -1 if vp(x, ctx.p) % 2 else 1
    if side == "eta_tilde_on_F":
        return -1 if valuation(x, ctx) % 2 else 1
    raise ValueError(f"unknown side {side!r}")


def norm_witness(x: Rational, ctx: LocalFieldCtx):
    """An explicit y in Q(sqrt d) with N(y)/x in 1 + pZ_p, or None if x is not a local norm.

    Since v(N(y)) = 2 v(y) and 1 + pZ_p consists of norms, x is a norm exactly when
    such a y exists; the search runs over p^k (a + b sqrt d) with 0 <= a, b < p.
    """
    x = Fraction(x)
    p = ctx.p
    v = vp(x, p)
    if v % 2:
        return None
    for a in range(p):
        for b in range(p):
            if not (a or b):
                continue
            y = QuadExtElem(a, b, ctx.d) * Fraction(p) ** (v // 2)
            r = y.norm() / x
            if vp(r - 1, p) >= 1:
                return y
    return None
