"""Archimedean special functions and Gaussian orbital integrals.

Every number returned carries an absolute error bound.  Closed forms go through
mpmath's Bessel functions; the quadrature routes integrate the defining integrals
directly so the two can be compared.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

import mpmath

from . import linalg as la
from .errors import ReduciblePolynomial, SingularTraceForm, ToleranceNotMet
from .padic import QuadExtElem

WORK_DPS = 30


@dataclass(frozen=True)
class ArchValue:
    value: object  # mpf or mpc
    err: float

    def __add__(self, other):
        o = _lift(other)
        return ArchValue(self.value + o.value, self.err + o.err)

    __radd__ = __add__

    def __sub__(self, other):
        o = _lift(other)
        return ArchValue(self.value - o.value, self.err + o.err)

    def __neg__(self):
        return ArchValue(-self.value, self.err)

    def __mul__(self, other):
        o = _lift(other)
        err = abs(self.value) * o.err + abs(o.value) * self.err + self.err * o.err
        return ArchValue(self.value * o.value, float(err))

    __rmul__ = __mul__

    def __abs__(self):
        return float(abs(self.value))

    def close_to(self, x, tol: float) -> bool:
        return float(abs(self.value - _lift(x).value)) <= tol + self.err + _lift(x).err

    def to_json(self) -> dict:
        v = self.value
        if isinstance(v, mpmath.mpc) and v.imag != 0:
            return {"re": mpmath.nstr(v.real, 20), "im": mpmath.nstr(v.imag, 20), "err": mpmath.nstr(self.err, 5)}
        return {"value": mpmath.nstr(mpmath.re(v), 20), "err": mpmath.nstr(self.err, 5)}

    def __float__(self):
        return float(mpmath.re(self.value))

    def __complex__(self):
        return complex(self.value)


def _lift(x) -> ArchValue:
    if isinstance(x, ArchValue):
        return x
    return ArchValue(mpmath.mpmathify(x), 0.0)


def _exact(x) -> ArchValue:
    """A closed form evaluated at working precision."""
    return ArchValue(x, float(abs(x)) * 10.0 ** (-WORK_DPS + 5) + 1e-300)


def _quad(f, interval, tol: float) -> ArchValue:
    val, est = mpmath.quad(f, interval, error=True, maxdegree=10)
    err = float(est)
    if err > tol:
        raise ToleranceNotMet(f"quadrature error {err:.3g} exceeds {tol:.3g}")
    return ArchValue(val, err)


# -- K-Bessel and Ei --------------------------------------------------------------------


def bessel_k(s, c, tol: float = 1e-12) -> ArchValue:
    """K_s(c) from (1/2) int_0^inf exp(-c(u + 1/u)/2) u^s du/u = int_0^inf exp(-c cosh t) cosh(st) dt."""
    if c <= 0:
        raise ValueError("bessel_k needs c > 0")
    with mpmath.workdps(WORK_DPS):
        s = mpmath.mpf(s)
        c = mpmath.mpf(c)
        # truncate where exp(-c cosh T + |s| T) is far below tol
        T = mpmath.mpf(1)
        while c * mpmath.cosh(T) - abs(s) * T < -mpmath.log(tol) + 40:
            T *= 1.5
        tail = mpmath.exp(-c * mpmath.cosh(T) + abs(s) * T)
        v = _quad(lambda t: mpmath.exp(-c * mpmath.cosh(t)) * mpmath.cosh(s * t), [0, 1, T], tol)
        return ArchValue(v.value, v.err + float(tail))


def expint_ei(r, tol: float = 1e-12) -> ArchValue:
    """Ei(r) = -int_{-r}^inf e^{-t}/t dt for r < 0."""
    if r >= 0:
        raise ValueError("expint_ei expects a negative argument")
    with mpmath.workdps(WORK_DPS + 10):
        x = -mpmath.mpf(r)
        if x <= 4:
            return _ei_series(x, tol)
        return _ei_continued_fraction(x, tol)


def _ei_series(x, tol: float) -> ArchValue:
    """gamma + log x + sum (-x)^n / (n n!)."""
    total = mpmath.euler + mpmath.log(x)
    term = mpmath.mpf(1)
    n = 0
    while True:
        n += 1
        term *= -x / n
        piece = term / n
        total += piece
        if abs(piece) < mpmath.mpf(10) ** (-WORK_DPS) and n > x:
            break
    return ArchValue(total, float(abs(piece)) + 1e-25)


def _ei_continued_fraction(x, tol: float) -> ArchValue:
    """E1(x) = e^{-x} / (x + 1 - 1/(x + 3 - 4/(x + 5 - ...))) via modified Lentz."""
    tiny = mpmath.mpf(10) ** (-60)
    b = x + 1
    C = 1 / tiny
    D = 1 / b
    h = D
    for i in range(1, 2000):
        a = -mpmath.mpf(i) ** 2
        b += 2
        D = 1 / (a * D + b)
        C = b + a / C
        delta = C * D
        h *= delta
        if abs(delta - 1) < mpmath.mpf(10) ** (-WORK_DPS):
            e1 = h * mpmath.exp(-x)
            return ArchValue(-e1, float(abs(e1)) * 10.0 ** (-WORK_DPS + 3))
    raise ToleranceNotMet("continued fraction did not converge")


def expint_ei_quadrature(r, tol: float = 1e-12) -> ArchValue:
    if r >= 0:
        raise ValueError("expint_ei expects a negative argument")
    with mpmath.workdps(WORK_DPS):
        x = -mpmath.mpf(r)
        v = _quad(lambda t: mpmath.exp(-t) / t, [x, x + 1, x + 10, mpmath.inf], tol)
        return ArchValue(-v.value, v.err)


# -- Gaussian orbital integrals ---------------------------------------------------------


@dataclass(frozen=True)
class Iwasawa:
    """h = n(b) m(a^{1/2}) k_theta."""

    a: float = 1.0
    b: float = 0.0
    theta: float = 0.0

    def __post_init__(self):
        if self.a <= 0:
            raise ValueError("Iwasawa a must be positive")

    @property
    def is_identity(self) -> bool:
        return self.a == 1 and self.b == 0 and self.theta == 0


def _rank_one_closed(xi, s):
    """2^{-1/2} |xi|^{(1-s)/2} (K_{(1-s)/2}(pi|xi|) + sgn(xi) K_{(1+s)/2}(pi|xi|))."""
    ax = abs(xi)
    eta = 1 if xi > 0 else -1
    z = mpmath.pi * ax
    return (
        mpmath.mpf(2) ** mpmath.mpf(-0.5) * ax ** ((1 - s) / 2)
        * (mpmath.besselk((1 - s) / 2, z) + eta * mpmath.besselk((1 + s) / 2, z))
    )


def orb_arch(xi, s=0, deriv: bool = False, h: Optional[Iwasawa] = None) -> ArchValue:
    """Orbital integral of the weight-one Gaussian at invariant xi (closed form).

    With deriv the s-derivative is returned.  At s = 0 the elementary formulas are used:
    value e^{-pi xi} or 0, derivative -(1/2) log(xi) e^{-pi xi} or (1/2) e^{-pi xi} Ei(-2 pi |xi|).
    """
    if xi == 0:
        raise ValueError("xi must be nonzero")
    h = h or Iwasawa()
    with mpmath.workdps(WORK_DPS):
        xi_m = mpmath.mpf(xi)
        s_m = mpmath.mpf(s)
        axi = h.a * xi_m
        base = _orb_untwisted(axi, s_m, deriv=False)
        if deriv:
            d = _orb_untwisted(axi, s_m, deriv=True)
            # d/ds [a^{(1+s)/2} O(a xi, s)]
            scal = mpmath.mpf(h.a) ** ((1 + s_m) / 2)
            val = scal * (d.value + mpmath.log(h.a) / 2 * base.value)
            err = float(scal) * (d.err + abs(mpmath.log(h.a)) * base.err)
        else:
            scal = mpmath.mpf(h.a) ** ((1 + s_m) / 2)
            val = scal * base.value
            err = float(scal) * base.err
        if not (h.b == 0 and h.theta == 0):
            phase = mpmath.expjpi(xi_m * h.b) * mpmath.expj(h.theta)
            val = val * phase
        return ArchValue(val, err)


def _orb_untwisted(xi, s, deriv: bool) -> ArchValue:
    if s == 0:
        ax = abs(xi)
        if not deriv:
            return _exact(mpmath.exp(-mpmath.pi * xi) if xi > 0 else mpmath.mpf(0))
        if xi > 0:
            return _exact(-mpmath.log(ax) / 2 * mpmath.exp(-mpmath.pi * xi))
        ei = expint_ei(-2 * mpmath.pi * ax)
        f = mpmath.exp(-mpmath.pi * xi) / 2
        return ArchValue(f * ei.value, float(f) * ei.err + 1e-28)
    if not deriv:
        return _exact(_rank_one_closed(xi, s))
    v = mpmath.diff(lambda t: _rank_one_closed(xi, t), s)
    return ArchValue(v, float(abs(v)) * 1e-20 + 1e-25)


def orb_arch_quadrature(xi, s=0, deriv: bool = False, tol: float = 1e-12) -> ArchValue:
    """2^{-1/2} int_0^inf (t + sgn(xi)|xi|/t) exp(-pi(t^2 + xi^2/t^2)/2) t^{-s} dt/t, integrated directly."""
    if xi == 0:
        raise ValueError("xi must be nonzero")
    with mpmath.workdps(WORK_DPS):
        ax = mpmath.mpf(abs(xi))
        eta = 1 if xi > 0 else -1
        s = mpmath.mpf(s)
        c = mpmath.mpf(2) ** mpmath.mpf(-0.5)

        def f(t):
            g = (t + eta * ax / t) * mpmath.exp(-mpmath.pi * (t * t + ax * ax / (t * t)) / 2) * t ** (-s) / t
            return -g * mpmath.log(t) if deriv else g

        peak = mpmath.sqrt(ax)
        v = _quad(f, [0, peak / 4, peak, 4 * peak + 4, mpmath.inf], tol)
        return ArchValue(c * v.value, float(c) * v.err)


def orb_arch_product(xis: Sequence, s=0, deriv: bool = False) -> ArchValue:
    """Product of rank-one closed forms; the derivative by the Leibniz rule."""
    if not xis:
        raise ValueError("empty invariant list")
    vals = [orb_arch(x, s) for x in xis]
    if not deriv:
        out = _lift(1)
        for v in vals:
            out = out * v
        return out
    ders = [orb_arch(x, s, deriv=True) for x in xis]
    total = _lift(0)
    for i in range(len(xis)):
        term = ders[i]
        for j, v in enumerate(vals):
            if j != i:
                term = term * v
        total = total + term
    return total


def weight_covariance(xi, theta, s=0) -> bool:
    """Rotation by k_theta multiplies the orbital integral by e^{i theta}."""
    base = orb_arch(xi, s)
    rot = orb_arch(xi, s, h=Iwasawa(theta=theta))
    with mpmath.workdps(WORK_DPS):
        return abs(rot.value - base.value * mpmath.expj(theta)) <= 1e-20 + rot.err + base.err


# -- nilpotent term ---------------------------------------------------------------------


def nilpotent_arch(s) -> ArchValue:
    """2^{s/2 - 1}."""
    with mpmath.workdps(WORK_DPS):
        return _exact(mpmath.mpf(2) ** (mpmath.mpf(s) / 2 - 1))


def nilpotent_tate_quotient(s, tol: float = 1e-12) -> ArchValue:
    """Tate integral of x -> 2^{-3/2} x e^{-pi x^2/2} against |x|^s sgn(x) d^x x, over the
    archimedean L-factor pi^{-(s+1)/2} Gamma((s+1)/2)."""
    with mpmath.workdps(WORK_DPS):
        s = mpmath.mpf(s)
        c = mpmath.mpf(2) ** mpmath.mpf(-1.5)
        # the integrand is even, so integrate over (0, inf) and double
        half = _quad(lambda x: c * x ** s * mpmath.exp(-mpmath.pi * x * x / 2), [0, 1, 4, mpmath.inf], tol)
        L = mpmath.pi ** (-(s + 1) / 2) * mpmath.gamma((s + 1) / 2)
        return ArchValue(2 * half.value / L, 2 * half.err / float(L))


# -- Whittaker function -----------------------------------------------------------------


def whittaker(k: int, xi, h: Optional[Iwasawa] = None) -> ArchValue:
    h = h or Iwasawa()
    with mpmath.workdps(WORK_DPS):
        a = mpmath.mpf(h.a)
        z = a ** (mpmath.mpf(k) / 2) * mpmath.exp(2j * mpmath.pi * xi * (h.b + 1j * a)) * mpmath.expj(k * h.theta)
        return _exact(mpmath.mpc(z))


# -- refined invariant ------------------------------------------------------------------


@dataclass
class RefinedInvariant:
    charpoly: list  # low -> high, monic, entries in F
    xi_prime: list  # coordinates in the power basis 1, T, ..., T^{m-1}
    embeddings: List[ArchValue]

    @property
    def negative_count(self) -> int:
        return sum(1 for e in self.embeddings if float(e) < 0)

    def to_json(self) -> dict:
        def enc(x):
            return x.to_json() if isinstance(x, QuadExtElem) else str(x)
        return {
            "charpoly": [enc(c) for c in self.charpoly],
            "xiPrime": [enc(c) for c in self.xi_prime],
            "embeddings": [e.to_json() for e in self.embeddings],
        }


def power_sums(f: Sequence, n: int) -> list:
    """p_k = sum of k-th powers of the roots of monic f, for 0 <= k < n (Newton's identities)."""
    m = len(f) - 1
    e = [f[m - k] * (-1) ** k for k in range(m + 1)]
    zero = f[m] * 0
    ps = [zero + m]
    for k in range(1, n):
        acc = zero
        for i in range(1, min(k - 1, m) + 1):
            acc = acc + e[i] * ps[k - i] * (-1) ** (i - 1)
        if k <= m:
            acc = acc + e[k] * k * (-1) ** (k - 1)
        ps.append(acc)
    return ps


def _to_complex(x, d: int):
    if isinstance(x, QuadExtElem):
        r = mpmath.sqrt(mpmath.mpf(x.d)) if x.d > 0 else mpmath.mpc(0, mpmath.sqrt(-mpmath.mpf(x.d)))
        return mpmath.mpf(x.a.numerator) / x.a.denominator + mpmath.mpf(x.b.numerator) / x.b.denominator * r
    x = Fraction(x)
    return mpmath.mpf(x.numerator) / x.denominator


def _irreducible_over(f: Sequence, d: int) -> bool:
    import sympy

    T = sympy.Symbol("T")
    r = sympy.sqrt(d)
    expr = 0
    for k, c in enumerate(f):
        c = c if isinstance(c, QuadExtElem) else QuadExtElem(Fraction(c), 0, d)
        expr += (sympy.Rational(c.a.numerator, c.a.denominator) + sympy.Rational(c.b.numerator, c.b.denominator) * r) * T**k
    _, factors = sympy.factor_list(sympy.expand(expr), T, extension=r)
    return len(factors) == 1 and factors[0][1] == 1


def refined_invariant(iv, d: int, check_irreducible: bool = True) -> RefinedInvariant:
    """Solve tr(T^i xi') = a_i for xi' in F[T]/(charpoly); evaluate xi' at the complex roots."""
    f = [la.as_elem(c, d) for c in iv.charpoly]
    m = len(f) - 1
    a = [la.as_elem(x, d) for x in iv.moments]
    if len(a) < m:
        raise ValueError("need m moments")
    if check_irreducible and m > 1 and not _irreducible_over(f, d):
        raise ReduciblePolynomial("charpoly is reducible over F")
    ps = power_sums(f, 2 * m - 1)
    G = [[ps[i + j] for j in range(m)] for i in range(m)]
    if not la.det(G):
        raise SingularTraceForm("trace form is degenerate (repeated roots)")
    coords = la.solve(G, a[:m])
    with mpmath.workdps(WORK_DPS):
        cf = [_to_complex(c, d) for c in reversed(f)]
        roots = mpmath.polyroots(cf, maxsteps=200, extraprec=60)
        embs = []
        for lam in roots:
            v = sum((_to_complex(c, d) * lam ** k for k, c in enumerate(coords)), mpmath.mpf(0))
            v = mpmath.mpc(v)
            embs.append(ArchValue(v.real, float(abs(v.imag)) + 1e-20))
        embs.sort(key=lambda e: float(e))
    return RefinedInvariant(f, coords, embs)
