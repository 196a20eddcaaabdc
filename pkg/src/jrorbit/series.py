"""q-expansions with exact log-linear coefficients, support checks, and the rank-one
global functional equation for the Gaussian test function over Q."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Union

import mpmath

from .arch import nilpotent_arch, orb_arch
from .errors import MultipleDerivativePlaces
from .orbital import LaurentX, fl_verify
from .padic import LocalFieldCtx, is_prime, parse_rat, rat_str, vp

Rational = Union[int, Fraction]


# -- exact log-linear numbers ------------------------------------------------------------


class LogLinear:
    """c + sum_p r_p log p with rational c, r_p."""

    __slots__ = ("constant", "logs")

    def __init__(self, constant: Rational = 0, logs: Optional[Dict[int, Rational]] = None):
        self.constant = Fraction(constant)
        self.logs = {int(p): Fraction(v) for p, v in (logs or {}).items() if v}
        for p in self.logs:
            if not is_prime(p):
                raise ValueError(f"log term keyed by non-prime {p}")

    @classmethod
    def log_of(cls, n: int, coef: Rational = 1) -> "LogLinear":
        """coef * log n, expanded over the primes of n."""
        logs: Dict[int, Fraction] = {}
        m = n
        q = 2
        while m > 1:
            while m % q == 0:
                logs[q] = logs.get(q, 0) + Fraction(coef)
                m //= q
            q += 1
        return cls(0, logs)

    def __add__(self, other):
        o = _ll(other)
        logs = dict(self.logs)
        for p, v in o.logs.items():
            logs[p] = logs.get(p, 0) + v
        return LogLinear(self.constant + o.constant, logs)

    __radd__ = __add__

    def __neg__(self):
        return LogLinear(-self.constant, {p: -v for p, v in self.logs.items()})

    def __sub__(self, other):
        return self + (-_ll(other))

    def __mul__(self, r: Rational):
        if isinstance(r, LogLinear):
            if r.logs and self.logs:
                raise TypeError("product of two log terms is not log-linear")
            if r.logs:
                return r * self.constant
            r = r.constant
        r = Fraction(r)
        return LogLinear(self.constant * r, {p: v * r for p, v in self.logs.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LogLinear(other)
        if not isinstance(other, LogLinear):
            return NotImplemented
        return self.constant == other.constant and self.logs == other.logs

    def __hash__(self):
        return hash((self.constant, tuple(sorted(self.logs.items()))))

    def is_zero(self) -> bool:
        return not self.constant and not self.logs

    def __float__(self):
        return float(self.constant) + sum(float(v) * float(mpmath.log(p)) for p, v in self.logs.items())

    def to_json(self) -> dict:
        return {"constant": rat_str(self.constant), "logs": {str(p): rat_str(v) for p, v in sorted(self.logs.items())}}

    @classmethod
    def from_json(cls, obj: dict) -> "LogLinear":
        return cls(parse_rat(obj.get("constant", "0")), {int(p): parse_rat(v) for p, v in obj.get("logs", {}).items()})

    def __repr__(self):
        parts = [str(self.constant)] + [f"{v}*log({p})" for p, v in sorted(self.logs.items())]
        return " + ".join(parts)


def _ll(x) -> LogLinear:
    return x if isinstance(x, LogLinear) else LogLinear(x)


@dataclass
class QExp:
    """sum A_xi q^xi over xi in (1/level) Z, xi >= 0."""

    weight: int
    level: int = 1
    coeffs: Dict[Fraction, LogLinear] = field(default_factory=dict)

    def __post_init__(self):
        if self.level < 1:
            raise ValueError("level must be positive")
        clean = {}
        for xi, c in self.coeffs.items():
            xi = Fraction(xi)
            self._check_exponent(xi)
            c = _ll(c)
            if not c.is_zero():
                clean[xi] = c
        self.coeffs = clean

    def _check_exponent(self, xi: Fraction):
        if xi < 0:
            raise ValueError(f"negative exponent {xi}")
        if (xi * self.level).denominator != 1:
            raise ValueError(f"exponent {xi} not in (1/{self.level})Z")

    def __getitem__(self, xi) -> LogLinear:
        return self.coeffs.get(Fraction(xi), LogLinear())

    def set(self, xi, c) -> None:
        xi = Fraction(xi)
        self._check_exponent(xi)
        c = _ll(c)
        if c.is_zero():
            self.coeffs.pop(xi, None)
        else:
            self.coeffs[xi] = c

    def __add__(self, other: "QExp") -> "QExp":
        if self.weight != other.weight:
            raise ValueError("weights differ")
        level = self.level * other.level // _gcd(self.level, other.level)
        out = dict(self.coeffs)
        for xi, c in other.coeffs.items():
            out[xi] = out.get(xi, LogLinear()) + c
        return QExp(self.weight, level, out)

    def scale(self, r: Rational) -> "QExp":
        return QExp(self.weight, self.level, {xi: c * r for xi, c in self.coeffs.items()})

    def is_zero(self) -> bool:
        return not self.coeffs

    def to_json(self) -> dict:
        return {
            "weight": self.weight,
            "level": self.level,
            "coeffs": {rat_str(xi): c.to_json() for xi, c in sorted(self.coeffs.items())},
        }


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


# -- assembling a coefficient ----------------------------------------------------------


@dataclass
class PlaceData:
    """Local contribution at a finite place with residue field size q."""

    q: int
    orbital: Union[LaurentX, Fraction, int]
    derivative: bool = False
    omega: int = 1

    def special_value(self) -> Fraction:
        if isinstance(self.orbital, LaurentX):
            return self.omega * self.orbital.value_at(1)
        return Fraction(self.orbital) * self.omega

    def derivative_value(self) -> LogLinear:
        if not isinstance(self.orbital, LaurentX):
            raise TypeError("derivative place needs a Laurent polynomial in X = q^{-s}")
        return LogLinear.log_of(self.q, self.omega * self.orbital.derivative_coefficient())


def assemble_coefficient(xi, places: Sequence[PlaceData], arch_value: Rational = 1) -> LogLinear:
    """Product over places; the single derivative place contributes its log q coefficient."""
    ders = [pl for pl in places if pl.derivative]
    if len(ders) > 1:
        raise MultipleDerivativePlaces(f"{len(ders)} places flagged as derivative places")
    prod = Fraction(arch_value)
    for pl in places:
        if not pl.derivative:
            prod *= pl.special_value()
    if not ders:
        return LogLinear(prod)
    if prod == 0:
        return LogLinear()
    return ders[0].derivative_value() * prod


# -- support check ----------------------------------------------------------------------


@dataclass
class SupportReport:
    all_coprime_vanish: bool
    witnesses: List[Fraction]

    def to_json(self) -> dict:
        return {"allCoprimeVanish": self.all_coprime_vanish, "witnesses": [rat_str(w) for w in self.witnesses]}


def coprime_to(xi: Fraction, primes: Iterable[int]) -> bool:
    return all(vp(xi, p) == 0 for p in primes)


def support_check(f: QExp, primes: Iterable[int]) -> SupportReport:
    """Do all coefficients at nonzero exponents coprime to the given primes vanish?"""
    primes = list(primes)
    wit = sorted(xi for xi, c in f.coeffs.items() if xi != 0 and not c.is_zero() and coprime_to(xi, primes))
    return SupportReport(not wit, wit)


def _norm_one_integral(ctx: LocalFieldCtx, count: int) -> list:
    from .orbit import norm_one_candidates
    from .lattice import elem_val

    out = []
    for g in norm_one_candidates(ctx.d, bound=12):
        if elem_val(g, ctx.p) >= 0:
            out.append(g)
        if len(out) >= count:
            break
    return out


def fl_difference_series(ctx: LocalFieldCtx, max_xi: int = 30, gammas: int = 3) -> QExp:
    """Rank one: A_xi = sum over a few norm-one gamma of (GL special value - unitary count)
    on the split side, or the GL special value itself on the nonsplit side."""
    from .orbit import InvariantVector

    out = QExp(weight=1, level=1)
    for g in _norm_one_integral(ctx, gammas):
        for xi in range(1, max_xi + 1):
            iv = InvariantVector([-g, 1], [xi])
            rep = fl_verify(iv, ctx)
            diff = rep.gl.value0 - (rep.orb_u if rep.side == "split" else 0)
            out.set(xi, out[xi] + diff)
    return out


# -- the rank-one global functional equation -------------------------------------------------


@dataclass(frozen=True)
class FEField:
    """Imaginary quadratic F = Q(sqrt(-D)) with ramified prime ell, conductor exponent c."""

    name: str
    disc: int  # |discriminant|
    ell: int
    c: int

    def chi(self, n: int) -> int:
        """Kronecker character of F (odd, modulus disc)."""
        n %= self.disc
        if _gcd(n, self.disc) != 1:
            return 0
        if self.disc == 4:
            return 1 if n == 1 else -1
        if self.disc == 3:
            return 1 if n == 1 else -1
        raise NotImplementedError

    def gauss_constant(self):
        """ell^{-c} sum_{x mod ell^c} chi(x) exp(-2 pi i x / ell^c)."""
        N = self.ell ** self.c
        s = sum(self.chi(x) * mpmath.expjpi(-2 * mpmath.mpf(x) / N) for x in range(N))
        return s / N


FIELDS = {
    "Q(i)": FEField("Q(i)", 4, 2, 2),
    "Q(sqrt-3)": FEField("Q(sqrt-3)", 3, 3, 1),
}


def dirichlet_l(s, F: FEField):
    """L(s, chi) through Hurwitz zeta; valid for every real s."""
    N = F.disc
    s = mpmath.mpf(s)
    if s == 1:
        # the Hurwitz poles cancel; take the limit
        return mpmath.dirichlet(s, [F.chi(a) for a in range(N)])
    return N ** (-s) * sum(F.chi(a) * mpmath.zeta(s, mpmath.mpf(a) / N) for a in range(1, N + 1) if F.chi(a))


def complete_l(s, F: FEField):
    s = mpmath.mpf(s)
    return mpmath.pi ** (-(s + 1) / 2) * mpmath.gamma((s + 1) / 2) * dirichlet_l(s, F)


def local_unramified(p: int, v: int, chi_p: int, s):
    """sum_{j=0}^{v} (chi(p) p^s)^j: the orbital integral of 1_{Z_p^2} at valuation v."""
    x = chi_p * mpmath.mpf(p) ** s
    return sum(x ** j for j in range(v + 1))


def _factor(n: int) -> Dict[int, int]:
    out: Dict[int, int] = {}
    q = 2
    while q * q <= n:
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
        q += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _finite_product(n: int, F: FEField, s, skip_ell: bool):
    total = mpmath.mpf(1)
    for p, v in _factor(abs(n)).items():
        if p == F.ell and skip_ell:
            continue
        total *= local_unramified(p, v, F.chi(p), s)
    return total


def _tail_bound(X: int, s, scale) -> float:
    """Crude majorant of the discarded terms |xi| > X.

    Uses K_nu(x) <= 1.4 sqrt(pi/(2x)) e^{-x} for |nu| <= 1 and x >= 1, and a divisor-count
    bound on the finite product; generous constants absorb both sides' prefactors.
    """
    s = abs(float(s))
    total = 0.0
    n = X + 1
    while True:
        x = float(scale) * n
        term = 2 * 2 * 1.4 * (x ** ((1 + s) / 2)) * mpmath.sqrt(1 / (2 * x)) * mpmath.exp(-mpmath.pi * x) * 2 * n ** (0.5 + s) * 8
        total += float(term)
        if term < 1e-300 or n > X + 2000:
            break
        n += 1
    return total


@dataclass
class FEReport:
    field: str
    s: float
    X: int
    J: object
    Jhat: object
    diff: float
    tail_bound: float
    tolerance: float
    nilpotent: object
    nilpotent_hat: object

    @property
    def ok(self) -> bool:
        return self.diff <= self.tolerance + self.tail_bound

    def to_json(self) -> dict:
        def c(z):
            z = mpmath.mpc(z)
            return {"re": mpmath.nstr(z.real, 17), "im": mpmath.nstr(z.imag, 17)}
        return {
            "field": self.field,
            "s": self.s,
            "X": self.X,
            "J": c(self.J),
            "Jhat": c(self.Jhat),
            "diff": self.diff,
            "tailBound": self.tail_bound,
            "tolerance": self.tolerance,
            "nilpotent": c(self.nilpotent),
            "nilpotentHat": c(self.nilpotent_hat),
            "verdict": "PASS" if self.ok else "FAIL",
        }


def tate_fe_check(field_name: str, s, X: int = 50, tolerance: float = 1e-6) -> FEReport:
    """Evaluate J(phi', s) and J(hat phi', s) for the weight-one Gaussian at infinity,
    1_{Z_p^2} at unramified p, and the chi-twisted unit indicator at the ramified prime."""
    if field_name not in FIELDS:
        raise ValueError(f"unsupported field {field_name!r}; choose from {sorted(FIELDS)}")
    F = FIELDS[field_name]
    G0 = F.gauss_constant()
    ellc = F.ell ** F.c
    with mpmath.workdps(25):
        s = mpmath.mpf(s)
        # axis terms: only the x-axis survives for phi', only the y-axis for its transform
        nil = nilpotent_arch(-s).value * complete_l(-s, F)
        nil_hat = G0 * mpmath.mpf(ellc) ** s * 2j * mpmath.mpf(2) ** (-s) * nilpotent_arch(s).value * complete_l(s, F)
        J = mpmath.mpc(nil)
        Jh = mpmath.mpc(nil_hat)
        for n in range(-X, X + 1):
            if n == 0:
                continue
            # phi': xi = n integral
            J += orb_arch(n, s).value * _finite_product(n, F, s, skip_ell=False)
            # hat phi': xi = n / ell^c
            vl = int(vp(n, F.ell))
            n0 = n // F.ell ** vl
            loc_ell = G0 * mpmath.mpf(F.ell) ** (vl * s) * F.chi(n0)
            arch_hat = 2j * mpmath.mpf(2) ** s * orb_arch(mpmath.mpf(4 * n) / ellc, s).value
            Jh += arch_hat * loc_ell * _finite_product(n, F, s, skip_ell=True)
        diff = float(abs(J - Jh))
    tail = _tail_bound(X, s, min(1, Fraction(4, ellc))) * (1 + float(abs(G0)) * 2 * 2 ** abs(float(s)) * ellc)
    return FEReport(field_name, float(s), X, J, Jh, diff, tail, tolerance, nil, nil_hat)
