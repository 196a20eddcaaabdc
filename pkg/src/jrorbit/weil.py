"""Weil representation of SL_2(Q_p) on Schwartz functions built from lattice cosets.

A quadratic space is Q_p^D with a rational symmetric Gram S: the bilinear pairing
is B(x, y) = x^T S y and q(x) = B(x, x) / 2.  The additive character is
psi(x) = exp(-2 pi i {x}_p), trivial exactly on Z_p.

Scalars live in Q(i, zeta_{p^K}).  Square roots of p are written through the
quadratic Gauss sum, so every scalar has a unique coordinate vector.
"""
from __future__ import annotations

import cmath
import functools
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg as la
from .errors import DegenerateForm, PhaseOutsideRing
from .lattice import Lattice, _rat_residue, dual_lattice, elem_val, lattices_between, smith_form
from .padic import QuadExtElem, frac_mod, hilbert_symbol, rat_str, vp

# -- cyclotomic scalars --------------------------------------------------------------


class Cyc:
    """sum c_{e,j} i^e zeta^j with zeta = exp(2 pi i / p^K), 0 <= j < phi(p^K), e in {0, 1}."""

    __slots__ = ("p", "K", "c")

    def __init__(self, p: int, K: int = 0, coeffs: Optional[Dict[Tuple[int, int], Fraction]] = None):
        self.p = p
        self.K = K
        self.c = {k: Fraction(v) for k, v in (coeffs or {}).items() if v}

    @property
    def N(self) -> int:
        return self.p ** self.K

    @property
    def phi(self) -> int:
        return 1 if self.K == 0 else (self.p - 1) * self.p ** (self.K - 1)

    @classmethod
    def rational(cls, p: int, r) -> "Cyc":
        return cls(p, 0, {(0, 0): Fraction(r)})

    @classmethod
    def i_unit(cls, p: int) -> "Cyc":
        return cls(p, 0, {(1, 0): Fraction(1)})

    @classmethod
    def zeta(cls, p: int, k: int, j: int) -> "Cyc":
        """exp(2 pi i j / p^k)."""
        out = cls(p, k, {})
        out._add_term(0, j, Fraction(1))
        return out

    @classmethod
    def sqrt_p(cls, p: int) -> "Cyc":
        if p == 2:
            raise PhaseOutsideRing("sqrt(2) is not represented; odd p only")
        g = cls(p, 1, {})
        for x in range(p):
            g._add_term(0, (x * x) % p, Fraction(1))
        if p % 4 == 3:
            g = g * cls(p, 0, {(1, 0): Fraction(-1)})
        return g

    @classmethod
    def p_power(cls, p: int, half_exp: int) -> "Cyc":
        """p^{half_exp / 2}."""
        if half_exp % 2 == 0:
            return cls.rational(p, Fraction(p) ** (half_exp // 2))
        return cls.sqrt_p(p) * Fraction(p) ** ((half_exp - 1) // 2)

    def _add_term(self, e: int, j: int, v: Fraction):
        """Add v i^e zeta^j, reducing j into [0, phi)."""
        if self.K == 0:
            j = 0
        N = self.N
        j %= N
        e %= 4
        sign = 1
        if e >= 2:
            sign, e = -1, e - 2
        v = v * sign
        stack = [(j, v)]
        step = N // self.p if self.K else 1
        top = self.phi
        while stack:
            jj, vv = stack.pop()
            if jj < top:
                key = (e, jj)
                nv = self.c.get(key, 0) + vv
                if nv:
                    self.c[key] = nv
                else:
                    self.c.pop(key, None)
            else:
                base = jj - (self.p - 1) * step
                for t in range(self.p - 1):
                    stack.append((base + t * step, -vv))

    def lift(self, K: int) -> "Cyc":
        if K == self.K:
            return self
        if K < self.K:
            raise ValueError("cannot lower the cyclotomic level")
        out = Cyc(self.p, K, {})
        f = self.p ** (K - self.K)
        for (e, j), v in self.c.items():
            out._add_term(e, j * f, v)
        return out

    def _coerce(self, other) -> "Cyc":
        if isinstance(other, Cyc):
            return other
        if isinstance(other, (int, Fraction)):
            return Cyc.rational(self.p, other)
        raise TypeError(f"cannot combine Cyc with {type(other)}")

    def __add__(self, other):
        o = self._coerce(other)
        K = max(self.K, o.K)
        a, b = self.lift(K), o.lift(K)
        out = Cyc(self.p, K, dict(a.c))
        for k, v in b.c.items():
            nv = out.c.get(k, 0) + v
            if nv:
                out.c[k] = nv
            else:
                out.c.pop(k, None)
        return out

    __radd__ = __add__

    def __neg__(self):
        return Cyc(self.p, self.K, {k: -v for k, v in self.c.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyc(self.p, self.K, {k: v * other for k, v in self.c.items()})
        o = self._coerce(other)
        K = max(self.K, o.K)
        a, b = self.lift(K), o.lift(K)
        out = Cyc(self.p, K, {})
        for (e1, j1), v1 in a.c.items():
            for (e2, j2), v2 in b.c.items():
                out._add_term(e1 + e2, j1 + j2, v1 * v2)
        return out

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyc.rational(self.p, other)
        if not isinstance(other, Cyc):
            return NotImplemented
        K = max(self.K, other.K)
        return self.lift(K).c == other.lift(K).c

    def __hash__(self):
        return hash(tuple(sorted(self.c.items())))

    def __bool__(self):
        return bool(self.c)

    def is_rational(self) -> bool:
        return all(k == (0, 0) for k in self.c)

    def to_complex(self) -> complex:
        z = 0j
        for (e, j), v in self.c.items():
            z += float(v) * (1j ** e) * cmath.exp(2j * math.pi * j / self.N)
        return z

    def __repr__(self):
        if not self.c:
            return "0"
        if self.is_rational():
            return str(self.c[(0, 0)])
        return f"Cyc(p={self.p},K={self.K},{dict(sorted(self.c.items()))})"


def coef_json(c: Cyc) -> dict:
    """{"rat", "halfpow"} when c is rational times sqrt(p)^k, else the cyclotomic coordinates."""
    if c.is_rational():
        return {"rat": rat_str(c.c.get((0, 0), Fraction(0))), "halfpow": 0}
    if c.p != 2:
        t = c * Cyc.sqrt_p(c.p)
        if t.is_rational():
            return {"rat": rat_str(t.c.get((0, 0), Fraction(0)) / c.p), "halfpow": 1}
    return {
        "cyclotomic": {"level": c.K, "coords": {f"{e},{j}": rat_str(v) for (e, j), v in sorted(c.c.items())}}
    }


def psi(r, p: int) -> Cyc:
    """exp(-2 pi i {r}_p) for rational r."""
    r = Fraction(r)
    v = vp(r, p)
    if v >= 0:
        return Cyc.rational(p, 1)
    k = -int(v)
    a = frac_mod(r * Fraction(p) ** k, p, k)
    return Cyc.zeta(p, k, -a)


# -- quadratic spaces ----------------------------------------------------------------


@dataclass(frozen=True)
class QuadSpace:
    p: int
    gram: Tuple[Tuple[Fraction, ...], ...]

    @staticmethod
    def make(p: int, S) -> "QuadSpace":
        S = la.to_field(S, None)
        if not la.det(S):
            raise DegenerateForm("degenerate quadratic space")
        if not la.mat_eq(S, la.transpose(S)):
            raise DegenerateForm("Gram matrix is not symmetric")
        return QuadSpace(p, tuple(tuple(r) for r in S))

    @property
    def dim(self) -> int:
        return len(self.gram)

    def S(self):
        return [list(r) for r in self.gram]

    def B(self, x, y) -> Fraction:
        return la.dot(x, la.matvec(self.S(), y))

    def q(self, x) -> Fraction:
        return self.B(x, x) / 2

    def det_moment(self) -> Fraction:
        """det of (B(x_i, x_j) / 2)."""
        return la.det(la.scale(Fraction(1, 2), self.S()))

    def chi(self, a) -> int:
        """a -> (a, (-1)^{D/2} det V)_p."""
        return hilbert_symbol(a, (-1) ** (self.dim // 2) * self.det_moment(), self.p)

    def orth_sum(self, other: "QuadSpace") -> "QuadSpace":
        n, m = self.dim, other.dim
        S = [[Fraction(0)] * (n + m) for _ in range(n + m)]
        for i in range(n):
            for j in range(n):
                S[i][j] = self.gram[i][j]
        for i in range(m):
            for j in range(m):
                S[n + i][n + j] = other.gram[i][j]
        return QuadSpace.make(self.p, S)


def real_coords(v, d: int) -> list:
    """F^m -> Q^{2m}: (Re parts, sqrt-d parts)."""
    v = [la.as_elem(t, d) for t in v]
    return [t.a for t in v] + [t.b for t in v]


def hermitian_to_quadratic(H, p: int, d: int) -> QuadSpace:
    """B(x, y) = Tr <x, y>, q(x) = <x, x> on the real coordinates of F^m."""
    Hm = la.to_field(H, d)
    m = len(Hm)
    basis = []
    for k in range(m):
        basis.append([la.as_elem(1 if t == k else 0, d) for t in range(m)])
    for k in range(m):
        basis.append([QuadExtElem(0, 1 if t == k else 0, d) for t in range(m)])
    S = [[Fraction(0)] * (2 * m) for _ in range(2 * m)]
    for i, x in enumerate(basis):
        for j, y in enumerate(basis):
            val = la.dot(la.matvec(la.transpose(Hm), x), [t.conj() for t in y])
            S[i][j] = val.trace()
    return QuadSpace.make(p, S)


def split_space(p: int, m: int) -> QuadSpace:
    """F0^m x (F0^m)^*, B((u1,u2),(v1,v2)) = u2(v1) + v2(u1)."""
    S = [[Fraction(0)] * (2 * m) for _ in range(2 * m)]
    for i in range(m):
        S[i][m + i] = Fraction(1)
        S[m + i][i] = Fraction(1)
    return QuadSpace.make(p, S)


def weil_constant_hermitian(H, p: int, d: int) -> Cyc:
    """eta(hermitian discriminant) * eps^dim with eps = 1 (unramified, level 0).

    Only the unramified case is supported; the root number of a ramified
    character never enters here.
    """
    det = la.det(la.to_field(H, d))
    det = det.a if isinstance(det, QuadExtElem) else Fraction(det)
    return Cyc.rational(p, -1 if vp(det, p) % 2 else 1)


@dataclass(frozen=True)
class WeilCtx:
    space: QuadSpace
    gamma: Cyc

    @staticmethod
    def from_hermitian(H, ctx) -> "WeilCtx":
        return WeilCtx(hermitian_to_quadratic(H, ctx.p, ctx.d), weil_constant_hermitian(H, ctx.p, ctx.d))

    @staticmethod
    def split(p: int, m: int) -> "WeilCtx":
        return WeilCtx(split_space(p, m), Cyc.rational(p, 1))

    def chi(self, a) -> int:
        return self.space.chi(a)


def weil_constant(H, ctx) -> Cyc:
    return weil_constant_hermitian(H, ctx.p, ctx.d)


def _gauss_index_1d(a: Fraction, p: int) -> Cyc:
    """Integral of psi(a y^2) against the measure self-dual for (x, y) -> 2 a x y."""
    v = int(vp(a, p))
    N = max(1, (v + 3) // 2 + 1)
    M = max(0, N - v, (-v + 1) // 2)
    total = Cyc.rational(p, 0)
    mod = p ** (N + M)
    for t in range(mod):
        x = Fraction(t, p ** N)
        total = total + psi(a * x * x, p)
    # the cell p^M Z_p has measure p^{-M} |2a|^{1/2}
    return total * Cyc.p_power(p, -2 * M - v)


def weil_index_gauss(space: QuadSpace) -> Cyc:
    """Weil index from exact Gauss sums over a rational diagonalisation of q."""
    p = space.p
    S = space.S()
    D = space.dim
    P = la.eye(D)
    # Gram-Schmidt over Q
    cols = la.columns(P)
    diag = []
    for i in range(D):
        Gm = la.matmul(la.matmul(la.transpose(la.from_columns(cols)), S), la.from_columns(cols))
        if not Gm[i][i]:
            for j in range(i + 1, D):
                if Gm[i][j]:
                    cols[i] = [x + y for x, y in zip(cols[i], cols[j])]
                    break
            else:
                raise DegenerateForm("degenerate form")
            Gm = la.matmul(la.matmul(la.transpose(la.from_columns(cols)), S), la.from_columns(cols))
            if not Gm[i][i]:
                cols[i] = [x + y for x, y in zip(cols[i], cols[i + 1])]
                Gm = la.matmul(la.matmul(la.transpose(la.from_columns(cols)), S), la.from_columns(cols))
        for j in range(i + 1, D):
            f = Gm[j][i] / Gm[i][i]
            cols[j] = [x - f * y for x, y in zip(cols[j], cols[i])]
        Gm = la.matmul(la.matmul(la.transpose(la.from_columns(cols)), S), la.from_columns(cols))
        diag.append(Gm[i][i] / 2)
    out = Cyc.rational(p, 1)
    for a in diag:
        out = out * _gauss_index_1d(a, p)
    return out


# -- Schwartz functions ----------------------------------------------------------------


@functools.lru_cache(maxsize=4096)
def _inv_basis(L: Lattice):
    return la.inverse(L.B())


def _coords(L: Lattice, v) -> list:
    return la.matvec(_inv_basis(L), list(v))


def _in_lattice(L: Lattice, v) -> bool:
    p = L.p
    return all(vp(t, p) >= 0 for t in _coords(L, v))


def _canon_mu(mu, L: Lattice):
    t = [_rat_residue(x, L.p, 0) for x in _coords(L, mu)]
    return tuple(la.matvec(L.B(), t))


def _quotient_reps(big: Lattice, small: Lattice) -> List[list]:
    """Coset representatives of big / small."""
    B = big.B()
    A = la.solve_matrix(B, small.B())
    P, exps, _ = smith_form(A, big.p)
    cols = la.columns(la.matmul(B, la.inverse(P)))
    D = len(B)
    reps = []
    for t in itertools.product(*[range(big.p ** e) for e in exps]):
        reps.append([sum((ti * c[k] for ti, c in zip(t, cols) if ti), Fraction(0)) for k in range(D)])
    return reps


def _superlattices(L: Lattice) -> List[Lattice]:
    """All lattices containing L with index p."""
    p = L.p
    E = la.columns(L.B())
    D = len(E)
    out = []
    for lead in range(D):
        for tail in itertools.product(range(p), repeat=D - lead - 1):
            c = [0] * lead + [1] + list(tail)
            v = [sum((Fraction(ci, p) * e[k] for ci, e in zip(c, E) if ci), Fraction(0)) for k in range(D)]
            out.append(Lattice.from_generators(la.from_columns(E + [v]), p))
    return out


@dataclass
class Schwartz:
    """Finite sum of coef * 1_{mu + Lambda}."""

    space: QuadSpace
    terms: List[Tuple[Cyc, tuple, Lattice]]

    @property
    def p(self) -> int:
        return self.space.p

    @staticmethod
    def indicator(space: QuadSpace, L: Lattice, mu=None, coef=None) -> "Schwartz":
        mu = tuple(Fraction(x) for x in (mu if mu is not None else [0] * space.dim))
        c = coef if coef is not None else Cyc.rational(space.p, 1)
        return Schwartz(space, [(c, _canon_mu(mu, L), L)])

    def canonical(self) -> "Schwartz":
        merged: Dict[Tuple[tuple, Lattice], Cyc] = {}
        for c, mu, L in self.terms:
            key = (_canon_mu(mu, L), L)
            merged[key] = merged.get(key, Cyc.rational(self.p, 0)) + c
        return Schwartz(self.space, [(c, mu, L) for (mu, L), c in merged.items() if c])

    def coarsen(self) -> "Schwartz":
        """Merge full families of p sibling cosets with equal coefficients, repeatedly."""
        p = self.p
        terms = self.canonical().terms
        changed = True
        while changed:
            changed = False
            by_lat: Dict[Lattice, list] = {}
            for t in terms:
                by_lat.setdefault(t[2], []).append(t)
            out = []
            for L, group in by_lat.items():
                if len(group) < p:
                    out.extend(group)
                    continue
                for sup in _superlattices(L):
                    fam: Dict[tuple, list] = {}
                    for t in group:
                        fam.setdefault(_canon_mu(t[1], sup), []).append(t)
                    full = [k for k, ts in fam.items() if len(ts) == p and all(t[0] == ts[0][0] for t in ts)]
                    if full:
                        for k, ts in fam.items():
                            if k in full:
                                out.append((ts[0][0], k, sup))
                            else:
                                out.extend(ts)
                        changed = True
                        break
                else:
                    out.extend(group)
            terms = Schwartz(self.space, out).canonical().terms
        return Schwartz(self.space, terms)

    def __add__(self, other: "Schwartz") -> "Schwartz":
        return Schwartz(self.space, self.terms + other.terms).canonical()

    def scale(self, c) -> "Schwartz":
        return Schwartz(self.space, [(t * c, mu, L) for t, mu, L in self.terms])

    def __call__(self, x) -> Cyc:
        total = Cyc.rational(self.p, 0)
        for c, mu, L in self.terms:
            if _in_lattice(L, [a - b for a, b in zip(x, mu)]):
                total = total + c
        return total

    def reflect(self) -> "Schwartz":
        return Schwartz(self.space, [(c, tuple(-t for t in mu), L) for c, mu, L in self.terms]).canonical()

    def to_json(self) -> dict:
        return {
            "terms": [
                {"coef": coef_json(c), "mu": [rat_str(t) for t in mu], "lattice": L.to_json()}
                for c, mu, L in self.terms
            ]
        }


def random_coset_function(space: QuadSpace, rng, terms: int = 2) -> Schwartz:
    """A few random cosets of p^k Z^D (k in -1..1) with small rational coefficients."""
    p, D = space.p, space.dim
    out = []
    for _ in range(terms):
        k = rng.randint(-1, 1)
        L = Lattice.standard(D, p).scaled(Fraction(p) ** k)
        mu = [Fraction(rng.randrange(p), p) if rng.random() < 0.5 else Fraction(0) for _ in range(D)]
        c = Cyc.rational(p, Fraction(rng.randint(1, 5), rng.choice((1, 2))))
        out.extend(Schwartz.indicator(space, L, mu, c).terms)
    return Schwartz(space, out).canonical()


def lattice_volume(L: Lattice, space: QuadSpace) -> Cyc:
    """Self-dual volume: [L^* : L]^{-1/2} = p^{-v(det Gram)/2}."""
    B = L.B()
    G = la.matmul(la.matmul(la.transpose(B), space.S()), B)
    v = int(vp(la.det(G), space.p))
    return Cyc.p_power(space.p, -v)


def _fourier_term(c: Cyc, mu, L: Lattice, space: QuadSpace) -> List[Tuple[Cyc, tuple, Lattice]]:
    p = space.p
    vol = lattice_volume(L, space)
    Ld = dual_lattice(L, space.S())
    E = la.columns(Ld.B())
    pair = [space.B(e, list(mu)) for e in E]
    k = max([0] + [-int(vp(x, p)) for x in pair if x])
    base = c * vol
    if k == 0:
        return [(base, tuple([Fraction(0)] * space.dim), Ld)]
    j0 = next(j for j, x in enumerate(pair) if x and -vp(x, p) == k)
    x0 = E[j0]
    gens = [[t * p ** k for t in x0]]
    for j, e in enumerate(E):
        cj = pair[j] / pair[j0]
        gens.append([a - cj * b for a, b in zip(e, x0)])
    Lp = Lattice.from_generators(la.from_columns(gens), p)
    out = []
    for t in range(p ** k):
        out.append((base * psi(t * pair[j0], p), tuple(t * a for a in x0), Lp))
    return out


def fourier(f: Schwartz) -> Schwartz:
    terms = []
    for c, mu, L in f.terms:
        terms.extend(_fourier_term(c, mu, L, f.space))
    return Schwartz(f.space, terms).canonical()


def act_m(f: Schwartz, a) -> Schwartz:
    """chi(a) |a|^{D/2} phi(a x)."""
    a = Fraction(a)
    sp = f.space
    v = int(vp(a, sp.p))
    scal = Cyc.p_power(sp.p, -v * sp.dim) * sp.chi(a)
    terms = []
    for c, mu, L in f.terms:
        L2 = Lattice.from_generators(la.scale(1 / a, L.B()), sp.p)
        terms.append((c * scal, tuple(t / a for t in mu), L2))
    return Schwartz(sp, terms).canonical()


def _phase_lattice(b: Fraction, mu, L: Lattice, space: QuadSpace) -> Lattice:
    """Largest L' in L with psi(b q(.)) constant on the cosets of L' inside mu + L."""
    S = space.S()
    Ld = dual_lattice(L, S)
    gens = la.columns(Ld.B()) + [la.vscale(b, e) for e in la.columns(L.B())] + [la.vscale(b, list(mu))]
    return dual_lattice(Lattice.from_generators(la.from_columns(gens), space.p), S)


def act_n(f: Schwartz, b) -> Schwartz:
    """psi(b q(x)) phi(x)."""
    b = Fraction(b)
    sp = f.space
    p = sp.p
    terms = []
    for c, mu, L in f.terms:
        Lr = _phase_lattice(b, mu, L, sp)
        if Lr == L:
            terms.append((c * psi(b * sp.q(list(mu)), p), mu, L))
            continue
        for rep in _quotient_reps(L, Lr):
            nu = [x + y for x, y in zip(mu, rep)]
            terms.append((c * psi(b * sp.q(nu), p), tuple(nu), Lr))
    return Schwartz(sp, terms).coarsen()


def act_w(f: Schwartz, gamma: Cyc) -> Schwartz:
    return fourier(f).scale(gamma).coarsen()


def weil_act(word: Sequence[Tuple[str, object]], f: Schwartz, gamma: Cyc) -> Schwartz:
    """Apply a word like [("w", None), ("n", b), ("m", a)], rightmost letter first."""
    out = f
    for g, arg in reversed(list(word)):
        if g == "m":
            out = act_m(out, arg)
        elif g == "n":
            out = act_n(out, arg)
        elif g == "w":
            out = act_w(out, gamma)
        else:
            raise ValueError(f"unknown generator {g!r}")
    return out


def sl2_word_matrix(word) -> list:
    M = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]
    for g, arg in word:
        if g == "m":
            a = Fraction(arg)
            X = [[a, Fraction(0)], [Fraction(0), 1 / a]]
        elif g == "n":
            X = [[Fraction(1), Fraction(arg)], [Fraction(0), Fraction(1)]]
        else:
            X = [[Fraction(0), Fraction(1)], [Fraction(-1), Fraction(0)]]
        M = la.matmul(M, X)
    return M


def m_word(a) -> list:
    """A word in w and n(.) equal to m(a) in SL_2: m(a) = n(a) w n(1/a) w n(a) w."""
    a = Fraction(a)
    return [("n", a), ("w", None), ("n", 1 / a), ("w", None), ("n", a), ("w", None)]


# -- equality testing -------------------------------------------------------------------


def _lattice_sum(lats: Sequence[Lattice], vecs: Sequence[Sequence], p: int) -> Lattice:
    gens = []
    for L in lats:
        gens.extend(la.columns(L.B()))
    gens.extend([list(v) for v in vecs])
    return Lattice.from_generators(la.from_columns(gens), p)


def _lattice_meet(lats: Sequence[Lattice], space: QuadSpace) -> Lattice:
    I = la.eye(space.dim)
    duals = [dual_lattice(L, I) for L in lats]
    return dual_lattice(_lattice_sum(duals, [], space.p), I)


def coset_grid(fs: Sequence[Schwartz]):
    """Representatives of big/small where every f is supported in big and constant on
    small-cosets."""
    space = fs[0].space
    lats = [L for f in fs for _, _, L in f.terms]
    mus = [mu for f in fs for _, mu, _ in f.terms]
    if not lats:
        return []
    big = _lattice_sum(lats, mus, space.p)
    small = _lattice_meet(lats, space)
    return _quotient_reps(big, small)


def _term_key(t):
    c, mu, L = t
    return (L.sort_key(), mu, tuple(sorted(c.lift(max(c.K, 0)).c.items())), c.K)


def schwartz_equal(f: Schwartz, g: Schwartz) -> bool:
    f, g = f.coarsen(), g.coarsen()
    if sorted(map(_term_key, f.terms)) == sorted(map(_term_key, g.terms)):
        return True
    for x in coset_grid([f, g]):
        if f(x) != g(x):
            return False
    return True


# -- transformation law on orbital integrals -------------------------------------------


def _herm_lattice_real(L: Lattice, d: int) -> Lattice:
    """An O_F-lattice seen as a Z_(p)-lattice in the real coordinates."""
    cols = []
    sq = QuadExtElem(0, 1, d)
    for v in la.columns(L.B()):
        cols.append(real_coords(v, d))
        cols.append(real_coords([sq * t for t in v], d))
    return Lattice.from_generators(la.from_columns(cols), L.p)


def orbit_transform_check(x, a, ctx) -> dict:
    """Compare Orb(x, omega(m(a)) Phi) computed through the Weil action with the
    predicted chi_V(a) |a|^m Orb(a-scaled x, Phi)."""
    from .orbit import SemiLiePair, UnitaryPair, transfer_factor
    from .orbital import orb_core, orb_u

    p, d = ctx.p, ctx.d
    a = Fraction(a)
    m = x.m
    abs_a_m = Fraction(p) ** (-int(vp(a, p)) * m)
    if isinstance(x, UnitaryPair):
        space = hermitian_to_quadratic(x.gram, p, d)
        scaled = UnitaryPair(x.gram, x.g, [a * t for t in x.u], d)
        # stable self-dual lattices containing neither u nor a u contribute zero on both sides
        lats = set(_stable_selfdual_lattices(scaled, ctx)) | set(_stable_selfdual_lattices(x, ctx))
        lhs = Cyc.rational(p, 0)
        u_real = real_coords(x.u, d)
        for L in lats:
            f = Schwartz.indicator(space, _herm_lattice_real(L, d))
            lhs = lhs + act_m(f, a)(u_real)
        rhs = Cyc.rational(p, space.chi(a) * abs_a_m * orb_u(scaled, ctx))
        return {"lhs": lhs, "rhs": rhs, "equal": lhs == rhs, "chi": space.chi(a)}
    if isinstance(x, SemiLiePair):
        space = split_space(p, m)
        std = Lattice.standard(2 * m, p)
        f = act_m(Schwartz.indicator(space, std), a)
        # f = c * 1_{Lambda'}; read off the coefficient and the scaled lattice
        (c, mu, Lp), = f.terms
        scale = Lp.B()[0][0]
        # the orbital integral of c * 1_{S(O)} x 1_{Lambda'} at (gamma, u')
        P = orb_core(x.gamma, [t / scale for t in x.u1], [t / scale for t in x.u2], ctx)
        omega = transfer_factor(x, ctx)
        lhs = c * (omega * P.value_at(1))
        xa = SemiLiePair(x.gamma, [a * t for t in x.u1], [a * t for t in x.u2], d)
        Pa = orb_core(xa.gamma, xa.u1, xa.u2, ctx)
        eta_a = -1 if vp(a, p) % 2 else 1
        rhs = Cyc.rational(p, eta_a ** m * abs_a_m * transfer_factor(xa, ctx) * Pa.value_at(1))
        return {"lhs": lhs, "rhs": rhs, "equal": lhs == rhs, "chi": space.chi(a)}
    raise TypeError("expected a UnitaryPair or SemiLiePair")


def _stable_selfdual_lattices(x, ctx) -> List[Lattice]:
    from .orbital import _self_dual_gram

    p, d = ctx.p, ctx.d
    cols = []
    v = list(x.u)
    for _ in range(x.m):
        cols.append(v)
        v = la.matvec(x.g, v)
    N1 = Lattice.from_generators(la.from_columns(cols), p, "O_F", d)
    N1v = dual_lattice(N1, x.gram)
    if not N1v.contains(N1):
        return []
    out = []
    for L in lattices_between(N1, N1v):
        B = L.B()
        if not all(elem_val(t, p) >= 0 for r in la.matmul(la.matmul(la.inverse(B), x.g), B) for t in r):
            continue
        if _self_dual_gram(B, x.gram, p):
            out.append(L)
    return out
