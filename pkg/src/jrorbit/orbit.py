"""Orbit data on the symmetric (GL) side and the unitary side.

Conventions
-----------
* Hermitian pairing: <x, y> = x^T H conj(y).  g is unitary iff g^T H conj(g) = H.
* Symmetric space: S_m = {gamma in GL_m(F) : gamma * conj(gamma) = 1}.
* A semi-Lie pair is (gamma, u1, u2) with u1 a rational column and u2 a rational row.
* Invariants: the characteristic polynomial and the moments a_i = u2 gamma^i u1,
  resp. a_i = <g^i u, u>, for 0 <= i < m.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import linalg as la
from .errors import (
    DegenerateGram,
    NotRegular,
    OutsideOpenLocus,
    PreconditionFailed,
    SingularDenominator,
)
from .lattice import Lattice, dual_lattice, elem_val
from .padic import LocalFieldCtx, QuadExtElem, quad_character


def E(x, d: int) -> QuadExtElem:
    return la.as_elem(x, d)


def _col(v):
    return [[x] for x in v]


def _flat(M):
    return [r[0] for r in M]


def _real(x) -> Fraction:
    if isinstance(x, QuadExtElem):
        if x.b != 0:
            raise PreconditionFailed(f"expected a rational value, got {x}")
        return x.a
    return Fraction(x)


@dataclass
class SemiLiePair:
    gamma: list
    u1: list
    u2: list
    d: int

    @property
    def m(self) -> int:
        return len(self.gamma)

    def __post_init__(self):
        self.gamma = la.to_field(self.gamma, self.d)
        self.u1 = [Fraction(x) if not isinstance(x, QuadExtElem) else _real(x) for x in self.u1]
        self.u2 = [Fraction(x) if not isinstance(x, QuadExtElem) else _real(x) for x in self.u2]

    def in_symmetric_space(self) -> bool:
        return la.mat_eq(la.matmul(self.gamma, la.conj_mat(self.gamma)), la.eye(self.m, E(1, self.d)))

    def act(self, h) -> "SemiLiePair":
        """h . (gamma, u1, u2) = (h gamma h^-1, h u1, u2 h^-1) for h in GL_m(Q)."""
        h = la.to_field(h, None)
        hi = la.inverse(h)
        hE = la.to_field(h, self.d)
        hiE = la.to_field(hi, self.d)
        return SemiLiePair(
            la.matmul(la.matmul(hE, self.gamma), hiE),
            la.matvec(h, self.u1),
            la.vecmat(self.u2, hi),
            self.d,
        )


@dataclass
class UnitaryPair:
    gram: list
    g: list
    u: list
    d: int

    @property
    def m(self) -> int:
        return len(self.g)

    def __post_init__(self):
        self.gram = la.to_field(self.gram, self.d)
        self.g = la.to_field(self.g, self.d)
        self.u = [E(x, self.d) for x in self.u]

    def pair(self, x, y):
        return herm(self.gram, x, y)

    def is_unitary(self) -> bool:
        return is_unitary(self.g, self.gram)

    def act(self, k) -> "UnitaryPair":
        ki = la.inverse(k)
        return UnitaryPair(self.gram, la.matmul(la.matmul(k, self.g), ki), la.matvec(k, self.u), self.d)


@dataclass
class InvariantVector:
    charpoly: list
    moments: list

    def key(self):
        return tuple(self.charpoly), tuple(self.moments)

    def __eq__(self, other):
        return (
            isinstance(other, InvariantVector)
            and len(self.charpoly) == len(other.charpoly)
            and all(a == b for a, b in zip(self.charpoly, other.charpoly))
            and all(a == b for a, b in zip(self.moments, other.moments))
        )

    @property
    def m(self) -> int:
        return len(self.charpoly) - 1

    def to_json(self) -> dict:
        return {
            "charpoly": [E(c, 0).to_json() if not isinstance(c, QuadExtElem) else c.to_json() for c in self.charpoly],
            "moments": [E(c, 0).to_json() if not isinstance(c, QuadExtElem) else c.to_json() for c in self.moments],
        }


def herm(H, x, y):
    return la.dot(la.matvec(la.transpose(H), x), [la.conj(t) for t in y])


def is_unitary(g, H) -> bool:
    return la.mat_eq(la.matmul(la.matmul(la.transpose(g), H), la.conj_mat(g)), H)


def is_hermitian(H) -> bool:
    return la.mat_eq(la.transpose(H), la.conj_mat(H))


def is_conj_self_reciprocal(f: Sequence) -> bool:
    """T^m f(1/T) == f(0) * conj(f)(T) for monic f."""
    m = len(f) - 1
    rev = list(reversed(f))
    return all(rev[i] == f[0] * la.conj(f[i]) for i in range(m + 1))


# -- invariants and regularity ---------------------------------------------------


def invariants(x) -> InvariantVector:
    if isinstance(x, SemiLiePair):
        cp = la.charpoly(x.gamma)
        moments = []
        v = [E(t, x.d) for t in x.u1]
        for _ in range(x.m):
            moments.append(la.dot(x.u2, v))
            v = la.matvec(x.gamma, v)
        return InvariantVector(cp, moments)
    if isinstance(x, UnitaryPair):
        cp = la.charpoly(x.g)
        moments = []
        v = list(x.u)
        for _ in range(x.m):
            moments.append(x.pair(v, x.u))
            v = la.matvec(x.g, v)
        return InvariantVector(cp, moments)
    raise TypeError("expected SemiLiePair or UnitaryPair")


def krylov(A, v, m: int) -> list:
    """Matrix with columns v, Av, ..., A^{m-1} v."""
    cols = []
    w = list(v)
    for _ in range(m):
        cols.append(w)
        w = la.matvec(A, w)
    return la.from_columns(cols)


def krylov_rows(w, A, m: int) -> list:
    rows = []
    r = list(w)
    for _ in range(m):
        rows.append(r)
        r = la.vecmat(r, A)
    return rows


def is_regular_semisimple(x) -> bool:
    if isinstance(x, SemiLiePair):
        u1 = [E(t, x.d) for t in x.u1]
        u2 = [E(t, x.d) for t in x.u2]
        return bool(la.det(krylov(x.gamma, u1, x.m))) and bool(la.det(krylov_rows(u2, x.gamma, x.m)))
    if isinstance(x, UnitaryPair):
        return bool(la.det(krylov(x.g, x.u, x.m)))
    raise TypeError("expected SemiLiePair or UnitaryPair")


def is_strongly_rs(x) -> bool:
    if not is_regular_semisimple(x):
        return False
    A = x.gamma if isinstance(x, SemiLiePair) else x.g
    return la.is_squarefree_poly(la.charpoly(A))


def matches(s: SemiLiePair, u: UnitaryPair) -> bool:
    return invariants(s) == invariants(u)


def moment_gram(iv: InvariantVector, d: int) -> list:
    """G_ij = a_{i-j}, with a_{-k} = conj(a_k)."""
    m = iv.m
    a = [E(t, d) for t in iv.moments]
    return [[a[i - j] if i >= j else a[j - i].conj() for j in range(m)] for i in range(m)]


def decide_side(iv: InvariantVector, ctx: LocalFieldCtx) -> str:
    G = moment_gram(iv, ctx.d)
    det = la.det(G)
    if not det:
        raise DegenerateGram("moment Gram matrix is singular")
    return "split" if elem_val(det, ctx.p) % 2 == 0 else "nonsplit"


# -- constructive self-dual lattice search ---------------------------------------


def diagonalize_hermitian(H, ctx: LocalFieldCtx):
    """Return (P, diag) with P^T H conj(P) diagonal, P in GL_m(O_F)."""
    p, d = ctx.p, ctx.d
    m = len(H)
    G = la.to_field(H, d)
    P = la.eye(m, E(1, d))

    def gram_of(P):
        return la.matmul(la.matmul(la.transpose(P), G), la.conj_mat(P))

    for t in range(m):
        M = gram_of(P)
        best = None
        for i in range(t, m):
            for j in range(t, m):
                if M[i][j]:
                    v = elem_val(M[i][j], p)
                    if best is None or v < best[0] or (v == best[0] and i == j and best[1] != best[2]):
                        best = (v, i, j)
        if best is None:
            raise DegenerateGram("degenerate hermitian form")
        v, i, j = best
        if i != j:
            # replace column i by col_i + c col_j so the diagonal entry reaches valuation v
            for c in (E(1, d), E(QuadExtElem(0, 1, d), d)):
                cols = la.columns(P)
                trial = [a + c * b for a, b in zip(cols[i], cols[j])]
                val = herm(G, trial, trial)
                if val and elem_val(val, p) == v:
                    cols[i] = trial
                    P = la.from_columns(cols)
                    break
            else:
                raise DegenerateGram("could not create a diagonal pivot")
            M = gram_of(P)
        cols = la.columns(P)
        cols[t], cols[i] = cols[i], cols[t]
        P = la.from_columns(cols)
        M = gram_of(P)
        piv = M[t][t]
        cols = la.columns(P)
        for k in range(t + 1, m):
            if M[k][t]:
                f = M[k][t] / piv
                cols[k] = [a - f * b for a, b in zip(cols[k], cols[t])]
        P = la.from_columns(cols)
    M = gram_of(P)
    return P, [M[i][i] for i in range(m)]


def self_dual_lattice(H, ctx: LocalFieldCtx) -> Optional[Lattice]:
    """Build a self-dual O_F-lattice for <,>_H when one exists, else None."""
    p, d = ctx.p, ctx.d
    P, diag = diagonalize_hermitian(H, ctx)
    cols = la.columns(P)
    even, odd = [], []
    for k, lam in enumerate(diag):
        lam = lam.a if isinstance(lam, QuadExtElem) else Fraction(lam)
        v = elem_val(lam, p)
        if v % 2 == 0:
            even.append([x / Fraction(p) ** (v // 2) for x in cols[k]])
        else:
            s = Fraction(p) ** ((v - 1) // 2)
            odd.append(([x / s for x in cols[k]], lam / s / s / p))
    if len(odd) % 2:
        return None
    basis = list(even)
    for (e1, u1), (e2, u2) in zip(odd[0::2], odd[1::2]):
        target = (-u1 / u2)
        c = None
        for a in range(p):
            for b in range(p):
                cand = QuadExtElem(a, b, d)
                if (a or b) and elem_val(cand.norm() - target, p) >= 1:
                    c = cand
                    break
            if c is not None:
                break
        f1 = [(x + c * y) / p for x, y in zip(e1, e2)]
        basis.extend([f1, list(e2)])
    L = Lattice.from_generators(la.from_columns(basis), p, "O_F", d)
    if dual_lattice(L, H) != L:
        raise AssertionError("constructed lattice is not self-dual")
    return L


# -- transfer factors ------------------------------------------------------------


def transfer_factor(x: SemiLiePair, ctx: LocalFieldCtx) -> int:
    m = x.m
    K = la.det(krylov(x.gamma, [E(t, x.d) for t in x.u1], m))
    if not K:
        raise NotRegular("{gamma^i u1} is not a basis")
    val = la.det(x.gamma) ** (-(m // 2)) * K
    return quad_character(val, ctx, "eta_tilde_on_F")


def transfer_factor_group(gamma, ctx: LocalFieldCtx) -> int:
    n = len(gamma)
    G = la.to_field(gamma, ctx.d)
    e = [E(0, ctx.d)] * (n - 1) + [E(1, ctx.d)]
    K = la.det(krylov(G, e, n))
    if not K:
        raise NotRegular("{gamma^i e} is not a basis")
    return quad_character(la.det(G) ** (-(n // 2)) * K, ctx, "eta_tilde_on_F")


# -- Cayley transforms -----------------------------------------------------------


def cayley(x, direction: str = "toGroup"):
    """toGroup: x -> -(1-x)(1+x)^-1; toLie: g -> (1+g)(1-g)^-1."""
    n = len(x)
    one = la.one_like(x[0][0])
    I = la.eye(n, one)
    if direction == "toGroup":
        den = la.add(I, x)
        if not la.det(den):
            raise SingularDenominator("det(1 + x) = 0")
        return la.scale(-1, la.matmul(la.sub(I, x), la.inverse(den)))
    if direction == "toLie":
        den = la.sub(I, x)
        if not la.det(den):
            raise SingularDenominator("det(1 - g) = 0")
        return la.matmul(la.add(I, x), la.inverse(den))
    raise ValueError(f"unknown direction {direction!r}")


def in_unitary_lie(x, H) -> bool:
    return la.is_zero_matrix(la.add(la.matmul(la.transpose(x), H), la.matmul(H, la.conj_mat(x))))


def in_symmetric_lie(y) -> bool:
    return la.is_zero_matrix(la.add(y, la.conj_mat(y)))


def in_symmetric_group(g) -> bool:
    n = len(g)
    return la.mat_eq(la.matmul(g, la.conj_mat(g)), la.eye(n, la.one_like(g[0][0])))


def _blocks(M):
    m = len(M) - 1
    a = [row[:m] for row in M[:m]]
    b = [row[m] for row in M[:m]]
    c = list(M[m][:m])
    dd = M[m][m]
    return a, b, c, dd


def _assemble(a, b, c, dd):
    m = len(a)
    return [list(a[i]) + [b[i]] for i in range(m)] + [list(c) + [dd]]


def extended_gram(H, d: int):
    m = len(H)
    G = la.to_field(H, d)
    return _assemble(G, [E(0, d)] * m, [E(0, d)] * m, E(1, d))


@dataclass
class UnitaryReduction:
    g: list
    u: list
    e: QuadExtElem
    h: list
    u_block: list
    w: list
    corner: QuadExtElem
    u_tilde: list

    def identities(self, gprime, H) -> dict:
        """The four block identities, each checked against the Cayley image of g'."""
        d = self.corner.d
        m = len(self.g)
        one = E(1, d)
        xprime = cayley(la.to_field(gprime, d), "toLie")
        x = [row[:m] for row in xprime[:m]]
        u_tilde_block = [xprime[i][m] for i in range(m)]
        n = len(gprime)
        det_lhs = la.det(la.sub(la.eye(n, one), gprime))
        det_rhs = (one - self.corner) * la.det(la.sub(la.eye(m, one), self.g))
        eps_d = (one - self.corner.conj()) / (one - self.corner)
        gw = la.matvec(self.g, self.w)
        return {
            "g": la.mat_eq(cayley(x, "toGroup"), self.g),
            "u_tilde": all(a == b for a, b in zip(u_tilde_block, self.u_tilde)),
            "det": det_lhs == det_rhs,
            "gw": all(a == eps_d * b for a, b in zip(gw, self.u_block)),
        }


def _row_of(w, H):
    """Row r with r.v = <v, w>."""
    return la.matvec(H, [la.conj(t) for t in w])


def _w_of_row(r, H):
    return [la.conj(t) for t in la.solve(H, list(r))]


def reduce_unitary(gprime, H, ctx: LocalFieldCtx, variant: str = "r", xi=None) -> UnitaryReduction:
    """Reduction (g', xi) -> (g, u_out, e) for g' unitary on V + F u0 with <u0, u0> = 1."""
    d = ctx.d
    Gp = la.to_field(gprime, d)
    Hm = la.to_field(H, d)
    if xi is not None:
        Gp = la.scale(E(xi, d), Gp)
    h, u, r, dd = _blocks(Gp)
    n = len(Gp)
    m = n - 1
    one = E(1, d)
    if dd == one or not la.det(la.sub(la.eye(n, one), Gp)):
        raise OutsideOpenLocus("1 - d = 0 or det(1 - g') = 0")
    w = _w_of_row(r, Hm)
    g = la.add(h, la.scale((one - dd).inverse(), [[ui * rj for rj in r] for ui in u]))
    I = la.eye(m, one)
    u_tilde = la.vscale((one - dd).inverse() * 2, _flat(la.solve_matrix(la.sub(I, g), _col(u))))
    xprime = cayley(Gp, "toLie")
    e = xprime[m][m]
    sq = ctx.sqrt_d
    if variant == "r":
        out = [t / ((one - dd) * sq) for t in u]
    elif variant in ("r_natural", "natural"):
        out = [t / sq for t in u_tilde]
    else:
        raise ValueError(f"unknown variant {variant!r}")
    red = UnitaryReduction(g, out, e, h, u, w, dd, u_tilde)
    red.twisted = Gp
    return red


def lift_unitary(g, u_red, e, H, ctx: LocalFieldCtx, variant: str = "r"):
    """Inverse of reduce_unitary (with xi = 1) given the corner e of the Lie element."""
    d = ctx.d
    G = la.to_field(g, d)
    Hm = la.to_field(H, d)
    m = len(G)
    one = E(1, d)
    sq = ctx.sqrt_d
    u_red = [E(t, d) for t in u_red]
    if variant == "r":
        ut = la.vscale(sq * 2, _flat(la.solve_matrix(la.sub(la.eye(m, one), G), _col(u_red))))
    else:
        ut = [sq * t for t in u_red]
    x = cayley(G, "toLie")
    ut_star = _row_of(ut, Hm)
    xprime = _assemble(x, ut, [-t for t in ut_star], E(e, d))
    return cayley(xprime, "toGroup")


@dataclass
class SymmetricReduction:
    gamma: list
    u1: list
    u2: list
    e: QuadExtElem
    a: list
    b: list
    c: list
    corner: QuadExtElem
    b_tilde: list
    c_tilde: list

    def identities(self, gprime) -> dict:
        """Block identities, each checked against the Cayley image of gamma'."""
        d = self.corner.d
        m = len(self.gamma)
        one = E(1, d)
        yprime = cayley(la.to_field(gprime, d), "toLie")
        y = [row[:m] for row in yprime[:m]]
        eps_d = (one - self.corner.conj()) / (one - self.corner)
        gb = la.matvec(self.gamma, [t.conj() for t in self.b])
        n = len(gprime)
        return {
            "gamma": la.mat_eq(cayley(y, "toGroup"), self.gamma),
            "b_tilde": all(x == yprime[i][m] for i, x in enumerate(self.b_tilde)),
            "c_tilde": all(x == yprime[m][j] for j, x in enumerate(self.c_tilde)),
            "gamma_bbar": all(x == eps_d * y for x, y in zip(gb, self.b)),
            "det": la.det(la.sub(la.eye(n, one), gprime)) == (one - self.corner) * la.det(la.sub(la.eye(m, one), self.gamma)),
        }


def reduce_symmetric(gprime, ctx: LocalFieldCtx, variant: str = "r", xi=None) -> SymmetricReduction:
    d = ctx.d
    Gp = la.to_field(gprime, d)
    if xi is not None:
        Gp = la.scale(E(xi, d), Gp)
    a, b, c, dd = _blocks(Gp)
    n = len(Gp)
    m = n - 1
    one = E(1, d)
    if dd == one or not la.det(la.sub(la.eye(n, one), Gp)):
        raise OutsideOpenLocus("1 - d = 0 or det(1 - gamma') = 0")
    gamma = la.add(a, la.scale((one - dd).inverse(), [[bi * cj for cj in c] for bi in b]))
    I = la.eye(m, one)
    inv = la.inverse(la.sub(I, gamma))
    bt = la.vscale((one - dd).inverse() * 2, la.matvec(inv, b))
    ct = la.vscale((one - dd).inverse() * 2, la.vecmat(c, inv))
    yprime = cayley(Gp, "toLie")
    y = [row[:m] for row in yprime[:m]]
    e = yprime[m][m]
    sq = ctx.sqrt_d
    u1 = [t / sq for t in bt]
    if variant == "r":
        ysq = la.sub(I, la.matmul(y, y))
        u2 = [t / sq for t in la.vecmat(ct, la.inverse(ysq))]
    elif variant in ("r_natural", "natural"):
        u2 = [t / sq for t in ct]
    else:
        raise ValueError(f"unknown variant {variant!r}")
    u1 = [_real(t) for t in u1]
    u2 = [_real(t) for t in u2]
    red = SymmetricReduction(gamma, u1, u2, e, a, b, c, dd, bt, ct)
    red.twisted = Gp
    return red


def lift_symmetric(gamma, u1, u2, e, ctx: LocalFieldCtx, variant: str = "r"):
    d = ctx.d
    G = la.to_field(gamma, d)
    m = len(G)
    one = E(1, d)
    sq = ctx.sqrt_d
    y = cayley(G, "toLie")
    bt = [sq * E(t, d) for t in u1]
    if variant == "r":
        ysq = la.sub(la.eye(m, one), la.matmul(y, y))
        ct = la.vecmat([sq * E(t, d) for t in u2], ysq)
    else:
        ct = [sq * E(t, d) for t in u2]
    yprime = _assemble(y, bt, ct, E(e, d))
    return cayley(yprime, "toGroup")


def group_invariants(M) -> tuple:
    """Characteristic polynomial and the corner entries (M^i)_{nn}, 1 <= i < n.

    Valid for the unitary side only when the last basis vector is orthogonal to the rest
    and has norm one, which is the block convention used throughout.
    """
    n = len(M)
    cp = la.charpoly(M)
    corners = []
    P = M
    for _ in range(1, n):
        corners.append(P[n - 1][n - 1])
        P = la.matmul(P, M)
    return tuple(cp), tuple(corners)


def matches_group(gamma_prime, gprime) -> bool:
    return group_invariants(gamma_prime) == group_invariants(gprime)


def norm_one_candidates(d: int, bound: int = 6):
    """xi = z / conj(z) for z = a + b sqrt d with small |a|, |b|; xi = 1 comes first."""
    seen = set()
    for s in range(0, 2 * bound + 1):
        for a in range(-bound, bound + 1):
            for b in range(0, bound + 1):
                if abs(a) + b != s or (a == 0 and b == 0):
                    continue
                z = QuadExtElem(a, b, d)
                xi = z / z.conj()
                if xi not in seen:
                    seen.add(xi)
                    yield xi


# -- random generators -----------------------------------------------------------


def rand_rat(rng: random.Random, p: int, num: int = 4, allow_p_den: bool = False) -> Fraction:
    n = rng.randint(-num, num)
    dens = [1, 2, 4, 5, 7] if p not in (5, 7) else [1, 2, 4, 11, 13]
    den = rng.choice(dens)
    if allow_p_den and rng.random() < 0.2:
        den *= p
    return Fraction(n, den)


def rand_elem(rng, d: int, p: int, num: int = 4) -> QuadExtElem:
    return QuadExtElem(rand_rat(rng, p, num), rand_rat(rng, p, num), d)


def random_antihermitian_lie(rng, H, d: int, p: int):
    """x with x^T H + H conj(x) = 0, via x = conj(H^-1 Y), Y* = -Y."""
    m = len(H)
    Y = [[E(0, d)] * m for _ in range(m)]
    for i in range(m):
        Y[i][i] = QuadExtElem(0, rand_rat(rng, p), d)
        for j in range(i + 1, m):
            z = rand_elem(rng, d, p)
            Y[i][j] = z
            Y[j][i] = -z.conj()
    Hm = la.to_field(H, d)
    return la.conj_mat(la.solve_matrix(Hm, Y))


def random_unitary(rng, H, d: int, p: int):
    while True:
        x = random_antihermitian_lie(rng, H, d, p)
        try:
            g = cayley(x, "toGroup")
        except SingularDenominator:
            continue
        return g


def random_symmetric_lie(rng, n: int, d: int, p: int):
    return [[QuadExtElem(0, rand_rat(rng, p), d) for _ in range(n)] for _ in range(n)]


def random_symmetric(rng, n: int, d: int, p: int):
    while True:
        y = random_symmetric_lie(rng, n, d, p)
        try:
            return cayley(y, "toGroup")
        except SingularDenominator:
            continue


def random_hermitian_gram(rng, m: int, d: int, p: int, diagonal: bool = True):
    H = [[E(0, d)] * m for _ in range(m)]
    for i in range(m):
        v = Fraction(rng.choice([1, 2, -1, p, 1, 3 if p != 3 else 1]))
        H[i][i] = E(v, d)
    if not diagonal:
        for i in range(m):
            for j in range(i + 1, m):
                z = QuadExtElem(rng.randint(-1, 1), rng.randint(-1, 1), d)
                H[i][j] = z
                H[j][i] = z.conj()
    if not la.det(H):
        return random_hermitian_gram(rng, m, d, p, diagonal)
    return H


# -- synthesis of representatives from invariants ----------------------------------


def _sigma_coords(f, c: list, d: int) -> list:
    """sigma(sum c_i T^i) = sum conj(c_i) T^{-i} in the basis 1..T^{m-1} of F[T]/(f)."""
    m = len(f) - 1
    C = la.companion(f)
    Cinv = la.inverse(C)
    out = [E(0, d)] * m
    v = [E(1, d)] + [E(0, d)] * (m - 1)
    for i in range(m):
        out = [o + c[i].conj() * t for o, t in zip(out, v)]
        v = la.matvec(Cinv, v)
    return out


def fixed_basis(f, d: int) -> list:
    """Columns (T-coordinates) of an F0-basis of the sigma-fixed part of F[T]/(f)."""
    f = [E(t, d) for t in f]
    m = len(f) - 1
    sq = QuadExtElem(0, 1, d)
    cands = []
    for i in range(m):
        ei = [E(1 if k == i else 0, d) for k in range(m)]
        s = _sigma_coords(f, ei, d)
        cands.append([a + b for a, b in zip(ei, s)])
        cands.append([sq * (a - b) for a, b in zip(ei, s)])
    chosen = []
    for v in cands:
        trial = chosen + [v]
        real = [[x.a for x in w] + [x.b for x in w] for w in trial]
        if la.rank(la.to_field(real, None)) == len(trial):
            chosen.append(v)
        if len(chosen) == m:
            break
    if len(chosen) < m:
        raise PreconditionFailed("characteristic polynomial is not conjugate self-reciprocal")
    return la.from_columns(chosen)


def synthesize_semilie(iv: InvariantVector, ctx: LocalFieldCtx) -> SemiLiePair:
    d = ctx.d
    f = [E(t, d) for t in iv.charpoly]
    if not is_conj_self_reciprocal(f):
        raise PreconditionFailed("characteristic polynomial is not conjugate self-reciprocal")
    P = fixed_basis(f, d)
    Pinv = la.inverse(P)
    C = la.companion(f)
    gamma = la.matmul(la.matmul(Pinv, C), P)
    e0 = [E(1, d)] + [E(0, d)] * (iv.m - 1)
    u1 = la.matvec(Pinv, e0)
    u2 = la.vecmat([E(t, d) for t in iv.moments], P)
    return SemiLiePair(gamma, [_real(t) for t in u1], [_real(t) for t in u2], d)


def synthesize_unitary(iv: InvariantVector, ctx: LocalFieldCtx) -> UnitaryPair:
    d = ctx.d
    f = [E(t, d) for t in iv.charpoly]
    G = moment_gram(iv, d)
    g = la.companion(f)
    if not is_unitary(g, G):
        raise PreconditionFailed("moments are inconsistent with the characteristic polynomial")
    u = [E(1, d)] + [E(0, d)] * (iv.m - 1)
    return UnitaryPair(G, g, u, d)


def random_semilie_rank2(rng, ctx: LocalFieldCtx, num: int = 3) -> SemiLiePair:
    """Random m = 2 semi-Lie pair with integral, conjugate self-reciprocal charpoly."""
    d, p = ctx.d, ctx.p
    while True:
        z = QuadExtElem(rng.randint(-num, num), rng.randint(-num, num), d)
        if not z:
            continue
        lam = Fraction(rng.randint(-num, num), rng.choice([1, 1, 2]))
        c0 = z / z.conj()
        c1 = z * lam
        f = [c0, c1, E(1, d)]
        if min(elem_val(c0, p), elem_val(c1, p)) < 0:
            continue
        if not la.is_squarefree_poly(f):
            continue
        P = fixed_basis(f, d)
        Pinv = la.inverse(P)
        gamma = la.matmul(la.matmul(Pinv, la.companion(f)), P)
        u1 = [_real(t) for t in la.matvec(Pinv, [E(1, d), E(0, d)])]
        u2 = [Fraction(rng.randint(-num * 3, num * 3)) * Fraction(p) ** rng.randint(0, 2) for _ in range(2)]
        s = SemiLiePair(gamma, u1, u2, d)
        if is_regular_semisimple(s):
            return s


def random_semilie(rng, m: int, ctx: LocalFieldCtx) -> SemiLiePair:
    gamma = random_symmetric(rng, m, ctx.d, ctx.p)
    u1 = [rand_rat(rng, ctx.p) for _ in range(m)]
    u2 = [rand_rat(rng, ctx.p) for _ in range(m)]
    return SemiLiePair(gamma, u1, u2, ctx.d)


def random_gl(rng, m: int, p: int, num: int = 3):
    while True:
        h = [[Fraction(rng.randint(-num, num)) for _ in range(m)] for _ in range(m)]
        if rng.random() < 0.5:
            h[0] = [x * p for x in h[0]]
        if la.det(h):
            return h
