"""Exact orbital integrals as Laurent polynomials in X = q^{-s}, and the FL harness."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional

from . import linalg as la
from .errors import NonSplitSpace, NotIntegral, NotRegular, PreconditionFailed
from .lattice import Lattice, dot_dual, dual_lattice, elem_val, hnf, lattice_index, lattices_between, matrix_integral
from .orbit import (
    E,
    InvariantVector,
    SemiLiePair,
    UnitaryPair,
    decide_side,
    is_conj_self_reciprocal,
    is_regular_semisimple,
    reduce_symmetric,
    synthesize_semilie,
    synthesize_unitary,
    transfer_factor,
)
from .padic import LocalFieldCtx, QuadExtElem, rat_str


class LaurentX:
    """Finitely supported sum c_k X^k with rational c_k."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Optional[Dict[int, Fraction]] = None):
        self.coeffs = {int(k): Fraction(v) for k, v in (coeffs or {}).items() if v}

    @classmethod
    def monomial(cls, k: int, c=1) -> "LaurentX":
        return cls({k: Fraction(c)})

    def __add__(self, other: "LaurentX") -> "LaurentX":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return LaurentX(out)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return LaurentX({k: v * other for k, v in self.coeffs.items()})
        out: Dict[int, Fraction] = {}
        for k, v in self.coeffs.items():
            for j, w in other.coeffs.items():
                out[k + j] = out.get(k + j, 0) + v * w
        return LaurentX(out)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentX({0: other})
        return isinstance(other, LaurentX) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def is_zero(self) -> bool:
        return not self.coeffs

    def value_at(self, x) -> Fraction:
        return sum((v * Fraction(x) ** k for k, v in self.coeffs.items()), Fraction(0))

    def derivative_coefficient(self) -> Fraction:
        """-sum k c_k: the coefficient of log q in d/ds at s = 0."""
        return -sum((k * v for k, v in self.coeffs.items()), Fraction(0))

    def to_json(self) -> dict:
        return {"coeffs": {str(k): rat_str(v) for k, v in sorted(self.coeffs.items())}}

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"({v})X^{k}" for k, v in sorted(self.coeffs.items()))


@dataclass
class SpecialValues:
    value0: Fraction
    dvalue0: Fraction

    def to_json(self) -> dict:
        return {"value0": rat_str(self.value0), "dvalue0": rat_str(self.dvalue0)}


def special_values(P: LaurentX, omega: int) -> SpecialValues:
    return SpecialValues(omega * P.value_at(1), omega * P.derivative_coefficient())


@dataclass
class OrbStats:
    quotient_length: int = 0
    candidates: int = 0
    contributing: int = 0


def _poly_integral(f, p: int) -> bool:
    return all(elem_val(c, p) >= 0 for c in f)


def _restrict_scalars_intersection(vectors, ctx: LocalFieldCtx) -> Lattice:
    """(sum O_F v) intersected with Q^m, for O_F-spanning vectors v in F^m."""
    d, p = ctx.d, ctx.p
    m = len(vectors[0])
    cols = []
    for v in vectors:
        v = [E(t, d) for t in v]
        re = [t.a for t in v]
        im = [t.b for t in v]
        cols.append(re + im)
        cols.append([d * t for t in im] + re)
    try:
        H = hnf(la.from_columns(cols), p)
    except Exception as exc:
        raise NotRegular("vectors do not span F^m") from exc
    B = [row[:m] for row in H[:m]]
    return Lattice.from_generators(B, p, "O_F0")


def _real_row_dual(rows, ctx: LocalFieldCtx) -> Lattice:
    """{x in Q^m : r . x in O_F for all rows r} (rows over F)."""
    d, p = ctx.d, ctx.p
    gens = []
    for r in rows:
        r = [E(t, d) for t in r]
        gens.append([t.a for t in r])
        gens.append([t.b for t in r])
    try:
        N = Lattice.from_generators(la.from_columns(gens), p, "O_F0")
    except Exception as exc:
        raise NotRegular("rows do not span the dual space") from exc
    return dot_dual(N)


def orb_core(a, b, c, ctx: LocalFieldCtx, stats: Optional[OrbStats] = None) -> LaurentX:
    """Sum over Z_(p)-lattices L in Q^m with a stabilising O_F (x) L, b in O_F (x) L and
    c(L) in O_F, of (-X)^{d(L)}."""
    d, p = ctx.d, ctx.p
    A = la.to_field(a, d)
    m = len(A)
    bv = [E(t, d) for t in b]
    cv = [E(t, d) for t in c]
    if not _poly_integral(la.charpoly(A), p):
        return LaurentX()
    krylov_cols = []
    v = bv
    for _ in range(m):
        krylov_cols.append(v)
        v = la.matvec(A, v)
    M1 = _restrict_scalars_intersection(krylov_cols, ctx)
    rows = []
    r = cv
    for _ in range(m):
        rows.append(r)
        r = la.vecmat(r, A)
    M2 = _real_row_dual(rows, ctx)
    if not M2.contains(M1):
        return LaurentX()
    std = Lattice.standard(m, p)
    if stats is not None:
        stats.quotient_length = lattice_index(M1, M2)
    total = LaurentX()
    for L in lattices_between(M1, M2):
        if stats is not None:
            stats.candidates += 1
        B = la.to_field(L.B(), d)
        Binv = la.inverse(B)
        if not matrix_integral(la.matmul(la.matmul(Binv, A), B), p):
            continue
        if not all(elem_val(t, p) >= 0 for t in la.matvec(Binv, bv)):
            continue
        if not all(elem_val(t, p) >= 0 for t in la.vecmat(cv, B)):
            continue
        k = lattice_index(L, std)
        if stats is not None:
            stats.contributing += 1
        total = total + LaurentX.monomial(k, (-1) ** (k % 2))
    return total


def orb_gl(x: SemiLiePair, ctx: LocalFieldCtx, stats: Optional[OrbStats] = None) -> LaurentX:
    if not is_regular_semisimple(x):
        raise NotRegular("semi-Lie pair is not regular semisimple")
    return orb_core(x.gamma, x.u1, x.u2, ctx, stats)


def orb_group(gamma_prime, ctx: LocalFieldCtx, stats: Optional[OrbStats] = None) -> LaurentX:
    """Orbital integral of 1_{S_n(O)} at gamma' under GL_{n-1} acting on the first n-1
    coordinates, computed directly from the block decomposition."""
    G = la.to_field(gamma_prime, ctx.d)
    n = len(G)
    m = n - 1
    a = [row[:m] for row in G[:m]]
    b = [G[i][m] for i in range(m)]
    c = G[m][:m]
    if elem_val(G[m][m], ctx.p) < 0:
        return LaurentX()
    return orb_core(a, b, c, ctx, stats)


def _self_dual_gram(B, H, p: int) -> bool:
    gram = la.matmul(la.matmul(la.transpose(B), H), la.conj_mat(B))
    return matrix_integral(gram, p) and elem_val(la.det(gram), p) == 0


def orb_u(x: UnitaryPair, ctx: LocalFieldCtx, stats: Optional[OrbStats] = None) -> int:
    """Number of g-stable self-dual O_F-lattices containing u."""
    d, p = ctx.d, ctx.p
    if not is_regular_semisimple(x):
        raise NotRegular("unitary pair is not regular semisimple")
    H = x.gram
    if elem_val(la.det(H), p) % 2:
        raise NonSplitSpace("hermitian space has no self-dual lattice")
    if not _poly_integral(la.charpoly(x.g), p):
        return 0
    cols = []
    v = list(x.u)
    for _ in range(x.m):
        cols.append(v)
        v = la.matvec(x.g, v)
    N1 = Lattice.from_generators(la.from_columns(cols), p, "O_F", d)
    N1v = dual_lattice(N1, H)
    if not N1v.contains(N1):
        return 0
    if stats is not None:
        stats.quotient_length = lattice_index(N1, N1v)
    count = 0
    for L in lattices_between(N1, N1v):
        if stats is not None:
            stats.candidates += 1
        B = L.B()
        if not matrix_integral(la.matmul(la.matmul(la.inverse(B), x.g), B), p):
            continue
        if _self_dual_gram(B, H, p):
            count += 1
    if stats is not None:
        stats.contributing = count
    return count


# -- maximal orders --------------------------------------------------------------


def _fp2_roots_repeated(f, ctx: LocalFieldCtx):
    """Roots in F_{p^2} (as integer pairs) of both f mod p and f' mod p."""
    p, d = ctx.p, ctx.d
    fd = la.poly_deriv(f)
    out = []
    for a in range(p):
        for b in range(p):
            r = QuadExtElem(a, b, d)
            if elem_val(la.poly_eval(f, r), p) >= 1 and elem_val(la.poly_eval(fd, r), p) >= 1:
                out.append(r)
    return out


def _squarefree_mod_p(f, ctx: LocalFieldCtx) -> bool:
    """gcd(f, f') mod p has degree 0, via the resultant valuation."""
    return elem_val(discriminant(f), ctx.p) == 0


def discriminant(f):
    """Discriminant of monic f as the Sylvester resultant with f'."""
    f = list(f)
    g = la.poly_deriv(f)
    m = len(f) - 1
    k = len(g) - 1
    n = m + k
    z = la.zero_like(f[0])
    S = []
    for i in range(k):
        row = [z] * n
        for j, c in enumerate(reversed(f)):
            row[i + j] = c
        S.append(row)
    for i in range(m):
        row = [z] * n
        for j, c in enumerate(reversed(g)):
            row[i + j] = c
        S.append(row)
    res = la.det(S)
    return res * (-1) ** (m * (m - 1) // 2 % 2)


def is_maximal_order(g, ctx: LocalFieldCtx) -> bool:
    """Whether O_F[g] is the maximal order of F[g] (m <= 3, charpoly squarefree)."""
    G = la.to_field(g, ctx.d)
    f = la.charpoly(G)
    return is_maximal_order_poly(f, ctx)


def is_maximal_order_poly(f, ctx: LocalFieldCtx) -> bool:
    p = ctx.p
    f = [E(t, ctx.d) for t in f]
    if not _poly_integral(f, p):
        raise NotIntegral("characteristic polynomial is not integral")
    if not la.is_squarefree_poly(f):
        raise NotRegular("characteristic polynomial is not squarefree")
    if len(f) - 1 > 3:
        raise NotImplementedError("maximality test implemented for m <= 3")
    if _squarefree_mod_p(f, ctx):
        return True
    # every repeated factor mod p is linear when m <= 3
    for r in _fp2_roots_repeated(f, ctx):
        if elem_val(la.poly_eval(f, r), p) >= 2:
            return False
    return True


# -- Fundamental lemma harness -----------------------------------------------------


@dataclass
class FLReport:
    side: str
    orb_gl: LaurentX
    omega: int
    gl: SpecialValues
    orb_u: Optional[int]
    verdict: str
    maximal_order: Optional[bool] = None
    quotient_length_gl: int = 0
    quotient_length_u: Optional[int] = None

    def to_json(self) -> dict:
        out = {
            "side": self.side,
            "orbGL": self.orb_gl.to_json(),
            "omega": self.omega,
            "value0": rat_str(self.gl.value0),
            "dvalue0": rat_str(self.gl.dvalue0),
            "orbU": self.orb_u,
            "verdict": self.verdict,
            "quotientLengthGL": self.quotient_length_gl,
        }
        if self.quotient_length_u is not None:
            out["quotientLengthU"] = self.quotient_length_u
        if self.maximal_order is not None:
            out["maximalOrder"] = self.maximal_order
        return out


def fl_verify(iv: InvariantVector, ctx: LocalFieldCtx) -> FLReport:
    f = [E(t, ctx.d) for t in iv.charpoly]
    if not _poly_integral(f, ctx.p):
        raise NotIntegral("characteristic polynomial is not integral")
    if not is_conj_self_reciprocal(f):
        raise PreconditionFailed("characteristic polynomial is not conjugate self-reciprocal")
    if not la.is_squarefree_poly(f):
        raise NotRegular("not strongly regular semisimple")
    side = decide_side(iv, ctx)
    s = synthesize_semilie(iv, ctx)
    st = OrbStats()
    P = orb_gl(s, ctx, st)
    omega = transfer_factor(s, ctx)
    sv = special_values(P, omega)
    count = None
    qu = None
    if side == "split":
        u = synthesize_unitary(iv, ctx)
        su = OrbStats()
        count = orb_u(u, ctx, su)
        qu = su.quotient_length
        ok = sv.value0 == count
    else:
        ok = sv.value0 == 0
    maximal = None
    if iv.m <= 3:
        maximal = is_maximal_order_poly(f, ctx)
    return FLReport(side, P, omega, sv, count, "PASS" if ok else "FAIL", maximal, st.quotient_length, qu)


def orb_reduction_check(gprime, gamma_prime, xi, ctx: LocalFieldCtx, gram=None) -> dict:
    """Group orbital integral at gamma' against the semi-Lie integrals of both reductions.

    gprime is only used to confirm that the pair matches; pass None to skip that.
    """
    from .orbit import matches_group

    d, p = ctx.d, ctx.p
    xi = E(xi, d)
    G = la.to_field(gamma_prime, d)
    n = len(G)
    one = E(1, d)
    twisted = la.scale(xi, G)
    corner = twisted[n - 1][n - 1]
    if one - corner == 0 or elem_val(one - corner, p) != 0:
        raise PreconditionFailed("1 - xi d is not a unit")
    det = la.det(la.sub(la.eye(n, one), twisted))
    if not det or elem_val(det, p) != 0:
        raise PreconditionFailed("det(1 - xi gamma') is not a unit")
    if gprime is not None and not matches_group(G, la.to_field(gprime, d)):
        raise PreconditionFailed("gamma' and g' do not match")
    group = orb_group(G, ctx)
    red = {}
    for variant in ("r", "r_natural"):
        R = reduce_symmetric(G, ctx, variant, xi)
        red[variant] = orb_core(R.gamma, R.u1, R.u2, ctx)
    return {
        "group": group,
        "r": red["r"],
        "r_natural": red["r_natural"],
        "equal": group == red["r"] == red["r_natural"],
    }
