"""Lattices over Z_(p) (ring "O_F0") and over O_F (ring "O_F").

A lattice is stored by a column basis in Hermite normal form: upper triangular,
diagonal entries p^k, entries above the diagonal reduced to a canonical residue
modulo the diagonal entry of their row.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple

from . import linalg as la
from .errors import DegenerateForm, NotNested, SingularBasis
from .padic import INF, QuadExtElem, frac_mod, rat_str, vp

RINGS = ("O_F0", "O_F")


def _vrat(x, p):
    return vp(x, p)


def elem_val(x, p: int):
    if isinstance(x, QuadExtElem):
        return min(vp(x.a, p), vp(x.b, p))
    return vp(x, p)


def is_integral(x, p: int) -> bool:
    return elem_val(x, p) >= 0


def matrix_integral(A, p: int) -> bool:
    return all(elem_val(x, p) >= 0 for r in A for x in r)


def _rat_residue(r: Fraction, p: int, k: int) -> Fraction:
    """Canonical representative of r + p^k Z_(p)."""
    v = vp(r, p)
    if v == INF:
        return Fraction(0)
    J = max(0, -v, -k)
    mod_exp = k + J
    t = r * Fraction(p) ** J
    return Fraction(frac_mod(t, p, mod_exp), p ** J) if mod_exp > 0 else Fraction(0)


def residue(x, p: int, k: int):
    if isinstance(x, QuadExtElem):
        return QuadExtElem(_rat_residue(x.a, p, k), _rat_residue(x.b, p, k), x.d)
    return _rat_residue(Fraction(x), p, k)


def _pk(p: int, k: int, like):
    return like * 0 + Fraction(p) ** k


def _unit_div(x, p: int):
    """Write x = p^k * u; return (k, u)."""
    k = elem_val(x, p)
    return k, x / Fraction(p) ** k


def hnf(gens: Sequence[Sequence], p: int) -> List[list]:
    """Column HNF of the lattice generated by the given columns (m x n matrix, n >= m)."""
    A = la.copy(gens)
    m = len(A)
    n = len(A[0]) if m else 0
    cols = [[A[i][j] for i in range(m)] for j in range(n)]
    basis: List[Optional[list]] = [None] * m
    remaining = cols
    for i in range(m - 1, -1, -1):
        best = None
        for idx, c in enumerate(remaining):
            if c[i]:
                v = elem_val(c[i], p)
                if best is None or v < best[0]:
                    best = (v, idx)
        if best is None:
            raise SingularBasis("generators do not span a full-rank lattice")
        piv = remaining.pop(best[1])
        k, u = _unit_div(piv[i], p)
        piv = [x / u for x in piv]
        new_rem = []
        for c in remaining:
            if c[i]:
                f = c[i] / piv[i]
                c = [x - f * y for x, y in zip(c, piv)]
            if any(c):
                new_rem.append(c)
        remaining = new_rem
        basis[i] = piv
    # reduce above-diagonal entries, row by row from the bottom of each column
    for j in range(m):
        col = basis[j]
        for i in range(j - 1, -1, -1):
            k = elem_val(basis[i][i], p)
            rep = residue(col[i], p, k)
            t = (col[i] - rep) / basis[i][i]
            if t:
                col = [x - t * y for x, y in zip(col, basis[i])]
            col[i] = rep
        basis[j] = col
    return la.transpose(basis)


@dataclass(frozen=True)
class Lattice:
    """Full-rank lattice; `basis` columns generate it over the ring."""

    ring: str
    p: int
    basis: Tuple[tuple, ...]
    d: Optional[int] = None

    @staticmethod
    def from_generators(gens, p: int, ring: str = "O_F0", d: Optional[int] = None) -> "Lattice":
        if ring not in RINGS:
            raise ValueError(f"unknown ring {ring!r}")
        if ring == "O_F" and d is None:
            raise ValueError("O_F lattices need d")
        G = la.to_field(gens, d if ring == "O_F" else None)
        H = hnf(G, p)
        return Lattice(ring, p, tuple(tuple(r) for r in H), d)

    @staticmethod
    def standard(m: int, p: int, ring: str = "O_F0", d: Optional[int] = None) -> "Lattice":
        return Lattice.from_generators(la.eye(m), p, ring, d)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def B(self) -> List[list]:
        return [list(r) for r in self.basis]

    def scaled(self, c) -> "Lattice":
        return Lattice.from_generators(la.scale(c, self.B()), self.p, self.ring, self.d)

    def contains_vector(self, v) -> bool:
        x = la.solve(self.B(), list(v))
        return all(is_integral(t, self.p) for t in x)

    def contains(self, other: "Lattice") -> bool:
        X = la.solve_matrix(self.B(), other.B())
        return matrix_integral(X, self.p)

    def __le__(self, other: "Lattice") -> bool:
        return other.contains(self)

    def sort_key(self):
        return tuple(
            (x.a, x.b) if isinstance(x, QuadExtElem) else (x, Fraction(0))
            for r in self.basis for x in r
        )

    def to_json(self) -> dict:
        def enc(x):
            return x.to_json() if isinstance(x, QuadExtElem) else rat_str(x)
        return {"ring": self.ring, "basis": [[enc(x) for x in r] for r in self.basis]}


def canonicalize(L: Lattice) -> Lattice:
    return Lattice.from_generators(L.B(), L.p, L.ring, L.d)


def lattice_index(L: Lattice, L0: Lattice) -> int:
    """v(det h) for L = h L0; positive when L is smaller."""
    return elem_val(la.det(L.B()), L.p) - elem_val(la.det(L0.B()), L0.p)


def dual_lattice(L: Lattice, gram) -> Lattice:
    """Dual under x^T G conj(y) (hermitian, ring O_F) or x^T S y (symmetric, ring O_F0)."""
    B = L.B()
    if L.ring == "O_F":
        G = la.to_field(gram, L.d)
        M = la.matmul(G, la.conj_mat(B))
    else:
        G = la.to_field(gram, None)
        M = la.matmul(G, B)
    if not la.det(M):
        raise DegenerateForm("degenerate pairing")
    D = la.transpose(la.inverse(M))
    return Lattice.from_generators(D, L.p, L.ring, L.d)


def dot_dual(L: Lattice) -> Lattice:
    return dual_lattice(L, la.eye(L.dim))


def smith_form(A: List[list], p: int):
    """P A Q = D with D diagonal p^e_i (nondecreasing); returns (P, D_exponents)."""
    n = len(A)
    M = la.copy(A)
    one = la.one_like(M[0][0])
    P = la.eye(n, one)
    Q = la.eye(n, one)
    exps = []
    for t in range(n):
        best = None
        for i in range(t, n):
            for j in range(t, n):
                if M[i][j]:
                    v = elem_val(M[i][j], p)
                    if best is None or v < best[0]:
                        best = (v, i, j)
        if best is None:
            raise SingularBasis("singular matrix in Smith form")
        v, i, j = best
        M[t], M[i] = M[i], M[t]
        P[t], P[i] = P[i], P[t]
        for r in M:
            r[t], r[j] = r[j], r[t]
        for r in Q:
            r[t], r[j] = r[j], r[t]
        _, u = _unit_div(M[t][t], p)
        M[t] = [x / u for x in M[t]]
        P[t] = [x / u for x in P[t]]
        piv = M[t][t]
        for i in range(t + 1, n):
            if M[i][t]:
                f = M[i][t] / piv
                M[i] = [x - f * y for x, y in zip(M[i], M[t])]
                P[i] = [x - f * y for x, y in zip(P[i], P[t])]
        for j in range(t + 1, n):
            if M[t][j]:
                f = M[t][j] / piv
                for r in M:
                    r[j] = r[j] - f * r[t]
                for r in Q:
                    r[j] = r[j] - f * r[t]
        exps.append(int(v))
    return P, exps, Q


def _residue_reps(p: int, k: int, ring: str, d: Optional[int]):
    mod = p ** k
    if ring == "O_F0":
        return [Fraction(a) for a in range(mod)]
    return [QuadExtElem(a, b, d) for a in range(mod) for b in range(mod)]


def quotient_length(M1: Lattice, M2: Lattice) -> int:
    """Length of M2/M1 as a module over the ring (sum of Smith exponents)."""
    return lattice_index(M1, M2)


def _intermediate_hnfs(exps: Sequence[int], p: int, ring: str, d) -> Iterator[List[list]]:
    m = len(exps)
    like = QuadExtElem(0, 0, d) if ring == "O_F" else Fraction(0)
    for ks in itertools.product(*[range(e + 1) for e in exps]):
        slots = [(i, j) for j in range(m) for i in range(j)]
        choices = [_residue_reps(p, ks[i], ring, d) for (i, j) in slots]
        for combo in itertools.product(*choices):
            N = [[like * 0 for _ in range(m)] for _ in range(m)]
            for i in range(m):
                N[i][i] = _pk(p, ks[i], like)
            for (i, j), val in zip(slots, combo):
                N[i][j] = like * 0 + val
            yield N


def lattices_between(M1: Lattice, M2: Lattice) -> List[Lattice]:
    """Every lattice L with M1 <= L <= M2, canonical and sorted."""
    if M1.ring != M2.ring or M1.dim != M2.dim:
        raise NotNested("lattices live in different ambient modules")
    if not M2.contains(M1):
        raise NotNested("M1 is not contained in M2")
    p, ring, d = M1.p, M1.ring, M1.d
    B2 = M2.B()
    A = la.solve_matrix(B2, M1.B())
    P, exps, _ = smith_form(A, p)
    C = la.matmul(B2, la.inverse(P))
    m = len(exps)
    out = []
    for N in _intermediate_hnfs(exps, p, ring, d):
        Ninv = la.inverse(N)
        ok = True
        for j in range(m):
            col = [Ninv[i][j] * Fraction(p) ** exps[j] for i in range(m)]
            if not all(is_integral(x, p) for x in col):
                ok = False
                break
        if ok:
            out.append(Lattice.from_generators(la.matmul(C, N), p, ring, d))
    out.sort(key=lambda L: L.sort_key())
    return out
