"""Small exact linear algebra over Q and Q(sqrt d).

Matrices are lists of rows; entries are Fractions or QuadExtElem values.  Nothing
here knows about p; valuations live in the lattice module.
"""
from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence

from .errors import SingularBasis
from .padic import QuadExtElem

Matrix = List[list]


def conj(x):
    return x.conj() if isinstance(x, QuadExtElem) else x


def zero_like(x):
    return x * 0


def one_like(x):
    return x * 0 + 1


def as_elem(x, d: int):
    if isinstance(x, QuadExtElem):
        return x
    return QuadExtElem(Fraction(x), 0, d)


def to_field(A: Matrix, d: int | None) -> Matrix:
    """Coerce entries to QuadExtElem (d given) or Fraction (d None)."""
    if d is None:
        return [[Fraction(x) for x in row] for row in A]
    return [[as_elem(x, d) for x in row] for row in A]


def shape(A: Matrix):
    return len(A), (len(A[0]) if A else 0)


def copy(A: Matrix) -> Matrix:
    return [list(r) for r in A]


def zeros(n: int, m: int, z=Fraction(0)) -> Matrix:
    return [[z] * m for _ in range(n)]


def eye(n: int, one=Fraction(1)) -> Matrix:
    z = zero_like(one)
    return [[one if i == j else z for j in range(n)] for i in range(n)]


def transpose(A: Matrix) -> Matrix:
    return [list(c) for c in zip(*A)]


def conj_mat(A: Matrix) -> Matrix:
    return [[conj(x) for x in r] for r in A]


def adjoint(A: Matrix) -> Matrix:
    return conj_mat(transpose(A))


def matmul(A: Matrix, B: Matrix) -> Matrix:
    Bt = transpose(B)
    out = []
    for r in A:
        row = []
        for c in Bt:
            s = r[0] * c[0]
            for k in range(1, len(r)):
                if r[k] and c[k]:
                    s = s + r[k] * c[k]
            row.append(s)
        out.append(row)
    return out


def matvec(A: Matrix, v: Sequence) -> list:
    return [sum((a * x for a, x in zip(r[1:], v[1:])), r[0] * v[0]) for r in A]


def vecmat(v: Sequence, A: Matrix) -> list:
    return matvec(transpose(A), v)


def dot(v: Sequence, w: Sequence):
    return sum((a * b for a, b in zip(v[1:], w[1:])), v[0] * w[0])


def add(A: Matrix, B: Matrix) -> Matrix:
    return [[a + b for a, b in zip(r, s)] for r, s in zip(A, B)]


def sub(A: Matrix, B: Matrix) -> Matrix:
    return [[a - b for a, b in zip(r, s)] for r, s in zip(A, B)]


def scale(c, A: Matrix) -> Matrix:
    return [[c * a for a in r] for r in A]


def vscale(c, v: Sequence) -> list:
    return [c * a for a in v]


def mat_pow(A: Matrix, k: int) -> Matrix:
    n = len(A)
    if k < 0:
        return mat_pow(inverse(A), -k)
    R = eye(n, one_like(A[0][0]))
    P = A
    while k:
        if k & 1:
            R = matmul(R, P)
        P = matmul(P, P)
        k >>= 1
    return R


def is_zero_matrix(A: Matrix) -> bool:
    return all(not x for r in A for x in r)


def mat_eq(A: Matrix, B: Matrix) -> bool:
    return len(A) == len(B) and all(
        len(r) == len(s) and all(a == b for a, b in zip(r, s)) for r, s in zip(A, B)
    )


def det(A: Matrix):
    n = len(A)
    M = copy(A)
    sign = 1
    result = one_like(M[0][0])
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c]), None)
        if piv is None:
            return zero_like(M[0][0])
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            sign = -sign
        pv = M[c][c]
        result = result * pv
        for r in range(c + 1, n):
            if M[r][c]:
                f = M[r][c] / pv
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return result * sign


def solve_matrix(A: Matrix, B: Matrix) -> Matrix:
    """X with A X = B; A square and invertible."""
    n = len(A)
    M = [list(A[i]) + list(B[i]) for i in range(n)]
    k = len(B[0])
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c]), None)
        if piv is None:
            raise SingularBasis("singular matrix")
        M[c], M[piv] = M[piv], M[c]
        pv = M[c][c]
        M[c] = [x / pv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [row[n:n + k] for row in M]


def inverse(A: Matrix) -> Matrix:
    return solve_matrix(A, eye(len(A), one_like(A[0][0])))


def solve(A: Matrix, b: Sequence) -> list:
    return [r[0] for r in solve_matrix(A, [[x] for x in b])]


def rank(A: Matrix) -> int:
    M = copy(A)
    n, m = shape(M)
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, n) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        for i in range(r + 1, n):
            if M[i][c]:
                f = M[i][c] / M[r][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        r += 1
    return r


def trace(A: Matrix):
    return sum((A[i][i] for i in range(1, len(A))), A[0][0])


def charpoly(A: Matrix) -> list:
    """Coefficients [c0, ..., c_{n-1}, 1] of det(T - A) (Faddeev-LeVerrier)."""
    n = len(A)
    one = one_like(A[0][0])
    coeffs = [None] * (n + 1)
    coeffs[n] = one
    M = zeros(n, n, zero_like(one))
    I = eye(n, one)
    for k in range(1, n + 1):
        M = add(matmul(A, M), scale(coeffs[n - k + 1], I))
        coeffs[n - k] = trace(matmul(A, M)) * Fraction(-1, k)
    return coeffs


def columns(A: Matrix) -> list:
    return transpose(A)


def from_columns(cols: Sequence[Sequence]) -> Matrix:
    return transpose([list(c) for c in cols])


# -- polynomials: coefficient lists low -> high ------------------------------------


def poly_trim(f: list) -> list:
    f = list(f)
    while len(f) > 1 and not f[-1]:
        f.pop()
    return f


def poly_eval(f: Sequence, x):
    acc = zero_like(x) if f else 0
    for c in reversed(f):
        acc = acc * x + c
    return acc


def poly_mul(f: Sequence, g: Sequence) -> list:
    out = [zero_like(f[0])] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if not a:
            continue
        for j, b in enumerate(g):
            out[i + j] = out[i + j] + a * b
    return poly_trim(out)


def poly_add(f: Sequence, g: Sequence) -> list:
    n = max(len(f), len(g))
    z = zero_like(f[0])
    return poly_trim([(f[i] if i < len(f) else z) + (g[i] if i < len(g) else z) for i in range(n)])


def poly_scale(c, f: Sequence) -> list:
    return poly_trim([c * a for a in f])


def poly_is_zero(f: Sequence) -> bool:
    return all(not c for c in f)


def poly_divmod(f: Sequence, g: Sequence):
    f = poly_trim(f)
    g = poly_trim(g)
    if poly_is_zero(g):
        raise ZeroDivisionError("polynomial division by zero")
    z = zero_like(f[0])
    q = [z] * max(1, len(f) - len(g) + 1)
    r = list(f)
    lead = g[-1]
    while len(r) >= len(g) and not poly_is_zero(r):
        c = r[-1] / lead
        k = len(r) - len(g)
        q[k] = q[k] + c
        for i, b in enumerate(g):
            r[i + k] = r[i + k] - c * b
        r.pop()
        r = poly_trim(r) if r else [z]
    return poly_trim(q), poly_trim(r) if r else [z]


def poly_monic(f: Sequence) -> list:
    f = poly_trim(f)
    return [c / f[-1] for c in f]


def poly_gcd(f: Sequence, g: Sequence) -> list:
    a, b = poly_trim(f), poly_trim(g)
    while not poly_is_zero(b):
        _, r = poly_divmod(a, b)
        a, b = b, r
    return poly_monic(a)


def poly_deriv(f: Sequence) -> list:
    if len(f) == 1:
        return [zero_like(f[0])]
    return poly_trim([f[i] * i for i in range(1, len(f))])


def poly_degree(f: Sequence) -> int:
    f = poly_trim(f)
    return -1 if poly_is_zero(f) else len(f) - 1


def is_squarefree_poly(f: Sequence) -> bool:
    return poly_degree(poly_gcd(f, poly_deriv(f))) == 0


def companion(f: Sequence) -> Matrix:
    """Companion matrix C of monic f, acting on the basis 1, T, ..., T^{m-1} of F[T]/(f)."""
    f = poly_monic(f)
    m = len(f) - 1
    z = zero_like(f[0])
    one = one_like(f[0])
    C = zeros(m, m, z)
    for i in range(1, m):
        C[i][i - 1] = one
    for i in range(m):
        C[i][m - 1] = -f[i]
    return C
