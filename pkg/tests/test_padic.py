import itertools
from fractions import Fraction

import pytest

from jrorbit.errors import InvalidContext, ZeroArgument
from jrorbit.padic import (
    LocalFieldCtx,
    QuadExtElem,
    hilbert_symbol,
    is_prime,
    legendre,
    norm_witness,
    parse_elem,
    parse_rat,
    quad_character,
    rat_str,
    valuation,
    vp,
)


def _hilbert_brute(a: int, b: int, p: int) -> int:
    """Primitive solution of z^2 = a x^2 + b y^2 modulo p^3 (enough for odd p, v(a), v(b) <= 1)."""
    mod = p**3
    for x, y, z in itertools.product(range(mod), repeat=3):
        if x % p == y % p == z % p == 0:
            continue
        if (a * x * x + b * y * y - z * z) % mod == 0:
            return 1
    return -1


@pytest.mark.parametrize("a,b", [(1, 2), (2, 2), (3, 2), (3, 3), (2, 6), (-1, 3), (6, 6), (-3, -3), (5, 3)])
def test_hilbert_symbol_matches_brute_force(a, b):
    assert hilbert_symbol(a, b, 3) == _hilbert_brute(a, b, 3)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_hilbert_symbol_laws(p):
    vals = [Fraction(x) for x in (1, 2, -1, 3, 5, 7, 10, -6, Fraction(1, p), p * p)]
    for a in vals:
        assert hilbert_symbol(a, -a, p) == 1
        if a != 1:
            assert hilbert_symbol(a, 1 - a, p) == 1
        for b in vals:
            assert hilbert_symbol(a, b, p) == hilbert_symbol(b, a, p)
            for c in vals[:4]:
                assert hilbert_symbol(a, b * c, p) == hilbert_symbol(a, b, p) * hilbert_symbol(a, c, p)
    assert isinstance(hilbert_symbol(Fraction(1, p), 2, p), int)


def test_valuations():
    assert vp(Fraction(18, 5), 3) == 2
    assert vp(Fraction(5, 27), 3) == -3
    assert vp(0, 3) == float("inf")
    ctx = LocalFieldCtx(3, -1)
    assert valuation(QuadExtElem(3, 9, -1), ctx) == 1
    assert valuation(QuadExtElem(Fraction(1, 3), 1, -1), ctx) == -1


def test_legendre_and_primes():
    assert [legendre(a, 7) for a in range(1, 7)] == [1, 1, -1, 1, -1, -1]
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]


def test_context_validation():
    with pytest.raises(InvalidContext):
        LocalFieldCtx(2, -1)
    with pytest.raises(InvalidContext):
        LocalFieldCtx(5, -1)  # -1 is a square mod 5
    with pytest.raises(InvalidContext):
        LocalFieldCtx(9, 2)
    ctx = LocalFieldCtx.default(5, imaginary=True)
    assert ctx.d < 0 and legendre(ctx.d, 5) == -1


def test_field_arithmetic():
    d = -1
    x, y = QuadExtElem(2, 3, d), QuadExtElem(Fraction(1, 2), -1, d)
    assert (x * y) / y == x
    assert x * x.inverse() == 1
    assert x.norm() == 13 and x.trace() == 4
    assert (x * y).conj() == x.conj() * y.conj()
    assert (x * y).norm() == x.norm() * y.norm()
    assert x ** -2 * x**2 == 1


def test_parsing_is_exact():
    assert parse_rat("3/6") == Fraction(1, 2)
    with pytest.raises(ValueError):
        parse_rat(0.5)
    assert rat_str(Fraction(4, 2)) == "2" and rat_str(Fraction(-1, 3)) == "-1/3"
    assert parse_elem({"a": "1/2", "b": "-1"}, -1) == QuadExtElem(Fraction(1, 2), -1, -1)


def test_quadratic_character():
    ctx = LocalFieldCtx(3, -1)
    assert quad_character(Fraction(1, 3), ctx) == -1
    assert quad_character(QuadExtElem(3, 3, -1), ctx, "eta_tilde_on_F") == -1
    with pytest.raises(ZeroArgument):
        quad_character(0, ctx)


def test_norm_witness():
    ctx = LocalFieldCtx(3, -1)
    for x in (Fraction(1), Fraction(2), Fraction(9), Fraction(5, 9)):
        y = norm_witness(x, ctx)
        assert y is not None
        assert vp(y.norm() / x - 1, 3) >= 1
    assert norm_witness(Fraction(3), ctx) is None
