import cmath
import math
import random
from fractions import Fraction

import pytest

from jrorbit import weil as wl
from jrorbit.errors import DegenerateForm, PhaseOutsideRing
from jrorbit.lattice import Lattice


def test_cyclotomic_scalars():
    for p in (3, 5, 7):
        r = wl.Cyc.sqrt_p(p)
        assert r * r == p
        assert abs(r.to_complex() - math.sqrt(p)) < 1e-12
        z = wl.Cyc.zeta(p, 2, 1)
        assert abs(z.to_complex() - cmath.exp(2j * math.pi / p**2)) < 1e-12
        w = wl.Cyc.zeta(p, 1, 1)
        assert sum((wl.Cyc.zeta(p, 1, j) for j in range(p)), wl.Cyc.rational(p, 0)) == 0
        assert w * wl.Cyc.zeta(p, 1, p - 1) == 1
    i = wl.Cyc.i_unit(3)
    assert i * i == -1


def test_half_powers():
    assert wl.Cyc.p_power(5, 3) * wl.Cyc.p_power(5, -1) == 5
    assert wl.coef_json(wl.Cyc.p_power(5, -1)) == {"rat": "1/5", "halfpow": 1}


def test_sqrt_two_unsupported():
    with pytest.raises(PhaseOutsideRing):
        wl.Cyc.sqrt_p(2)


def test_character_values():
    p = 5
    assert wl.psi(Fraction(3), p) == 1
    assert abs(wl.psi(Fraction(1, 5), p).to_complex() - cmath.exp(-2j * math.pi / 5)) < 1e-12
    assert wl.psi(Fraction(7, 25), p) * wl.psi(Fraction(-7, 25), p) == 1


def test_space_validation():
    with pytest.raises(DegenerateForm):
        wl.QuadSpace.make(3, [[1, 1], [1, 1]])
    with pytest.raises(DegenerateForm):
        wl.QuadSpace.make(3, [[1, 2], [0, 1]])


def test_unimodular_fourier_fixes_lattice_indicator():
    sp = wl.split_space(3, 2)
    f = wl.Schwartz.indicator(sp, Lattice.standard(4, 3))
    assert wl.schwartz_equal(wl.fourier(f), f)


def test_fourier_scaling_volume():
    sp = wl.QuadSpace.make(5, [[2]])
    half = wl.fourier(wl.Schwartz.indicator(wl.QuadSpace.make(5, [[10]]), Lattice.standard(1, 5)))
    assert half([Fraction(1, 10)]) == wl.Cyc.p_power(5, -1)
    L = Lattice.standard(1, 5).scaled(5)
    F = wl.fourier(wl.Schwartz.indicator(sp, L))
    # under B(x, y) = 2xy the transform of 1_{5Z} is vol(5Z) 1_{(1/5)Z} = (1/5) 1_{(1/5)Z}
    assert F([Fraction(1, 10)]) == Fraction(1, 5)
    assert F([Fraction(1, 25)]) == 0


def test_fourier_involution_random():
    rng = random.Random(3)
    for p in (3, 5):
        sp = wl.QuadSpace.make(p, [[1, 0], [0, p]])
        for _ in range(5):
            f = wl.random_coset_function(sp, rng)
            assert wl.schwartz_equal(wl.fourier(wl.fourier(f)), f.reflect())


def test_pointwise_actions():
    sp = wl.QuadSpace.make(3, [[2]])
    L = Lattice.standard(1, 3).scaled(Fraction(1, 3))
    f = wl.Schwartz.indicator(sp, L)
    g = wl.act_n(f, Fraction(1))
    for x in (Fraction(0), Fraction(1, 3), Fraction(2, 3)):
        assert g([x]) == f([x]) * wl.psi(Fraction(1) * sp.q([x]), 3)
    h = wl.act_m(f, Fraction(3))
    x = Fraction(1, 9)
    assert h([x]) == wl.Cyc.rational(3, sp.chi(3)) * wl.Cyc.p_power(3, -1) * f([3 * x])


def test_weil_constant_against_gauss_sums():
    d = 2
    for p in (3, 5):
        for H in ([[1]], [[p]], [[1, 0], [0, p]], [[p, 0], [0, p]]):
            sp = wl.hermitian_to_quadratic(H, p, d if p == 3 else 2)
            g = wl.weil_index_gauss(sp)
            assert g == wl.weil_constant_hermitian(H, p, d if p == 3 else 2)
            assert g * g == sp.chi(-1)


def test_split_spaces_have_trivial_constant():
    for p in (3, 5):
        for m in (1, 2, 3):
            assert wl.weil_index_gauss(wl.split_space(p, m)) == 1


def test_braid_word_is_dilation_matrix():
    a = Fraction(3)
    M = wl.sl2_word_matrix(wl.m_word(a))
    assert M == [[a, 0], [0, 1 / a]]


@pytest.mark.parametrize("H,a", [([[1]], Fraction(3)), ([[3]], Fraction(2)), ([[3]], Fraction(3))])
def test_braid_relation_on_lattice_indicator(H, a):
    p, d = 3, 2
    sp = wl.hermitian_to_quadratic(H, p, d)
    gamma = wl.weil_constant_hermitian(H, p, d)
    f = wl.Schwartz.indicator(sp, Lattice.standard(sp.dim, p))
    assert wl.schwartz_equal(wl.act_m(f, a), wl.weil_act(wl.m_word(a), f, gamma))


def test_json_shape():
    sp = wl.QuadSpace.make(3, [[2]])
    f = wl.Schwartz.indicator(sp, Lattice.standard(1, 3), coef=wl.Cyc.p_power(3, 1))
    js = f.to_json()
    assert js["terms"][0]["coef"] == {"rat": "1", "halfpow": 1}
