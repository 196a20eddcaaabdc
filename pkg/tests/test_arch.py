import math

import mpmath
import pytest

from jrorbit.arch import (
    ArchValue,
    Iwasawa,
    bessel_k,
    expint_ei,
    expint_ei_quadrature,
    nilpotent_arch,
    orb_arch,
    orb_arch_product,
    orb_arch_quadrature,
    power_sums,
    refined_invariant,
    weight_covariance,
    whittaker,
)
from jrorbit.errors import ReduciblePolynomial, SingularTraceForm
from jrorbit.orbit import InvariantVector
from jrorbit.padic import QuadExtElem


@pytest.mark.parametrize("x", [0.5, 1.0, 3.0])
def test_bessel_half_order_closed_form(x):
    v = bessel_k(0.5, x)
    assert abs(float(v.value) - math.sqrt(math.pi / (2 * x)) * math.exp(-x)) < 1e-14
    assert v.err < 1e-10


def test_bessel_reference_and_symmetry():
    for s, c in ((1.5, 1.0), (0.2, 2.5), (0.0, 0.7)):
        assert abs(bessel_k(s, c).value - mpmath.besselk(s, c)) < 1e-13
    assert abs(bessel_k(-0.3, 2).value - bessel_k(0.3, 2).value) < 1e-15
    # K_{s+1}(x) = K_{s-1}(x) + (2s/x) K_s(x)
    s, x = 0.4, 1.3
    lhs = bessel_k(s + 1, x).value
    rhs = bessel_k(s - 1, x).value + 2 * s / x * bessel_k(s, x).value
    assert abs(lhs - rhs) < 1e-12


@pytest.mark.parametrize("r", [-0.01, -1, -3.9, -4.1, -10, -25])
def test_exponential_integral(r):
    assert abs(expint_ei(r).value - mpmath.ei(r)) < 1e-13 * max(1, abs(mpmath.ei(r)))
    assert abs(expint_ei_quadrature(r).value - mpmath.ei(r)) < 1e-12


def test_orbital_closed_form_against_quadrature():
    for xi in (0.3, -0.3, 1.7, -2.2):
        for s in (-0.4, 0.25, 1.5):
            a, b = orb_arch(xi, s), orb_arch_quadrature(xi, s)
            assert abs(a.value - b.value) < 1e-10
            a, b = orb_arch(xi, s, deriv=True), orb_arch_quadrature(xi, s, deriv=True)
            assert abs(a.value - b.value) < 1e-10


def test_special_values_at_zero():
    for xi in (0.5, 2.0):
        assert abs(orb_arch(xi, 0).value - mpmath.exp(-mpmath.pi * xi)) < 1e-15
        assert orb_arch(-xi, 0).value == 0
        ref = mpmath.exp(mpmath.pi * xi) * mpmath.ei(-2 * mpmath.pi * xi) / 2
        assert abs(orb_arch(-xi, 0, deriv=True).value - ref) < 1e-15


def test_zero_invariant_rejected():
    with pytest.raises(ValueError):
        orb_arch(0, 0)


def test_iwasawa_twist_and_weight():
    v = orb_arch(1.5, 0, h=Iwasawa(2, 0.3, 0)).value
    ref = math.sqrt(2) * mpmath.exp(mpmath.pi * 1j * 1.5 * (0.3 + 2j))
    assert abs(v - ref) < 1e-14
    assert weight_covariance(1.2, 0.7)
    assert weight_covariance(-0.8, 2.0, s=0.3)
    with pytest.raises(ValueError):
        Iwasawa(a=0)


def test_whittaker():
    w = whittaker(1, 1, Iwasawa(1, 0, math.pi / 2)).value
    assert abs(w - 1j * mpmath.exp(-2 * mpmath.pi)) < 1e-15


def test_product_leibniz():
    xis, s, h = [0.5, 1.2], 0.3, 1e-6
    d = orb_arch_product(xis, s, deriv=True).value
    fd = (orb_arch_product(xis, s + h).value - orb_arch_product(xis, s - h).value) / (2 * h)
    assert abs(d - fd) < 1e-8


def test_nilpotent_value():
    for s in (0, 1, 2, 0.5):
        assert abs(nilpotent_arch(s).value - mpmath.mpf(2) ** (mpmath.mpf(s) / 2 - 1)) < 1e-15


def test_arch_value_interval():
    a = ArchValue(mpmath.mpf(1), 1e-10)
    b = ArchValue(mpmath.mpf(2), 2e-10)
    assert (a + b).err >= 3e-10
    assert (a * b).close_to(2, 1e-8)


def test_power_sums():
    # roots 1, 2, 3
    f = [-6, 11, -6, 1]
    assert power_sums(f, 5) == [3, 6, 14, 36, 98]


def test_refined_invariant():
    d = -1
    iv = InvariantVector([QuadExtElem(2, 0, d), QuadExtElem(0, 0, d), QuadExtElem(1, 0, d)],
                         [QuadExtElem(3, 0, d), QuadExtElem(1, 0, d)])
    r = refined_invariant(iv, d)
    assert len(r.embeddings) == 2
    # tr(xi') = 3 and tr(T xi') = 1 over the two roots of T^2 + 2
    lam = [mpmath.sqrt(2) * 1j, -mpmath.sqrt(2) * 1j]
    x0, x1 = (complex(c.a) for c in r.xi_prime)
    assert abs(sum(x0 + x1 * l for l in lam) - 3) < 1e-20
    with pytest.raises(ReduciblePolynomial):
        refined_invariant(InvariantVector([QuadExtElem(1, 0, d), QuadExtElem(0, 0, d), QuadExtElem(1, 0, d)], [1, 0]), d)
    with pytest.raises(SingularTraceForm):
        refined_invariant(InvariantVector([QuadExtElem(1, 0, d), QuadExtElem(-2, 0, d), QuadExtElem(1, 0, d)], [1, 0]), d, check_irreducible=False)
