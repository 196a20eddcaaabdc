from fractions import Fraction

import mpmath
import pytest

from jrorbit.errors import MultipleDerivativePlaces
from jrorbit.orbital import LaurentX
from jrorbit.padic import LocalFieldCtx
from jrorbit.series import (
    FIELDS,
    LogLinear,
    PlaceData,
    QExp,
    assemble_coefficient,
    complete_l,
    dirichlet_l,
    fl_difference_series,
    support_check,
    tate_fe_check,
)


def test_loglinear_arithmetic_and_json():
    a = LogLinear(Fraction(1, 2), {3: 2})
    b = LogLinear.log_of(12, Fraction(1, 3))
    assert b.logs == {2: Fraction(2, 3), 3: Fraction(1, 3)}
    c = a + b * 3 - a
    assert c == LogLinear.log_of(12)
    assert LogLinear.from_json(a.to_json()) == a
    assert abs(float(LogLinear.log_of(6)) - float(mpmath.log(6))) < 1e-15
    with pytest.raises(TypeError):
        a * b
    with pytest.raises(ValueError):
        LogLinear(0, {4: 1})


def test_qexp_validation():
    with pytest.raises(ValueError):
        QExp(1, 1, {Fraction(-1): 1})
    f = QExp(1, 2, {Fraction(1, 2): 3})
    with pytest.raises(ValueError):
        f.set(Fraction(1, 3), 1)
    g = QExp(1, 3, {Fraction(1, 3): 1})
    h = f + g
    assert h.level == 6 and h[Fraction(1, 2)] == 3
    assert (f + f.scale(-1)).is_zero()


def test_assemble_coefficient():
    P = LaurentX({0: Fraction(1), 1: Fraction(-2)})
    places = [PlaceData(3, P, derivative=True), PlaceData(5, Fraction(2)), PlaceData(7, LaurentX({0: Fraction(3)}), omega=-1)]
    out = assemble_coefficient(1, places)
    assert out == LogLinear(0, {3: Fraction(2) * 2 * -3})
    assert assemble_coefficient(1, places[1:], arch_value=Fraction(1, 2)) == -3
    with pytest.raises(MultipleDerivativePlaces):
        assemble_coefficient(1, [PlaceData(3, P, True), PlaceData(5, P, True)])


def test_support_check_flags_witnesses():
    f = QExp(1, 1, {2: 1, 9: 1, 10: LogLinear.log_of(5)})
    rep = support_check(f, [3])
    assert rep.witnesses == [2, 10] and not rep.all_coprime_vanish
    assert support_check(f, [2, 3, 5]).all_coprime_vanish
    assert rep.to_json() == {"allCoprimeVanish": False, "witnesses": ["2", "10"]}


def test_dirichlet_values():
    Qi, Q3 = FIELDS["Q(i)"], FIELDS["Q(sqrt-3)"]
    assert abs(dirichlet_l(1, Qi) - mpmath.pi / 4) < 1e-15
    assert abs(dirichlet_l(0, Qi) - mpmath.mpf(1) / 2) < 1e-15
    assert abs(dirichlet_l(0, Q3) - mpmath.mpf(1) / 3) < 1e-15
    assert abs(dirichlet_l(1, Q3) - mpmath.pi / (3 * mpmath.sqrt(3))) < 1e-15
    assert abs(dirichlet_l(2, Qi) - mpmath.catalan) < 1e-15


def test_completed_l_functional_equation():
    # Lambda(s) = (disc)^{(1-2s)/2} ... reduces to Lambda(1-s) = N^{s-1/2} Lambda(s) for odd primitive chi
    for F in FIELDS.values():
        for s in (0.3, 0.7, 1.4):
            lhs = complete_l(1 - s, F)
            rhs = mpmath.mpf(F.disc) ** (s - mpmath.mpf(1) / 2) * complete_l(s, F)
            assert abs(lhs - rhs) < 1e-12


def test_gauss_constants():
    assert abs(FIELDS["Q(i)"].gauss_constant() - (-0.5j)) < 1e-15
    assert abs(FIELDS["Q(sqrt-3)"].gauss_constant() - (-1j / mpmath.sqrt(3))) < 1e-15


@pytest.mark.parametrize("field", sorted(FIELDS))
@pytest.mark.parametrize("s", [-0.4, 1.2])
def test_functional_equation_off_center(field, s):
    r = tate_fe_check(field, s)
    assert r.ok and r.diff < 1e-12
    assert r.to_json()["verdict"] == "PASS"


def test_fl_difference_vanishes():
    q = fl_difference_series(LocalFieldCtx(5, 2), max_xi=12)
    assert q.is_zero()
