from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tripadic.arith import (INFINITY, FamilyCoefficient, PadicCapped, bernoulli, divisors,
                            factorint, family_eval, padic_exp, padic_log, padic_sqrt,
                            padic_valuation, power_family, sigma, teichmuller,
                            teichmuller_embed)
from tripadic.errors import PreconditionError, UnsupportedError

P = 7
rationals = st.fractions(max_denominator=50).filter(lambda x: x.denominator % P)


def pc(x, prec=12):
    return PadicCapped.from_rational(x, P, prec)


def test_integer_helpers():
    assert factorint(360) == ((2, 3), (3, 2), (5, 1))
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert sigma(3, 3) == 28
    assert bernoulli(1) == Fraction(-1, 2)
    assert bernoulli(12) == Fraction(-691, 2730)


def test_zero_is_canonical():
    z = PadicCapped.zero(P)
    assert z.is_zero() and z.val == INFINITY
    assert pc(3) - pc(3) == z
    assert (pc(3) - pc(3)).is_zero()


def test_precision_of_sum_is_min_absolute_precision():
    a = PadicCapped(P, 0, 1, 5)
    b = PadicCapped(P, 2, 1, 10)
    assert (a + b).abs_prec == 5
    # cancellation to exact zero stays exact
    assert (a - a).is_zero()


@given(rationals, rationals)
@settings(max_examples=60, deadline=None)
def test_field_operations_match_rationals(x, y):
    a, b = pc(x), pc(y)
    assert a + b == pc(x + y)
    assert a * b == pc(x * y)
    if y:
        assert a / b == pc(x / y)


def test_valuation_and_norm():
    x = pc(Fraction(98, 3))
    assert x.val == 2
    assert x.norm() == Fraction(1, 49)
    assert padic_valuation(Fraction(1, 49), P) == -2
    assert padic_valuation(0, P) == INFINITY


def test_residue_and_lift():
    x = pc(Fraction(1, 2), 4)
    assert x.residue(4) * 2 % 7**4 == 1
    assert pc(5).lift() == 5
    with pytest.raises(PreconditionError):
        pc(Fraction(1, 7)).residue(2)


def test_json_round_trip():
    for x in (pc(Fraction(3, 14)), PadicCapped.zero(P, 9)):
        assert PadicCapped.from_json(x.to_json()) == x


def test_teichmuller_is_root_of_unity():
    for a in range(1, P):
        w = teichmuller(a, P, 10)
        assert w ** (P - 1) == pc(1, 10)
        assert w.residue(1) == a


def test_roots_of_unity_outside_p_minus_one_unsupported():
    assert teichmuller_embed(1, 3, P) ** 3 == pc(1, 20)
    with pytest.raises(UnsupportedError):
        teichmuller_embed(1, 4, P)


def test_log_exp_inverse():
    x = pc(1 + 7 * 3, 15)
    L = padic_log(x)
    assert L.val >= 1
    assert padic_exp(L) == x
    assert padic_log(pc(8, 15)) + padic_log(pc(15, 15)) == padic_log(pc(8 * 15, 15))


def test_padic_sqrt():
    r = padic_sqrt(pc(2, 10))
    assert r * r == pc(2, 10)
    with pytest.raises(PreconditionError):
        padic_sqrt(pc(3, 10))  # 3 is not a square mod 7


def test_family_algebra_and_evaluation():
    t = FamilyCoefficient.variable(4, order=4)
    f = (1 + t) ** 2
    assert family_eval(f, 6) == 9
    assert (f / (1 + t))(6) == 3
    assert f == 1 + 2 * t + t * t


@pytest.mark.parametrize("d", [2, 3, 10])
def test_power_family_interpolates_powers(d):
    k0 = 4
    fam = power_family(d, k0, P, order=10, prec=12)
    for k in (4, 10, 16, 46):
        assert fam(k) - pc(Fraction(d) ** (k - 1), 12) == PadicCapped.zero(P) or \
            (fam(k) - pc(Fraction(d) ** (k - 1), 12)).val >= 3
