import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pgdesk.padic import (
    PAdic,
    PrecisionError,
    binomial_padic,
    padic_from_rational,
    teichmuller_lift,
    valuation,
)


def test_from_rational_identity():
    x = padic_from_rational(1, 1, 3, 5)
    assert x.mantissa == 1 and x.denom_exp == 0


def test_from_rational_single_p_denominator():
    x = padic_from_rational(1, 3, 3, 5)
    assert x.mantissa == 1 and x.denom_exp == 1


def test_from_rational_quarter_mod_5():
    # 2/8 = 1/4; extended Euclid inverse of 4 mod 625 is 469
    x = padic_from_rational(2, 8, 5, 4)
    assert x.denom_exp == 0
    assert x.mantissa == 469


def test_from_rational_errors():
    with pytest.raises(ZeroDivisionError):
        padic_from_rational(1, 0, 3, 5)
    with pytest.raises(PrecisionError):
        padic_from_rational(1, 3**6, 3, 5)


def test_valuation_basics():
    p3 = PAdic.from_int(3, 3, 12)
    assert valuation(p3).value == 1
    inv = padic_from_rational(1, 3, 3, 12)
    assert valuation(inv).value == -1
    z = PAdic.zero(3, 12)
    v = valuation(z)
    assert v.is_infinite and v.indistinguishable_from_zero


def test_teichmuller_trivial_and_minus_one():
    assert teichmuller_lift(1, 3, 6).mantissa == 1
    t = teichmuller_lift(2, 3, 6)
    assert t.mantissa == 3**6 - 1  # the lift of 2 is -1


def test_teichmuller_fourth_root_mod_625():
    t = teichmuller_lift(2, 5, 4)
    assert t.mantissa == 182
    assert (t**4).mantissa == 1


def test_teichmuller_rejects_zero():
    with pytest.raises(ValueError):
        teichmuller_lift(0, 3, 6)


@pytest.mark.parametrize("p,prec", [(3, 8), (5, 6), (7, 5)])
def test_teichmuller_power_identity(p, prec):
    for a in range(1, p):
        t = teichmuller_lift(a, p, prec)
        assert (t ** (p - 1)).mantissa == 1


def test_binomial_trivial_cases():
    c = PAdic.from_int(7, 3, 10)
    assert binomial_padic(c, 0) == 1
    assert binomial_padic(c, 1) == c


def test_binomial_one_plus_p_choose_two():
    # C(1+p, 2) = (1+p)p/2 = 6 for p = 3
    c = PAdic.from_int(4, 3, 10)
    b = binomial_padic(c, 2)
    assert b == 6


def test_binomial_integrality():
    # binomials of p-adic integers are p-adic integers
    for m in (2, 7, 11, 3**4 + 5):
        c = PAdic.from_int(m, 3, 12)
        for n in (1, 3, 9, 10):
            b = binomial_padic(c, n)
            assert b.denom_exp == 0


def test_binomial_guard_exhaustion():
    c = PAdic.from_int(5, 3, 2)
    with pytest.raises(PrecisionError):
        binomial_padic(c, 9)  # v_3(9!) = 4 > available digits


small_ints = st.integers(min_value=-(3**8), max_value=3**8)


@given(small_ints, small_ints, small_ints)
@settings(max_examples=150, deadline=None)
def test_ring_axioms(a, b, c):
    p, N = 3, 12
    A, B, C = (PAdic.from_int(x, p, N) for x in (a, b, c))
    assert (A + B) * C == A * C + B * C
    assert (A * B) * C == A * (B * C)
    assert A + (B + C) == (A + B) + C


@given(small_ints, small_ints)
@settings(max_examples=100, deadline=None)
def test_valuation_additive_on_products(a, b):
    p, N = 3, 12
    A, B = PAdic.from_int(a, p, N), PAdic.from_int(b, p, N)
    va, vb = A.valuation(), B.valuation()
    if va.is_infinite or vb.is_infinite:
        return
    vab = (A * B).valuation()
    if not vab.is_infinite:
        assert vab.value == va.value + vb.value


def test_division_and_shift():
    p, N = 5, 8
    a = PAdic.from_int(37, p, N)
    assert a / a == 1
    assert a.shift(2).valuation().value == 2
    b = a.shift(-3)
    assert b.denom_exp == 3
    assert (b * PAdic.from_int(5**3, p, N + 3)) == a


def test_precision_zero_compares_zero():
    p, N = 3, 6
    small = PAdic.from_int(3**6, p, N)
    assert small.is_zero()
    assert small == PAdic.zero(p, N)


def test_denominator_exhaustion():
    with pytest.raises(PrecisionError):
        PAdic(3, 4, 1, 4)
