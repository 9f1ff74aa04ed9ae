from fractions import Fraction

import pytest

from eqdeg.cyclotomic import Cyc, cyclotomic_polynomial, rational_cos_turn


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(2) == (1, 1)
    assert cyclotomic_polynomial(3) == (1, 1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)


def test_roots_of_unity_sum_to_zero():
    for n in (2, 3, 4, 5, 6, 7, 12):
        total = Cyc.rational(0)
        for k in range(n):
            total = total + Cyc.root_of_unity(k, n)
        assert total.is_zero()


def test_root_product_is_additive_in_exponent():
    for n in (5, 8, 12):
        for a in range(n):
            for b in range(n):
                lhs = Cyc.root_of_unity(a, n) * Cyc.root_of_unity(b, n)
                assert lhs == Cyc.root_of_unity(a + b, n)


def test_mixed_order_arithmetic():
    # zeta_6 = -zeta_3^2
    z6 = Cyc.root_of_unity(1, 6)
    z3 = Cyc.root_of_unity(1, 3)
    assert z6 == -(z3 * z3)
    assert z6 * z6 * z6 == Cyc.rational(-1)


def test_conjugate_and_cosine():
    z5 = Cyc.root_of_unity(1, 5)
    assert (z5 * z5.conjugate()) == Cyc.rational(1)
    # 2*(cos(2pi/5) + cos(4pi/5)) = -1
    c1 = Cyc.cos_turn(Fraction(1, 5))
    c2 = Cyc.cos_turn(Fraction(2, 5))
    assert (c1 + c2) * 2 == Cyc.rational(-1)


def test_rational_extraction_guards():
    z5 = Cyc.root_of_unity(1, 5)
    with pytest.raises(ArithmeticError):
        z5.as_fraction()
    assert (z5 + z5.conjugate() + Cyc.cos_turn(Fraction(2, 5)) * 2).as_fraction() == Fraction(-1)
    with pytest.raises(ArithmeticError):
        Cyc.rational(Fraction(1, 2)).as_integer()


def test_rational_cos_table_matches_symbolic():
    for den in (1, 2, 3, 4, 6):
        for num in range(den):
            t = Fraction(num, den)
            assert Cyc.cos_turn(t) == Cyc.rational(rational_cos_turn(t))
    assert rational_cos_turn(Fraction(1, 5)) is None
