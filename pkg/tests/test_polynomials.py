import doctest
from fractions import Fraction

from hypothesis import given, strategies as st

import oblock.coxeter
import oblock.polynomials
from oblock.polynomials import LaurentV, PolynomialQ


def test_doctests():
    for mod in (oblock.polynomials, oblock.coxeter):
        assert doctest.testmod(mod).failed == 0


def test_polynomial_basics():
    p = PolynomialQ((1, 2, 0, 0))
    assert p.coeffs == (1, 2)
    assert p.degree == 1
    assert p(1) == 3 and p[5] == 0
    assert PolynomialQ((1,)) == 1
    assert str(PolynomialQ((1, 0, 3))) == "1 + 3q^2"
    assert str(PolynomialQ()) == "0"


def test_laurent_from_kl():
    assert LaurentV.from_kl(PolynomialQ((1,)), 1) == LaurentV({1: 1})
    d = LaurentV.from_kl(PolynomialQ((1, 1)), 4)
    assert d.terms() == ((2, 1), (4, 1))
    assert d(1) == 2
    assert str(d) == "v^2 + v^4"


@given(st.lists(st.integers(0, 5), max_size=4), st.integers(0, 12))
def test_from_kl_matches_formula(coeffs, gap):
    p = PolynomialQ(coeffs)
    d = LaurentV.from_kl(p, gap)
    assert d(2) == 2 ** gap * sum(c * Fraction(1, 4) ** k for k, c in enumerate(p.coeffs))
    assert d(1) == p(1)

@given(st.dictionaries(st.integers(-5, 5), st.integers(-3, 3), max_size=5),
       st.dictionaries(st.integers(-5, 5), st.integers(-3, 3), max_size=5))
def test_laurent_ring_ops(a, b):
    x, y = LaurentV(a), LaurentV(b)
    assert (x + y)(2) == x(2) + y(2)
    assert (x * y)(3) == x(3) * y(3)
    assert x.shift(2) == x * LaurentV.monomial(2)
