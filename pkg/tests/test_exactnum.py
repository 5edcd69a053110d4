import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from etale.errors import DivisionByZero
from etale.exactnum import (Cyclo, Interval, ComplexInterval, compare, cyclotomic_poly, embed,
                            format_scalar, parse_scalar, root_of_unity, sign, sin_ratio, sqrt_int,
                            totient)

MODULI = [1, 3, 4, 5, 7, 8, 12, 15]


@st.composite
def cyclos(draw):
    n = draw(st.sampled_from(MODULI))
    coeffs = draw(st.lists(st.integers(-6, 6), min_size=n, max_size=n))
    den = draw(st.integers(1, 5))
    return Cyclo.from_exponents(n, {k: Fraction(c, den) for k, c in enumerate(coeffs)})


def close(x, z, tol=1e-9):
    return abs(complex(x) - z) < tol


@settings(max_examples=1000, deadline=None)
@given(cyclos(), cyclos(), cyclos())
def test_field_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0
    assert a + 0 == a and a * 1 == a
    if not a.is_zero():
        assert a * a.inv() == 1
        assert (b / a) * a == b
    assert close(a * b, complex(a) * complex(b), 1e-6)


@settings(max_examples=200, deadline=None)
@given(cyclos())
def test_canonical_form_and_hash(a):
    lifted = a.lift(a.n * 6)
    assert lifted == a
    assert hash(lifted) == hash(a)
    assert a.canonical().n <= a.n


@settings(max_examples=200, deadline=None)
@given(cyclos(), st.integers(10, 80))
def test_embed_contains_value(a, p):
    box = embed(a, p)
    z = complex(a)
    if isinstance(box, ComplexInterval):
        re, im = box.re, box.im
        assert float(im.lo) - 1e-12 <= z.imag <= float(im.hi) + 1e-12
    else:
        re = box
    assert float(re.lo) - 1e-12 <= z.real <= float(re.hi) + 1e-12
    assert re.width <= Fraction(1, 2 ** p)


@settings(max_examples=100, deadline=None)
@given(cyclos(), st.integers(8, 40))
def test_embed_nests(a, p):
    outer, inner = embed(a, p), embed(a, 2 * p)
    if isinstance(outer, ComplexInterval):
        outer, inner = outer.re, inner.re
    assert outer.lo <= inner.lo and inner.hi <= outer.hi


def test_embed_rational_is_exact():
    box = embed(Cyclo.rational(Fraction(1, 3)), 20)
    assert box.lo == box.hi == Fraction(1, 3)


@pytest.mark.parametrize("N", range(1, 61))
def test_root_of_unity_order(N):
    z = root_of_unity(1, N)
    assert z ** N == 1
    for d in range(1, N):
        if N % d == 0:
            assert z ** d != 1


def test_sin_ratio_minimal_polynomial():
    x = sin_ratio(2, 1, 7)  # 2 cos(pi/7)
    assert x ** 3 - x ** 2 - 2 * x + 1 == 0
    assert close(x, 2 * math.cos(math.pi / 7))


def test_sin_ratio_zero_denominator():
    with pytest.raises(DivisionByZero):
        sin_ratio(1, 7, 7)


def test_sqrt_and_golden_ratio():
    s5 = sqrt_int(5)
    assert s5 * s5 == 5
    assert sign(s5) == 1
    phi = (1 + s5) / 2
    assert phi * phi == phi + 1
    assert sqrt_int(12) == 2 * sqrt_int(3)
    assert sqrt_int(-4) ** 2 == -4


def test_compare_and_ordering():
    s2, s3 = sqrt_int(2), sqrt_int(3)
    assert compare(s2, s3) == -1
    assert compare(s2 + s3, sqrt_int(10)) == -1
    assert sorted([s3, s2, Cyclo.rational(1)], key=float) == [1, s2, s3]
    assert s2 < s3 and s3 > 1


def test_compare_close_values():
    # sqrt2 + sqrt3 = 3.14626436994197...
    a = sqrt_int(2) + sqrt_int(3)
    assert compare(a, Fraction(31462643699, 10 ** 10)) == 1
    assert compare(a, Fraction(31462643700, 10 ** 10)) == -1
    assert compare(a * a, 5 + 2 * sqrt_int(6)) == 0


def test_galois_and_conjugation():
    z = root_of_unity(1, 12)
    assert z.conj() == root_of_unity(-1, 12)
    assert (z + z.conj()).is_real()
    assert z.galois(5) == root_of_unity(5, 12)
    assert sqrt_int(5).galois(2) == -sqrt_int(5)


def test_cyclotomic_poly_degree():
    for n in (1, 5, 12, 35):
        assert len(cyclotomic_poly(n)) - 1 == totient(n)


def test_algebraic_integer_and_rational():
    assert (1 + sqrt_int(5)) / 2 == (1 + sqrt_int(5)) / 2
    assert ((1 + sqrt_int(5)) / 2).is_algebraic_integer()
    assert not Cyclo.rational(Fraction(20, 9)).is_algebraic_integer()
    assert Cyclo.rational(Fraction(5, 4)).to_fraction() == Fraction(5, 4)


@pytest.mark.parametrize("text", ["1", "-3/4", "E(5)+E(5)^4", "sqrt(5)", "(1+sqrt(5))/2",
                                  "2*E(7)^3-E(7)", "E(12)^5"])
def test_parse_format_roundtrip(text):
    x = parse_scalar(text)
    assert parse_scalar(format_scalar(x, approx=False)) == x
    shown = format_scalar(x)
    assert parse_scalar(shown.split(" (~")[0]) == x


@pytest.mark.parametrize("bad", ["import os", "E(0)", "sqrt(1/2)", "x+1", "2**(1/2)", "E(5)("])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_scalar(bad)


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        Cyclo.rational(0).inv()
