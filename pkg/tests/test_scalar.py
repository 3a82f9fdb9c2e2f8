from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import gaussian_by_inversions
from qstirling.scalar import (
    H, ONE, Q, ZERO, InexactDivision, RationalPoint, Scalar, evaluate, q_binomial, q_falling,
    q_factorial_gen, q_int, q_pow,
)

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
terms = st.dictionaries(st.tuples(st.integers(0, 3), st.integers(-4, 4)), coeffs, max_size=5)
scalars = terms.map(Scalar)
nonzero_q = st.fractions(min_value=-4, max_value=4, max_denominator=5).filter(lambda x: x != 0)
points = st.builds(RationalPoint, nonzero_q, st.fractions(min_value=-4, max_value=4, max_denominator=5))


def test_q_int_examples():
    assert q_int(3) == ONE + Q + Q * Q
    assert q_int(0) == ZERO
    assert q_int(-1) == -q_pow(-1)
    assert q_int(2, inverse_base=True) == ONE + q_pow(-1)


@pytest.mark.parametrize("x", range(-6, 7))
def test_q_int_times_q_minus_one(x):
    assert q_int(x) * (Q - 1) + 1 == q_pow(x)


def test_q_binomial_examples():
    assert q_binomial(4, 2) == Scalar.parse("1 + q + 2*q^2 + q^3 + q^4")
    assert q_binomial(5, 0, 3) == ONE
    assert q_binomial(3, 1, -1) == Scalar.parse("1 + q^-1 + q^-2")
    assert q_binomial(3, 4) == ZERO
    assert q_binomial(5, 2, 0) == 10


def test_q_binomial_pascal_and_oracle():
    for n in range(1, 13):
        for k in range(1, n):
            a = q_binomial(n - 1, k - 1) + q_binomial(n - 1, k).mul_monomial(q=k)
            b = q_binomial(n - 1, k) + q_binomial(n - 1, k - 1).mul_monomial(q=n - k)
            assert q_binomial(n, k) == a == b
    for n in range(8):
        for k in range(n + 1):
            assert q_binomial(n, k) == gaussian_by_inversions(n, k)
            assert q_binomial(n, k) == q_binomial(n, n - k)


def test_q_falling():
    assert q_falling(7, 0, 3) == ONE
    assert q_falling(2, 2, 1) == ONE + Q
    assert q_falling(3, 1, -2) == q_int(3)
    assert q_factorial_gen(3, 1) == q_int(1) * q_int(2) * q_int(3)


def test_eval_examples():
    p = RationalPoint(1, 1)
    assert evaluate(Scalar.parse("1 + q + q^2"), p) == 3
    assert evaluate(H * q_pow(-1), RationalPoint(2, 3)) == Fraction(3, 2)
    assert evaluate(q_int(4), RationalPoint(Fraction(1, 2), 0)) == Fraction(15, 8)
    with pytest.raises(ValueError):
        RationalPoint(0, 1)
    assert RationalPoint.parse("q=1/2,h=3") == RationalPoint(Fraction(1, 2), 3)


def test_text_form():
    assert str(H + Q) == "h + q"
    assert str(Scalar.parse("2*q^2 - q^-1")) == "2*q^2 - q^-1"
    assert str(ZERO) == "0"
    assert str(-H * Q + Scalar.const(Fraction(3, 2))) == "-h*q + 3/2"


def test_divexact():
    a = q_int(3) * q_int(5) * (H + Q)
    assert a.divexact(q_int(3)) == q_int(5) * (H + Q)
    with pytest.raises(InexactDivision):
        (Q + 2).divexact(Q + 1)


def test_negative_h_rejected():
    with pytest.raises(ValueError):
        Scalar({(-1, 0): 1})
    with pytest.raises(ValueError):
        H ** -1


@settings(max_examples=200, deadline=None)
@given(scalars, scalars, scalars)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == ZERO


@settings(max_examples=200, deadline=None)
@given(scalars, scalars, scalars, points)
def test_eval_homomorphism(a, b, c, p):
    assert evaluate(a * b + c, p) == evaluate(a, p) * evaluate(b, p) + evaluate(c, p)


@settings(max_examples=200, deadline=None)
@given(scalars)
def test_round_trips(a):
    assert Scalar.from_json(a.to_json()) == a
    assert Scalar.parse(str(a)) == a
    b = Scalar(dict(reversed(list(a.terms.items()))))
    assert b.to_json() == a.to_json()
