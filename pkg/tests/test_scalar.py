from fractions import Fraction
from math import e, log

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from freeprob.scalar import ONE, ZERO, PoleError, Q, Scalar, ScalarZeroDivisionError, T

small = st.integers(-3, 3)


@st.composite
def polys(draw):
    total = ZERO
    for _ in range(draw(st.integers(0, 3))):
        c = Fraction(draw(small), draw(st.integers(1, 3)))
        total = total + c * T ** draw(st.integers(0, 2)) * Q ** draw(st.integers(0, 3))
    return total


@st.composite
def scalars(draw):
    num = draw(polys())
    den = draw(polys())
    if not den:
        den = ONE
    return num / den


def test_add_sub_mul():
    assert Q + Q == 2 * Q
    assert (1 - Q**2) / (1 - Q) == 1 + Q
    assert Q**-2 == 1 / (Q * Q)
    assert str(Q**-2) == "1/Q^2"


def test_constants_compare_with_numbers():
    assert Scalar(Fraction(10, 3)) == Scalar(10) / 3
    assert Scalar(3) == 3
    assert Scalar("1/2") == Fraction(1, 2)
    assert hash(Scalar(Fraction(1, 3))) == hash(ONE / 3)


def test_division_by_zero_names_operands():
    with pytest.raises(ScalarZeroDivisionError) as info:
        (1 + T) / (Q - Q)
    assert "(1 + t)" in str(info.value)


def test_d_dt_rules():
    assert Q.d_dt() == -Q / 2
    assert (1 - Q**2).d_dt() == Q**2
    assert (1 / (1 + Q**2)).d_dt() == Q**2 / (1 + Q**2) ** 2
    assert (T * Q).d_dt() == Q - T * Q / 2


def test_d_dt_matches_finite_difference():
    f = 1 / (1 + Q**2)
    h = Fraction(1, 10**6)
    fd = (f.eval(1 + h) - f.eval(1 - h)) / (2 * mpmath.mpf(h.numerator) / h.denominator)
    assert abs(f.d_dt().eval(1) - fd) < 1e-6


def test_eval_examples():
    assert Q.eval(0) == 1
    with mpmath.workdps(30):
        val = (1 - Q**2).eval(mpmath.log(2), 100)
    assert abs(val - mpmath.mpf(1) / 2) < mpmath.mpf(2) ** -90
    g1 = -T * Q**2 / (1 - Q**2)
    assert float(g1.eval(1)) == pytest.approx(-e**-1 / (1 - e**-1), rel=1e-15)
    assert float(g1.eval(1)) == pytest.approx(-0.581977, abs=1e-6)


def test_eval_errors():
    with pytest.raises(PoleError):
        (T / (1 - Q**2)).eval(0)
    with pytest.raises(ValueError):
        Q.eval(1, precision_bits=32)


def test_subs_is_exact():
    assert (T * Q**2 + 1).subs(Q=0) == 1
    assert (T * Q).subs(t=2) == 2 * Q
    with pytest.raises(PoleError):
        (1 / Q).subs(Q=0)


def test_render_grammar():
    g2 = -1 + 4 * Q**2 - (3 + 2 * T) * Q**4
    assert str(g2) == "(-1 + 4*Q^2 - (3 + 2*t)*Q^4)"
    assert str((1 - T) * Q**2) == "(1 - t)*Q^2"
    assert str(-T * Q**2 / (1 - Q**2)) == "t*Q^2/(-1 + Q^2)"
    assert Scalar.parse("(1 − t)*Q^2") == (1 - T) * Q**2


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        Scalar.parse("t +* Q")
    with pytest.raises(ValueError):
        Scalar.parse("x + 1")


@given(scalars())
def test_render_parse_round_trip(a):
    assert Scalar.parse(str(a)) == a


@given(scalars(), scalars())
def test_field_axioms(a, b):
    assert a + b == b + a
    if b:
        assert (a * b) / b == a


@given(scalars(), scalars())
def test_d_dt_is_a_derivation(a, b):
    assert (a * b).d_dt() == a.d_dt() * b + a * b.d_dt()


@given(polys(), polys())
def test_eval_is_multiplicative(a, b):
    lhs = (a * b).eval(Fraction(3, 2))
    rhs = a.eval(Fraction(3, 2)) * b.eval(Fraction(3, 2))
    assert abs(lhs - rhs) <= 2 * mpmath.eps * max(1, abs(lhs))
