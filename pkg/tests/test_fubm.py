from fractions import Fraction
from math import factorial

import pytest

from freeprob import fubm
from freeprob.ncpart import free_cumulant, haar_oracle, mixed_cumulant
from freeprob.scalar import ZERO, Q, Scalar, T
from freeprob.series import Series, exp_series, revert


def alternating(n):
    return [1 if i % 2 == 0 else -1 for i in range(n)]


def test_moment_examples():
    assert fubm.moment_fubm(0) == 1
    assert fubm.moment_fubm(1) == Q
    assert fubm.moment_fubm(2) == Q**2 * (1 - T)
    assert fubm.moment_fubm(3) == Q**3 * (1 - 3 * T + Fraction(3, 2) * T**2)
    assert fubm.moment_fubm(-2) == fubm.moment_fubm(2)
    assert fubm.moment_fubm(2, time_scale=2) == Q**4 * (1 - 2 * T)


def test_moment_time_scale_must_give_q_powers():
    with pytest.raises(ValueError):
        fubm.moment_fubm(1, Fraction(1, 2))
    with pytest.raises(ValueError):
        fubm.moment_fubm(1, 0)


@pytest.mark.parametrize("n", range(1, 8))
def test_free_cumulants_closed_form_vs_mobius(n):
    assert free_cumulant(fubm.moment_fubm, n) == fubm.free_cumulant_fubm(n)


def test_free_cumulants_from_lambert_series():
    z = Series.z(6)
    w = revert(z * exp_series(z))
    for n in range(1, 7):
        assert fubm.free_cumulant_fubm(n) == Q**n * T ** (n - 1) * w[n]


def test_g_frozen_values():
    g = fubm.g_values(3)
    assert g[0] == 1 - Q**2
    assert str(g[1]) == "(-1 + 4*Q^2 - (3 + 2*t)*Q^4)"
    assert str(g[2]) == "(2 - 15*Q^2 + (30 + 12*t)*Q^4 - (17 + 18*t + 6*t^2)*Q^6)"


def test_g_solves_the_ode():
    g = fubm.g_values(6)
    assert g[0] == 1 - Q**2
    for n in range(2, 7):
        conv = sum((g[m - 1] * g[n - m - 1] for m in range(1, n)), ZERO)
        assert -g[n - 1].d_dt() / n == g[n - 1] + conv
    assert all(x.subs(t=0, Q=1) == 0 for x in g)


@pytest.mark.parametrize("n", range(1, 5))
def test_g_matches_mobius_and_haar(n):
    g = fubm.g_values(n)[-1]
    assert g == mixed_cumulant(fubm.fubm_oracle(), alternating(2 * n))
    assert g.subs(Q=0) == mixed_cumulant(haar_oracle(), alternating(2 * n))


def test_h_values():
    h = fubm.h_table(3)
    assert h.indices() == [0, 1, 2, 3]
    assert h[0] == Q
    assert h[1] == Q * (-1 + (1 + T) * Q**2)
    for n in range(4):
        assert h[n] == mixed_cumulant(fubm.fubm_oracle(), alternating(2 * n + 1))


def test_a_frozen_values_and_routes():
    a = fubm.a_table(3)
    assert a[1] == -2 * Q**2
    assert str(a[2]) == "(4*Q^2 - (6 + 4*t)*Q^4)"
    assert fubm.a_table(6).values() == fubm.a_table(6, "oracle").values()
    with pytest.raises(ValueError):
        fubm.a_table(3, "nope")


def test_g_derivative_and_g_from_a():
    assert all(f.holds for f in fubm.g_derivative_check(6))
    derived = fubm.g_from_a(5).values()
    assert derived == [g.d_dt() for g in fubm.g_values(5)]


def test_p_polynomials():
    assert fubm.p_poly(1, 3) == 1
    assert fubm.p_poly(2, 2) == -(6 + 4 * T)
    for n in range(1, 6):
        for k in range(1, n + 1):
            assert fubm.p_poly(k, n) == fubm.p_gamma_integral(k, n)


def test_laplace_integral_is_factorial_moment():
    assert fubm.laplace_integral([Scalar(1)], 3, 2) == Fraction(factorial(3), 2**4)
    assert fubm.laplace_integral([Scalar(0), Scalar(1)], 0, 1) == 1


@pytest.mark.parametrize(
    "n,k,ratio",
    [(1, 1, "1/t^2"), (2, 1, "1/t^4"), (2, 2, "16/t^4"), (3, 2, "64/t^6")],
)
def test_integral_representation_report(n, k, ratio):
    f = fubm.integral_rep_check(n, k)
    assert not f.holds
    assert f.data["ratio_lhs_over_printed"] == ratio
    assert f.data["corrected_holds"] == "True"


def test_range_checks():
    with pytest.raises(ValueError):
        fubm.g_values(0)
    with pytest.raises(ValueError):
        fubm.integral_rep_check(1, 2)


def test_env_override_raises_cap(monkeypatch):
    monkeypatch.setenv("FREEPROB_MAX_ORDER", "2")
    with pytest.raises(ValueError, match="1..2"):
        fubm.g_values(3)
