from fractions import Fraction
from itertools import product

import pytest

from freeprob import jacobi
from freeprob.fubm import fubm_oracle
from freeprob.ncpart import free_cumulant, mixed_cumulant
from freeprob.scalar import ONE, Q, Scalar, T
from freeprob.series import Series, compose

E = Q**2


def test_u_series_uses_doubled_time():
    U = jacobi.u_series(3)
    assert U[0] == 0
    assert U[1] == Q**2
    assert U[2] == Q**4 * (1 - 2 * T)


def test_context():
    ctx = jacobi.JacobiContext.build(4)
    assert ctx.M[0] == 1
    assert ctx.w[0] == 0 and ctx.w[1] == 1


def test_moment_series_examples():
    M = jacobi.m_series(3)
    assert M[0] == 1
    assert M[1] == (1 + Q**2) / 2
    assert str(M[2]) == "(3/8 + 1/2*Q^2 + (1/8 - 1/4*t)*Q^4)"
    assert M == jacobi.m_series(3, "oracle")


def test_moment_routes_agree_to_order_12():
    assert jacobi.m_series(12) == jacobi.m_series(12, "oracle")


def test_moment_limits():
    # t -> infinity: arcsine law of (u + u* + 2)/4 with u Haar
    M = jacobi.m_series(4)
    assert [M[n].subs(Q=0) for n in range(5)] == [1, Fraction(1, 2), Fraction(3, 8), Fraction(5, 16), Fraction(35, 128)]
    with pytest.raises(ValueError):
        jacobi.m_series(13)


def test_f_is_the_inverse_of_w():
    ctx = jacobi.JacobiContext.build(7)
    F = jacobi.f_series(8)
    assert compose(F, ctx.w) == Series.z(7)
    assert compose(ctx.w, F.truncate(7)) == Series.z(7)


def test_b_oracle_values():
    F = jacobi.f_series(4)
    assert F[1] == 1
    assert F[2] == -(1 + Q**2) / 2
    assert str(F[3]) == "(1/8 + 1/2*Q^2 + (3/8 + 1/4*t)*Q^4)"


def test_b_variants():
    printed = jacobi.b_table(5, "as-printed")
    assert not printed.agrees
    assert printed.first_mismatch() == 2
    assert printed.closed[2] == -Q**2 / 2
    corrected = jacobi.b_table(5, "corrected")
    assert corrected.agrees
    assert corrected.oracle.errata[0].holds
    with pytest.raises(ValueError):
        jacobi.b_closed(2, "sideways")


def test_b_closed_form_n1():
    assert jacobi.b_closed(1) == 1
    assert jacobi.b_closed(1, "corrected") == 1


def test_q_polynomials():
    assert jacobi.q_poly(0, 3) == 1
    assert jacobi.q_poly(1, 2) == -4
    assert jacobi.q_poly(2, 1) == 2 + 4 * T
    for n in (1, 2, 3):
        assert jacobi.q_series_check(n, 6).holds


@pytest.mark.parametrize("k,n", [(1, 1), (2, 3), (3, 2), (5, 5)])
def test_q_integral_representation(k, n):
    f = jacobi.q_integral_check(k, n)
    assert not f.holds
    assert f.data["ratio_lhs_over_printed"] == str(Scalar(k ** (n + 1)) / T ** (n + 1))
    assert f.data["corrected_holds"] == "True"


def test_u_powers():
    U = jacobi.u_series(4)
    assert (U * U)[2] == Q**4
    for m in range(1, 6):
        assert jacobi.u_power_check(m, 10).holds


def test_convolution_identity():
    s = jacobi.s_series_coeffs(6)
    assert s[1] == 1
    assert (s**3)[3] == 1
    f = jacobi.convolution_identity_check(2, 3)
    assert f.data["lhs"] == str(s[1] * s[2] + s[2] * s[1])
    assert f.data["ratio_lhs_over_printed"] == "2"
    for j in range(1, 11):
        for m in range(1, j + 1):
            assert jacobi.convolution_identity_check(m, j).data["corrected_holds"] == "True"
    assert jacobi.convolution_identity_check(1, 7).holds
    with pytest.raises(ValueError):
        jacobi.convolution_identity_check(3, 2)


def test_conv_derivative():
    f = jacobi.convolution_derivative_check(4)
    assert not f.holds
    assert f.data["ratio_lhs_over_rhs"] == "1/2"
    assert all(jacobi.convolution_derivative_check(k).data["corrected_holds"] == "True" for k in range(2, 11))


def test_h_polynomials():
    for n in (1, 2, 3):
        assert jacobi.h_poly(0, n) == 1 / (1 + Q**2) ** n
    printed = jacobi.h_poly(1, 1, "as-printed")
    assert printed == -(1 + 2 * T * Q**2 / (1 + Q**2)) / (1 + Q**2)
    assert jacobi.h_poly(1, 1, "corrected") == -(1 - 2 * T * Q**2 / (1 + Q**2)) / (1 + Q**2)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_h_lemma(n):
    assert jacobi.h_lemma_check(n, 6, "corrected").holds
    bad = jacobi.h_lemma_check(n, 6, "as-printed")
    assert not bad.holds and bad.data["first_mismatch"] == "1"


def test_d_coefficients():
    assert [jacobi.d_coeff(j, 2) for j in range(4)] == [1, 2, 3, 4]
    assert [jacobi.d_coeff(j, 2, "corrected") for j in range(4)] == [1, -8, 33, -96]


def test_c_oracle_and_variants():
    cmp = jacobi.c_table(4, "corrected")
    assert cmp.agrees
    c = cmp.oracle
    assert c[1] == 2 / (1 + Q**2)
    assert c[1].subs(Q=0) == 2
    assert str(c[2]) == "(-3 - 4*Q^2 - (1 - 2*t)*Q^4)/(1 + 3*Q^2 + 3*Q^4 + Q^6)"
    for v in ("as-printed", "cauchy"):
        other = jacobi.c_table(4, v)
        assert other.first_mismatch() == 2
    assert jacobi.c_closed(1, "as-printed") == c[1]


def test_s_transform():
    S = jacobi.s_transform(4)
    assert S.indices()[0] == 0
    assert S[0] == 2 / (1 + Q**2)
    assert str(S[1]) == "(-1 + (1 + 2*t)*Q^4)/(1 + 3*Q^2 + 3*Q^4 + Q^6)"
    assert jacobi.r_of_zs_check(6).holds
    assert jacobi.s_functional_check(6).holds


def test_jacobi_free_cumulants():
    table, findings = jacobi.jacobi_free_cumulants(4)
    M = jacobi.m_series(4)
    assert table[1] == (1 + Q**2) / 2
    assert table[2] == M[2] - M[1] ** 2
    assert all(f.holds for f in findings)


def test_star_sum_route_at_n3():
    u2 = fubm_oracle(2)
    star = sum((mixed_cumulant(u2, w) for w in product((1, -1), repeat=3)), Scalar(0)) / 64
    M = jacobi.m_series(3, "oracle")
    assert star == free_cumulant(lambda k: M[k], 3)
