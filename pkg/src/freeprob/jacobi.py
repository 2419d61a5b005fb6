"""Free Jacobi process with a single projection of trace 1/2.

Its law is that of ``(u_{2t} + u_{2t}* + 2) / 4``.  This module builds the
moment series ``M_t``, the coefficients ``b_n`` of ``F_t = z / (1 + R_t)``,
the coefficients ``c_n`` of ``(M_t - 1)^{-1}`` and the S-transform, each by
series reversion (ground truth) and by the printed closed forms, which are
diffed against the reversion and reported.

``U`` below is always ``U_{nu_{2t}}(z) = sum_k phi(u_{2t}^k) z^k`` and
``E = Q^2 = e^{-t}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb, factorial

from .fubm import fubm_oracle, laguerre_shifted, laplace_integral, moment_fubm
from .limits import check_range
from .ncpart import free_cumulant, mixed_cumulant
from .scalar import ONE, ZERO, Q, Scalar, T
from .series import Series, alpha_series, binomial_series, compose, exp_series, revert
from .specfun import hyper_pfq, laguerre, pochhammer
from .tables import CoeffTable, Finding

__all__ = [
    "JacobiContext",
    "VariantComparison",
    "u_series",
    "m_series",
    "f_series",
    "r_series",
    "u_power_check",
    "s_series_coeffs",
    "convolution_identity_check",
    "convolution_derivative_check",
    "b_closed",
    "b_table",
    "q_poly",
    "q_series_check",
    "q_integral_check",
    "hyper_remark_check",
    "h_poly",
    "g_series",
    "h_lemma_check",
    "d_coeff",
    "v_coeff",
    "c_closed",
    "c_table",
    "s_series",
    "s_transform",
    "r_of_zs_check",
    "s_functional_check",
    "jacobi_free_cumulants",
    "B_VARIANTS",
    "C_VARIANTS",
    "H_VARIANTS",
]

B_VARIANTS = ("as-printed", "corrected")
C_VARIANTS = ("as-printed", "cauchy", "corrected")
H_VARIANTS = ("as-printed", "corrected")

E = Q**2


def u_series(N: int, time_scale=2) -> Series:
    """``sum_{k=1}^N phi(u_{ct}^k) z^k``."""
    return Series([ZERO] + [moment_fubm(k, time_scale) for k in range(1, N + 1)], N)


@dataclass(frozen=True)
class JacobiContext:
    """Series shared by the Jacobi computations at one truncation order."""

    order: int
    U: Series
    M: Series
    w: Series

    @classmethod
    def build(cls, order: int) -> JacobiContext:
        M = m_series(order)
        return cls(order, u_series(order), M, M.shift_up().truncate(order))


def m_series(N: int, route: str = "closed-form") -> Series:
    """Normalized moment series ``M_t(z) = sum phi(J_t^n) / phi(P) z^n``.

    ``closed-form``: ``(1-z)^{-1/2} [1 + 2 U(alpha(z))]``.
    ``oracle``: multinomial expansion of ``((u + u* + 2)/4)^n`` with
    ``u = u_{2t}``, reduced to net powers of u.
    """
    check_range("N", N, 0, 12)
    if N == 0:
        return Series([ONE], 0)
    if route == "closed-form":
        inner = 1 + 2 * compose(u_series(N), alpha_series(N))
        return binomial_series(Fraction(-1, 2), N) * inner
    if route == "oracle":
        coeffs = []
        for n in range(N + 1):
            total = ZERO
            for a in range(n + 1):
                for b in range(n + 1 - a):
                    c = n - a - b
                    mult = factorial(n) // (factorial(a) * factorial(b) * factorial(c))
                    total = total + mult * 2**c * moment_fubm(a - b, 2)
            coeffs.append(total / 4**n)
        return Series(coeffs, N)
    raise ValueError(f"unknown route {route!r}")


def f_series(N: int) -> Series:
    """``F_t``: compositional inverse of ``w_t = z M_t``, to order N."""
    check_range("N", N, 1, 12)
    return revert(m_series(N - 1).shift_up())


def r_series(N: int) -> Series:
    """R-transform ``R_t = z / F_t - 1`` to order N."""
    F = f_series(N + 1)
    return F.shift_down().inverse() - 1


# -- Laguerre convolution identities ---------------------------------------


def u_power_check(m: int, N: int) -> Finding:
    """``U^m = m sum_{j>=m} L_{j-m}^{(m)}(2jt) (E z)^j / j``, coefficientwise."""
    check_range("m", m, 1, 5)
    check_range("N", N, 1, 10)
    power = u_series(N) ** m
    closed = Series(
        [ZERO] * m + [m * laguerre(j - m, m, 2 * j * T) * E**j / j for j in range(m, N + 1)], N
    )
    diff = power - closed
    return Finding(
        f"U-power(m={m},N={N})",
        power == closed,
        data={"max_index_mismatch": str(max((k for k, c in enumerate(diff) if c), default=-1))},
    )


def s_series_coeffs(N: int) -> Series:
    """``sum s_k z^k`` with ``s_k(t) = L_{k-1}^{(1)}(kt) / k``."""
    return Series([ZERO] + [laguerre(k - 1, 1, k * T) / k for k in range(1, N + 1)], N)


def convolution_identity_check(m: int, j: int) -> Finding:
    """m-fold convolution of ``s`` at index j against ``L_{j-m}^{(m)}(jt)``.

    The printed right side is ``(1/j) L``; the finding records the exact
    ratio and whether ``(m/j) L`` holds instead.
    """
    if not 1 <= m <= j:
        raise ValueError("need 1 <= m <= j")
    check_range("j", j, 1, 10)
    lhs = (s_series_coeffs(j) ** m)[j]
    lag = laguerre(j - m, m, j * T)
    printed = lag / j
    return Finding(
        f"s-power convolution(m={m},j={j})",
        lhs == printed,
        detail="printed right side (1/j) L_{j-m}^{(m)}(jt)",
        data={
            "lhs": str(lhs),
            "ratio_lhs_over_printed": str(lhs / printed),
            "corrected_rhs": "(m/j) L_{j-m}^{(m)}(jt)",
            "corrected_holds": str(lhs == m * lag / j),
        },
    )


def convolution_derivative_check(k: int) -> Finding:
    """``-(1/k) s_k'`` against ``sum_{j=1}^{k-1} s_j s_{k-j}``.

    The printed index ``s_{j-k}`` is read as ``s_{k-j}``.  The finding
    records the exact ratio and whether ``-(2/k) s_k'`` matches.
    """
    check_range("k", k, 2, 10)
    s = s_series_coeffs(k)
    lhs = -s[k].d_dt() / k
    rhs = sum((s[j] * s[k - j] for j in range(1, k)), ZERO)
    return Finding(
        f"s-derivative convolution(k={k})",
        lhs == rhs,
        detail="printed: -(1/k) d/dt s_k = sum s_j s_{k-j}",
        data={
            "lhs": str(lhs),
            "rhs": str(rhs),
            "ratio_lhs_over_rhs": str(lhs / rhs),
            "corrected": "-(2/k) d/dt s_k = sum s_j s_{k-j}",
            "corrected_holds": str(2 * lhs == rhs),
        },
    )


# -- reciprocal of the R-transform ----------------------------------------


def q_poly(j: int, n: int) -> Scalar:
    """``Q_j^{(n)}(t) = (1/j) sum_{m=1}^j (n)_m/(m-1)! (-2)^m L_{j-m}^{(m)}(2jt)``; ``Q_0 = 1``."""
    if j == 0:
        return ONE
    return (
        sum(
            (
                pochhammer(n, m) / factorial(m - 1) * (-2) ** m * laguerre(j - m, m, 2 * j * T)
                for m in range(1, j + 1)
            ),
            ZERO,
        )
        / j
    )


def q_series_check(n: int, N: int) -> Finding:
    """``[1 + 2U]^{-n} = sum_j E^j Q_j^{(n)} z^j`` to order N."""
    lhs = (1 + 2 * u_series(N)) ** (-n)
    rhs = Series([E**j * q_poly(j, n) for j in range(N + 1)], N)
    return Finding(f"Q-series(n={n},N={N})", lhs == rhs)


def q_integral_check(k: int, n: int) -> Finding:
    """``E^k Q_k^{(n)} / n`` against ``-2 t^{n+1}/n! int_0^inf x^n phi(u_{2(t+x)}^k) dx``.

    Also records whether the prefactor ``-2 k^{n+1}/n!`` closes the gap.
    """
    if k < 1 or n < 1:
        raise ValueError("need k, n >= 1")
    lhs = E**k * q_poly(k, n) / n
    coeffs = laguerre_shifted(k - 1, 1, 2 * k * T, 2 * k)
    integral = E**k * laplace_integral(coeffs, n, k) / k
    printed = -2 * T ** (n + 1) / factorial(n) * integral
    corrected = Fraction(-2 * k ** (n + 1), factorial(n)) * integral
    return Finding(
        f"Q-integral-representation(k={k},n={n})",
        lhs == printed,
        detail="printed prefactor -2 t^(n+1)/n!",
        data={
            "lhs": str(lhs),
            "printed_rhs": str(printed),
            "ratio_lhs_over_printed": str(lhs / printed),
            "corrected_prefactor": f"-2*{k}^{n + 1}/{factorial(n)}",
            "corrected_holds": str(lhs == corrected),
        },
    )


def b_closed(n: int, variant: str = "as-printed") -> Scalar:
    """Closed-form ``b_n``; the variant picks the Pochhammer base.

    ``as-printed`` uses ``(1-n)/2``; ``corrected`` uses ``(-1-n)/2``, which
    is what ``(1-z)^{n/2} (1-z)^{1/2}`` produces.
    """
    if variant not in B_VARIANTS:
        raise ValueError(f"unknown b variant {variant!r}")
    base = Fraction(1 - n, 2) if variant == "as-printed" else Fraction(-1 - n, 2)
    qs = [q_poly(k, n) for k in range(n)]
    total = ZERO
    for j in range(n):
        inner = sum((qs[k] * comb(2 * j, j - k) * E**k for k in range(j + 1)), ZERO)
        total = total + pochhammer(base, n - 1 - j) / (4**j * factorial(n - 1 - j)) * inner
    return total / n


@dataclass(frozen=True)
class VariantComparison:
    """A closed-form table diffed against its reversion oracle."""

    variant: str
    oracle: CoeffTable
    closed: CoeffTable
    diff: tuple[tuple[int, Scalar], ...]

    @property
    def agrees(self) -> bool:
        return all(not d for _, d in self.diff)

    def first_mismatch(self) -> int | None:
        return next((n for n, d in self.diff if d), None)

    def finding(self) -> Finding:
        first = self.first_mismatch()
        data = {"variant": self.variant}
        if first is not None:
            data.update(
                first_mismatch=str(first),
                oracle=str(self.oracle[first]),
                closed_form=str(self.closed[first]),
                diff=str(dict(self.diff)[first]),
            )
        return Finding(f"{self.oracle.label}-closed-form[{self.variant}]", self.agrees, data=data)


def _compare(label, oracle_vals, closed_vals, variant, start=1):
    oracle = CoeffTable.from_values(label, oracle_vals, start=start, provenance="oracle")
    closed = CoeffTable.from_values(label, closed_vals, start=start, provenance="closed-form")
    diff = tuple((n, o - c) for (n, o), (_, c) in zip(oracle.entries, closed.entries))
    cmp = VariantComparison(variant, oracle, closed, diff)
    return VariantComparison(variant, oracle.with_errata(cmp.finding()), closed, diff)


def b_table(N: int, variant: str = "as-printed") -> VariantComparison:
    """``b_1..b_N`` from reverting ``z M_t`` and from the closed form."""
    check_range("N", N, 1, 8)
    F = f_series(N)
    return _compare("b", F.coeffs[1:], [b_closed(n, variant) for n in range(1, N + 1)], variant)


def hyper_remark_check(n: int, k: int) -> Finding:
    """Inner binomial sum of b_n against its 3F2 (k = 0: also 2F1) form."""
    if not (0 <= k <= n - 1 <= 6):
        raise ValueError("need 0 <= k <= n-1 <= 6")
    a = Fraction(1 - n, 2)
    direct = sum(
        pochhammer(a, n - 1 - j) / (4**j * factorial(n - 1 - j)) * comb(2 * j, j - k)
        for j in range(k, n)
    )
    pref = Fraction(comb(2 * n - 2, n - 1 - k), 4 ** (n - 1))
    three = pref * hyper_pfq([1 - k - n, 1 + k - n, a], [1 - n, Fraction(3, 2) - n], 1)
    data = {"direct": str(direct), "3F2": str(three)}
    holds = direct == three
    if k == 0:
        two = pref * hyper_pfq([1 - n, a], [Fraction(3, 2) - n], 1)
        data["2F1"] = str(two)
        holds = holds and direct == two
    return Finding(f"3F2-remark(n={n},k={k})", holds, data=data)


# -- S-transform ------------------------------------------------------------


def h_poly(m: int, n: int, variant: str = "as-printed") -> Scalar:
    """``H_m^{(n)}(t)`` by iterated t-derivatives of ``(1+E)^{-n}``.

    ``as-printed`` weights the k-th derivative by ``(2t)^k``; ``corrected``
    by ``(-2t)^k`` (``j^k E^j = (-d/dt)^k E^j``).
    """
    if variant not in H_VARIANTS:
        raise ValueError(f"unknown H variant {variant!r}")
    sign = 1 if variant == "as-printed" else -1
    f = (1 + E) ** (-n)
    total = ZERO
    for k in range(m + 1):
        total = total + comb(m, k) * pochhammer(n, m - k) * (sign * 2 * T) ** k * f
        f = f.d_dt()
    return (-1) ** m * total / factorial(m)


def g_series(n: int, N: int) -> Series:
    """``G_{n,t}(z) = (1+z)^{-n} (1 + e^{-t(1+2z)})^{-n}`` expanded directly."""
    z = Series.z(N)
    e = E * exp_series(-2 * T * z)
    return ((1 + z) * (1 + e)) ** (-n)


def h_lemma_check(n: int, N: int, variant: str = "corrected") -> Finding:
    """``sum_m H_m^{(n)} z^m`` against the direct expansion of ``G_{n,t}``."""
    direct = g_series(n, N)
    coeffs = Series([h_poly(m, n, variant) for m in range(N + 1)], N)
    first = next((m for m in range(N + 1) if direct[m] != coeffs[m]), None)
    data = {"variant": variant}
    if first is not None:
        data.update(first_mismatch=str(first), direct=str(direct[first]), formula=str(coeffs[first]))
    return Finding(f"H-lemma(n={n},N={N})[{variant}]", first is None, data=data)


def d_coeff(j: int, n: int, variant: str = "as-printed") -> Fraction:
    """``d_j^{(n)}``.

    Printed: ``sum_k (-n-1)_k/k! (2n+1)_{j-k}/(j-k)!``.  ``corrected`` adds
    the sign ``(-1)^{j-k}`` so that ``d_j`` are the Taylor coefficients of
    ``(1-y)^{n+1} / (1+y)^{2n+1}``.
    """
    signed = variant == "corrected"
    return sum(
        pochhammer(-n - 1, k)
        / factorial(k)
        * pochhammer(2 * n + 1, j - k)
        / factorial(j - k)
        * ((-1) ** (j - k) if signed else 1)
        for k in range(j + 1)
    )


def v_coeff(j: int, n: int, variant: str = "as-printed") -> Scalar:
    """``V_j^{(n)} = 2^n E^j / j sum_{m=1}^j m H_m^{(n)} L_{j-m}^{(m)}(2jt)``; ``V_0 = 2^n H_0``.

    The stray ``z^j`` of the printed definition is dropped.
    """
    hv = "corrected" if variant == "corrected" else "as-printed"
    if j == 0:
        return 2**n * h_poly(0, n, hv)
    return (
        2**n
        * E**j
        / j
        * sum((m * h_poly(m, n, hv) * laguerre(j - m, m, 2 * j * T) for m in range(1, j + 1)), ZERO)
    )


def c_closed(n: int, variant: str = "as-printed") -> Scalar:
    """Closed-form ``c_n``.

    ``as-printed``: ``sum_k d_{j-k} V_j``; ``cauchy``: ``sum_k d_{j-k} V_k``
    (both with the printed d and H); ``corrected``: Cauchy pairing with the
    signed d and the sign-corrected H.
    """
    if variant not in C_VARIANTS:
        raise ValueError(f"unknown c variant {variant!r}")
    dv = "corrected" if variant == "corrected" else "as-printed"
    d = [d_coeff(i, n, dv) for i in range(n)]
    V = [v_coeff(i, n, dv) for i in range(n)]
    total = ZERO
    for j in range(n):
        if variant == "as-printed":
            inner = sum((d[j - k] for k in range(j + 1)), Fraction(0)) * V[j]
        else:
            inner = sum((d[j - k] * V[k] for k in range(j + 1)), ZERO)
        total = total + comb(2 * n - 2, n - 1 - j) * inner
    return total / (n * 4 ** (n - 1))


def _c_oracle(N: int) -> Series:
    return revert(m_series(N) - 1)


def c_table(N: int, variant: str = "as-printed") -> VariantComparison:
    """``c_1..c_N`` from reverting ``M_t - 1`` and from the closed form."""
    check_range("N", N, 1, 8)
    inv = _c_oracle(N)
    return _compare("c", inv.coeffs[1:], [c_closed(n, variant) for n in range(1, N + 1)], variant)


def s_series(N: int) -> Series:
    """``S_t(z) = c_1 + sum_{n>=1} (c_{n+1} + c_n) z^n`` to order N."""
    c = _c_oracle(N + 1).coeffs
    return Series([c[1]] + [c[n + 1] + c[n] for n in range(1, N + 1)], N)


def s_transform(N: int) -> CoeffTable:
    check_range("N", N, 0, 8)
    return CoeffTable.from_values("S", s_series(N).coeffs, start=0, provenance="oracle")


def r_of_zs_check(N: int) -> Finding:
    """``R_t(z S_t(z)) = z`` to order N."""
    zs = s_series(N - 1).shift_up()
    lhs = compose(r_series(N), zs)
    return Finding(f"R(zS)=z(N={N})", lhs == Series.z(N))


def s_functional_check(N: int) -> Finding:
    """``z S_t(z) = (1 + z) (M_t - 1)^{-1}(z)`` to order N."""
    zs = s_series(N - 1).shift_up()
    rhs = (1 + Series.z(N)) * _c_oracle(N)
    return Finding(f"zS=(1+z)(M-1)^-1(N={N})", zs == rhs)


def jacobi_free_cumulants(N: int, star_max: int = 5) -> tuple[CoeffTable, list[Finding]]:
    """Free cumulants of J_t by three routes.

    (i) coefficients of ``R_t``; (ii) Möbius inversion of the moments;
    (iii) ``4^{-n} sum_eps kappa_n(u_{2t}^{eps_1}, ...)`` plus 1/2 at n = 1.
    Route (iii) runs for ``n <= star_max``.
    """
    check_range("N", N, 1, 6)
    R = r_series(N)
    M = m_series(N, route="oracle")
    oracle = fubm_oracle(2)
    route_i = list(R.coeffs[1:])
    findings = []
    for n in range(1, N + 1):
        k2 = free_cumulant(lambda k: M[k], n)
        findings.append(Finding(f"kappa_J(n={n})[R vs moments]", route_i[n - 1] == k2))
        if n <= star_max:
            k3 = sum((mixed_cumulant(oracle, eps) for eps in product((1, -1), repeat=n)), ZERO)
            k3 = k3 / 4**n + (Fraction(1, 2) if n == 1 else 0)
            findings.append(Finding(f"kappa_J(n={n})[R vs star cumulants]", route_i[n - 1] == k3))
    return CoeffTable.from_values("kappa_J", route_i, provenance="oracle"), findings
