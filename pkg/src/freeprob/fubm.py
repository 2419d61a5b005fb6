"""Free unitary Brownian motion: moments, free cumulants, star cumulants.

Notation: ``u_t`` is the free unitary Brownian motion, ``phi`` the trace,
``E = Q^2 = exp(-t)``.

* ``g_n = kappa_2n(u_t, u_t*, ..., u_t, u_t*)`` (alternating, even length),
* ``h_n = kappa_{2n+1}(u_t, u_t*, ..., u_t*, u_t)`` (odd length),
* ``a_n`` are the Taylor coefficients at 0 of the local inverse, around
  z = 1, of ``chi_t(z) = z^2 (1-z^2) e^{tz} / [(1+z) - (1-z) e^{tz}]^2``.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from math import comb, factorial

from .limits import check_range as _check_range
from .ncpart import MomentOracle
from .scalar import ONE, ZERO, Q, Scalar, T
from .series import Series, exp_series, revert
from .specfun import laguerre, pochhammer
from .tables import CoeffTable, Finding

__all__ = [
    "moment_fubm",
    "fubm_oracle",
    "free_cumulant_fubm",
    "g_values",
    "g_table",
    "h_table",
    "p_poly",
    "p_gamma_integral",
    "a_closed",
    "chi_series",
    "a_table",
    "integral_rep_check",
    "g_derivative_check",
    "g_from_a",
    "laguerre_shifted",
    "laplace_integral",
]


def moment_fubm(k: int, time_scale=1) -> Scalar:
    """``phi(u_{ct}^k) = e^{-kct/2} L_{k-1}^{(1)}(kct) / k`` with ``c = time_scale``.

    Negative ``k`` uses the conjugation symmetry of the law.
    """
    c = Fraction(time_scale)
    if c <= 0:
        raise ValueError("time_scale must be positive")
    k = abs(k)
    if k == 0:
        return ONE
    qpow = k * c
    if qpow.denominator != 1:
        raise ValueError(f"exp(-{qpow} t/2) is not a power of Q")
    return Q ** int(qpow) * laguerre(k - 1, 1, (k * c) * T) / k


def fubm_oracle(time_scale=1) -> MomentOracle:
    return MomentOracle(lambda m: moment_fubm(m, time_scale), name=f"fubm(t*{time_scale})")


def free_cumulant_fubm(n: int) -> Scalar:
    """Closed form ``kappa_n(u_t) = e^{-nt/2} (-nt)^{n-1} / n!``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return Q**n * (-n * T) ** (n - 1) / factorial(n)


# -- polynomials in (t, E) ---------------------------------------------------
# dict {(deg_t, deg_E): Fraction}


def _ep_mul(p, q):
    out = defaultdict(Fraction)
    for (a1, b1), c1 in p.items():
        for (a2, b2), c2 in q.items():
            out[(a1 + a2, b1 + b2)] += c1 * c2
    return {m: c for m, c in out.items() if c}


def _ep_add(p, q, scale=1):
    out = defaultdict(Fraction, p)
    for m, c in q.items():
        out[m] += scale * c
    return {m: c for m, c in out.items() if c}


def _ep_diff(p):
    out = defaultdict(Fraction)
    for (a, b), c in p.items():
        if a:
            out[(a - 1, b)] += a * c
        if b:
            out[(a, b)] -= b * c
    return {m: c for m, c in out.items() if c}


def _ep_to_scalar(p) -> Scalar:
    total = ZERO
    for (a, b), c in p.items():
        total = total + c * T**a * Q ** (2 * b)
    return total


def _solve_g_ode(n: int, rhs):
    """Solve ``g' + n g = rhs`` with ``g(0) = 0`` in Q[t, E].

    The integrating factor ``E^{-n}`` turns the left side into
    ``(E^{-n} g)'``; monomials ``t^a E^c`` integrate to exponential
    polynomials (``c != 0``) or to ``t^{a+1}/(a+1)`` (``c = 0``).
    """
    g = defaultdict(Fraction)
    for (a, b), c in rhs.items():
        e = b - n
        if e == 0:
            g[(a + 1, b)] += c / (a + 1)
            continue
        # int t^a E^e dt = -E^e sum_i a!/(a-i)! t^(a-i) / e^(i+1)
        for i in range(a + 1):
            g[(a - i, b)] -= c * Fraction(factorial(a), factorial(a - i)) / Fraction(e) ** (i + 1)
    at_zero = sum(c for (a, _), c in g.items() if a == 0)
    g[(0, n)] -= at_zero
    g = {m: c for m, c in g.items() if c}
    residue = _ep_add(_ep_add(_ep_diff(g), g, n), rhs, -1)
    assert not residue, f"ODE solution for g_{n} left residue {residue}"
    return g


def _g_polys(N: int):
    gs = [None, {(0, 0): Fraction(1), (0, 1): Fraction(-1)}]
    for n in range(2, N + 1):
        conv = {}
        for m in range(1, n):
            conv = _ep_add(conv, _ep_mul(gs[m], gs[n - m]))
        rhs = {mono: -n * c for mono, c in conv.items()}
        gs.append(_solve_g_ode(n, rhs))
    return gs


def g_values(N: int) -> list[Scalar]:
    """``[g_1, ..., g_N]`` from the first-order ODE recursion."""
    _check_range("N", N, 1, 10)
    return [_ep_to_scalar(p) for p in _g_polys(N)[1:]]


def g_table(N: int) -> CoeffTable:
    return CoeffTable.from_values("g", g_values(N), start=1, provenance="closed-form")


def h_table(N: int) -> CoeffTable:
    """Odd alternating star cumulants ``h_0 .. h_N``.

    ``sum_{j=0}^{n} h_j h_{n-j} = g_{n+1}' / (n+1)`` is solved for ``h_n``
    (the j = 0 and j = n terms give ``2 Q h_n``).
    """
    _check_range("N", N, 0, 5)
    gs = g_values(N + 1)
    hs = [Q]
    for n in range(1, N + 1):
        target = gs[n].d_dt() / (n + 1)
        rest = sum((hs[j] * hs[n - j] for j in range(1, n)), ZERO)
        hs.append((target - rest) / (2 * Q))
    return CoeffTable.from_values("h", hs, start=0, provenance="closed-form")


def p_poly(k: int, n: int) -> Scalar:
    """``P_{k-1}^{(n)}(t) = sum_{m<k} (-2)^m (2n)_m/m! L_{k-1-m}^{(m+1)}(2kt)``."""
    if not 1 <= k:
        raise ValueError("k must be >= 1")
    x = 2 * k * T
    return sum(
        (
            (-2) ** m * pochhammer(2 * n, m) / factorial(m) * laguerre(k - 1 - m, m + 1, x)
            for m in range(k)
        ),
        ZERO,
    )


def laguerre_shifted(n: int, alpha, shift: Scalar, scale) -> list[Scalar]:
    """x-coefficients of ``L_n^(alpha)(shift + scale * x)``, lowest first."""
    x = Series([shift, scale], n)
    return list(laguerre(n, alpha, x).coeffs) if n else [ONE]


def laplace_integral(coeffs, power: int, rate) -> Scalar:
    """``int_0^inf x^power e^{-rate x} sum_i c_i x^i dx`` via factorial moments."""
    rate = Fraction(rate)
    return sum(
        (c * Fraction(factorial(power + i)) / rate ** (power + i + 1) for i, c in enumerate(coeffs)),
        ZERO,
    )


def p_gamma_integral(k: int, n: int) -> Scalar:
    """``(1/Gamma(2n)) int_0^inf e^{-x} x^{2n-1} L_{k-1}^{(1)}(2kt + 2x) dx``, exactly."""
    coeffs = laguerre_shifted(k - 1, 1, 2 * k * T, 2)
    return laplace_integral(coeffs, 2 * n - 1, 1) / factorial(2 * n - 1)


def a_closed(n: int) -> Scalar:
    """Closed form of the n-th Taylor coefficient of the inverse of chi_t."""
    return (
        Fraction(2 * (-1) ** n, n)
        * sum((comb(2 * n, n - k) * Q ** (2 * k) * p_poly(k, n) for k in range(1, n + 1)), ZERO)
    )


def chi_series(N: int) -> Series:
    """``chi_t(1 + w)`` as a series in ``w``; ``e^{tz} = Q^-2 exp(t w)``."""
    w = Series.z(N)
    etz = exp_series(w * T) * Q**-2
    num = (1 + w) ** 2 * (-w * (2 + w)) * etz
    den = (2 + w) + w * etz
    return num / (den * den)


def a_table(N: int, route: str = "closed-form") -> CoeffTable:
    """``a_1 .. a_N`` by the closed form or by reverting ``chi_series``."""
    _check_range("N", N, 1, 10)
    if route == "closed-form":
        vals = [a_closed(n) for n in range(1, N + 1)]
        return CoeffTable.from_values("a", vals, provenance="closed-form")
    if route == "oracle":
        inv = revert(chi_series(N))
        return CoeffTable.from_values("a", inv.coeffs[1:], provenance="oracle")
    raise ValueError(f"unknown route {route!r}")


def integral_rep_check(n: int, k: int) -> Finding:
    """Compare ``e^{-kt} P_{k-1}^{(n)} / n`` with its printed integral form.

    The printed right side is ``2 k t^{2n}/(2n)! int_0^inf x^{2n-1}
    phi(u_{2(t+x)}^k) dx``.  The finding records the exact ratio and
    whether the prefactor ``2 k^{2n+1}/(2n)!`` (substituting x -> kx in
    the Gamma integral) closes the gap.
    """
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    lhs = Q ** (2 * k) * p_poly(k, n) / n
    # phi(u_{2(t+x)}^k) = Q^{2k} e^{-kx} L_{k-1}^{(1)}(2kt + 2kx) / k
    coeffs = laguerre_shifted(k - 1, 1, 2 * k * T, 2 * k)
    integral = Q ** (2 * k) * laplace_integral(coeffs, 2 * n - 1, k) / k
    printed = 2 * k * T ** (2 * n) / factorial(2 * n) * integral
    corrected = Fraction(2 * k ** (2 * n + 1), factorial(2 * n)) * integral
    ratio = lhs / printed if printed else None
    return Finding(
        name=f"P-integral-representation(n={n},k={k})",
        holds=lhs == printed,
        detail="printed prefactor 2k t^(2n)/(2n)!",
        data={
            "lhs": str(lhs),
            "printed_rhs": str(printed),
            "ratio_lhs_over_printed": str(ratio),
            "corrected_prefactor": f"2*{k}^{2 * n + 1}/{factorial(2 * n)}",
            "corrected_holds": str(lhs == corrected),
        },
    )


def g_derivative_check(N: int) -> list[Finding]:
    """``-(1/n) g_n' = [2 a_n + sum_{m=1}^{n-1} a_m a_{n-m}] / 4`` for n <= N."""
    _check_range("N", N, 1, 8)
    gs = g_values(N)
    a = a_table(N).values()
    out = []
    for n in range(1, N + 1):
        lhs = -gs[n - 1].d_dt() / n
        rhs = (2 * a[n - 1] + sum((a[m - 1] * a[n - m - 1] for m in range(1, n)), ZERO)) / 4
        out.append(
            Finding(f"g_n derivative vs a_n(n={n})", lhs == rhs, data={"lhs": str(lhs), "diff": str(lhs - rhs)})
        )
    return out


def g_from_a(N: int) -> CoeffTable:
    """``g_n'`` rebuilt from the a-sequence alone."""
    _check_range("N", N, 1, 8)
    a = a_table(N).values()
    vals = [
        -Fraction(n, 4) * (2 * a[n - 1] + sum((a[m - 1] * a[n - m - 1] for m in range(1, n)), ZERO))
        for n in range(1, N + 1)
    ]
    return CoeffTable.from_values("g'", vals, provenance="closed-form")
