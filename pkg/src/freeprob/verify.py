"""The identity suite behind ``freeprob verify``.

Each :class:`Check` produces findings and a verdict.  Identity checks pass
when every finding holds.  Erratum checks pass when the report is
definitive: the oracle decides, and the corrected reading holds exactly,
whatever the printed reading does.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Callable

import mpmath

from . import fubm, jacobi, ncpart, schur
from .ncpart import NCPartition, haar_oracle, mixed_cumulant
from .scalar import ONE, ZERO, Q, Scalar, T
from .series import Series, alpha_inverse_series, alpha_series, brown_transform, compose, exp_series, revert
from .specfun import charlier, laguerre, laguerre_coefficients, laguerre_derivative_coefficients, pochhammer
from .tables import Finding

__all__ = ["Check", "CheckResult", "checks", "run_suite"]

IDENTITY = "identity"
ERRATUM = "erratum"


@dataclass(frozen=True)
class Check:
    name: str
    run: Callable[[int], list[Finding]]
    kind: str = IDENTITY
    judge: Callable[[list[Finding]], bool] | None = None

    def verdict(self, findings: list[Finding]) -> bool:
        if self.judge is not None:
            return self.judge(findings)
        return all(f.holds for f in findings)


@dataclass(frozen=True)
class CheckResult:
    name: str
    kind: str
    passed: bool
    findings: list[Finding] = field(default_factory=list)
    seconds: float = 0.0

    def failures(self) -> list[Finding]:
        return [f for f in self.findings if not f.holds]

    def to_dict(self) -> dict:
        return {
            "check": self.name,
            "kind": self.kind,
            "passed": self.passed,
            "findings": [f.to_dict() for f in self.findings],
        }


def _eq(name, lhs, rhs) -> Finding:
    ok = lhs == rhs
    data = {} if ok else {"lhs": str(lhs), "rhs": str(rhs)}
    if not ok and isinstance(lhs, Scalar):
        data["diff"] = str(lhs - rhs)
    return Finding(name, ok, data=data)


def _corrected(fs):
    return all(f.data.get("corrected_holds") == "True" for f in fs)


def _last_holds(fs):
    return bool(fs) and fs[-1].holds


def _alternating(n: int) -> list[int]:
    return [1 if i % 2 == 0 else -1 for i in range(n)]


# -- moments and star cumulants ----------------------------------------------


def _free_cumulants(N):
    return [
        _eq(f"kappa_{n}(u_t)", ncpart.free_cumulant(fubm.moment_fubm, n), fubm.free_cumulant_fubm(n))
        for n in range(1, min(N, 8) + 1)
    ]


def _lambert(N):
    z = Series.z(N)
    inv = revert(z * exp_series(z))
    return [
        _eq(
            f"Lambert[z^{k}]",
            inv[k],
            Scalar(Fraction((-k) ** (k - 1), factorial(k))),
        )
        for k in range(1, N + 1)
    ] + [_eq(f"kappa_{n} via Lambert", fubm.free_cumulant_fubm(n), Q**n * T ** (n - 1) * inv[n])
         for n in range(1, N + 1)]


def _g_star(N):
    n_max = min(N, 8)
    gs = fubm.g_values(n_max)
    out = [_eq(f"g_{n}(0)", g.subs(t=0, Q=1), ZERO) for n, g in enumerate(gs, 1)]
    out += fubm.g_derivative_check(n_max)
    haar = haar_oracle()
    fo = fubm.fubm_oracle()
    for n in range(1, min(n_max, 4) + 1):
        out.append(_eq(f"g_{n}|Q=0 vs Haar", gs[n - 1].subs(Q=0), mixed_cumulant(haar, _alternating(2 * n))))
        out.append(_eq(f"g_{n} vs Mobius", gs[n - 1], mixed_cumulant(fo, _alternating(2 * n))))
    return out


def _h_star(N):
    hs = fubm.h_table(3).values()
    fo = fubm.fubm_oracle()
    out = [_eq(f"h_{n} vs Mobius", hs[n], mixed_cumulant(fo, _alternating(2 * n + 1))) for n in range(4)]
    out.append(_eq("h_1 closed form", hs[1], Q * (-1 + (1 + T) * Q**2)))
    return out


def _krawczyk_speicher(N):
    fo = fubm.fubm_oracle()
    out = []
    cases = [
        ((1,), (2,), (3, 4)),
        ((1, 2), (3, 4)),
        ((1, 2), (3,)),
        ((1,), (2, 3), (4,)),
    ]
    words = {4: [1, -1, 1, -1], 3: [1, 1, -1]}
    for blocks in cases:
        n = blocks[-1][-1]
        sigma = NCPartition(n, blocks)
        word = words[n]
        lhs = mixed_cumulant(fo, [sum(word[i - 1] for i in b) for b in sigma.blocks])
        out.append(_eq(f"KS sigma={sigma}", lhs, ncpart.ks_rhs(sigma, word, fo)))
    return out


def _a_reversion(N):
    n = min(N, 8)
    oracle = fubm.a_table(n, "oracle").values()
    closed = fubm.a_table(n).values()
    return [_eq(f"a_{k}", closed[k - 1], oracle[k - 1]) for k in range(1, n + 1)]


def _p_gamma(N):
    return [
        _eq(f"P_{k - 1}^({n}) Gamma integral", fubm.p_poly(k, n), fubm.p_gamma_integral(k, n))
        for n in range(1, 6)
        for k in range(1, n + 1)
    ]


def _p_intrep(N):
    return [fubm.integral_rep_check(n, k) for n in range(1, 6) for k in range(1, n + 1)]


# -- series and special functions -----------------------------------------


def _series_basics(N):
    z = Series.z(N)
    out = [
        _eq("revert(z - z^2) = Catalan", revert(z - z * z).coeffs[1:], tuple(Scalar(ncpart.catalan(k - 1)) for k in range(1, N + 1))),
        _eq("alpha(alpha^-1(z)) = z", compose(alpha_series(N), alpha_inverse_series(N)), z),
        _eq("alpha^-1(alpha(z)) = z", compose(alpha_inverse_series(N), alpha_series(N)), z),
    ]
    r = Series([Fraction(k * k - 3, k + 2) for k in range(N + 1)], N)
    w = Series([Fraction(1, 4**n) for n in range(N + 1)], N)
    lhs = Series([c * w[n] for n, c in enumerate(brown_transform(r))], N)
    rhs = (1 - z).power(Fraction(-1, 2)) * compose(r, alpha_series(N))
    out.append(_eq("Brown transform identity", lhs, rhs))
    return out


def _specfun(N):
    out = []
    ok = all(pochhammer(-n, k) / factorial(k) == (-1) ** k * comb(n, k) for n in range(11) for k in range(11))
    out.append(Finding("Pochhammer binomial: (-n)_k/k! = (-1)^k C(n,k), n,k<=10", ok))
    bad = [
        (n, x, a)
        for n in range(7)
        for x in range(-4, 5)
        for a in (Fraction(1, 2), Fraction(1), Fraction(3))
        if (-a) ** n / factorial(n) * charlier(n, x, a) != laguerre(n, Fraction(x - n), a)
    ]
    out.append(Finding("Charlier-Laguerre, n<=6", not bad, data={"failing": str(bad[:3])} if bad else {}))
    bad = [
        (k, m, al)
        for al in (0, 1, 2)
        for k in range(7)
        for m in range(k + 1)
        if [Scalar(c) for c in laguerre_derivative_coefficients(k, al, m)]
        != [Scalar((-1) ** m * c) for c in laguerre_coefficients(k - m, m + al)]
    ]
    out.append(Finding("Laguerre derivative: d^m L_k^(a) = (-1)^m L_{k-m}^(m+a)", not bad))
    order = 6
    u = Series.z(order)
    x, a = 4, Fraction(2, 3)
    lhs = Series([charlier(n, x, a) * (-a) ** n / factorial(n) for n in range(order + 1)], order)
    rhs = exp_series(-a * u) * (1 + u) ** x
    out.append(_eq("Charlier generating function, order 6", lhs, rhs))
    out += [jacobi.hyper_remark_check(n, k) for n in range(1, 7) for k in range(n)]
    return out


# -- free Jacobi -----------------------------------------------------------


def _jacobi_moments(N):
    return [_eq("M_t routes, order 12", jacobi.m_series(12), jacobi.m_series(12, "oracle"))]


def _jacobi_r(N):
    n = min(N, 8)
    w = jacobi.m_series(n - 1).shift_up()
    F = jacobi.f_series(n)
    return [
        _eq("F(w(z)) = z", compose(F, w), Series.z(n)),
        _eq("w(F(z)) = z", compose(w, F), Series.z(n)),
        _eq("b_1", F[1], ONE),
        _eq("b_2", F[2], -(1 + Q**2) / 2),
    ]


def _b_variants(N):
    n = min(N, 8)
    return [jacobi.b_table(n, v).finding() for v in jacobi.B_VARIANTS]


def _q_intrep(N):
    return [jacobi.q_integral_check(k, n) for k in range(1, 6) for n in range(1, 6)]


def _q_series(N):
    return [jacobi.q_series_check(n, min(N, 6)) for n in (1, 2, 3)]


def _u_powers(N):
    return [jacobi.u_power_check(m, 10) for m in range(1, 6)]


def _convolution(N):
    return [jacobi.convolution_identity_check(m, j) for j in range(1, 11) for m in range(1, j + 1)]


def _conv_derivative(N):
    return [jacobi.convolution_derivative_check(k) for k in range(2, 11)]


def _h_lemma(N):
    return [jacobi.h_lemma_check(n, 6, v) for n in (1, 2, 3) for v in jacobi.H_VARIANTS]


def _c_variants(N):
    n = min(N, 8)
    return [jacobi.c_table(n, v).finding() for v in jacobi.C_VARIANTS]


def _s_transform(N):
    n = min(N, 6)
    return [jacobi.r_of_zs_check(n), jacobi.s_functional_check(n)]


def _jacobi_kappa(N):
    _, findings = jacobi.jacobi_free_cumulants(min(N, 6))
    return findings


# -- Schur -------------------------------------------------------------------


def _herglotz(N):
    return [
        schur.xi_check(8),
        _eq("f0 routes, order 8", schur.f0_series(8), schur.f0_series(8, "oracle")),
    ] + [schur.exp_ku_check(k, 6) for k in range(6)]


def _verblunsky(N):
    g = schur.verblunsky_table(3).values()
    gamma2 = T * Q**3 * (3 * T - 2 + (2 - T) * Q**2) / (2 * (1 - 2 * Q**2 + (1 - T**2) * Q**4))
    f = schur.f0_series(4, "oracle")
    return [
        _eq("gamma_0", g[0], Q),
        _eq("gamma_1", g[1], -T * Q**2 / (1 - Q**2)),
        _eq("gamma_2", g[2], gamma2),
        _eq("gamma_0|Q=0", g[0].subs(Q=0), ZERO),
        _eq("gamma_1|Q=0", g[1].subs(Q=0), ZERO),
        _eq("Schur rebuild, depth 3", schur.schur_rebuild(g), f.truncate(3)),
    ]


def _f1(N):
    return schur.f1_check(min(N, 6))


def _numeric(N):
    g1 = (-T * Q**2 / (1 - Q**2)).eval(1, 128)
    with mpmath.workprec(160):
        ref = -mpmath.exp(-1) / (1 - mpmath.exp(-1))
    err = abs(g1 - ref)
    out = [
        Finding(
            "gamma_1(1) at 128 bits",
            err < mpmath.mpf("1e-20") and abs(g1 - mpmath.mpf("-0.581977")) < 1e-6,
            data={"value": mpmath.nstr(g1, 30), "abs_error": mpmath.nstr(err, 5)},
        ),
        schur.laguerre_bound_check(),
    ]
    return out + schur.gamma_bound_check()


def checks() -> list[Check]:
    return [
        Check("free cumulants of u_t: closed form vs Mobius inversion", _free_cumulants),
        Check("Lambert reversion and free cumulants", _lambert),
        Check("g_n: ODE, derivative vs a_n, Haar limit, Mobius", _g_star),
        Check("h_n: recursion vs Mobius", _h_star),
        Check("Krawczyk-Speicher product formula", _krawczyk_speicher),
        Check("a_n: closed form vs reversion of chi_t", _a_reversion),
        Check("P polynomials: Gamma integral", _p_gamma),
        Check("P polynomials: integral representation", _p_intrep, ERRATUM, _corrected),
        Check("series: reversion, alpha pair, Brown transform", _series_basics),
        Check("special functions: I1, CL, DiffRule, GFC, 3F2", _specfun),
        Check("Jacobi moments: two routes", _jacobi_moments),
        Check("Jacobi R: reversion oracle", _jacobi_r),
        Check("b_n closed form: Pochhammer base", _b_variants, ERRATUM, _last_holds),
        Check("Q polynomials: generating series", _q_series),
        Check("Q polynomials: integral representation", _q_intrep, ERRATUM, _corrected),
        Check("powers of U: closed form", _u_powers),
        Check("Laguerre convolution: first form", _convolution, ERRATUM, _corrected),
        Check("Laguerre convolution: derivative form", _conv_derivative, ERRATUM, _corrected),
        Check("H coefficients: G-series", _h_lemma, ERRATUM, lambda fs: all(f.holds for f in fs if "corrected" in f.name)),
        Check("c_n closed form: pairing and signs", _c_variants, ERRATUM, _last_holds),
        Check("S-transform: R(zS) = z and functional equation", _s_transform),
        Check("free cumulants of J_t: three routes", _jacobi_kappa),
        Check("Herglotz inverse, f0, exp(-ktU)", _herglotz),
        Check("Verblunsky coefficients gamma_0..gamma_2", _verblunsky),
        Check("f1 expansion: prefactor", _f1, ERRATUM, lambda fs: fs[0].holds),
        Check("numeric layer", _numeric),
    ]


def run_suite(order: int = 8, select: Callable[[Check], bool] | None = None) -> list[CheckResult]:
    results = []
    for c in checks():
        if select is not None and not select(c):
            continue
        start = time.perf_counter()
        findings = c.run(order)
        results.append(CheckResult(c.name, c.kind, c.verdict(findings), findings, time.perf_counter() - start))
    return results
