"""Schur function of the free unitary Brownian motion law and its iterates.

``H = 1 + 2U`` is the Herglotz transform, ``z f_0 = (H - 1)/(H + 1)`` the
Schur function, and the Schur algorithm peels off the Verblunsky
coefficients ``gamma_j = f_j(0)``.  All coefficients are real, so the
conjugation in the recursion is the identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .fubm import laguerre_shifted
from .jacobi import u_series
from .limits import check_range
from .scalar import ONE, ZERO, Q, Scalar, T
from .series import Series, SeriesError, exp_series
from .specfun import laguerre
from .tables import CoeffTable, Finding

__all__ = [
    "SchurState",
    "F1_VARIANTS",
    "herglotz_series",
    "xi_check",
    "f0_series",
    "exp_ku_check",
    "eulerian_numerator",
    "polylog_neg",
    "f1_series",
    "f1_check",
    "schur_algorithm",
    "schur_run",
    "schur_rebuild",
    "verblunsky_table",
    "gamma_bound_check",
    "laguerre_bound_check",
    "PROBE_T",
]

E = Q**2
PROBE_T = Fraction(1)
# prefactor of the f_1 expansion: t e^{-t} (1 - e^t) or t e^{-t} (1 - e^{-t})
F1_VARIANTS = {"proposition": T * (E - 1), "proof": T * E * (1 - E)}


def herglotz_series(N: int) -> Series:
    """``H = 1 + 2 U_{nu_t}`` to order N."""
    check_range("N", N, 0, 12)
    return 1 + 2 * u_series(N, time_scale=1)


def xi_check(N: int) -> Finding:
    """``xi_t(H(z)) = z`` with ``xi_t(Z) = (Z-1)/(Z+1) e^{tZ/2}``.

    ``e^{tH/2} = Q^{-1} exp(t (H - 1)/2)``.
    """
    H = herglotz_series(N)
    lhs = (H - 1) / (H + 1) * exp_series(T * (H - 1) / 2) / Q
    return Finding(f"xi(H(z))=z(N={N})", lhs == Series.z(N))


def f0_series(N: int, route: str = "closed-form") -> Series:
    """Schur function ``f_0`` to order N.

    ``closed-form``: ``Q - tQ sum_j Q^j/j L_{j-1}^{(1)}((j+1)t) z^j``;
    ``oracle``: ``((H-1)/(H+1)) / z``.
    """
    check_range("N", N, 0, 10)
    if route == "closed-form":
        return Series(
            [Q] + [-T * Q ** (j + 1) / j * laguerre(j - 1, 1, (j + 1) * T) for j in range(1, N + 1)],
            N,
        )
    if route == "oracle":
        H = herglotz_series(N + 1)
        return ((H - 1) / (H + 1)).shift_down()
    raise ValueError(f"unknown route {route!r}")


def exp_ku_check(k: int, N: int) -> Finding:
    """``exp(-k t U) = 1 - k t sum_j Q^j/j L_{j-1}^{(1)}((j+k)t) z^j``."""
    check_range("k", k, 0, 5)
    check_range("N", N, 1, 8)
    lhs = exp_series(-k * T * u_series(N, time_scale=1))
    rhs = Series(
        [ONE] + [-k * T * Q**j / j * laguerre(j - 1, 1, (j + k) * T) for j in range(1, N + 1)], N
    )
    return Finding(f"exp(-ktU)(k={k},N={N})", lhs == rhs)


def eulerian_numerator(p: int) -> list[int]:
    """``N_p`` with ``sum_{k>=1} k^p x^k = N_p(x) / (1-x)^{p+1}``, lowest first."""
    num = [0, 1]
    for q in range(p):
        # N_{q+1} = x [N_q' (1 - x) + (q + 1) N_q]
        d = [i * c for i, c in enumerate(num)][1:] + [0]
        inner = [d[i] - (d[i - 1] if i else 0) + (q + 1) * num[i] for i in range(len(num))]
        inner.append(-d[-1])
        num = [0] + inner
        while len(num) > 1 and num[-1] == 0:
            num.pop()
    return num


def polylog_neg(p: int, x: Scalar) -> Scalar:
    """``sum_{k>=1} k^p x^k`` in closed form."""
    num = sum((c * x**i for i, c in enumerate(eulerian_numerator(p))), ZERO)
    return num / (1 - x) ** (p + 1)


def f1_series(N: int, route: str = "closed-form", variant: str = "proposition") -> Series:
    """First Schur iterate ``f_1`` to order N.

    ``closed-form``: prefactor (``variant``) times
    ``sum_j Q^j/(j+1) [sum_{k>=1} k E^k L_j^{(1)}((j+k+1)t)] z^j``, the
    k-sum closed by Eulerian numerators after expanding the Laguerre
    polynomial in k.  ``oracle``: one Schur step from ``f_0``.
    """
    check_range("N", N, 0, 8)
    if route == "oracle":
        return schur_run(f0_series(N + 1), 1).iterate
    if route != "closed-form":
        raise ValueError(f"unknown route {route!r}")
    if variant not in F1_VARIANTS:
        raise ValueError(f"unknown f1 variant {variant!r}")
    pref = F1_VARIANTS[variant]
    coeffs = []
    for j in range(N + 1):
        in_k = laguerre_shifted(j, 1, (j + 1) * T, T)
        ksum = sum((c * polylog_neg(i + 1, E) for i, c in enumerate(in_k)), ZERO)
        coeffs.append(pref * Q**j / (j + 1) * ksum)
    return Series(coeffs, N)


def f1_check(N: int) -> list[Finding]:
    """Both prefactor variants of the ``f_1`` expansion against the Schur step."""
    oracle = f1_series(N, "oracle")
    out = []
    for v in F1_VARIANTS:
        closed = f1_series(N, "closed-form", v)
        first = next((j for j in range(N + 1) if closed[j] != oracle[j]), None)
        data = {"variant": v}
        if first is not None:
            data.update(first_mismatch=str(first), oracle=str(oracle[first]), closed_form=str(closed[first]))
        out.append(Finding(f"f1-expansion(N={N})[{v}]", first is None, data=data))
    return out


@dataclass(frozen=True)
class SchurState:
    """Schur iterate after ``depth`` steps and the coefficients peeled so far."""

    iterate: Series
    gammas: tuple[Scalar, ...]
    depth: int


def _check_probe(g: Scalar, j: int, t0):
    if abs(g.eval(t0)) >= 1:
        raise SeriesError(f"|gamma_{j}({t0})| >= 1; not a Schur function")


def schur_run(f: Series, steps: int, probe_t=PROBE_T) -> SchurState:
    """Apply ``steps`` Schur steps ``z f_{j+1} = (f_j - g_j) / (1 - g_j f_j)``."""
    if not 0 <= steps <= f.order:
        raise ValueError(f"steps must be in 0..{f.order}")
    gammas = []
    for j in range(steps):
        g = f[0]
        _check_probe(g, j, probe_t)
        den = 1 - g * f
        if not den[0]:
            raise SeriesError(f"iterate {j}: 1 - gamma f has vanishing constant term")
        f = ((f - g) / den).shift_down()
        gammas.append(g)
    return SchurState(f, tuple(gammas), steps)


def schur_algorithm(f: Series, depth: int, probe_t=PROBE_T) -> list[Scalar]:
    """Verblunsky coefficients ``gamma_0 .. gamma_depth`` of ``f``."""
    if not 0 <= depth <= f.order - 1:
        raise ValueError(f"depth must be in 0..{f.order - 1}")
    state = schur_run(f, depth, probe_t)
    _check_probe(state.iterate[0], depth, probe_t)
    return list(state.gammas) + [state.iterate[0]]


def schur_rebuild(gammas) -> Series:
    """Invert the recursion: ``f_j = (g_j + z f_{j+1}) / (1 + g_j z f_{j+1})``.

    Starts from ``f_{d+1} = 0`` and carries ``f_j = P / R`` as a pair, so
    there is a single series division at the end.  Coefficients ``0..d``
    are exact.
    """
    d = len(gammas) - 1
    P, R = Series([ZERO], d), Series([ONE], d)
    for g in reversed(gammas):
        zP = P.shift_up().truncate(d)
        P, R = g * R + zP, R + g * zP
    return P / R


def verblunsky_table(depth: int) -> CoeffTable:
    check_range("depth", depth, 0, 6)
    gammas = schur_algorithm(f0_series(depth + 1, "oracle"), depth)
    return CoeffTable.from_values("gamma", gammas, start=0, provenance="oracle")


def gamma_bound_check(depth: int = 4, t0s=(Fraction(1, 2), 1, 2, 5), precision_bits=128) -> list[Finding]:
    """``|gamma_j(t0)| < 1`` for ``j <= depth``."""
    gammas = verblunsky_table(depth).values()
    out = []
    for t0 in t0s:
        vals = [g.eval(t0, precision_bits) for g in gammas]
        out.append(
            Finding(
                f"|gamma_j(t={t0})|<1",
                all(abs(v) < 1 for v in vals),
                data={f"gamma_{j}": mpmath.nstr(v, 15) for j, v in enumerate(vals)},
            )
        )
    return out


def laguerre_bound_check(j_max: int = 12, xs=(0, 1, 5, 20), tol=1e-20) -> Finding:
    """``|L_j^{(1)}(x)| <= (j+1) e^{x/2}``; exact values also matched to mpmath."""
    worst = mpmath.mpf(0)
    ok = True
    with mpmath.workprec(128):
        for j in range(j_max + 1):
            for x in xs:
                exact = laguerre(j, 1, Scalar(x)).to_fraction()
                val = mpmath.mpf(exact.numerator) / exact.denominator
                ref = mpmath.laguerre(j, 1, mpmath.mpf(Fraction(x).numerator) / Fraction(x).denominator)
                ok = ok and abs(val - ref) <= tol * max(1, abs(ref))
                ratio = abs(val) / ((j + 1) * mpmath.exp(mpmath.mpf(Fraction(x).numerator) / Fraction(x).denominator / 2))
                worst = max(worst, ratio)
    return Finding(
        f"Laguerre-bound(j<={j_max})",
        ok and worst <= 1,
        data={"max_ratio": mpmath.nstr(worst, 15), "matches_mpmath": str(ok)},
    )
