"""Pochhammer symbols, Laguerre and Charlier polynomials, terminating pFq.

Everything is exact.  Parameters are :class:`fractions.Fraction` values
(``RationalParam``); Laguerre arguments may be anything supporting ring
operations (``int``, ``Fraction``, :class:`~freeprob.scalar.Scalar`,
:class:`~freeprob.series.Series`).
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

__all__ = [
    "RationalParam",
    "as_param",
    "pochhammer",
    "laguerre_coefficients",
    "laguerre",
    "laguerre_derivative_coefficients",
    "charlier",
    "hyper_pfq",
    "HypergeometricError",
]

RationalParam = Fraction


class HypergeometricError(ValueError):
    """A pFq evaluation outside the terminating, pole-free case."""


def as_param(x) -> Fraction:
    """Coerce ``int``, ``str`` (``"1/2"``) or ``Fraction`` to a RationalParam."""
    return x if isinstance(x, Fraction) else Fraction(x)


def pochhammer(a, k: int):
    """Rising factorial ``(a)_k = a (a+1) ... (a+k-1)``, with ``(a)_0 = 1``.

    ``(0)_k`` is 1 for k = 0 and 0 otherwise, which the product gives for free.
    Works for any ring element ``a``; plain ints are promoted to Fraction.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if isinstance(a, int):
        a = Fraction(a)
    result = a**0
    for i in range(k):
        result = result * (a + i)
    return result


def _nonpositive_integer(p) -> int | None:
    if isinstance(p, Fraction) and p.denominator == 1 and p <= 0:
        return int(-p)
    return None


def laguerre_coefficients(n: int, alpha=0) -> list:
    """Monomial coefficients of ``L_n^(alpha)``, lowest degree first.

    ``c_j = (-n)_j / j! * (alpha + j + 1)_{n-j} / n!``.  ``alpha`` may be a
    rational or a Scalar.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if isinstance(alpha, (int, str)):
        alpha = as_param(alpha)
    nf = factorial(n)
    return [
        pochhammer(-n, j) / factorial(j) * pochhammer(alpha + j + 1, n - j) / nf
        for j in range(n + 1)
    ]


def _horner(coeffs, x):
    acc = coeffs[-1] + 0 * x
    for c in reversed(coeffs[:-1]):
        acc = acc * x + c
    return acc


def laguerre(n: int, alpha, x):
    """Value of the Laguerre polynomial ``L_n^(alpha)(x)``."""
    return _horner(laguerre_coefficients(n, alpha), x)


def laguerre_derivative_coefficients(n: int, alpha, m: int) -> list:
    """Coefficients of ``d^m/dx^m L_n^(alpha)(x)``, formal in x."""
    coeffs = laguerre_coefficients(n, alpha)
    for _ in range(m):
        coeffs = [j * coeffs[j] for j in range(1, len(coeffs))] or [coeffs[0] * 0]
    return coeffs


def hyper_pfq(upper, lower, z):
    """Terminating generalized hypergeometric sum.

    Some upper parameter must be a non-positive integer ``-N``; the series is
    then the finite sum over ``m = 0..N``.  A lower parameter ``-M`` with
    ``M < N`` would hit a zero denominator and is rejected.
    """
    upper = [as_param(a) if isinstance(a, (int, str)) else a for a in upper]
    lower = [as_param(b) if isinstance(b, (int, str)) else b for b in lower]
    stops = [s for s in (_nonpositive_integer(a) for a in upper) if s is not None]
    if not stops:
        raise HypergeometricError(f"non-terminating pFq: upper={upper}")
    N = min(stops)
    for b in lower:
        M = _nonpositive_integer(b)
        if M is not None and M < N:
            raise HypergeometricError(f"lower parameter {b} is a pole before term {N}")
    if isinstance(z, (int, str)):
        z = as_param(z)
    total = 0 * z
    term = z**0
    for m in range(N + 1):
        total = total + term
        num = 1
        for a in upper:
            num = num * (a + m)
        den = m + 1
        for b in lower:
            den = den * (b + m)
        if m < N:
            term = term * num * z / den
    return total


def charlier(n: int, x: int, a) -> Fraction:
    """Charlier polynomial ``C_n(x, a) = 2F0(-n, -x; ; -1/a)``."""
    a = as_param(a)
    if a == 0:
        raise ValueError("Charlier parameter a must be nonzero")
    return hyper_pfq([Fraction(-n), Fraction(-x)], [], -1 / a)
