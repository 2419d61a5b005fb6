"""Truncated formal power series over :class:`~freeprob.scalar.Scalar`.

A :class:`Series` of order ``N`` knows its coefficients of ``z^0 .. z^N``
exactly; everything beyond is unknown.  Binary operations truncate to the
smaller of the two orders, so precision is never silently invented.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial
from numbers import Rational

from .scalar import ONE, ZERO, Scalar
from .specfun import pochhammer

__all__ = [
    "Series",
    "SeriesError",
    "compose",
    "revert",
    "binomial_series",
    "exp_series",
    "alpha_series",
    "alpha_inverse_series",
    "brown_transform",
]


class SeriesError(ValueError):
    """An operation undefined for the given series (e.g. non-invertible)."""


def _scalar(c) -> Scalar:
    return c if isinstance(c, Scalar) else Scalar(c)


class Series:
    """Immutable truncated power series ``sum c_k z^k, k = 0..order``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs, order: int | None = None):
        cs = [_scalar(c) for c in coeffs]
        if order is None:
            order = len(cs) - 1
        if order < 0:
            raise SeriesError("order must be non-negative")
        if len(cs) > order + 1:
            cs = cs[: order + 1]
        else:
            cs.extend([ZERO] * (order + 1 - len(cs)))
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Series is immutable")

    # -- constructors ---------------------------------------------------
    @classmethod
    def z(cls, order: int) -> Series:
        return cls([0, 1], order)

    @classmethod
    def constant(cls, c, order: int) -> Series:
        return cls([c], order)

    # -- structure ------------------------------------------------------
    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> Scalar:
        return self.coeffs[k]

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def truncate(self, order: int) -> Series:
        if order > self.order:
            raise SeriesError(f"cannot raise precision from {self.order} to {order}")
        return Series(self.coeffs[: order + 1], order)

    def valuation(self) -> int | None:
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return None

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def agrees_with(self, other: Series) -> bool:
        """Equality up to the smaller of the two orders."""
        n = min(self.order, other.order)
        return self.coeffs[: n + 1] == other.coeffs[: n + 1]

    def __repr__(self):
        terms = [f"({c})*z^{k}" for k, c in enumerate(self.coeffs) if c]
        return f"Series({' + '.join(terms) or '0'}; order={self.order})"

    # -- arithmetic -----------------------------------------------------
    def _lift(self, other):
        if isinstance(other, Series):
            return other
        if isinstance(other, (Scalar, int, Fraction)) or isinstance(other, Rational):
            return Series([other], self.order)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        n = min(self.order, o.order)
        return Series([a + b for a, b in zip(self.coeffs[: n + 1], o.coeffs[: n + 1])], n)

    __radd__ = __add__

    def __neg__(self):
        return Series([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, Series):
            n = min(self.order, other.order)
            a, b = self.coeffs, other.coeffs
            out = [ZERO] * (n + 1)
            for i in range(n + 1):
                if not a[i]:
                    continue
                for j in range(n + 1 - i):
                    if b[j]:
                        out[i + j] = out[i + j] + a[i] * b[j]
            return Series(out, n)
        if isinstance(other, (Scalar, int, Fraction)) or isinstance(other, Rational):
            return Series([c * other for c in self.coeffs], self.order)
        return NotImplemented

    __rmul__ = __mul__

    def inverse(self) -> Series:
        """Multiplicative inverse; needs an invertible constant term."""
        a = self.coeffs
        if not a[0]:
            raise SeriesError("constant term is zero; series is not invertible")
        inv0 = 1 / a[0]
        out = [inv0]
        for n in range(1, self.order + 1):
            acc = ZERO
            for k in range(1, n + 1):
                if a[k]:
                    acc = acc + a[k] * out[n - k]
            out.append(-acc * inv0)
        return Series(out, self.order)

    def __truediv__(self, other):
        if isinstance(other, Series):
            n = min(self.order, other.order)
            return self.truncate(n) * other.truncate(n).inverse()
        if isinstance(other, (Scalar, int, Fraction)) or isinstance(other, Rational):
            return Series([c / other for c in self.coeffs], self.order)
        return NotImplemented

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k):
        if isinstance(k, Fraction) and k.denominator != 1:
            return self.power(k)
        if not isinstance(k, int):
            k = int(k)
        if k < 0:
            return self.inverse() ** (-k)
        result = Series([ONE], self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def power(self, a) -> Series:
        """``self ** a`` for rational ``a``; the constant term must be 1."""
        if self.coeffs[0] != 1:
            raise SeriesError("fractional powers need constant term 1")
        return compose(binomial_series(Fraction(a), self.order), 1 - self)

    def sqrt(self) -> Series:
        return self.power(Fraction(1, 2))

    def derivative(self) -> Series:
        """Formal z-derivative; the order drops by one."""
        if self.order == 0:
            return Series([ZERO], 0)
        return Series([k * self.coeffs[k] for k in range(1, self.order + 1)], self.order - 1)

    def shift_down(self) -> Series:
        """Divide by z; the constant term must vanish."""
        if self.coeffs[0]:
            raise SeriesError("cannot divide by z: nonzero constant term")
        if self.order == 0:
            raise SeriesError("cannot divide an order-0 series by z")
        return Series(self.coeffs[1:], self.order - 1)

    def shift_up(self) -> Series:
        """Multiply by z; the order grows by one."""
        return Series((ZERO,) + self.coeffs, self.order + 1)

    def map(self, fn) -> Series:
        return Series([fn(c) for c in self.coeffs], self.order)

    def compose(self, inner: Series) -> Series:
        return compose(self, inner)

    __call__ = compose


def compose(outer: Series, inner: Series) -> Series:
    """``outer(inner(z))`` truncated to the common order; ``inner(0)`` must be 0."""
    if inner.coeffs[0]:
        raise SeriesError("inner series must have zero constant term")
    n = min(outer.order, inner.order)
    inner = inner.truncate(n)
    acc = Series([outer.coeffs[n]], n)
    for k in range(n - 1, -1, -1):
        acc = acc * inner + outer.coeffs[k]
    return acc


def revert(f: Series) -> Series:
    """Compositional inverse of ``f`` with ``f(0) = 0``, ``f'(0) != 0``.

    Newton iteration ``g <- g - (f(g) - z) / f'(g)`` with precision doubling,
    followed by an exact check ``f(g(z)) = z``.
    """
    N = f.order
    if f.coeffs[0]:
        raise SeriesError("revert needs f(0) = 0")
    if N < 1 or not f.coeffs[1]:
        raise SeriesError("revert needs a nonzero linear coefficient")
    g = Series([0, 1 / f.coeffs[1]], 1)
    df = f.derivative()
    prec = 1
    while prec < N:
        prec = min(2 * prec, N)
        g = Series(g.coeffs, prec)
        err = compose(f.truncate(prec), g) - Series.z(prec)
        slope = compose(df.truncate(prec - 1), g.truncate(prec - 1))
        g = g - (err.shift_down() / slope).shift_up()
    if compose(f, g) != Series.z(N):
        raise AssertionError("series reversion failed its exact check")
    return g


def binomial_series(a, order: int) -> Series:
    """``(1 - z)^a = sum ((-a)_m / m!) z^m`` for rational ``a``."""
    a = Fraction(a)
    return Series([pochhammer(-a, m) / factorial(m) for m in range(order + 1)], order)


def exp_series(inner: Series) -> Series:
    """``exp(inner)`` for ``inner(0) = 0``."""
    n = inner.order
    return compose(Series([Fraction(1, factorial(m)) for m in range(n + 1)], n), inner)


def alpha_series(order: int) -> Series:
    """Taylor expansion of ``(1 - sqrt(1-w)) / (1 + sqrt(1-w))`` at 0."""
    if order < 1:
        raise SeriesError("alpha_series needs order >= 1")
    root = binomial_series(Fraction(1, 2), order)
    return (1 - root) / (1 + root)


def alpha_inverse_series(order: int) -> Series:
    """``4z / (1+z)^2`` expanded."""
    return Series([0] + [4 * (-1) ** (k - 1) * k for k in range(1, order + 1)], order)


def brown_transform(r: Series) -> Series:
    """``p_n = sum_{k=0}^{n} C(2n, n-k) r_k``.

    The summand index is ``k``; with it
    ``sum p_n (w/4)^n = (1-w)^(-1/2) sum r_n alpha(w)^n``.
    """
    N = r.order
    return Series(
        [sum((comb(2 * n, n - k) * r.coeffs[k] for k in range(n + 1)), ZERO) for n in range(N + 1)],
        N,
    )
