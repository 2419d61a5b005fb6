"""Exact arithmetic in the rational function field Q(t, Q).

``Q`` is a formal stand-in for ``exp(-t/2)``.  Arithmetic never substitutes
the exponential; the link between the two indeterminates lives only in the
derivation :meth:`Scalar.d_dt` (``dQ/dt = -Q/2``) and in numeric evaluation
(:meth:`Scalar.eval`).  So ``e^{-t} = Q^2``, ``e^{-kt} = Q^(2k)`` and
``e^{t} = Q^-2``.

Values are kept in canonical form: numerator and denominator coprime, and
the denominator's leading coefficient under graded-lex order (``t > Q``)
equal to one.  Equal values therefore compare structurally.
"""

from __future__ import annotations

import ast
from fractions import Fraction
from numbers import Rational

import mpmath
from sympy import QQ
from sympy.polys.fields import field
from sympy.polys.orderings import grlex

__all__ = [
    "Scalar",
    "ScalarZeroDivisionError",
    "PoleError",
    "T",
    "Q",
    "ONE",
    "ZERO",
    "GUARD_BITS",
]

_FIELD, _T, _Q = field("t,Q", QQ, order=grlex)
_RING = _FIELD.ring

#: extra bits carried internally by :meth:`Scalar.eval`
GUARD_BITS = 24


class ScalarZeroDivisionError(ZeroDivisionError):
    """Division by the zero Scalar."""

    def __init__(self, numerator, denominator):
        self.numerator = str(numerator)
        self.denominator = str(denominator)
        super().__init__(f"division by zero: ({self.numerator}) / ({self.denominator})")


class PoleError(ArithmeticError):
    """The denominator vanishes at the requested substitution point."""


def _qq(x):
    if isinstance(x, Fraction):
        return QQ(x.numerator, x.denominator)
    if isinstance(x, int):
        return QQ(x)
    if isinstance(x, Rational):
        return QQ(int(x.numerator), int(x.denominator))
    raise TypeError(f"not an exact rational: {x!r}")


def _frac(c):
    return Fraction(int(c.numerator), int(c.denominator))


def _normalize(f):
    lc = f.denom.LC
    if lc == 1:
        return f
    return _FIELD.raw_new(f.numer.quo_ground(lc), f.denom.quo_ground(lc))


class Scalar:
    """An immutable element of Q(t, Q)."""

    __slots__ = ("_f", "_hash")

    def __init__(self, value=0):
        if isinstance(value, Scalar):
            f = value._f
        elif isinstance(value, str):
            f = Scalar.parse(value)._f
        elif isinstance(value, (int, Fraction)) or isinstance(value, Rational):
            f = _normalize(_FIELD(_qq(value)))
        elif getattr(value, "field", None) is _FIELD:
            f = _normalize(value)
        else:
            raise TypeError(f"cannot build a Scalar from {type(value).__name__}")
        object.__setattr__(self, "_f", f)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    @classmethod
    def _wrap(cls, f):
        s = object.__new__(cls)
        object.__setattr__(s, "_f", _normalize(f))
        object.__setattr__(s, "_hash", None)
        return s

    # -- coercion -----------------------------------------------------
    @staticmethod
    def _coerce(other):
        if isinstance(other, Scalar):
            return other._f
        if isinstance(other, (int, Fraction)) or isinstance(other, Rational):
            return _FIELD(_qq(other))
        return None

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Scalar._wrap(self._f + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Scalar._wrap(self._f - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Scalar._wrap(o - self._f)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Scalar._wrap(self._f * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o:
            raise ScalarZeroDivisionError(self, Scalar._wrap(o))
        return Scalar._wrap(self._f / o)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self._f:
            raise ScalarZeroDivisionError(Scalar._wrap(o), self)
        return Scalar._wrap(o / self._f)

    def __neg__(self):
        return Scalar._wrap(-self._f)

    def __pos__(self):
        return self

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            if not self._f:
                raise ScalarZeroDivisionError(1, self)
            return Scalar._wrap((1 / self._f) ** (-k))
        return Scalar._wrap(self._f**k)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._f == _normalize(o)

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self._f.numer, self._f.denom)))
        return self._hash

    def __bool__(self):
        return bool(self._f)

    # -- structure ----------------------------------------------------
    @property
    def numerator(self) -> dict[tuple[int, int], Fraction]:
        """Numerator as ``{(deg_t, deg_Q): coefficient}``."""
        return {m: _frac(c) for m, c in self._f.numer.terms()}

    @property
    def denominator(self) -> dict[tuple[int, int], Fraction]:
        return {m: _frac(c) for m, c in self._f.denom.terms()}

    def is_polynomial(self) -> bool:
        return self._f.denom == 1

    def is_constant(self) -> bool:
        return self._f.denom == 1 and self._f.numer.is_ground

    def to_fraction(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a rational constant")
        return _frac(self._f.numer.LC) if self._f.numer else Fraction(0)

    # -- calculus -----------------------------------------------------
    def d_dt(self) -> Scalar:
        """Total t-derivative, with ``dQ/dt = -Q/2``."""
        num, den = self._f.numer, self._f.denom
        half = QQ(1, 2)

        def D(p):
            return p.diff(_RING.gens[0]) - _RING.gens[1].mul_ground(half) * p.diff(_RING.gens[1])

        if den == 1:
            return Scalar._wrap(_FIELD.new(D(num)))
        return Scalar._wrap(_FIELD.new(D(num) * den - num * D(den), den * den))

    def subs(self, t=None, Q=None) -> Scalar:
        """Exact substitution of rational values for ``t`` and/or ``Q``."""
        num, den = self._f.numer, self._f.denom
        for gen, val in ((0, t), (1, Q)):
            if val is None:
                continue
            x = _RING.gens[gen]
            v = _qq(Fraction(val))
            num = num.subs(x, v)
            den = den.subs(x, v)
        if not den:
            raise PoleError(f"denominator of {self} vanishes at t={t}, Q={Q}")
        return Scalar._wrap(_FIELD.new(num, den))

    def eval(self, t0, precision_bits: int = 53):
        """Evaluate at ``t = t0``, ``Q = exp(-t0/2)`` as an mpmath float.

        The computation runs with :data:`GUARD_BITS` extra bits and is rounded
        to ``precision_bits`` on return.
        """
        if precision_bits < 53:
            raise ValueError("precision_bits must be at least 53")
        exact = _exact_or_none(t0)
        if exact == 0:
            return _fraction_to_mpf(self.subs(t=0, Q=1).to_fraction(), precision_bits)
        if exact is not None and exact < 0:
            raise ValueError("t0 must be non-negative")
        with mpmath.workprec(precision_bits + GUARD_BITS):
            tv = _to_mpf(t0)
            qv = mpmath.exp(-tv / 2)
            num = _poly_eval(self._f.numer, tv, qv)
            den = _poly_eval(self._f.denom, tv, qv)
            if den == 0:
                raise PoleError(f"denominator of {self} vanishes at t={t0}")
            value = num / den
        with mpmath.workprec(precision_bits):
            return +value

    # -- text ---------------------------------------------------------
    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"Scalar('{render(self)}')"

    @staticmethod
    def parse(text: str) -> Scalar:
        """Parse the textual grammar produced by :func:`render`."""
        try:
            tree = ast.parse(text.replace("^", "**").replace("−", "-"), mode="eval")
        except SyntaxError as exc:
            raise ValueError(f"cannot parse Scalar from {text!r}") from exc
        return _eval_ast(tree.body, text)


def _exact_or_none(x):
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    return None


def _to_mpf(x):
    if isinstance(x, (int, Fraction, str)):
        f = Fraction(x)
        return mpmath.mpf(f.numerator) / f.denominator
    return mpmath.mpf(x)


def _fraction_to_mpf(f: Fraction, prec: int):
    with mpmath.workprec(prec):
        return mpmath.mpf(f.numerator) / f.denominator


def _poly_eval(p, tv, qv):
    total = mpmath.mpf(0)
    for (a, b), c in p.terms():
        total += (mpmath.mpf(int(c.numerator)) / int(c.denominator)) * tv**a * qv**b
    return total


def _eval_ast(node, text):
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return Scalar(node.value)
    if isinstance(node, ast.Name):
        if node.id == "t":
            return T
        if node.id == "Q":
            return Q
        raise ValueError(f"unknown variable {node.id!r} in {text!r}")
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_ast(node.operand, text)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        left = _eval_ast(node.left, text)
        if isinstance(node.op, ast.Pow):
            k = _eval_ast(node.right, text)
            if not k.is_constant() or k.to_fraction().denominator != 1:
                raise ValueError(f"non-integer exponent in {text!r}")
            return left ** int(k.to_fraction())
        right = _eval_ast(node.right, text)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            return left / right
    raise ValueError(f"unsupported syntax in {text!r}")


# -- rendering ---------------------------------------------------------------


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _fmt_power(var: str, k: int) -> str:
    return var if k == 1 else f"{var}^{k}"


def _monomial(c: Fraction, factors: list[str]) -> str:
    """Render ``c * factors`` for c > 0."""
    if not factors:
        return _fmt_coeff(c)
    if c == 1:
        return "*".join(factors)
    return "*".join([_fmt_coeff(c)] + factors)


def _join_signed(parts: list[tuple[int, str]]) -> str:
    out = []
    for i, (sign, body) in enumerate(parts):
        if i == 0:
            out.append(body if sign > 0 else "-" + body)
        else:
            out.append((" + " if sign > 0 else " - ") + body)
    return "".join(out)


def _render_poly(terms: dict[tuple[int, int], Fraction]) -> tuple[str, int]:
    """Render a polynomial grouped by ascending Q powers; returns (text, n_groups)."""
    if not terms:
        return "0", 1
    by_q: dict[int, dict[int, Fraction]] = {}
    for (a, b), c in terms.items():
        by_q.setdefault(b, {})[a] = c
    parts: list[tuple[int, str]] = []
    for b in sorted(by_q):
        tpoly = by_q[b]
        qf = [_fmt_power("Q", b)] if b else []
        if len(tpoly) == 1:
            ((a, c),) = tpoly.items()
            tf = [_fmt_power("t", a)] if a else []
            parts.append((1 if c > 0 else -1, _monomial(abs(c), tf + qf)))
            continue
        inner = sorted(tpoly.items())
        sign = 1 if inner[0][1] > 0 else -1
        inner_parts = []
        for a, c in inner:
            c = c * sign
            tf = [_fmt_power("t", a)] if a else []
            inner_parts.append((1 if c > 0 else -1, _monomial(abs(c), tf)))
        body = "(" + _join_signed(inner_parts) + ")"
        if qf:
            body += "*" + qf[0]
        parts.append((sign, body))
    return _join_signed(parts), len(parts)


def render(s: Scalar) -> str:
    """Canonical text of a Scalar: explicit ``*``, ``^`` powers, ``/`` quotients."""
    num_text, num_terms = _render_poly(s.numerator)
    if s.is_polynomial():
        return f"({num_text})" if num_terms > 1 else num_text
    den_text, den_terms = _render_poly(s.denominator)
    # a single Q-group needs no parentheses: * and / associate left
    num_part = num_text if num_terms == 1 else f"({num_text})"
    den_atomic = den_terms == 1 and "*" not in den_text and "/" not in den_text
    den_part = den_text if den_atomic else f"({den_text})"
    return f"{num_part}/{den_part}"


T = Scalar._wrap(_T)
Q = Scalar._wrap(_Q)
ONE = Scalar(1)
ZERO = Scalar(0)
