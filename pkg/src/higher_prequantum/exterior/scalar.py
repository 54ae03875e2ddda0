"""Exact scalars in the Laurent ring Q(i)[tau, 1/tau], with tau standing for 2*pi."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

import mpmath

_F0 = Fraction(0)
_F1 = Fraction(1)


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


class Scalar:
    """Finite sum of (re + im*i) * tau**e with rational re, im.

    Terms are kept as a tuple of ``(e, re, im)`` sorted by ``e`` with no zero
    coefficients, so structural equality is mathematical equality.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, value=0):
        if isinstance(value, Scalar):
            self._terms = value._terms
        elif isinstance(value, complex):
            raise TypeError("floating complex values are not exact; use Scalar.gaussian")
        else:
            f = _frac(value)
            self._terms = ((0, f, _F0),) if f else ()
        self._hash = None

    @classmethod
    def _raw(cls, terms: tuple) -> "Scalar":
        s = object.__new__(cls)
        s._terms = terms
        s._hash = None
        return s

    @classmethod
    def from_terms(cls, terms) -> "Scalar":
        """Build from an iterable of ``(tau_exponent, re, im)``; repeats are summed."""
        acc: dict[int, list] = {}
        for e, re, im in terms:
            slot = acc.setdefault(int(e), [_F0, _F0])
            slot[0] += _frac(re)
            slot[1] += _frac(im)
        return cls._raw(tuple((e, r, i) for e, (r, i) in sorted(acc.items()) if r or i))

    @classmethod
    def gaussian(cls, re=0, im=0, tau: int = 0) -> "Scalar":
        return cls.from_terms([(tau, re, im)])

    @classmethod
    def tau_power(cls, k: int) -> "Scalar":
        return cls._raw(((int(k), _F1, _F0),))

    # -- inspection -------------------------------------------------------
    @property
    def terms(self) -> tuple:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_rational(self) -> bool:
        t = self._terms
        return not t or (len(t) == 1 and t[0][0] == 0 and not t[0][2])

    def is_gaussian(self) -> bool:
        """True when no power of tau other than tau**0 occurs."""
        t = self._terms
        return not t or (len(t) == 1 and t[0][0] == 0)

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self.render()} is not rational")
        return self._terms[0][1] if self._terms else _F0

    def is_integer(self) -> bool:
        return self.is_rational() and self.as_fraction().denominator == 1

    def is_unit(self) -> bool:
        return len(self._terms) == 1

    # -- arithmetic -------------------------------------------------------
    @staticmethod
    def _coerce(other):
        if isinstance(other, Scalar):
            return other
        if isinstance(other, (int, Rational)):
            return Scalar(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if not o._terms:
            return self
        if not self._terms:
            return o
        acc = {e: (r, i) for e, r, i in self._terms}
        for e, r, i in o._terms:
            if e in acc:
                r0, i0 = acc[e]
                acc[e] = (r0 + r, i0 + i)
            else:
                acc[e] = (r, i)
        return Scalar._raw(tuple((e, r, i) for e, (r, i) in sorted(acc.items()) if r or i))

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw(tuple((e, -r, -i) for e, r, i in self._terms))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        a, b = self._terms, o._terms
        if not a or not b:
            return ZERO
        if len(a) == 1 and len(b) == 1:
            (e1, r1, i1), (e2, r2, i2) = a[0], b[0]
            if not i1 and not i2:
                return Scalar._raw(((e1 + e2, r1 * r2, _F0),))
            r, i = r1 * r2 - i1 * i2, r1 * i2 + i1 * r2
            return Scalar._raw(((e1 + e2, r, i),)) if (r or i) else ZERO
        acc: dict[int, tuple] = {}
        for e1, r1, i1 in a:
            for e2, r2, i2 in b:
                e = e1 + e2
                r, i = r1 * r2 - i1 * i2, r1 * i2 + i1 * r2
                if e in acc:
                    r0, i0 = acc[e]
                    acc[e] = (r0 + r, i0 + i)
                else:
                    acc[e] = (r, i)
        return Scalar._raw(tuple((e, r, i) for e, (r, i) in sorted(acc.items()) if r or i))

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        """Inverse of a unit c*tau**e; anything else is not invertible in the ring."""
        if len(self._terms) != 1:
            raise ZeroDivisionError(f"{self.render()} is not a unit of Q(i)[tau, 1/tau]")
        e, r, i = self._terms[0]
        n = r * r + i * i
        return Scalar._raw(((-e, r / n, -i / n),))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self) -> "Scalar":
        return Scalar._raw(tuple((e, r, -i) for e, r, i in self._terms))

    # -- comparison -------------------------------------------------------
    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self.as_fraction())
            else:
                self._hash = hash(self._terms)
        return self._hash

    # -- numerics (test oracles only) -------------------------------------
    def numeric(self, dps: int = 50) -> mpmath.mpc:
        with mpmath.workdps(dps):
            tau = 2 * mpmath.pi
            total = mpmath.mpc(0)
            for e, r, i in self._terms:
                c = mpmath.mpc(mpmath.mpf(r.numerator) / r.denominator,
                               mpmath.mpf(i.numerator) / i.denominator)
                total += c * tau ** e
            return total

    def __complex__(self):
        return complex(self.numeric())

    # -- rendering --------------------------------------------------------
    def render(self, expr: bool = False) -> str:
        """Canonical text: ``"1/2*tau^1"``, ``"(1+2*i)"``, ``"0"``.

        ``expr=True`` writes powers as ``tau**k`` so the text parses back.
        """
        if not self._terms:
            return "0"
        parts = []
        for e, r, i in self._terms:
            if not i:
                c = str(r)
            elif not r:
                c = f"{i}*i"
            else:
                sign = "+" if i > 0 else "-"
                c = f"({r}{sign}{abs(i)}*i)"
            if e == 0:
                parts.append(c)
            else:
                parts.append(f"{c}*tau**{e}" if expr else f"{c}*tau^{e}")
        return " + ".join(parts)

    def __repr__(self):
        return f"Scalar({self.render()!r})"

    __str__ = render


ZERO = Scalar._raw(())
ONE = Scalar._raw(((0, _F1, _F0),))
I = Scalar._raw(((0, _F0, _F1),))
TAU = Scalar._raw(((1, _F1, _F0),))


def as_scalar(x) -> Scalar:
    if isinstance(x, Scalar):
        return x
    return Scalar(x)


def root_of_unity_quarter(turns: Fraction) -> Scalar:
    """exp(2*pi*i*turns) when ``4*turns`` is an integer, exactly."""
    turns = _frac(turns)
    q = turns * 4
    if q.denominator != 1:
        raise ValueError(f"exp(2 pi i * {turns}) is not a Gaussian rational")
    return (ONE, I, -ONE, -I)[q.numerator % 4]
