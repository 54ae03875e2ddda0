"""Polynomial-Fourier coefficient functions  sum c[a,k] x^a E_k,  E_k(x) = exp(i tau k.x)."""

from __future__ import annotations

from fractions import Fraction

import mpmath

from ..errors import BranchError, ChartMismatch
from .chart import Chart
from .scalar import I, ONE, TAU, ZERO, Scalar, as_scalar, root_of_unity_quarter

_ITAU = I * TAU


class CoefFn:
    """Immutable sparse map (alpha, k) -> Scalar on a chart."""

    __slots__ = ("chart", "_terms", "_hash")

    def __init__(self, chart: Chart, terms=None):
        self.chart = chart
        clean: dict = {}
        for (alpha, k), c in (terms or {}).items():
            alpha, k = tuple(int(a) for a in alpha), tuple(int(x) for x in k)
            if len(alpha) != chart.dim or len(k) != chart.dim:
                raise ValueError("multi-index length must equal the chart dimension")
            if any(a < 0 for a in alpha):
                raise ValueError("negative exponent")
            c = as_scalar(c)
            if c:
                key = (alpha, k)
                clean[key] = clean[key] + c if key in clean else c
                if not clean[key]:
                    del clean[key]
        if not chart.is_patch:
            for alpha, k in clean:
                for j, per in enumerate(chart.periodic):
                    if per and alpha[j]:
                        raise BranchError(f"polynomial dependence on periodic axis {j}")
                    if not per and k[j]:
                        raise BranchError(f"Fourier mode on non-periodic axis {j}")
        self._terms = clean
        self._hash = None

    @classmethod
    def _make(cls, chart: Chart, terms: dict) -> "CoefFn":
        f = object.__new__(cls)
        f.chart = chart
        f._terms = terms
        f._hash = None
        return f

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, chart: Chart) -> "CoefFn":
        return cls._make(chart, {})

    @classmethod
    def constant(cls, chart: Chart, c=1) -> "CoefFn":
        z = (0,) * chart.dim
        c = as_scalar(c)
        return cls._make(chart, {(z, z): c} if c else {})

    @classmethod
    def monomial(cls, chart: Chart, alpha, k=None, c=1) -> "CoefFn":
        k = (0,) * chart.dim if k is None else k
        return cls(chart, {(tuple(alpha), tuple(k)): c})

    @classmethod
    def coordinate(cls, chart: Chart, j: int) -> "CoefFn":
        alpha = [0] * chart.dim
        alpha[j] = 1
        return cls.monomial(chart, alpha)

    @classmethod
    def fourier(cls, chart: Chart, k, c=1) -> "CoefFn":
        return cls.monomial(chart, (0,) * chart.dim, k, c)

    # -- inspection -------------------------------------------------------
    def items(self):
        """Terms in canonical (sorted) order."""
        return sorted(self._terms.items(), key=lambda kv: kv[0])

    def __iter__(self):
        return iter(self._terms.items())

    def __len__(self):
        return len(self._terms)

    def coefficient(self, alpha, k=None) -> Scalar:
        k = (0,) * self.chart.dim if k is None else tuple(k)
        return self._terms.get((tuple(alpha), k), ZERO)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def is_constant(self) -> bool:
        z = (0,) * self.chart.dim
        return all(key == (z, z) for key in self._terms)

    def constant_value(self) -> Scalar:
        if not self.is_constant():
            raise ValueError("not a constant function")
        z = (0,) * self.chart.dim
        return self._terms.get((z, z), ZERO)

    def poly_degree(self) -> int:
        return max((sum(a) for a, _ in self._terms), default=0)

    def modes(self) -> set:
        return {k for _, k in self._terms}

    def split_modes(self) -> dict:
        out: dict = {}
        for (a, k), c in self._terms.items():
            out.setdefault(k, {})[(a, k)] = c
        return {k: CoefFn._make(self.chart, t) for k, t in out.items()}

    def on_chart(self, chart: Chart) -> "CoefFn":
        """The same expression read on another chart of equal dimension."""
        if chart.dim != self.chart.dim:
            raise ChartMismatch("dimension differs")
        return CoefFn(chart, dict(self._terms))

    # -- arithmetic -------------------------------------------------------
    def _check(self, other: "CoefFn"):
        if other.chart != self.chart:
            raise ChartMismatch(f"{self.chart.describe()} vs {other.chart.describe()}")

    def __add__(self, other):
        if not isinstance(other, CoefFn):
            if isinstance(other, (int, Fraction, Scalar)):
                other = CoefFn.constant(self.chart, other)
            else:
                return NotImplemented
        self._check(other)
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for key, c in other._terms.items():
            if key in out:
                s = out[key] + c
                if s:
                    out[key] = s
                else:
                    del out[key]
            else:
                out[key] = c
        return CoefFn._make(self.chart, out)

    __radd__ = __add__

    def __neg__(self):
        return CoefFn._make(self.chart, {key: -c for key, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            other = CoefFn.constant(self.chart, other)
        if not isinstance(other, CoefFn):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "CoefFn":
        c = as_scalar(c)
        if not c:
            return CoefFn.zero(self.chart)
        if c == ONE:
            return self
        out = {}
        for key, v in self._terms.items():
            p = v * c
            if p:
                out[key] = p
        return CoefFn._make(self.chart, out)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        if not isinstance(other, CoefFn):
            return NotImplemented
        self._check(other)
        if not self._terms or not other._terms:
            return CoefFn.zero(self.chart)
        out: dict = {}
        for (a1, k1), c1 in self._terms.items():
            for (a2, k2), c2 in other._terms.items():
                key = (tuple(x + y for x, y in zip(a1, a2)), tuple(x + y for x, y in zip(k1, k2)))
                p = c1 * c2
                if key in out:
                    p = out[key] + p
                out[key] = p
        return CoefFn._make(self.chart, {key: c for key, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = CoefFn.constant(self.chart, 1)
        for _ in range(n):
            out = out * self
        return out

    def partial(self, j: int) -> "CoefFn":
        """d/dx_j:  x^a E_k  ->  a_j x^(a-e_j) E_k + i tau k_j x^a E_k."""
        out: dict = {}
        for (a, k), c in self._terms.items():
            if a[j]:
                na = a[:j] + (a[j] - 1,) + a[j + 1:]
                key = (na, k)
                v = c * a[j]
                out[key] = out[key] + v if key in out else v
            if k[j]:
                key = (a, k)
                v = c * _ITAU * k[j]
                out[key] = out[key] + v if key in out else v
        return CoefFn._make(self.chart, {key: c for key, c in out.items() if c})

    # -- comparison -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.is_constant() and self.constant_value() == other
        if not isinstance(other, CoefFn):
            return NotImplemented
        return self.chart == other.chart and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.chart, frozenset(self._terms.items())))
        return self._hash

    # -- evaluation -------------------------------------------------------
    def value_at(self, point) -> Scalar:
        """Exact value; requires every phase k.x to be a multiple of 1/4."""
        point = tuple(Fraction(x) for x in point)
        total = ZERO
        for (a, k), c in self._terms.items():
            mono = Fraction(1)
            for x, e in zip(point, a):
                mono *= x ** e
            phase = sum((kk * x for kk, x in zip(k, point)), Fraction(0))
            try:
                factor = root_of_unity_quarter(phase)
            except ValueError as exc:
                raise BranchError(str(exc)) from None
            total = total + c * factor * mono
        return total

    def evaluate(self, point, dps: int = 50) -> complex:
        """Numeric value with tau = 2*pi at high precision."""
        with mpmath.workdps(dps):
            pt = [mpmath.mpf(Fraction(x).numerator) / Fraction(x).denominator for x in point]
            tau = 2 * mpmath.pi
            total = mpmath.mpc(0)
            for (a, k), c in self._terms.items():
                mono = mpmath.mpf(1)
                for x, e in zip(pt, a):
                    mono *= x ** e
                phase = mpmath.expj(tau * sum(kk * x for kk, x in zip(k, pt)))
                total += c.numeric(dps) * mono * phase
            return complex(total)

    # -- rendering --------------------------------------------------------
    def render(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (a, k), c in self.items():
            factors = []
            for j, e in enumerate(a):
                if e:
                    factors.append(f"x{j}" if e == 1 else f"x{j}**{e}")
            if any(k):
                factors.append("E[" + ",".join(str(x) for x in k) + "]")
            cs = c.render(expr=True)
            if " + " in cs:
                cs = f"({cs})"
            if not factors:
                parts.append(cs)
            elif cs == "1":
                parts.append("*".join(factors))
            else:
                parts.append(cs + "*" + "*".join(factors))
        return " + ".join(parts)

    def __repr__(self):
        return f"CoefFn({self.render()})"
