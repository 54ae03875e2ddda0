"""Text syntax for forms, multivector fields and coefficient functions.

Atoms
    ``x0 x1 ...``      coordinates
    ``dx0 dx1 ...``    coordinate 1-forms
    ``Dx0 Dx1 ...``    coordinate vector fields d/dx_j
    ``E[k0,k1,...]``   Fourier mode exp(i tau k.x)
    ``tau``, ``i``     the formal unit 2*pi and the imaginary unit
    integers

Operators, loosest first: ``+ -``, ``* /``, ``^`` (wedge), unary ``-``, ``**``.
``*`` requires a degree-0 factor; ``/`` divides by a unit scalar; ``**``
raises degree-0 expressions to integer powers.

>>> parse_form("x0*dx1 + dx0^dx1 - dx0^dx1 + x0*dx1", Chart.euclidean(2)).render()
'(2*x0)*dx1'
"""

from __future__ import annotations

import re

from ..errors import DegreeMismatch, ParseError
from .chart import Chart
from .coeffn import CoefFn
from .forms import Form, MultiVector, _Graded, wedge
from .scalar import I, TAU, Scalar

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<E>E\[\s*-?\d+(?:\s*,\s*-?\d+)*\s*\])|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>\*\*|[-+*/^()]))"
)


def _tokenize(text: str):
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        pos = m.end()
        for kind in ("num", "E", "name", "op"):
            if m.group(kind) is not None:
                out.append((kind, m.group(kind)))
                break
    return out


class _Val:
    """Inhomogeneous intermediate: degree -> homogeneous element."""

    def __init__(self, kind, parts):
        self.kind = kind  # None (functions only), Form or MultiVector
        self.parts = {k: v for k, v in parts.items()}

    @property
    def is_function(self):
        return all(k == 0 for k in self.parts)

    def function(self, chart) -> CoefFn:
        p = self.parts.get(0)
        return p.as_function() if p is not None else CoefFn.zero(chart)


def _retag(part: _Graded, kind):
    if kind is None or isinstance(part, kind):
        return part
    if part.degree != 0:
        raise ParseError("cannot mix forms and vector fields")
    return kind.function(part.as_function())


def _join_kind(a, b):
    if a is None:
        return b
    if b is None or a is b:
        return a
    raise ParseError("cannot mix dx (forms) and Dx (vector fields) in one expression")


class _Parser:
    def __init__(self, text: str, chart: Chart):
        self.toks = _tokenize(text)
        self.i = 0
        self.chart = chart

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, value=None):
        tok = self.peek()
        if tok[0] is None or (value is not None and tok[1] != value):
            raise ParseError(f"expected {value or 'token'} at token {self.i}")
        self.i += 1
        return tok

    def parse(self) -> _Val:
        v = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"trailing input at token {self.i}: {self.toks[self.i][1]!r}")
        return v

    # grammar -------------------------------------------------------------
    def expr(self):
        v = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            w = self.term()
            v = self._add(v, w if op == "+" else self._neg(w))
        return v

    def term(self):
        v = self.wedge()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            w = self.wedge()
            if op == "*":
                if not (v.is_function or w.is_function):
                    raise ParseError("'*' needs a degree-0 factor; use '^' for wedge products")
                v = self._wedge(v, w)
            else:
                v = self._div(v, w)
        return v

    def wedge(self):
        v = self.unary()
        while self.peek()[1] == "^":
            self.take()
            v = self._wedge(v, self.unary())
        return v

    def unary(self):
        if self.peek()[1] == "-":
            self.take()
            return self._neg(self.unary())
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] == "**":
            self.take()
            neg = False
            if self.peek()[1] == "-":
                self.take()
                neg = True
            kind, val = self.take()
            if kind != "num":
                raise ParseError("exponent must be an integer literal")
            n = -int(val) if neg else int(val)
            if not base.is_function:
                raise ParseError("only degree-0 expressions can be raised to powers")
            f = base.function(self.chart)
            if n < 0:
                if not f.is_constant() or not f.constant_value().is_unit():
                    raise ParseError("negative powers need a unit scalar base")
                f = CoefFn.constant(self.chart, f.constant_value() ** n)
            else:
                f = f ** n
            return _Val(None, {0: Form.function(f)})
        return base

    def atom(self):
        kind, val = self.take()
        c = self.chart
        if kind == "num":
            return _Val(None, {0: Form.function(CoefFn.constant(c, int(val)))})
        if kind == "E":
            ks = [int(x) for x in val[2:-1].split(",")]
            if len(ks) != c.dim:
                raise ParseError(f"E[...] needs {c.dim} entries")
            return _Val(None, {0: Form.function(CoefFn.fourier(c, ks))})
        if kind == "op" and val == "(":
            v = self.expr()
            self.take(")")
            return v
        if kind == "name":
            if val == "tau":
                return _Val(None, {0: Form.function(CoefFn.constant(c, TAU))})
            if val == "i":
                return _Val(None, {0: Form.function(CoefFn.constant(c, I))})
            m = re.fullmatch(r"(dx|Dx|x)(\d+)", val)
            if m:
                j = int(m.group(2))
                if j >= c.dim:
                    raise ParseError(f"{val}: chart has dimension {c.dim}")
                if m.group(1) == "x":
                    return _Val(None, {0: Form.function(CoefFn.coordinate(c, j))})
                if m.group(1) == "dx":
                    return _Val(Form, {1: Form.basis(c, (j,))})
                return _Val(MultiVector, {1: MultiVector.basis(c, (j,))})
        raise ParseError(f"unexpected token {val!r}")

    # algebra -------------------------------------------------------------
    def _add(self, a: _Val, b: _Val) -> _Val:
        kind = _join_kind(a.kind, b.kind)
        parts = {k: _retag(v, kind) for k, v in a.parts.items()}
        for k, v in b.parts.items():
            v = _retag(v, kind)
            parts[k] = parts[k] + v if k in parts else v
        return _Val(kind, parts)

    def _neg(self, a: _Val) -> _Val:
        return _Val(a.kind, {k: -v for k, v in a.parts.items()})

    def _wedge(self, a: _Val, b: _Val) -> _Val:
        kind = _join_kind(a.kind, b.kind)
        parts = {}
        for ka, va in a.parts.items():
            for kb, vb in b.parts.items():
                if ka + kb > self.chart.dim:
                    continue
                w = wedge(_retag(va, kind or Form), _retag(vb, kind or Form))
                k = ka + kb
                parts[k] = parts[k] + w if k in parts else w
        return _Val(kind, parts)

    def _div(self, a: _Val, b: _Val) -> _Val:
        if not b.is_function:
            raise ParseError("division by a non-scalar")
        f = b.function(self.chart)
        if not f.is_constant() or not f.constant_value().is_unit():
            raise ParseError("can only divide by a nonzero monomial scalar")
        inv = f.constant_value().inverse()
        return _Val(a.kind, {k: v * inv for k, v in a.parts.items()})


def _homogeneous(v: _Val, kind, degree):
    parts = {k: p for k, p in v.parts.items() if not p.is_zero()}
    if not parts:
        return kind.zero(v_chart(v), 0 if degree is None else degree)
    if len(parts) != 1:
        raise DegreeMismatch(f"inhomogeneous expression with degrees {sorted(parts)}")
    (k, p), = parts.items()
    if degree is not None and k != degree:
        raise DegreeMismatch(f"expected degree {degree}, got {k}")
    return _retag(p, kind)


def v_chart(v: _Val):
    return next(iter(v.parts.values())).chart


def parse_form(text: str, chart: Chart, degree: int | None = None) -> Form:
    v = _Parser(text, chart).parse()
    if v.kind is MultiVector:
        raise ParseError("expected a form, found vector-field atoms")
    if not any(not p.is_zero() for p in v.parts.values()):
        return Form.zero(chart, 0 if degree is None else degree)
    return _homogeneous(v, Form, degree)


def parse_multivector(text: str, chart: Chart, degree: int | None = None) -> MultiVector:
    v = _Parser(text, chart).parse()
    if v.kind is Form:
        raise ParseError("expected a vector field, found dx atoms")
    if not any(not p.is_zero() for p in v.parts.values()):
        return MultiVector.zero(chart, 1 if degree is None else degree)
    return _homogeneous(v, MultiVector, degree)


def parse_function(text: str, chart: Chart) -> CoefFn:
    return parse_form(text, chart, degree=0).as_function()


def parse_scalar(text: str) -> Scalar:
    f = parse_function(text, Chart.euclidean(1))
    if not f.is_constant():
        raise ParseError(f"{text!r} is not a constant")
    return f.constant_value()
