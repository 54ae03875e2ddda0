"""Cochains of the truncated Cech-de Rham and Cech-Deligne total complexes.

A cochain of total degree ``m`` holds a form of degree ``p = m - q`` on every
q-simplex, with ``0 <= p <= level``.  Deligne cochains also carry an integer
on every (m+1)-simplex: the lift of U(1)-valued bottom data to real
functions leaves an integral Cech discrepancy, placed in vertical degree -1.

    D = delta + (-1)^q d_v,   d_v = inclusion Z -> R at the bottom, d above,

with forms of degree above ``level`` dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import DegreeMismatch, GluingFailure, NotACocycle
from ..exterior import CoefFn, Form, d, pullback
from ..exterior.scalar import as_scalar
from .nerve import CoverNerve


@dataclass
class Cochain:
    nerve: CoverNerve
    level: int
    degree: int
    forms: dict = field(default_factory=dict)
    # simplex -> int on (degree+1)-simplices; None for the real complex
    integral: dict | None = None

    def __post_init__(self):
        clean = {}
        for sigma, a in self.forms.items():
            sigma = tuple(sigma)
            q = len(sigma) - 1
            p = self.degree - q
            if not 0 <= p <= self.level:
                raise DegreeMismatch(f"component on {sigma} would have form degree {p}")
            if not isinstance(a, Form):
                raise TypeError("components are Forms")
            if a.degree != p:
                raise DegreeMismatch(f"component on {sigma} has degree {a.degree}, expected {p}")
            if a.chart != self.nerve.chart(sigma):
                raise DegreeMismatch(f"component on {sigma} lives on the wrong chart")
            if not a.is_zero():
                clean[sigma] = a
        self.forms = clean
        if self.integral is not None:
            ints = {}
            for sigma, z in self.integral.items():
                sigma = tuple(sigma)
                if len(sigma) - 1 != self.degree + 1:
                    raise DegreeMismatch(f"integers live on {self.degree + 1}-simplices")
                if Fraction(z).denominator != 1:
                    raise ValueError(f"discrepancy on {sigma} is not an integer")
                if z:
                    ints[sigma] = int(z)
            self.integral = ints

    # -- access -----------------------------------------------------------
    @property
    def is_deligne(self) -> bool:
        return self.integral is not None

    def component(self, sigma) -> Form | None:
        sigma = tuple(sigma)
        p = self.degree - (len(sigma) - 1)
        if not 0 <= p <= self.level:
            return None
        a = self.forms.get(sigma)
        return a if a is not None else Form.zero(self.nerve.chart(sigma), p)

    def integer(self, sigma) -> int:
        return (self.integral or {}).get(tuple(sigma), 0)

    def is_zero(self) -> bool:
        return not self.forms and not self.integral

    def _same(self, other: "Cochain"):
        self.nerve.check_same(other.nerve)
        if (self.level, self.degree) != (other.level, other.degree):
            raise DegreeMismatch("cochains of different level or degree")
        if self.is_deligne != other.is_deligne:
            raise DegreeMismatch("cannot mix Deligne and real cochains")

    def __add__(self, other: "Cochain") -> "Cochain":
        self._same(other)
        forms = dict(self.forms)
        for s, a in other.forms.items():
            forms[s] = forms[s] + a if s in forms else a
        ints = None
        if self.is_deligne:
            ints = dict(self.integral)
            for s, z in other.integral.items():
                ints[s] = ints.get(s, 0) + z
        return Cochain(self.nerve, self.level, self.degree, forms, ints)

    def __neg__(self):
        ints = None if self.integral is None else {s: -z for s, z in self.integral.items()}
        return Cochain(self.nerve, self.level, self.degree,
                       {s: -a for s, a in self.forms.items()}, ints)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "Cochain":
        """Multiply by an integer (integers scale too) or, for real cochains, a scalar."""
        ints = None
        if self.is_deligne:
            c = as_scalar(c)
            if not c.is_integer():
                raise ValueError("Deligne cochains scale only by integers")
            k = int(c.as_fraction())
            ints = {s: z * k for s, z in self.integral.items()}
        return Cochain(self.nerve, self.level, self.degree,
                       {s: a * c for s, a in self.forms.items()}, ints)

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        return (self.nerve == other.nerve and self.level == other.level
                and self.degree == other.degree and self.forms == other.forms
                and (self.integral or {}) == (other.integral or {}))

    def real_part(self) -> "Cochain":
        """Forget the integer data."""
        return Cochain(self.nerve, self.level, self.degree, dict(self.forms), None)

    def with_integral(self, ints=None) -> "Cochain":
        return Cochain(self.nerve, self.level, self.degree, dict(self.forms), dict(ints or {}))

    def render(self) -> dict:
        out = {"degree": self.degree, "level": self.level, "forms": {}}
        for s in sorted(self.forms):
            out["forms"][",".join(map(str, s))] = self.forms[s].render()
        if self.integral is not None:
            out["integral"] = {",".join(map(str, s)): z for s, z in sorted(self.integral.items())}
        return out

    def to_json(self) -> dict:
        from ..exterior.serialize import graded_to_json
        return {
            "nerve": self.nerve.to_json(),
            "level": self.level,
            "degree": self.degree,
            "components": [{"simplex": list(s), "form": graded_to_json(a, chart=False)}
                           for s, a in sorted(self.forms.items())],
            "integral": None if self.integral is None else
            [{"simplex": list(s), "value": z} for s, z in sorted(self.integral.items())],
        }

    @classmethod
    def from_json(cls, data) -> "Cochain":
        from ..exterior.serialize import graded_from_json
        nerve = CoverNerve.from_json(data["nerve"])
        forms = {tuple(c["simplex"]): graded_from_json(c["form"], nerve.chart(tuple(c["simplex"])))
                 for c in data.get("components", [])}
        ints = data.get("integral")
        if ints is not None:
            ints = {tuple(e["simplex"]): int(e["value"]) for e in ints}
        return cls(nerve, int(data["level"]), int(data["degree"]), forms, ints)


def zero_cochain(nerve: CoverNerve, level: int, degree: int, deligne: bool = True) -> Cochain:
    return Cochain(nerve, level, degree, {}, {} if deligne else None)


def restrict(nerve: CoverNerve, a: Form, sigma, tau) -> Form:
    """Pull a form on sigma's chart back to the chart of the coface tau."""
    return pullback(nerve.face_map(tuple(tau), tuple(sigma)), a)


def from_global(nerve: CoverNerve, a: Form, sigma) -> Form:
    """Restrict a global form on the manifold chart to the chart of sigma."""
    return pullback(nerve.global_map(tuple(sigma)), a)


def _accumulate(out: dict, sigma, a: Form):
    if a.is_zero():
        return
    out[sigma] = out[sigma] + a if sigma in out else a


def total_differential(c: Cochain) -> Cochain:
    """D c, of total degree ``c.degree + 1``."""
    nerve, m, n = c.nerve, c.degree, c.level
    out: dict = {}
    for sigma, a in c.forms.items():
        q = len(sigma) - 1
        p = a.degree
        if p + 1 <= min(n, nerve.dim):
            da = d(a)
            _accumulate(out, sigma, da if q % 2 == 0 else -da)
        for tau, i in nerve.cofaces(sigma):
            r = restrict(nerve, a, sigma, tau)
            _accumulate(out, tau, r if i % 2 == 0 else -r)
    ints = None
    if c.is_deligne:
        ints = {}
        for sigma, z in c.integral.items():
            q = len(sigma) - 1
            f = Form.function(CoefFn.constant(nerve.chart(sigma), z if q % 2 == 0 else -z))
            _accumulate(out, sigma, f)
            for tau, i in nerve.cofaces(sigma):
                ints[tau] = ints.get(tau, 0) + (z if i % 2 == 0 else -z)
    return Cochain(nerve, n, m + 1, out, ints)


@dataclass
class CocycleCheck:
    ok: bool
    residual: Cochain
    # integers absorbing a locally constant integral bottom residual
    correction: dict

    def as_dict(self) -> dict:
        return {"is_cocycle": self.ok, "residual": self.residual.render(),
                "integral_correction": {",".join(map(str, s)): z
                                        for s, z in sorted(self.correction.items())}}


def _integer_constant(f: Form):
    if f.degree != 0:
        return None
    g = f.as_function()
    if not g.is_constant():
        return None
    v = g.constant_value()
    if not v.is_rational() or v.as_fraction().denominator != 1:
        return None
    return int(v.as_fraction())


def is_cocycle(c: Cochain) -> CocycleCheck:
    """D c == 0, with the bottom residual allowed to be a locally constant integer.

    Such a residual is absorbed by correcting the stored discrepancy; the
    correction is reported.
    """
    res = total_differential(c)
    if not c.is_deligne or res.is_zero():
        return CocycleCheck(res.is_zero(), res, {})
    correction: dict = {}
    for sigma, a in res.forms.items():
        z = _integer_constant(a)
        if z is not None:
            # D puts (-1)^q z on sigma; shift the stored integer to cancel it
            correction[sigma] = -z if (len(sigma) - 1) % 2 == 0 else z
    if not correction:
        return CocycleCheck(False, res, {})
    fixed = c.with_integral({s: c.integer(s) + correction.get(s, 0)
                             for s in set(c.integral) | set(correction)})
    res = total_differential(fixed)
    ok = res.is_zero()
    return CocycleCheck(ok, res, correction if ok else {})


def glue_global(nerve: CoverNerve, local: dict, degree: int) -> Form:
    """One global form whose restriction to every vertex chart is ``local[v]``."""
    chart = nerve.manifold
    vertices = nerve.simplices(0)
    first = local.get(vertices[0], Form.zero(nerve.chart(vertices[0]), degree))
    if nerve.kind == "trivial":
        return first
    terms = {}
    for idx, f in first:
        if any(sum(a) for (a, _k), _c in f):
            raise GluingFailure("local form has polynomial dependence; it does not glue on the torus")
        terms[idx] = f.on_chart(chart)
    glob = Form(chart, degree, terms)
    for v in vertices:
        want = local.get(v, Form.zero(nerve.chart(v), degree))
        if from_global(nerve, glob, v) != want:
            raise GluingFailure(f"local forms disagree on patch {v}")
    return glob


def curvature(c: Cochain) -> Form:
    """The global (level+1)-form d A on patches of a cocycle of degree ``level``."""
    if c.degree != c.level:
        raise DegreeMismatch("curvature is defined for cocycles of total degree equal to the level")
    check = is_cocycle(c)
    if not check.ok:
        raise NotACocycle("curvature needs a cocycle")
    nerve = c.nerve
    local = {}
    for sigma in nerve.simplices(0):
        a = c.component(sigma)
        local[sigma] = d(a) if a.degree < nerve.dim else Form.zero(nerve.chart(sigma), a.degree + 1)
    if c.level + 1 > nerve.dim:
        return Form.zero(nerve.manifold, c.level + 1)
    # patchwise curvatures must agree on overlaps
    for sigma in nerve.simplices(1):
        a, b = sigma
        if restrict(nerve, local[(a,)], (a,), sigma) != restrict(nerve, local[(b,)], (b,), sigma):
            raise GluingFailure(f"curvatures disagree on {sigma}")
    return glue_global(nerve, local, c.level + 1)


def lift_global(nerve: CoverNerve, a: Form, level: int, deligne: bool = True) -> Cochain:
    """A global form placed on every patch (degree = its form degree)."""
    forms = {s: from_global(nerve, a, s) for s in nerve.simplices(0)}
    return Cochain(nerve, level, a.degree, forms, {} if deligne else None)
