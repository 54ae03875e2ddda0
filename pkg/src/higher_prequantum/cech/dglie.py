"""The strict dg-Lie model: vector fields acting on the shifted total complex.

An element of degree ``g`` (0 <= g <= n-1) is a pair ``(v, b)``: ``v`` is a
global vector field (only in degree 0) and ``b`` a real cochain of total
degree ``n-1-g``.  The differential ``(0, D b)`` lowers ``g`` by one and
vanishes on degree 0, where it would leave the truncation.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import DegreeMismatch, NerveMismatch, NotAPrimitive, NotHamiltonian
from ..exterior import Form, MultiVector, contract, d, lie_bracket, lie_derivative, push_vector
from ..exterior.primitive import find_primitive
from ..nplectic import HamiltonianPair, Observable, PreNPlectic, l_infty_bracket
from .cochain import Cochain, total_differential
from .nerve import CoverNerve


class SemidirectElement:
    __slots__ = ("nerve", "n", "degree", "v", "b")

    def __init__(self, nerve: CoverNerve, n: int, degree: int, v: MultiVector | None = None,
                 b: Cochain | None = None):
        if not 0 <= degree <= n - 1:
            raise DegreeMismatch(f"degree {degree} outside 0..{n - 1}")
        chart = nerve.manifold
        if v is None:
            v = MultiVector.zero(chart, 1)
        if v.degree != 1 or v.chart != chart:
            raise DegreeMismatch("v must be a vector field on the manifold chart")
        if degree != 0 and not v.is_zero():
            raise DegreeMismatch("vector fields sit in degree 0 only")
        if b is None:
            b = Cochain(nerve, n, n - 1 - degree, {}, None)
        if b.is_deligne:
            raise DegreeMismatch("b is a real cochain")
        nerve.check_same(b.nerve)
        if b.degree != n - 1 - degree or b.level != n:
            raise DegreeMismatch(f"b must have total degree {n - 1 - degree} at level {n}")
        self.nerve, self.n, self.degree, self.v, self.b = nerve, n, degree, v, b

    @classmethod
    def zero(cls, nerve: CoverNerve, n: int, degree: int = 0) -> "SemidirectElement":
        return cls(nerve, n, degree)

    @classmethod
    def on_patch(cls, nerve: CoverNerve, n: int, v: MultiVector | None, b: Form) -> "SemidirectElement":
        """Degree-0 element whose cochain is the single form ``b`` on a one-patch cover."""
        if nerve.kind != "trivial":
            raise NerveMismatch("on_patch builds elements on the trivial cover")
        return cls(nerve, n, 0, v, Cochain(nerve, n, n - 1, {(0,): b}, None))

    def _same(self, other: "SemidirectElement"):
        self.nerve.check_same(other.nerve)
        if self.n != other.n:
            raise DegreeMismatch("elements of different n")

    def __add__(self, other: "SemidirectElement") -> "SemidirectElement":
        self._same(other)
        if self.degree != other.degree:
            raise DegreeMismatch("sum of different degrees")
        return SemidirectElement(self.nerve, self.n, self.degree, self.v + other.v, self.b + other.b)

    def __neg__(self):
        return SemidirectElement(self.nerve, self.n, self.degree, -self.v, -self.b)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "SemidirectElement":
        return SemidirectElement(self.nerve, self.n, self.degree, self.v * c, self.b.scale(c))

    def is_zero(self) -> bool:
        return self.v.is_zero() and self.b.is_zero()

    def __eq__(self, other):
        if not isinstance(other, SemidirectElement):
            return NotImplemented
        return (self.nerve == other.nerve and self.n == other.n and self.degree == other.degree
                and self.v == other.v and self.b == other.b)

    def render(self) -> dict:
        return {"degree": self.degree, "v": self.v.render(), "b": self.b.render()["forms"]}


def lie_derivative_cochain(v: MultiVector, c: Cochain) -> Cochain:
    """L_v simplex-wise after restricting v; integer data is killed."""
    forms = {}
    for sigma, a in c.forms.items():
        vs = push_vector(c.nerve.global_map(sigma), v)
        forms[sigma] = lie_derivative(vs, a)
    return Cochain(c.nerve, c.level, c.degree, forms, {} if c.is_deligne else None)


def dg_lie_bracket(x: SemidirectElement, y: SemidirectElement) -> SemidirectElement | None:
    """([v1, v2], L_v1 b2 - (-1)^{|b1||b2|} L_v2 b1).

    None when the degrees add past n-1: both sides then carry no field and
    the target space is zero.
    """
    x._same(y)
    g = x.degree + y.degree
    if g > x.n - 1:
        return None
    sign = -1 if (x.degree * y.degree) % 2 else 1
    # a field sits only in degree 0, so each term survives only when its field does
    b = Cochain(x.nerve, x.n, x.n - 1 - g, {}, None)
    if not x.v.is_zero():
        b = b + lie_derivative_cochain(x.v, y.b)
    if not y.v.is_zero():
        b = b - lie_derivative_cochain(y.v, x.b).scale(sign)
    return SemidirectElement(x.nerve, x.n, g, lie_bracket(x.v, y.v), b)


def dg_lie_differential(x: SemidirectElement) -> SemidirectElement | None:
    """(0, D b) in degree g-1; None from degree 0, where it is truncated away."""
    if x.degree == 0:
        return None
    return SemidirectElement(x.nerve, x.n, x.degree - 1, None, total_differential(x.b))


@dataclass
class Membership:
    member: bool
    residual: Cochain

    def as_dict(self) -> dict:
        return {"member": self.member, "residual": self.residual.render()["forms"]}


def _real(c: Cochain) -> Cochain:
    return c if not c.is_deligne else c.real_part()


def dglie_membership(A: Cochain, e: SemidirectElement) -> Membership:
    """L_v A - D b forms-wise; a member iff it vanishes."""
    if e.degree != 0:
        raise DegreeMismatch("membership is tested in degree 0")
    A.nerve.check_same(e.nerve)
    if A.degree != e.n or A.level != e.n:
        raise DegreeMismatch(f"A must be a cocycle of total degree and level {e.n}")
    res = lie_derivative_cochain(e.v, _real(A)) - total_differential(e.b)
    return Membership(res.is_zero(), res)


def solve_member(A: Cochain, v: MultiVector, extra: int = 1) -> SemidirectElement:
    """(v, b) with b a primitive of L_v A on the trivial cover."""
    nerve = A.nerve
    if nerve.kind != "trivial":
        raise NerveMismatch("solve_member works on the trivial cover")
    target = lie_derivative(v, A.component((0,)))
    b = find_primitive(target, extra) if A.level >= 1 else None
    if b is None:
        raise NotAPrimitive(f"L_v A = {target.render()} has no primitive in the ansatz")
    return SemidirectElement.on_patch(nerve, A.level, v, b)


def _global_form(A) -> tuple[CoverNerve, Form]:
    if isinstance(A, Form):
        return CoverNerve.trivial(A.chart), A
    if A.nerve.kind != "trivial":
        raise NerveMismatch("compare_models needs the trivial cover")
    return A.nerve, A.component((0,))


def compare_models(A, members, omega: Form | None = None, extra: int = 1) -> dict:
    """Degree-0 comparison with the L-infinity algebra of Hamiltonian pairs.

    Each member (v, b) goes to (v, i_v A - b).  For each pair of members the
    form part of  image(bracket) - l_2(images)  is checked to be exact.
    """
    nerve, a = _global_form(A)
    n = a.degree
    dA = d(a)
    if omega is not None and dA != omega:
        raise NotAPrimitive("dA differs from omega")
    P = PreNPlectic(dA, n)
    images = []
    rows = []
    for idx, e in enumerate(members):
        nerve.check_same(e.nerve)
        if e.degree != 0 or e.n != n:
            raise DegreeMismatch("members are degree-0 elements with the same n")
        b = e.b.component((0,))
        h = contract(e.v, a) - b
        try:
            pair = HamiltonianPair(P, e.v, h)
            ok = True
        except NotHamiltonian:
            pair, ok = None, False
        images.append(pair)
        rows.append({"index": idx, "v": e.v.render(), "b": b.render(), "h": h.render(),
                     "hamiltonian": ok})
    defects = []
    for i in range(len(members)):
        for j in range(i + 1, len(members)):
            x, y = members[i], members[j]
            br = dg_lie_bracket(x, y)
            image_h = contract(br.v, a) - br.b.component((0,))
            if images[i] is None or images[j] is None:
                defects.append({"i": i, "j": j, "exact": False, "defect": None, "primitive": None})
                continue
            l2 = l_infty_bracket(P, [Observable(P, 0, images[i]), Observable(P, 0, images[j])])
            defect = image_h - l2.payload.h
            if defect.degree == 0:
                prim = None
                exact = defect.is_zero()
            else:
                prim = find_primitive(defect, extra)
                exact = prim is not None and d(prim) == defect
            defects.append({"i": i, "j": j, "defect": defect.render(), "exact": exact,
                            "primitive": None if prim is None else prim.render()})
    return {
        "n": n,
        "A": a.render(),
        "omega": dA.render(),
        "images": rows,
        "defects": defects,
        "all_hamiltonian": all(r["hamiltonian"] for r in rows),
        "all_exact": all(dd["exact"] for dd in defects),
    }


def r3_corpus():
    """A = x dy^dz on R^3 and six divergence-free members (v, primitive of L_v A)."""
    from ..exterior import Chart
    from ..exterior.grammar import parse_form, parse_multivector
    chart = Chart.euclidean(3)
    nerve = CoverNerve.trivial(chart)
    a = parse_form("x0*dx1^dx2", chart)
    A = Cochain(nerve, 2, 2, {(0,): a}, {})
    fields = ["Dx0", "Dx1", "Dx2", "x1*Dx0", "x2*Dx1", "x0*Dx2"]
    members = [solve_member(A, parse_multivector(f, chart)) for f in fields]
    return A, fields, members
