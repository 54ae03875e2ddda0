"""Differential forms and multivector fields over polynomial-Fourier coefficients."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .. import conventions
from ..errors import BranchError, ChartMismatch, DegreeMismatch
from .chart import Chart
from .coeffn import CoefFn
from .scalar import ZERO, Scalar, as_scalar, root_of_unity_quarter


def sort_index(seq) -> tuple[int, tuple]:
    """Sign of the sorting permutation and the sorted tuple; sign 0 on repeats."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0, ()
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign, tuple(sorted(seq))


class _Graded:
    """Homogeneous element of degree p: sorted index tuple -> CoefFn."""

    __slots__ = ("chart", "degree", "_terms", "_hash")
    kind = "graded"

    def __init__(self, chart: Chart, degree: int, terms=None):
        if not 0 <= degree <= chart.dim:
            raise DegreeMismatch(f"degree {degree} outside 0..{chart.dim}")
        self.chart = chart
        self.degree = degree
        clean: dict = {}
        for idx, f in (terms or {}).items():
            idx = tuple(int(i) for i in idx)
            if len(idx) != degree:
                raise DegreeMismatch(f"index {idx} does not have length {degree}")
            if any(not 0 <= i < chart.dim for i in idx):
                raise ValueError(f"index {idx} out of range")
            if not isinstance(f, CoefFn):
                f = CoefFn.constant(chart, f)
            if f.chart != chart:
                raise ChartMismatch("coefficient lives on another chart")
            sign, sidx = sort_index(idx)
            if sign == 0 or not f:
                continue
            f = f if sign > 0 else -f
            if sidx in clean:
                f = clean[sidx] + f
            if f:
                clean[sidx] = f
            else:
                clean.pop(sidx, None)
        self._terms = clean
        self._hash = None

    @classmethod
    def _make(cls, chart, degree, terms):
        x = object.__new__(cls)
        x.chart = chart
        x.degree = degree
        x._terms = terms
        x._hash = None
        return x

    @classmethod
    def zero(cls, chart: Chart, degree: int):
        return cls._make(chart, degree, {})

    @classmethod
    def basis(cls, chart: Chart, index, coeff=1):
        return cls(chart, len(tuple(index)), {tuple(index): coeff})

    @classmethod
    def function(cls, f):
        """Degree-0 element carrying a coefficient function."""
        return cls._make(f.chart, 0, {(): f} if f else {})

    # -- inspection -------------------------------------------------------
    def items(self):
        return sorted(self._terms.items(), key=lambda kv: kv[0])

    def __iter__(self):
        return iter(self._terms.items())

    def component(self, index) -> CoefFn:
        sign, sidx = sort_index(index)
        if sign == 0:
            return CoefFn.zero(self.chart)
        f = self._terms.get(sidx)
        if f is None:
            return CoefFn.zero(self.chart)
        return f if sign > 0 else -f

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def coefficients(self):
        return list(self._terms.values())

    def as_function(self) -> CoefFn:
        if self.degree != 0:
            raise DegreeMismatch("not a degree-0 element")
        return self._terms.get((), CoefFn.zero(self.chart))

    def is_constant(self) -> bool:
        return all(f.is_constant() for f in self._terms.values())

    def poly_degree(self) -> int:
        return max((f.poly_degree() for f in self._terms.values()), default=0)

    def modes(self) -> set:
        out = set()
        for f in self._terms.values():
            out |= f.modes()
        return out

    # -- linear structure -------------------------------------------------
    def _same(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.chart != self.chart:
            raise ChartMismatch(f"{self.chart.describe()} vs {other.chart.describe()}")
        if other.degree != self.degree:
            raise DegreeMismatch(f"degree {self.degree} vs {other.degree}")

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._same(other)
        out = dict(self._terms)
        for idx, f in other._terms.items():
            if idx in out:
                s = out[idx] + f
                if s:
                    out[idx] = s
                else:
                    del out[idx]
            else:
                out[idx] = f
        return type(self)._make(self.chart, self.degree, out)

    def __radd__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        return NotImplemented

    def __neg__(self):
        return type(self)._make(self.chart, self.degree, {i: -f for i, f in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        """Multiplication by a scalar or by a coefficient function."""
        if isinstance(other, (int, Fraction, Scalar)):
            c = as_scalar(other)
            if not c:
                return type(self).zero(self.chart, self.degree)
            return type(self)._make(self.chart, self.degree,
                                    {i: f.scale(c) for i, f in self._terms.items()})
        if isinstance(other, CoefFn):
            if other.chart != self.chart:
                raise ChartMismatch("coefficient lives on another chart")
            out = {}
            for i, f in self._terms.items():
                p = f * other
                if p:
                    out[i] = p
            return type(self)._make(self.chart, self.degree, out)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if type(other) is not type(self):
            if isinstance(other, int) and other == 0:
                return self.is_zero()
            return NotImplemented
        return (self.chart == other.chart and self.degree == other.degree
                and self._terms == other._terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.kind, self.chart, self.degree,
                               frozenset(self._terms.items())))
        return self._hash

    def map_coefficients(self, fn):
        out = {}
        for i, f in self._terms.items():
            g = fn(f)
            if g:
                out[i] = g
        return type(self)._make(self.chart, self.degree, out)

    # -- rendering --------------------------------------------------------
    _atom = "?"

    def render(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for idx, f in self.items():
            basis = "^".join(f"{self._atom}{i}" for i in idx)
            fs = f.render()
            if not basis:
                parts.append(fs)
            elif fs == "1":
                parts.append(basis)
            else:
                parts.append(f"({fs})*{basis}")
        return " + ".join(parts)

    def __repr__(self):
        return f"{type(self).__name__}[{self.degree}]({self.render()})"


class Form(_Graded):
    __slots__ = ()
    kind = "form"
    _atom = "dx"


class MultiVector(_Graded):
    __slots__ = ()
    kind = "multivector"
    _atom = "Dx"


def vector_field(chart: Chart, components) -> MultiVector:
    """Vector field sum_j components[j] d/dx_j."""
    terms = {}
    for j, f in enumerate(components):
        if not isinstance(f, CoefFn):
            f = CoefFn.constant(chart, f)
        terms[(j,)] = f
    return MultiVector(chart, 1, terms)


def function_form(f: CoefFn) -> Form:
    return Form.function(f)


# ---------------------------------------------------------------------------
# exterior algebra
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _merge_sign(i: tuple, j: tuple) -> tuple[int, tuple]:
    return sort_index(i + j)


def wedge(a: _Graded, b: _Graded) -> _Graded:
    """Exterior product; forms with forms, multivectors with multivectors."""
    if type(a) is not type(b):
        raise TypeError("wedge needs two forms or two multivectors")
    if a.chart != b.chart:
        raise ChartMismatch(f"{a.chart.describe()} vs {b.chart.describe()}")
    deg = a.degree + b.degree
    if deg > a.chart.dim:
        # no index tuples of that length exist: the product is the zero element
        return type(a)._make(a.chart, deg, {})
    out: dict = {}
    for i, f in a._terms.items():
        for j, g in b._terms.items():
            sign, k = _merge_sign(i, j)
            if not sign:
                continue
            p = f * g
            if sign < 0:
                p = -p
            if k in out:
                p = out[k] + p
            out[k] = p
    return type(a)._make(a.chart, deg, {k: f for k, f in out.items() if f})


def d(a: Form) -> Form:
    """Exterior derivative."""
    if not isinstance(a, Form):
        raise TypeError("d acts on forms")
    if a.degree >= a.chart.dim:
        return Form._make(a.chart, a.degree + 1, {})
    out: dict = {}
    for idx, f in a._terms.items():
        for j in range(a.chart.dim):
            if j in idx:
                continue
            g = f.partial(j)
            if not g:
                continue
            sign, k = _merge_sign((j,), idx)
            if sign < 0:
                g = -g
            if k in out:
                g = out[k] + g
            out[k] = g
    return Form._make(a.chart, a.degree + 1, {k: f for k, f in out.items() if f})


def apply_vector(v: MultiVector, f: CoefFn) -> CoefFn:
    """Directional derivative v(f)."""
    if v.degree != 1:
        raise DegreeMismatch("expected a vector field")
    out = CoefFn.zero(f.chart)
    for (j,), vj in v._terms.items():
        out = out + vj * f.partial(j)
    return out


@lru_cache(maxsize=None)
def _basis_contraction(vec_idx: tuple, form_idx: tuple, order: str) -> tuple[int, tuple]:
    seq = vec_idx if order == "first-inner" else tuple(reversed(vec_idx))
    sign = 1
    cur = list(form_idx)
    for j in seq:
        if j not in cur:
            return 0, ()
        pos = cur.index(j)
        if pos % 2:
            sign = -sign
        cur.pop(pos)
    return sign, tuple(cur)


def contract(m: MultiVector, a: Form) -> Form:
    """Interior product of a multivector field into a form.

    The slot order follows :mod:`higher_prequantum.conventions`.
    """
    if not isinstance(m, MultiVector) or not isinstance(a, Form):
        raise TypeError("contract(multivector, form)")
    if m.chart != a.chart:
        raise ChartMismatch(f"{m.chart.describe()} vs {a.chart.describe()}")
    if m.degree > a.degree:
        raise DegreeMismatch(f"cannot contract a {m.degree}-vector into a {a.degree}-form")
    order = conventions.current().contraction
    out: dict = {}
    for j, g in m._terms.items():
        for i, f in a._terms.items():
            sign, k = _basis_contraction(j, i, order)
            if not sign:
                continue
            p = g * f
            if sign < 0:
                p = -p
            if k in out:
                p = out[k] + p
            out[k] = p
    return Form._make(a.chart, a.degree - m.degree, {k: f for k, f in out.items() if f})


def lie_bracket(v: MultiVector, w: MultiVector) -> MultiVector:
    """[v, w]^j = v(w^j) - w(v^j)."""
    if v.degree != 1 or w.degree != 1:
        raise DegreeMismatch("lie_bracket acts on vector fields")
    if v.chart != w.chart:
        raise ChartMismatch(f"{v.chart.describe()} vs {w.chart.describe()}")
    comps = []
    for j in range(v.chart.dim):
        wj = w.component((j,))
        vj = v.component((j,))
        comps.append(apply_vector(v, wj) - apply_vector(w, vj))
    return vector_field(v.chart, comps)


def lie_derivative(v: MultiVector, a: Form) -> Form:
    """L_v a computed from its action on coefficients and on each dx_i.

    Uses L_v(f dx_I) = v(f) dx_I + f sum_p dx_i1 ^ .. ^ d(v^ip) ^ .. ^ dx_ip,
    which is independent of the Cartan formula.
    """
    if v.degree != 1:
        raise DegreeMismatch("lie_derivative needs a vector field")
    if v.chart != a.chart:
        raise ChartMismatch(f"{v.chart.describe()} vs {a.chart.describe()}")
    dim = a.chart.dim
    grads = {j: [vj.partial(i) for i in range(dim)] for (j,), vj in v._terms.items()}
    out: dict = {}

    def acc(k, g):
        if not g:
            return
        if k in out:
            g = out[k] + g
        out[k] = g

    for idx, f in a._terms.items():
        acc(idx, apply_vector(v, f))
        for p, ip in enumerate(idx):
            if ip not in grads:
                continue
            for i, dvi in enumerate(grads[ip]):
                if not dvi:
                    continue
                sign, k = sort_index(idx[:p] + (i,) + idx[p + 1:])
                if not sign:
                    continue
                g = f * dvi
                acc(k, g if sign > 0 else -g)
    return Form._make(a.chart, a.degree, {k: f for k, f in out.items() if f})


def lie_derivative_multivector(v: MultiVector, m: MultiVector) -> MultiVector:
    """L_v on multivector fields (Schouten bracket with a vector field)."""
    if m.degree == 0:
        return MultiVector.function(apply_vector(v, m.as_function()))
    if m.degree == 1:
        return lie_bracket(v, m)
    out = MultiVector.zero(m.chart, m.degree)
    for idx, f in m._terms.items():
        factors = [MultiVector.basis(m.chart, (i,)) for i in idx]
        piece = MultiVector.basis(m.chart, idx, apply_vector(v, f))
        for p in range(len(idx)):
            rep = lie_bracket(v, factors[p])
            prod = None
            for q, fac in enumerate(factors):
                cur = rep if q == p else fac
                prod = cur if prod is None else wedge(prod, cur)
            piece = piece + prod * f
        out = out + piece
    return out


# ---------------------------------------------------------------------------
# pullback, restriction, integration, evaluation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AffineMap:
    """Axis-aligned affine map  source -> target.

    ``rows[j] = (i, s)`` means  x_target_j = x_source_i + s;
    ``rows[j] = (None, s)`` means  x_target_j = s  (a slice).
    """

    source: Chart
    target: Chart
    rows: tuple

    def __post_init__(self):
        if len(self.rows) != self.target.dim:
            raise ValueError("one row per target axis")
        rows = tuple((None if i is None else int(i), Fraction(s)) for i, s in self.rows)
        object.__setattr__(self, "rows", rows)
        used = [i for i, _ in rows if i is not None]
        if len(set(used)) != len(used) or any(not 0 <= i < self.source.dim for i in used):
            raise ValueError("source axes must be distinct and in range")

    @classmethod
    def translation(cls, source: Chart, target: Chart, shift) -> "AffineMap":
        return cls(source, target, tuple((j, s) for j, s in enumerate(shift)))

    @property
    def is_translation(self) -> bool:
        return (self.source.dim == self.target.dim
                and all(i == j for j, (i, _) in enumerate(self.rows)))

    def __call__(self, point):
        return tuple(Fraction(s) if i is None else Fraction(point[i]) + s for i, s in self.rows)


def _pull_coeffn(phi: AffineMap, f: CoefFn) -> CoefFn:
    if f.chart != phi.target:
        raise ChartMismatch("coefficient does not live on the map's target chart")
    src = phi.source
    cache: dict = {}

    def factor(j, e, kk):
        key = (j, e, kk)
        if key in cache:
            return cache[key]
        i, s = phi.rows[j]
        if i is None:
            val = as_scalar(s ** e)
            try:
                val = val * root_of_unity_quarter(kk * s)
            except ValueError:
                raise BranchError(f"E_{kk} at {s} is not a Gaussian rational") from None
            out = CoefFn.constant(src, val)
        else:
            if src.periodic[i] and e:
                raise BranchError(f"polynomial dependence pulled back onto periodic axis {i}")
            if not src.is_patch and not src.periodic[i] and kk:
                raise BranchError(f"Fourier mode pulled back onto non-periodic axis {i}")
            try:
                phase = root_of_unity_quarter(kk * s)
            except ValueError:
                raise BranchError(f"shift {s} breaks the Fourier mode {kk}") from None
            terms = {}
            for r in range(e + 1):
                binom = _binom(e, r) * s ** (e - r)
                if binom:
                    alpha = [0] * src.dim
                    alpha[i] = r
                    k = [0] * src.dim
                    k[i] = kk
                    terms[(tuple(alpha), tuple(k))] = phase * binom
            out = CoefFn._make(src, {key: c for key, c in terms.items() if c})
        cache[key] = out
        return out

    total = CoefFn.zero(src)
    for (a, k), c in f:
        term = CoefFn.constant(src, c)
        for j in range(phi.target.dim):
            if a[j] or k[j]:
                term = term * factor(j, a[j], k[j])
        total = total + term
    return total


def _binom(n, r):
    from math import comb
    return comb(n, r)


def pullback(phi: AffineMap, a):
    """Pull a form (or coefficient function) on ``phi.target`` back to ``phi.source``."""
    if isinstance(a, CoefFn):
        return _pull_coeffn(phi, a)
    if not isinstance(a, Form):
        raise TypeError("pullback acts on forms and coefficient functions")
    if a.chart != phi.target:
        raise ChartMismatch("form does not live on the map's target chart")
    out: dict = {}
    for idx, f in a._terms.items():
        src_idx = []
        for j in idx:
            i, _ = phi.rows[j]
            if i is None:
                break
            src_idx.append(i)
        else:
            sign, k = sort_index(src_idx)
            if not sign:
                continue
            g = _pull_coeffn(phi, f)
            if sign < 0:
                g = -g
            if k in out:
                g = out[k] + g
            if g:
                out[k] = g
            else:
                out.pop(k, None)
    return Form._make(phi.source, a.degree, out)


def push_vector(phi: AffineMap, v: MultiVector) -> MultiVector:
    """Restrict a vector field along a translation (its components pull back)."""
    if not phi.is_translation:
        raise ValueError("vector fields restrict only along translations")
    if v.chart != phi.target:
        raise ChartMismatch("vector field does not live on the map's target chart")
    return MultiVector._make(phi.source, v.degree,
                             {i: g for i, f in v._terms.items() if (g := _pull_coeffn(phi, f))})


def integrate_torus(a: Form, axes) -> Scalar:
    """Integral over the coordinate subtorus spanned by ``axes`` through the origin."""
    axes = tuple(sorted(int(j) for j in axes))
    if len(set(axes)) != len(axes):
        raise ValueError("repeated axis")
    for j in axes:
        if not a.chart.periodic[j]:
            raise ValueError(f"axis {j} is not periodic")
    if a.degree != len(axes):
        raise DegreeMismatch(f"a {a.degree}-form cannot be integrated over a {len(axes)}-torus")
    f = a._terms.get(axes)
    if f is None:
        return ZERO
    others = [j for j in range(a.chart.dim) if j not in axes]
    total = ZERO
    for (alpha, k), c in f:
        if any(k[j] for j in axes):
            continue
        if any(alpha[j] for j in others):
            continue
        total = total + c
    return total


def evaluate(a, point):
    """Numeric value at a rational point (test oracle only).

    Returns a complex number for coefficient functions and a dict
    ``index -> complex`` for forms and multivectors.
    """
    if isinstance(a, CoefFn):
        return a.evaluate(point)
    if isinstance(a, _Graded):
        return {idx: f.evaluate(point) for idx, f in a.items()}
    raise TypeError("evaluate acts on coefficient functions, forms and multivectors")


def forms_basis(dim: int, degree: int):
    return list(itertools.combinations(range(dim), degree))
