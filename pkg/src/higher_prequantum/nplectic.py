"""Pre-n-plectic structures and the higher Poisson bracket L-infinity algebra.

Observables of degree ``i`` are (n-1-i)-forms for ``i >= 1`` and Hamiltonian
pairs ``(v, h)`` with ``i_v omega + dh = 0`` in degree 0.  The brackets are

* l_1: de Rham d, and h -> (0, dh) from degree 1 into pairs;
* l_2 on pairs: ([v1, v2], i_{v1^v2} omega);
* l_k on pairs, k >= 3: (-1)^floor((k-1)/2) i_{v1^...^vk} omega;
* zero on any tuple of length >= 2 containing a positive-degree element.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

import mpmath

from . import conventions, jacobi, linalg
from .errors import (
    BranchError, ChartMismatch, DegreeMismatch, NonConstantOmega, NotClosed, NotHamiltonian,
)
from .exterior import Chart, CoefFn, Form, MultiVector, contract, d, lie_bracket, wedge
from .exterior.forms import forms_basis, sort_index
from .exterior.primitive import find_primitive
from .exterior.scalar import Scalar


@dataclass(frozen=True)
class PreNPlectic:
    """A closed (n+1)-form on a chart."""

    omega: Form
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise DegreeMismatch("n must be at least 1")
        if self.omega.degree != self.n + 1:
            raise DegreeMismatch(f"omega has degree {self.omega.degree}, expected {self.n + 1}")
        if self.n + 1 > self.chart.dim:
            raise DegreeMismatch(f"an {self.n + 1}-form needs dimension >= {self.n + 1}")
        if not d(self.omega).is_zero():
            raise NotClosed(f"d(omega) = {d(self.omega).render()}")

    @property
    def chart(self) -> Chart:
        return self.omega.chart

    def contract(self, fields) -> Form:
        """i_{v1 ^ ... ^ vk} omega, or the zero (n+1-k)-form past the top."""
        fields = list(fields)
        if len(fields) > self.n + 1:
            raise DegreeMismatch("more fields than the degree of omega")
        if not fields:
            return self.omega
        m = fields[0]
        for v in fields[1:]:
            m = wedge(m, v)
        if m.degree > self.chart.dim:
            return Form.zero(self.chart, self.n + 1 - len(fields))
        return contract(m, self.omega)


def check_pre_nplectic(omega: Form, n: int) -> PreNPlectic:
    return PreNPlectic(omega, n)


def _point_value(f: CoefFn, point):
    try:
        return f.value_at(point)
    except BranchError:
        return None


def nondegenerate_at(P: PreNPlectic, point) -> bool:
    """Is v -> i_v omega injective at ``point``?"""
    chart = P.chart
    slots = forms_basis(chart.dim, P.n)
    rows = []
    exact = True
    for j in range(chart.dim):
        img = contract(MultiVector.basis(chart, (j,)), P.omega)
        row = {}
        for c, idx in enumerate(slots):
            f = img.component(idx)
            val = _point_value(f, point)
            if val is None:
                exact = False
                row[c] = f.evaluate(point)
            elif val:
                row[c] = val
        rows.append(row)
    if exact:
        return linalg.rank(rows, len(slots)) == chart.dim
    # phases off the quarter lattice: fall back to a high-precision numeric rank
    with mpmath.workdps(60):
        M = mpmath.matrix(chart.dim, len(slots))
        for r, row in enumerate(rows):
            for c, v in row.items():
                M[r, c] = complex(v) if not isinstance(v, Scalar) else v.numeric(60)
        svals = mpmath.svd_c(M, compute_uv=False) if M.cols else []
        big = sum(1 for s in svals if abs(s) > mpmath.mpf(10) ** -40)
    return big == chart.dim


class HamiltonianPair:
    """(v, h) with i_v omega + dh = 0; construction validates the equation."""

    __slots__ = ("structure", "v", "h")

    def __init__(self, structure: PreNPlectic, v: MultiVector, h: Form):
        if v.degree != 1 or h.degree != structure.n - 1:
            raise DegreeMismatch("a Hamiltonian pair is (vector field, (n-1)-form)")
        if v.chart != structure.chart or h.chart != structure.chart:
            raise ChartMismatch("pair lives on another chart")
        residual = contract(v, structure.omega) + d(h)
        if not residual.is_zero():
            raise NotHamiltonian(f"i_v omega + dh = {residual.render()}")
        self.structure = structure
        self.v = v
        self.h = h

    def __add__(self, other: "HamiltonianPair") -> "HamiltonianPair":
        return HamiltonianPair(self.structure, self.v + other.v, self.h + other.h)

    def __neg__(self):
        return HamiltonianPair(self.structure, -self.v, -self.h)

    def scale(self, c) -> "HamiltonianPair":
        return HamiltonianPair(self.structure, self.v * c, self.h * c)

    def is_zero(self) -> bool:
        return self.v.is_zero() and self.h.is_zero()

    def __eq__(self, other):
        if not isinstance(other, HamiltonianPair):
            return NotImplemented
        return self.v == other.v and self.h == other.h

    def __hash__(self):
        return hash((self.v, self.h))

    def __repr__(self):
        return f"HamiltonianPair(v={self.v.render()}, h={self.h.render()})"


class Observable:
    """Homogeneous element of L_infinity(X, omega).

    ``payload`` is a HamiltonianPair in degree 0, an (n-1-i)-form in degree
    ``i`` for 1 <= i <= n-1, and None in degrees where the space is zero.
    """

    __slots__ = ("structure", "degree", "payload")

    def __init__(self, structure: PreNPlectic, degree: int, payload=None):
        n = structure.n
        if 0 <= degree <= n - 1:
            if degree == 0:
                if not isinstance(payload, HamiltonianPair):
                    raise TypeError("degree-0 observables carry a HamiltonianPair")
            else:
                if not isinstance(payload, Form) or payload.degree != n - 1 - degree:
                    raise DegreeMismatch(f"degree-{degree} observables carry (n-1-{degree})-forms")
        elif payload is not None:
            raise DegreeMismatch(f"the space in degree {degree} is zero")
        self.structure = structure
        self.degree = degree
        self.payload = payload

    @classmethod
    def zero(cls, structure: PreNPlectic, degree: int) -> "Observable":
        n = structure.n
        if degree == 0:
            c = structure.chart
            return cls(structure, 0, HamiltonianPair(structure, MultiVector.zero(c, 1),
                                                     Form.zero(c, n - 1)))
        if 1 <= degree <= n - 1:
            return cls(structure, degree, Form.zero(structure.chart, n - 1 - degree))
        return cls(structure, degree, None)

    @classmethod
    def pair(cls, structure: PreNPlectic, v: MultiVector, h: Form) -> "Observable":
        return cls(structure, 0, HamiltonianPair(structure, v, h))

    @classmethod
    def form(cls, structure: PreNPlectic, h: Form) -> "Observable":
        return cls(structure, structure.n - 1 - h.degree, h)

    def is_zero(self) -> bool:
        return self.payload is None or self.payload.is_zero()

    def __add__(self, other: "Observable") -> "Observable":
        if other.degree != self.degree:
            raise DegreeMismatch(f"degree {self.degree} vs {other.degree}")
        if self.payload is None:
            return self
        return Observable(self.structure, self.degree, self.payload + other.payload)

    def __neg__(self):
        if self.payload is None:
            return self
        return Observable(self.structure, self.degree, -self.payload)

    def scale(self, c) -> "Observable":
        if self.payload is None:
            return self
        p = self.payload.scale(c) if isinstance(self.payload, HamiltonianPair) else self.payload * c
        return Observable(self.structure, self.degree, p)

    def __eq__(self, other):
        if not isinstance(other, Observable):
            return NotImplemented
        if self.degree != other.degree:
            return False
        if self.payload is None or other.payload is None:
            return self.is_zero() and other.is_zero()
        return self.payload == other.payload

    def __hash__(self):
        return hash((self.degree, self.payload))

    def render(self) -> str:
        if self.payload is None:
            return "0"
        if isinstance(self.payload, HamiltonianPair):
            return f"({self.payload.v.render()}, {self.payload.h.render()})"
        return self.payload.render()

    def __repr__(self):
        return f"Observable[{self.degree}]({self.render()})"


def arity_sign(k: int) -> int:
    """(-1)^floor((k-1)/2)."""
    return -1 if ((k - 1) // 2) % 2 else 1


def l_infty_bracket(P: PreNPlectic, args) -> Observable:
    args = list(args)
    k = len(args)
    if k == 0:
        raise ValueError("brackets have arity >= 1")
    for a in args:
        if a.structure.chart != P.chart:
            raise ChartMismatch("observable from another chart")
    if k == 1:
        (x,) = args
        if x.payload is None:
            return Observable.zero(P, x.degree - 1)
        if x.degree == 1:
            h = x.payload
            return Observable.pair(P, MultiVector.zero(P.chart, 1), d(h))
        if x.degree >= 2 and x.payload is not None:
            return Observable(P, x.degree - 1, d(x.payload))
        return Observable.zero(P, x.degree - 1)
    out_degree = sum(a.degree for a in args) + k - 2
    if any(a.degree != 0 for a in args):
        return Observable.zero(P, out_degree)
    fields = [a.payload.v for a in args]
    if k == 2:
        return Observable.pair(P, lie_bracket(*fields), P.contract(fields))
    if k > P.n + 1:
        return Observable.zero(P, out_degree)
    return Observable(P, out_degree, P.contract(fields) * arity_sign(k))


def _sum_observables(terms, degree, P):
    total = Observable.zero(P, degree)
    for sign, x in terms:
        total = total + (x if sign > 0 else -x)
    return total


def jacobi_residual(P: PreNPlectic, xs) -> Observable:
    xs = list(xs)
    terms = jacobi.jacobiator(lambda ys: l_infty_bracket(P, ys), xs, lambda x: x.degree)
    return _sum_observables(terms, sum(x.degree for x in xs) + len(xs) - 3, P)


def jacobi_report(P: PreNPlectic, elements, max_arity: int, ordered: bool = False) -> dict:
    """Evaluate every generalized Jacobi identity of arity 2..max_arity.

    Tuples range over multisets of ``elements`` (ordered tuples with
    ``ordered=True``); the identities are graded-skew, so multisets suffice.
    """
    if not 1 <= max_arity <= 5:
        raise ValueError("max_arity must be in 1..5")
    elements = list(elements)
    conv = conventions.current()
    rows = []
    per_arity = {}
    for k in range(1, max_arity + 1):
        gen = (itertools.product(range(len(elements)), repeat=k) if ordered
               else itertools.combinations_with_replacement(range(len(elements)), k))
        checked = failed = 0
        for idx in gen:
            try:
                res = jacobi_residual(P, [elements[i] for i in idx])
            except NotHamiltonian as exc:
                # a Jacobiator failing to be a Hamiltonian pair is itself a failure
                rows.append({"arity": k, "indices": list(idx), "zero": False,
                             "residual": f"not a Hamiltonian pair: {exc}"})
                checked += 1
                failed += 1
                continue
            checked += 1
            zero = res.is_zero()
            if not zero:
                failed += 1
            rows.append({"arity": k, "indices": list(idx), "zero": zero, "residual": res.render()})
        per_arity[str(k)] = {"checked": checked, "nonzero": failed}
    return {
        "conventions": conv.as_dict(),
        "max_arity": max_arity,
        "per_arity": per_arity,
        "residuals": rows,
        "all_zero": all(r["zero"] for r in rows),
    }


def solve_hamiltonian(P: PreNPlectic, h: Form):
    """Solve i_v omega = -dh for v, coefficient by coefficient.

    Returns ``(pair, kernel)`` where ``kernel`` is a basis of constant vectors
    annihilating omega pointwise.
    """
    if not P.omega.is_constant():
        raise NonConstantOmega("solve_hamiltonian needs constant-coefficient omega")
    if h.degree != P.n - 1:
        raise DegreeMismatch(f"Hamiltonian forms have degree {P.n - 1}")
    chart = P.chart
    slots = forms_basis(chart.dim, P.n)
    images = [contract(MultiVector.basis(chart, (j,)), P.omega) for j in range(chart.dim)]
    rows = []
    for idx in slots:
        row = {}
        for j, img in enumerate(images):
            c = img.component(idx)
            if c:
                row[j] = c.constant_value()
        rows.append(row)
    target = -d(h)
    keys = sorted({key for _, f in target for key, _ in f})
    comps: dict = {j: {} for j in range(chart.dim)}
    for key in keys:
        rhs = [target.component(idx).coefficient(*key) for idx in slots]
        sol = linalg.solve(rows, rhs, chart.dim)
        if not sol.consistent:
            raise NotHamiltonian(f"-dh = {target.render()} is not in the image of omega")
        for j, x in enumerate(sol.particular):
            if x:
                comps[j][key] = x
    v = MultiVector(chart, 1, {(j,): CoefFn(chart, t) for j, t in comps.items() if t})
    kernel = [MultiVector(chart, 1, {(j,): x for j, x in enumerate(vec) if x})
              for vec in linalg.nullspace(rows, chart.dim)]
    return HamiltonianPair(P, v, h), kernel


def hamiltonian_form(P: PreNPlectic, v: MultiVector, extra: int = 1) -> HamiltonianPair:
    """Find h with i_v omega + dh = 0 in the polynomial-Fourier ansatz."""
    beta = -contract(v, P.omega)
    h = find_primitive(beta, extra)
    if h is None:
        raise NotHamiltonian(f"i_v omega = {(-beta).render()} has no primitive in the ansatz")
    return HamiltonianPair(P, v, h)


def ks_cocycle(P: PreNPlectic, fields) -> Form:
    """i_{v1 ^ ... ^ vk} omega after checking each field is Hamiltonian.

    Accepts vector fields or HamiltonianPairs (the latter are already checked).
    """
    vs = []
    for f in fields:
        if isinstance(f, HamiltonianPair):
            vs.append(f.v)
        elif isinstance(f, Observable) and f.degree == 0:
            vs.append(f.payload.v)
        else:
            hamiltonian_form(P, f)
            vs.append(f)
    return P.contract(vs)


@dataclass
class KernelComplex:
    chart: Chart
    n: int
    band: int
    dims: list
    closed_dim: int
    ranks: list
    betti: list
    expected: list

    def as_dict(self) -> dict:
        return {
            "chart": self.chart.describe(),
            "n": self.n,
            "band": self.band,
            "spaces": [f"Omega^{p}" for p in range(self.n - 1)] + [f"Omega^{self.n - 1}_cl"],
            "dims": self.dims,
            "closed_dim": self.closed_dim,
            "ranks": self.ranks,
            "betti": self.betti,
            "expected_binomial": self.expected,
            "match": self.betti == self.expected,
        }


def _fourier_d_rows(dim: int, p: int, modes):
    """Matrix of d / (i tau) from Omega^p to Omega^{p+1} on the Fourier box.

    Returns (rows over target basis, source size, target size).
    """
    src = [(idx, k) for idx in forms_basis(dim, p) for k in modes]
    tgt = {(idx, k): r for r, (idx, k) in enumerate((idx, k) for idx in forms_basis(dim, p + 1)
                                                      for k in modes)}
    rows = [dict() for _ in tgt]
    for c, (idx, k) in enumerate(src):
        for j in range(dim):
            if j in idx or not k[j]:
                continue
            sign, new = sort_index((j,) + idx)
            r = tgt[(new, k)]
            rows[r][c] = Scalar(sign * k[j])
    return rows, len(src), len(tgt)


def kernel_complex(source, n: int | None = None, band: int = 1) -> KernelComplex:
    """Omega^0 -> ... -> Omega^{n-2} -> Omega^{n-1}_cl on a Fourier box |k_j| <= band.

    ``source`` is a PreNPlectic or a torus Chart (the complex depends only on
    the chart, n and the band).
    """
    from .linfinity import homology
    if isinstance(source, PreNPlectic):
        chart, n = source.chart, source.n if n is None else n
    else:
        chart = source
    if n is None or n < 1:
        raise ValueError("n >= 1 required")
    if not chart.fully_periodic or chart.is_patch:
        raise ValueError("kernel_complex needs a torus chart")
    if band < 0:
        raise ValueError("band must be non-negative")
    dim = chart.dim
    modes = list(itertools.product(range(-band, band + 1), repeat=dim))
    dims = [comb(dim, p) * len(modes) for p in range(n + 1)]
    mats = []
    ranks = []
    for p in range(n):
        if p + 1 > dim:
            rows, ns, nt = [], dims[p], 0
        else:
            rows, ns, nt = _fourier_d_rows(dim, p, modes)
        mats.append((rows, ns, nt))
        ranks.append(linalg.rank(rows, ns) if rows else 0)
    closed_dim = dims[n - 1] - ranks[n - 1]
    betti = homology(dims[:n] + [dims[n] if n <= dim else 0], mats)[:n]
    expected = [comb(dim, p) for p in range(n)]
    return KernelComplex(chart, n, band, dims[:n - 1] + [closed_dim], closed_dim,
                         ranks[:n - 1], betti, expected)


@dataclass
class DWResult:
    holds: bool
    residual: Form
    rhs: Form
    note: str


def dw_check(P: PreNPlectic, H: Form, fields) -> DWResult:
    """Compare dH with the n-fold contraction of omega against ``fields``.

    The arity sign is applied for n >= 3; n = 1, 2 compare with the bare contraction.
    """
    fields = list(fields)
    if len(fields) != P.n:
        raise ValueError(f"expected {P.n} vector fields, got {len(fields)}")
    if H.degree != 0:
        raise DegreeMismatch("the de Donder-Weyl Hamiltonian is a function")
    rhs = P.contract(fields)
    if P.n >= 3:
        rhs = rhs * arity_sign(P.n)
        note = "n-ary bracket with arity sign"
    elif P.n == 2:
        note = "n = 2: binary bracket is pair-valued; compared with its form component"
    else:
        note = "n = 1: compared with the single contraction"
    residual = d(H) - rhs
    return DWResult(residual.is_zero(), residual, rhs, note)
