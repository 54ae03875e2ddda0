"""Exact sparse linear algebra over Q, Q(i) and Q(i)(tau).

Row reduction is delegated to sympy's ``DomainMatrix``; this module only picks
the smallest field containing the entries and converts Scalars in and out.
Results must land back in the Laurent ring Q(i)[tau, 1/tau].
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import sympy
from sympy import QQ, QQ_I
from sympy.polys.matrices import DomainMatrix

from .errors import NotInLaurentRing
from .exterior.scalar import ZERO, Scalar

_TAU = sympy.Symbol("tau")


@lru_cache(maxsize=None)
def _tau_field():
    K = QQ_I.frac_field(_TAU)
    return K, K.gens[0]


def _mpq(f: Fraction):
    return QQ(f.numerator, f.denominator)


def _frac(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def _pick_domain(entries) -> str:
    kind = "QQ"
    for s in entries:
        if s.is_rational():
            continue
        if s.is_gaussian():
            kind = "QQ_I"
        else:
            return "QQ_I(tau)"
    return kind


def _to_domain(s: Scalar, kind: str):
    if kind == "QQ":
        return _mpq(s.as_fraction())
    if kind == "QQ_I":
        if not s.terms:
            return QQ_I.zero
        _, r, i = s.terms[0]
        return QQ_I(_mpq(r), _mpq(i))
    K, g = _tau_field()
    out = K.zero
    for e, r, i in s.terms:
        out += K.convert(QQ_I(_mpq(r), _mpq(i))) * g ** e
    return out


def _from_domain(x, kind: str) -> Scalar:
    if kind == "QQ":
        return Scalar(_frac(x))
    if kind == "QQ_I":
        return Scalar.gaussian(_frac(x.x), _frac(x.y))
    num, den = x.numer, x.denom
    dterms = den.terms()
    if len(dterms) != 1:
        raise NotInLaurentRing(f"solution {x} is not a Laurent polynomial in tau")
    (ddeg,), dc = dterms[0]
    inv = Scalar.gaussian(_frac(dc.x), _frac(dc.y)).inverse()
    out = ZERO
    for (e,), c in num.terms():
        out = out + Scalar.gaussian(_frac(c.x), _frac(c.y), e - ddeg) * inv
    return out


def _domain_obj(kind):
    if kind == "QQ":
        return QQ
    if kind == "QQ_I":
        return QQ_I
    return _tau_field()[0]


@dataclass
class Solution:
    """Affine solution set  particular + span(nullspace)."""

    particular: list | None
    nullspace: list
    pivots: tuple
    domain: str

    @property
    def consistent(self) -> bool:
        return self.particular is not None


def _rref(rows, ncols, rhs=None):
    entries = [c for row in rows for c in row.values()]
    if rhs is not None:
        entries += list(rhs)
    kind = _pick_domain(entries)
    K = _domain_obj(kind)
    width = ncols + (1 if rhs is not None else 0)
    data = {}
    for r, row in enumerate(rows):
        d = {c: _to_domain(v, kind) for c, v in row.items() if v}
        if rhs is not None and rhs[r]:
            d[ncols] = _to_domain(rhs[r], kind)
        if d:
            data[r] = d
    M = DomainMatrix(data, (max(len(rows), 1), width), K)
    R, pivots = M.rref()
    return R.to_sdm(), tuple(pivots), kind


def solve(rows: list[dict], rhs: list, ncols: int) -> Solution:
    """Solve  sum_c rows[r][c] * x_c = rhs[r]  exactly.

    ``rows`` is a list of sparse dicts column -> Scalar.  Free variables of the
    particular solution are zero.
    """
    if len(rows) != len(rhs):
        raise ValueError("one right-hand side per row")
    if not rows:
        basis = []
        for f in range(ncols):
            v = [ZERO] * ncols
            v[f] = Scalar(1)
            basis.append(v)
        return Solution([ZERO] * ncols, basis, (), "QQ")
    R, pivots, kind = _rref(rows, ncols, rhs)
    if ncols in pivots:
        return Solution(None, _nullspace_from(R, pivots, ncols, kind), pivots, kind)
    x = [ZERO] * ncols
    for r, p in enumerate(pivots):
        v = R.get(r, {}).get(ncols)
        if v is not None:
            x[p] = _from_domain(v, kind)
    return Solution(x, _nullspace_from(R, pivots, ncols, kind), pivots, kind)


def _nullspace_from(R, pivots, ncols, kind):
    pivots = [p for p in pivots if p < ncols]
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [ZERO] * ncols
        v[f] = Scalar(1)
        for r, p in enumerate(pivots):
            c = R.get(r, {}).get(f)
            if c is not None:
                v[p] = -_from_domain(c, kind)
        basis.append(v)
    return basis


def rank(rows: list[dict], ncols: int) -> int:
    if not rows or ncols == 0:
        return 0
    _, pivots, _ = _rref(rows, ncols)
    return len(pivots)


def nullspace(rows: list[dict], ncols: int) -> list:
    if not rows:
        return solve([], [], ncols).nullspace
    R, pivots, kind = _rref(rows, ncols)
    return _nullspace_from(R, pivots, ncols, kind)


def dense_rows(matrix) -> list[dict]:
    """Convert a dense list-of-lists of numbers/Scalars into sparse Scalar rows."""
    out = []
    for row in matrix:
        d = {}
        for c, v in enumerate(row):
            v = v if isinstance(v, Scalar) else Scalar(v)
            if v:
                d[c] = v
        out.append(d)
    return out


# ---------------------------------------------------------------------------
# integer lattices
# ---------------------------------------------------------------------------

def solve_integer(matrix: list[list[int]], rhs: list[int]) -> list[int] | None:
    """An integer solution of  M z = b  or None.

    Column-style Hermite reduction with a tracked unimodular transform.
    """
    m = len(matrix)
    n = len(matrix[0]) if m else 0
    if m == 0:
        return [0] * n
    H = [list(map(int, row)) for row in matrix]
    U = [[int(i == j) for j in range(n)] for i in range(n)]

    def colop_swap(a, b):
        for row in H:
            row[a], row[b] = row[b], row[a]
        for row in U:
            row[a], row[b] = row[b], row[a]

    def colop_addmul(dst, src, k):
        if k == 0:
            return
        for row in H:
            row[dst] += k * row[src]
        for row in U:
            row[dst] += k * row[src]

    def colop_neg(a):
        for row in H:
            row[a] = -row[a]
        for row in U:
            row[a] = -row[a]

    pivot_rows = []
    col = 0
    for r in range(m):
        if col >= n:
            break
        while True:
            nz = [c for c in range(col, n) if H[r][c]]
            if not nz:
                break
            best = min(nz, key=lambda c: abs(H[r][c]))
            colop_swap(col, best)
            done = True
            for c in range(col + 1, n):
                if H[r][c]:
                    colop_addmul(c, col, -(H[r][c] // H[r][col]))
                    if H[r][c]:
                        done = False
            if done:
                break
        if H[r][col] == 0:
            continue
        if H[r][col] < 0:
            colop_neg(col)
        pivot_rows.append((r, col))
        col += 1

    # forward substitution on the lower echelon form H y = b
    y = [0] * n
    residual = list(map(int, rhs))
    pivot_of_row = dict(pivot_rows)
    for r in range(m):
        if r in pivot_of_row:
            c = pivot_of_row[r]
            q, rem = divmod(residual[r], H[r][c])
            if rem:
                return None
            y[c] = q
            for rr in range(r, m):
                residual[rr] -= H[rr][c] * q
        elif residual[r] != 0:
            return None
    return [sum(U[i][j] * y[j] for j in range(n)) for i in range(n)]


def integer_point(offset: list[Fraction], directions: list[list[Fraction]]) -> list[int] | None:
    """An integer vector in  offset + span_R(directions)  or None.

    The real span is cut out by rational equations  L w = L offset; an integer
    solution of that system is exactly a lattice point in the affine space.
    """
    E = len(offset)
    if E == 0:
        return []
    rows = [{i: Scalar(v[i]) for i in range(E) if v[i]} for v in directions]
    # annihilator of the span: nullspace of the transposed direction matrix
    if directions:
        ann = nullspace(rows, E)
    else:
        ann = []
        for i in range(E):
            v = [ZERO] * E
            v[i] = Scalar(1)
            ann.append(v)
    if not ann:
        return [0] * E
    L = []
    b = []
    for vec in ann:
        fr = [s.as_fraction() for s in vec]
        rhs = sum((f * o for f, o in zip(fr, offset)), Fraction(0))
        den = 1
        for f in fr + [rhs]:
            den = den * f.denominator // _gcd(den, f.denominator)
        L.append([int(f * den) for f in fr])
        b.append(rhs * den)
    if any(x.denominator != 1 for x in b):
        return None
    return solve_integer(L, [int(x) for x in b])


def _gcd(a, b):
    from math import gcd
    return gcd(a, b)
