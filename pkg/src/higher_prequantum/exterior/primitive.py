"""Exact primitives of forms inside a finite polynomial-Fourier ansatz."""

from __future__ import annotations

import itertools

from .. import linalg
from ..errors import DegreeMismatch
from .coeffn import CoefFn
from .forms import Form, d, forms_basis
from .scalar import as_scalar


def _ansatz_monomials(chart, alphas, extra: int):
    """Exponents b <= max(alpha)+extra per free axis, with |b| <= max|alpha|+extra."""
    free = [j for j in range(chart.dim) if chart.is_patch or not chart.periodic[j]]
    top = max((sum(a) for a in alphas), default=0) + extra
    caps = [max((a[j] for a in alphas), default=0) + extra for j in range(chart.dim)]
    ranges = [range(caps[j] + 1) if j in free else range(1) for j in range(chart.dim)]
    return [b for b in itertools.product(*ranges) if sum(b) <= top]


def find_primitive(beta: Form, extra: int = 1) -> Form | None:
    """Some ``alpha`` with ``d(alpha) == beta`` in the ansatz, else None.

    The ansatz keeps each Fourier mode of ``beta`` and raises polynomial
    degree by at most ``extra``; free directions of the solution are set to 0.
    """
    if not isinstance(beta, Form):
        raise TypeError("find_primitive expects a Form")
    if beta.degree == 0:
        raise DegreeMismatch("a function has no primitive")
    chart = beta.chart
    if beta.is_zero():
        return Form.zero(chart, beta.degree - 1)
    by_mode: dict = {}
    for _, f in beta:
        for (a, k), _c in f:
            by_mode.setdefault(k, set()).add(a)
    slots = forms_basis(chart.dim, beta.degree - 1)
    result = Form.zero(chart, beta.degree - 1)
    for k in sorted(by_mode):
        monos = _ansatz_monomials(chart, by_mode[k], extra)
        cols = [(idx, b) for idx in slots for b in monos]
        col_images = [d(Form(chart, beta.degree - 1, {idx: CoefFn.monomial(chart, b, k)}))
                      for idx, b in cols]
        row_of: dict = {}
        rows: list = []
        for c, img in enumerate(col_images):
            for idx, f in img:
                for key, v in f:
                    r = row_of.setdefault((idx, key), len(rows))
                    if r == len(rows):
                        rows.append({})
                    rows[r][c] = v
        target = {}
        for idx, f in beta:
            for key, v in f:
                if key[1] == k:
                    target[(idx, key)] = v
        for key in target:
            if key not in row_of:
                return None
        rhs = [target.get(key, 0) for key in sorted(row_of, key=row_of.get)]
        sol = linalg.solve(rows, [as_scalar(x) for x in rhs], len(cols))
        if not sol.consistent:
            return None
        terms: dict = {}
        for (idx, b), x in zip(cols, sol.particular):
            if x:
                f = CoefFn.monomial(chart, b, k, x)
                terms[idx] = terms[idx] + f if idx in terms else f
        result = result + Form(chart, beta.degree - 1, terms)
    if d(result) != beta:
        return None
    return result
