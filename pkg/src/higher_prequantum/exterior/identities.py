"""Seeded sweep of the structural identities of the exterior calculus.

Every check is an exact equality of canonical forms; the sweep reports how
many random inputs were tried per form degree and how many failed.
"""

from __future__ import annotations

from .forms import Form, contract, d, lie_bracket, lie_derivative, wedge
from .randomgen import random_chart, random_form, random_vector_field, rng


def _iota(v, a: Form):
    return None if a.degree == 0 else contract(v, a)


def _d(a: Form):
    return None if a.degree >= a.chart.dim else d(a)


def _plus(*terms):
    """Sum of the non-None terms, or None if there are none."""
    out = None
    for t in terms:
        if t is not None:
            out = t if out is None else out + t
    return out


def _eq(x, y) -> bool:
    if x is None or y is None:
        return (x is None or x.is_zero()) and (y is None or y.is_zero())
    return x == y


def check_all(a: Form, b: Form, v, w) -> dict:
    """name -> bool for one tuple of inputs on a common chart."""
    p = a.degree
    out = {}
    da = _d(a)
    out["d_squared"] = da is None or _eq(_d(da), None)
    if p + b.degree <= a.chart.dim:
        lhs = _d(wedge(a, b))
        db = _d(b)
        t1 = wedge(da, b) if da is not None and p + 1 + b.degree <= a.chart.dim else None
        t2 = wedge(a, db) if db is not None and p + b.degree + 1 <= a.chart.dim else None
        if t2 is not None and p % 2:
            t2 = -t2
        out["leibniz"] = _eq(lhs, _plus(t1, t2))
    ia = _iota(v, a)
    out["cartan"] = _eq(lie_derivative(v, a),
                        _plus(_d(ia) if ia is not None else None,
                              _iota(v, da) if da is not None else None))
    out["contraction_nilpotent"] = ia is None or _eq(_iota(v, ia), None)
    lhs = lie_derivative(v, lie_derivative(w, a)) - lie_derivative(w, lie_derivative(v, a))
    out["lie_commutator"] = _eq(lhs, lie_derivative(lie_bracket(v, w), a))
    return out


def identity_suite(seed: int = 0, per_degree: int = 100, max_dim: int = 4, max_deg: int = 2) -> dict:
    """Run ``check_all`` on ``per_degree`` random forms of each degree 0..max_dim."""
    r = rng(seed)
    per_identity: dict = {}
    per_form_degree: dict = {}
    failures = []
    for p in range(max_dim + 1):
        for trial in range(per_degree):
            dim = r.randint(max(p, 1), max_dim)
            chart = random_chart(r, dim)
            kw = {"max_deg": max_deg, "max_mode": 1, "nterms": 2}
            a = random_form(r, chart, p, **kw)
            b = random_form(r, chart, r.randint(0, dim - p), **kw)
            v = random_vector_field(r, chart, **kw)
            w = random_vector_field(r, chart, **kw)
            for name, ok in check_all(a, b, v, w).items():
                slot = per_identity.setdefault(name, {"checked": 0, "failed": 0})
                slot["checked"] += 1
                if not ok:
                    slot["failed"] += 1
                    failures.append({"identity": name, "degree": p, "trial": trial,
                                     "form": a.render(), "chart": chart.describe()})
            per_form_degree[str(p)] = per_form_degree.get(str(p), 0) + 1
    return {"seed": seed, "max_dim": max_dim, "forms_per_degree": per_form_degree,
            "per_identity": dict(sorted(per_identity.items())), "failures": failures,
            "all_zero": not failures}
