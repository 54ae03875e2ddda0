"""JSON-ready dictionaries for exterior-calculus values.

Schema (all lists in canonical order):

* Scalar:     ``[{"tau": e, "re": "p/q", "im": "p/q"}, ...]``
* Chart:      ``{"dim", "periodic": [bool], "branch": [[lo, hi]] | null, "label"}``
* CoefFn:     ``{"chart", "terms": [{"alpha": [...], "k": [...], "c": Scalar}]}``
* Form / MultiVector:
  ``{"kind": "form" | "multivector", "degree", "chart",
  "terms": [{"index": [...], "coeff": [CoefFn terms]}], "text"}``
"""

from __future__ import annotations

from fractions import Fraction

from .chart import Chart
from .coeffn import CoefFn
from .forms import Form, MultiVector, _Graded
from .scalar import Scalar


def scalar_to_json(s: Scalar) -> list:
    return [{"tau": e, "re": str(r), "im": str(i)} for e, r, i in s.terms]


def scalar_from_json(data) -> Scalar:
    return Scalar.from_terms((t["tau"], Fraction(t["re"]), Fraction(t["im"])) for t in data)


def chart_to_json(c: Chart) -> dict:
    return {
        "dim": c.dim,
        "periodic": list(c.periodic),
        "branch": None if c.branch is None else [[str(lo), str(hi)] for lo, hi in c.branch],
        "label": c.label,
    }


def chart_from_json(data) -> Chart:
    branch = data.get("branch")
    if branch is not None:
        branch = tuple((Fraction(lo), Fraction(hi)) for lo, hi in branch)
    return Chart(int(data["dim"]), tuple(data["periodic"]), branch, data.get("label", ""))


def _terms_to_json(f: CoefFn) -> list:
    return [{"alpha": list(a), "k": list(k), "c": scalar_to_json(c)} for (a, k), c in f.items()]


def _terms_from_json(chart: Chart, data) -> CoefFn:
    return CoefFn(chart, {(tuple(t["alpha"]), tuple(t["k"])): scalar_from_json(t["c"]) for t in data})


def coeffn_to_json(f: CoefFn) -> dict:
    return {"chart": chart_to_json(f.chart), "terms": _terms_to_json(f)}


def coeffn_from_json(data) -> CoefFn:
    return _terms_from_json(chart_from_json(data["chart"]), data["terms"])


def graded_to_json(a: _Graded, chart: bool = True) -> dict:
    out = {
        "kind": a.kind,
        "degree": a.degree,
        "terms": [{"index": list(idx), "coeff": _terms_to_json(f)} for idx, f in a.items()],
        "text": a.render(),
    }
    if chart:
        out["chart"] = chart_to_json(a.chart)
    return out


def graded_from_json(data, chart: Chart | None = None) -> _Graded:
    chart = chart or chart_from_json(data["chart"])
    cls = {"form": Form, "multivector": MultiVector}[data["kind"]]
    terms = {tuple(t["index"]): _terms_from_json(chart, t["coeff"]) for t in data["terms"]}
    return cls(chart, int(data["degree"]), terms)


def to_json(obj):
    """Dispatch on type."""
    if isinstance(obj, Scalar):
        return scalar_to_json(obj)
    if isinstance(obj, Chart):
        return chart_to_json(obj)
    if isinstance(obj, CoefFn):
        return coeffn_to_json(obj)
    if isinstance(obj, _Graded):
        return graded_to_json(obj)
    raise TypeError(f"no JSON schema for {type(obj).__name__}")
