"""Seeded random generators for coefficient functions, forms and fields.

Every generator takes a :class:`random.Random`; identical seeds give
identical objects.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .chart import Chart
from .coeffn import CoefFn
from .forms import Form, MultiVector, forms_basis
from .scalar import Scalar


def rng(seed: int) -> random.Random:
    return random.Random(seed)


def random_rational(r: random.Random, span: int = 3) -> Fraction:
    return Fraction(r.randint(-span, span), r.randint(1, 3))


def random_scalar(r: random.Random, gaussian: bool = True, tau: bool = True) -> Scalar:
    re_ = random_rational(r)
    im_ = random_rational(r) if gaussian and r.random() < 0.3 else 0
    e = r.choice((-1, 0, 0, 0, 1)) if tau else 0
    s = Scalar.gaussian(re_, im_, e)
    return s if s else Scalar(1)


def random_chart(r: random.Random, dim: int) -> Chart:
    """R^d, T^d, or a mixed R^a x T^b chart."""
    kind = r.choice(("euclidean", "torus", "mixed"))
    if kind == "euclidean":
        return Chart.euclidean(dim)
    if kind == "torus":
        return Chart.torus(dim)
    flags = tuple(r.random() < 0.5 for _ in range(dim))
    return Chart(dim, flags, label="R^a x T^b")


def random_coeffn(r: random.Random, chart: Chart, max_deg: int = 2, max_mode: int = 1,
                  nterms: int = 3, exact_scalars: bool = False) -> CoefFn:
    """A sum of at most ``nterms`` random monomials respecting the chart's axes."""
    terms = {}
    for _ in range(r.randint(1, nterms)):
        alpha, k = [], []
        budget = max_deg
        for j in range(chart.dim):
            poly_ok = chart.is_patch or not chart.periodic[j]
            if poly_ok:
                e = r.randint(0, budget)
                budget -= e
                alpha.append(e)
                k.append(0)
            else:
                alpha.append(0)
                k.append(r.randint(-max_mode, max_mode))
        c = (Scalar(random_rational(r)) if exact_scalars
             else random_scalar(r))
        key = (tuple(alpha), tuple(k))
        terms[key] = terms.get(key, Scalar(0)) + c
    return CoefFn(chart, terms)


def random_form(r: random.Random, chart: Chart, degree: int, density: float = 0.6,
                **coeff_kw) -> Form:
    terms = {}
    slots = forms_basis(chart.dim, degree)
    for idx in slots:
        if r.random() < density:
            terms[idx] = random_coeffn(r, chart, **coeff_kw)
    if not terms and slots:
        terms[r.choice(slots)] = random_coeffn(r, chart, **coeff_kw)
    return Form(chart, degree, terms)


def random_vector_field(r: random.Random, chart: Chart, density: float = 0.7,
                        **coeff_kw) -> MultiVector:
    terms = {}
    for j in range(chart.dim):
        if r.random() < density:
            terms[(j,)] = random_coeffn(r, chart, **coeff_kw)
    if not terms:
        terms[(r.randrange(chart.dim),)] = random_coeffn(r, chart, **coeff_kw)
    return MultiVector(chart, 1, terms)


def random_polynomial(r: random.Random, chart: Chart, max_deg: int = 2, nterms: int = 4) -> CoefFn:
    """Rational polynomial of total degree <= max_deg (non-periodic charts)."""
    monos = [a for a in itertools.product(range(max_deg + 1), repeat=chart.dim)
             if sum(a) <= max_deg]
    terms = {}
    for a in r.sample(monos, min(nterms, len(monos))):
        c = random_rational(r)
        if c:
            terms[(a, (0,) * chart.dim)] = c
    return CoefFn(chart, terms)
