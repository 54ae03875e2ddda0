"""Integrality, prequantization, holonomy and gauge classes of Deligne cocycles."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .. import linalg
from ..errors import DegreeMismatch, NerveMismatch, NotACocycle, NotClosed, NotIntegral
from ..exterior import AffineMap, Chart, CoefFn, Form, d, integrate_torus, pullback
from ..exterior.forms import forms_basis
from ..exterior.randomgen import random_coeffn, rng
from ..exterior.scalar import I, TAU, ZERO, Scalar, as_scalar
from .cochain import Cochain, curvature, is_cocycle, total_differential
from .nerve import CoverNerve


def mod_one(s: Scalar) -> Scalar:
    """Reduce the rational constant part of ``s`` into [0, 1)."""
    s = as_scalar(s)
    terms = []
    for e, re, im in s.terms:
        if e == 0:
            re = re - (re.numerator // re.denominator)
        terms.append((e, re, im))
    return Scalar.from_terms(terms)


# ---------------------------------------------------------------------------
# integrality
# ---------------------------------------------------------------------------

@dataclass
class Integrality:
    integral: bool
    # sorted axis tuple -> period
    periods: dict

    def as_dict(self) -> dict:
        return {"integral": self.integral,
                "periods": {",".join(map(str, k)): v.render() for k, v in sorted(self.periods.items())}}


def is_integral(omega: Form) -> Integrality:
    """Periods of a closed form over the coordinate subtori through the origin."""
    chart = omega.chart
    if not chart.fully_periodic:
        raise ValueError("is_integral expects a form on a torus chart")
    if omega.degree < chart.dim and not d(omega).is_zero():
        raise NotClosed("the form is not closed")
    periods = {axes: integrate_torus(omega, axes)
               for axes in itertools.combinations(range(chart.dim), omega.degree)}
    ok = all(p.is_integer() for p in periods.values())
    return Integrality(ok, periods)


# ---------------------------------------------------------------------------
# prequantization of k dx^dy on T^2
# ---------------------------------------------------------------------------

def prequantize_torus(k) -> Cochain:
    """Level-1 Deligne cocycle on the product cover of T^2 with curvature k dx^dy.

    Patch potentials are k x dy in branch coordinates; transitions absorb the
    winding jump of x, and the integer table absorbs the jump of y.
    """
    k = Fraction(k)
    if k.denominator != 1:
        raise NotIntegral(f"k = {k} gives a non-integral period")
    k = int(k)
    nerve = CoverNerve.torus(2)
    forms = {}
    for sigma in nerve.simplices(0):
        chart = nerve.chart(sigma)
        forms[sigma] = Form(chart, 1, {(1,): CoefFn.coordinate(chart, 0) * k})
    for sigma in nerve.simplices(1):
        a, b = sigma
        wx = nerve.winding(a, b)[0]
        chart = nerve.chart(sigma)
        forms[sigma] = Form.function(CoefFn.coordinate(chart, 1) * (k * wx))
    ints = {}
    for sigma in nerve.simplices(2):
        a, b, c = sigma
        ints[sigma] = -k * nerve.winding(b, c)[0] * nerve.winding(a, b)[1]
    return Cochain(nerve, 1, 1, forms, ints)


# ---------------------------------------------------------------------------
# holonomy
# ---------------------------------------------------------------------------

# (patch, start, end) in the patch's own coordinates
_SEGMENTS = (((0,), Fraction(0), Fraction(1, 4)),
             ((1,), Fraction(1, 4), Fraction(1, 2)),
             ((2,), Fraction(1, 2), Fraction(1)))
# (edge, evaluation point in the edge chart, sign)
_JUMPS = (((0, 1), Fraction(1, 4), 1), ((1, 2), Fraction(1, 2), 1), ((0, 2), Fraction(0), -1))


def _antiderivative(f: CoefFn) -> CoefFn:
    """F with F' = f on a one-dimensional chart."""
    chart = f.chart
    out = CoefFn.zero(chart)
    for ((a,), (k,)), c in f:
        if k == 0:
            out = out + CoefFn.monomial(chart, (a + 1,), (0,), c * Fraction(1, a + 1))
            continue
        inv = (I * TAU * k).inverse()
        coeff = Scalar(1)
        for j in range(a + 1):
            # (-1)^j a!/(a-j)! x^(a-j) / (i tau k)^(j+1)
            term = c * coeff * inv ** (j + 1)
            out = out + CoefFn.monomial(chart, (a - j,), (k,), term if j % 2 == 0 else -term)
            coeff = coeff * (a - j)
    return out


def _is_circle(nerve: CoverNerve) -> bool:
    return nerve.kind == "torus" and nerve.dim == 1


def holonomy(c: Cochain) -> Scalar:
    """Holonomy of a degree-1 cocycle on the circle nerve, mod Z."""
    if not _is_circle(c.nerve):
        raise NerveMismatch("holonomy is computed on the circle nerve")
    if c.degree != 1:
        raise DegreeMismatch("holonomy needs a cocycle of total degree 1")
    if not is_cocycle(c).ok:
        raise NotACocycle("holonomy needs a cocycle")
    total = ZERO
    for sigma, lo, hi in _SEGMENTS:
        F = _antiderivative(c.component(sigma).component((0,)))
        total = total + F.value_at((hi,)) - F.value_at((lo,))
    for sigma, point, sign in _JUMPS:
        g = c.component(sigma).as_function().value_at((point,))
        total = total + (g if sign > 0 else -g)
    return mod_one(total)


def restrict_to_cycle(c: Cochain, axis: int) -> Cochain:
    """Pull a degree-1 cochain on the T^d nerve back to the circle along ``axis``.

    The cycle runs along ``axis`` at coordinate 0 on the others.
    """
    nerve = c.nerve
    if nerve.kind != "torus":
        raise NerveMismatch("cycles are restricted from torus nerves")
    if not 0 <= axis < nerve.dim:
        raise ValueError(f"axis {axis} out of range")
    circle = CoverNerve.circle()

    def lift(s):
        out = []
        for a in s:
            v = [0] * nerve.dim
            v[axis] = a
            out.append(nerve.vertices.index(tuple(v)))
        return tuple(out)

    forms = {}
    for q in range(2):
        for s in circle.simplices(q):
            a = c.component(lift(s))
            if a is None or a.degree > 1:
                continue
            rows = tuple((0 if j == axis else None, 0) for j in range(nerve.dim))
            phi = AffineMap(circle.chart(s), nerve.chart(lift(s)), rows)
            forms[s] = pullback(phi, a)
    ints = None
    if c.is_deligne:
        ints = {s: c.integer(lift(s)) for s in circle.simplices(c.degree + 1)}
    return Cochain(circle, c.level, c.degree, forms, ints)


def cycle_holonomies(c: Cochain) -> list:
    """Holonomy along each coordinate circle of a degree-1 cocycle on T^d."""
    if _is_circle(c.nerve):
        return [holonomy(c)]
    return [holonomy(restrict_to_cycle(c, j)) for j in range(c.nerve.dim)]


# ---------------------------------------------------------------------------
# gauge equivalence
# ---------------------------------------------------------------------------

@dataclass
class GaugeResult:
    # "equivalent", "obstructed" or "no_witness_in_band"
    outcome: str
    witness: Cochain | None = None
    invariants: dict = field(default_factory=dict)
    reason: str = ""

    @property
    def equivalent(self) -> bool:
        return self.outcome == "equivalent"

    def as_dict(self) -> dict:
        return {"outcome": self.outcome, "reason": self.reason,
                "invariants": self.invariants,
                "witness": None if self.witness is None else self.witness.render()}


def _normalized(c: Cochain) -> Cochain:
    check = is_cocycle(c)
    if check.ok and check.correction:
        return c.with_integral({s: c.integer(s) + check.correction.get(s, 0)
                                for s in set(c.integral) | set(check.correction)})
    return c


def gauge_invariants(c: Cochain) -> dict:
    """Curvature and, in degree 1, cycle holonomies; empty for non-cocycles."""
    out = {}
    if not is_cocycle(c).ok:
        return out
    if c.degree == c.level:
        F = curvature(c)
        out["curvature"] = "0" if F is None else F.render()
    if c.degree == 1 and c.nerve.kind == "torus":
        out["holonomy"] = [h.render() for h in cycle_holonomies(c)]
    return out


def _ansatz_monomials(chart: Chart, k, cap: int):
    free = [j for j in range(chart.dim) if chart.is_patch or not chart.periodic[j]]
    if not chart.is_patch and any(k[j] and not chart.periodic[j] for j in range(chart.dim)):
        return []
    ranges = [range(cap + 1) if j in free else range(1) for j in range(chart.dim)]
    return [b for b in itertools.product(*ranges) if sum(b) <= cap]


def _row_entries(res: Cochain, k):
    for sigma, a in res.forms.items():
        for idx, f in a:
            for key, v in f:
                if key[1] == k:
                    yield (sigma, idx, key), v
    if any(k):
        return
    for sigma, z in (res.integral or {}).items():
        yield ("z", sigma), Scalar(z)


def gauge_reduce(c1: Cochain, c2: Cochain, band: int = 2, extra: int = 1) -> GaugeResult:
    """Search for b with c1 - c2 = D b.

    Each Fourier mode is an independent block.  The ansatz for b keeps the
    modes of the difference (plus the constant mode) and raises polynomial
    degree by at most ``extra``; integer data is fixed by a lattice search in
    the constant block.  Modes beyond ``band`` are out of reach.
    """
    c1.nerve.check_same(c2.nerve)
    if (c1.level, c1.degree) != (c2.level, c2.degree) or c1.is_deligne != c2.is_deligne:
        raise DegreeMismatch("gauge_reduce compares cochains of equal level and degree")
    inv1, inv2 = gauge_invariants(c1), gauge_invariants(c2)
    invariants = {"first": inv1, "second": inv2}
    for key in sorted(set(inv1) & set(inv2)):
        if inv1[key] != inv2[key]:
            return GaugeResult("obstructed", None, invariants, f"{key} differs")
    c1, c2 = _normalized(c1), _normalized(c2)
    nerve, level, m = c1.nerve, c1.level, c1.degree
    diff = c1 - c2
    deligne = c1.is_deligne
    if diff.is_zero():
        return GaugeResult("equivalent", Cochain(nerve, level, m - 1, {}, {} if deligne else None),
                           invariants, "identical")
    modes = {(0,) * nerve.dim}
    cap = 0
    for a in diff.forms.values():
        modes |= a.modes()
        cap = max(cap, a.poly_degree())
    cap += extra
    if any(max(abs(x) for x in k) > band for k in modes):
        return GaugeResult("no_witness_in_band", None, invariants,
                           f"difference has Fourier modes beyond band {band}")

    unknown_slots = []
    for q in range(m):
        p = m - 1 - q
        if not 0 <= p <= min(level, nerve.dim):
            continue
        for sigma in nerve.simplices(q):
            for idx in forms_basis(nerve.dim, p):
                unknown_slots.append((sigma, p, idx))

    witness_forms: dict = {}
    witness_ints: dict = {}
    for k in sorted(modes):
        cols = []
        images = []
        for sigma, p, idx in unknown_slots:
            chart = nerve.chart(sigma)
            for b in _ansatz_monomials(chart, k, cap):
                unit = Form(chart, p, {idx: CoefFn.monomial(chart, b, k)})
                cols.append(("form", sigma, unit))
                images.append(total_differential(
                    Cochain(nerve, level, m - 1, {sigma: unit}, {} if deligne else None)))
        w_cols = []
        if deligne and not any(k):
            for sigma in nerve.simplices(m):
                w_cols.append(len(cols))
                cols.append(("int", sigma, None))
                images.append(total_differential(Cochain(nerve, level, m - 1, {}, {sigma: 1})))
        row_of: dict = {}
        rows: list = []
        for ci, img in enumerate(images):
            for key, v in _row_entries(img, k):
                r = row_of.setdefault(key, len(rows))
                if r == len(rows):
                    rows.append({})
                rows[r][ci] = v
        rhs = [ZERO] * len(rows)
        for key, v in _row_entries(diff, k):
            if key not in row_of:
                return GaugeResult("no_witness_in_band", None, invariants,
                                   f"component {key[:2]} is outside the image of the ansatz")
            rhs[row_of[key]] = v
        sol = linalg.solve(rows, rhs, len(cols))
        if not sol.consistent:
            return GaugeResult("no_witness_in_band", None, invariants,
                               f"no solution in the ansatz for mode {list(k)}")
        x = sol.particular
        if w_cols:
            try:
                offset = [x[i].as_fraction() for i in w_cols]
                dirs = [[v[i].as_fraction() for i in w_cols] for v in sol.nullspace]
            except ValueError:
                return GaugeResult("no_witness_in_band", None, invariants,
                                   "integer data is not rational in the constant block")
            w = linalg.integer_point(offset, dirs)
            if w is None:
                return GaugeResult("no_witness_in_band", None, invariants,
                                   "no integral transition data in the band")
            fixed = dict(zip(w_cols, w))
            rest = [i for i in range(len(cols)) if i not in fixed]
            pos = {i: n for n, i in enumerate(rest)}
            rows2 = [{pos[c]: v for c, v in row.items() if c in pos} for row in rows]
            rhs2 = [rhs[r] - sum((row.get(i, ZERO) * z for i, z in fixed.items()), ZERO)
                    for r, row in enumerate(rows)]
            sol2 = linalg.solve(rows2, rhs2, len(rest))
            if not sol2.consistent:
                return GaugeResult("no_witness_in_band", None, invariants,
                                   "integral transition data admits no real completion")
            x = [ZERO] * len(cols)
            for i, z in fixed.items():
                x[i] = Scalar(z)
            for i, n in pos.items():
                x[i] = sol2.particular[n]
        for (kind, sigma, unit), coeff in zip(cols, x):
            if not coeff:
                continue
            if kind == "int":
                witness_ints[sigma] = int(coeff.as_fraction())
            else:
                term = unit * coeff
                witness_forms[sigma] = witness_forms[sigma] + term if sigma in witness_forms else term
    witness = Cochain(nerve, level, m - 1, witness_forms, witness_ints if deligne else None)
    if total_differential(witness) != diff:
        raise AssertionError("gauge witness failed exact verification")
    return GaugeResult("equivalent", witness, invariants, "witness verified exactly")


# ---------------------------------------------------------------------------
# flat moduli
# ---------------------------------------------------------------------------

def flat_circle_cocycle(theta_a, theta_g) -> Cochain:
    """A = theta_a dx on every arc, g_02 = -theta_g; holonomy theta_a + theta_g."""
    nerve = CoverNerve.circle()
    forms = {s: Form(nerve.chart(s), 1, {(0,): as_scalar(theta_a)}) for s in nerve.simplices(0)}
    forms[(0, 2)] = Form.function(CoefFn.constant(nerve.chart((0, 2)), -as_scalar(theta_g)))
    return Cochain(nerve, 1, 1, forms, {})


def flat_torus_cocycle(theta_a, theta_g) -> Cochain:
    """Constant connection with per-axis transition logs; holonomy theta_a[j] + theta_g[j]."""
    nerve = CoverNerve.torus(2)
    forms = {}
    for s in nerve.simplices(0):
        forms[s] = Form(nerve.chart(s), 1, {(j,): as_scalar(theta_a[j]) for j in range(2)})
    for s in nerve.simplices(1):
        w = nerve.winding(*s)
        val = -sum((as_scalar(theta_g[j]) * w[j] for j in range(2)), ZERO)
        forms[s] = Form.function(CoefFn.constant(nerve.chart(s), val))
    return Cochain(nerve, 1, 1, forms, {})


def random_gauge(r, c: Cochain, band: int = 2, max_deg: int = 1) -> Cochain:
    """c + D b for a seeded random degree-(m-1) cochain b."""
    nerve = c.nerve
    forms = {}
    for s in nerve.simplices(0):
        chart = nerve.chart(s)
        f = random_coeffn(r, chart, max_deg=max_deg, max_mode=band, nterms=2, exact_scalars=True)
        forms[s] = Form.function(f)
    ints = {s: r.randint(-2, 2) for s in nerve.simplices(1)}
    b = Cochain(nerve, c.level, 0, forms, ints)
    return c + total_differential(b)


def automorphisms(nerve: CoverNerve, level: int = 1, band: int = 1, cap: int = 1) -> dict:
    """Solutions of D f = 0 for functions f on the patches, within the band.

    Integers do not enter: D f = 0 forces the transition integers to vanish.
    """
    cols = []
    images = []
    for s in nerve.simplices(0):
        chart = nerve.chart(s)
        for k in itertools.product(range(-band, band + 1), repeat=nerve.dim):
            for b in _ansatz_monomials(chart, k, cap):
                unit = Form.function(CoefFn.monomial(chart, b, k))
                cols.append((s, unit))
                images.append(total_differential(Cochain(nerve, level, 0, {s: unit}, None)))
    row_of: dict = {}
    rows: list = []
    for ci, img in enumerate(images):
        for sigma, a in img.forms.items():
            for idx, f in a:
                for key, v in f:
                    r = row_of.setdefault((sigma, idx, key), len(rows))
                    if r == len(rows):
                        rows.append({})
                    rows[r][ci] = v
    basis = linalg.nullspace(rows, len(cols))
    rendered = []
    constants = True
    for vec in basis:
        by_patch: dict = {}
        for (s, unit), c in zip(cols, vec):
            if c:
                by_patch[s] = by_patch[s] + unit * c if s in by_patch else unit * c
        values = {a.as_function().constant_value() if a.is_constant() else None
                  for a in by_patch.values()}
        constants &= len(by_patch) == len(nerve.simplices(0)) and None not in values and len(values) == 1
        rendered.append({",".join(map(str, s)): a.render() for s, a in sorted(by_patch.items())})
    return {"dimension": len(basis), "basis": rendered, "all_constant": constants,
            "group": "R/Z (constants modulo integers)" if len(basis) == 1 and constants else "other"}


def _classify(cocycles, labels, band: int):
    pairs = []
    ok = True
    for i, j in itertools.combinations(range(len(cocycles)), 2):
        res = gauge_reduce(cocycles[i], cocycles[j], band=band)
        same = labels[i] == labels[j]
        agree = res.equivalent == same
        ok &= agree and (same or res.outcome == "obstructed")
        pairs.append({"i": i, "j": j, "outcome": res.outcome, "same_holonomy": same,
                      "consistent": agree})
    return ok, pairs


def flat_moduli(nerve: CoverNerve, level: int = 1, band: int = 2, seed: int = 0,
                samples: int | None = None) -> dict:
    """Seeded flat cocycles, their holonomy labels, and pairwise gauge classes."""
    if level != 1:
        raise DegreeMismatch("flat moduli are enumerated for level 1")
    r = rng(seed)
    if _is_circle(nerve):
        count = samples or 12
        # six holonomy values, each realized twice in different ways
        values = [Fraction(0), Fraction(1, 3), Fraction(1, 4), Fraction(1, 2),
                  Fraction(2, 3), Fraction(3, 4)]
        cocycles, labels, rows = [], [], []
        for n in range(count):
            hol = values[n % len(values)]
            theta_a = Fraction(r.randint(-6, 6), r.choice((2, 3, 4, 6)))
            theta_g = hol - theta_a + r.randint(-1, 1)
            c = random_gauge(r, flat_circle_cocycle(theta_a, theta_g), band=band)
            h = holonomy(c)
            cocycles.append(c)
            labels.append(h)
            rows.append({"index": n, "theta_connection": str(theta_a),
                         "theta_transition": str(theta_g), "holonomy": h.render()})
    elif nerve.kind == "torus" and nerve.dim == 2:
        count = samples or 6
        values = [(Fraction(0), Fraction(0)), (Fraction(1, 3), Fraction(1, 2)),
                  (Fraction(1, 4), Fraction(0))]
        cocycles, labels, rows = [], [], []
        for n in range(count):
            hol = values[n % len(values)]
            ta = [Fraction(r.randint(-4, 4), r.choice((2, 3, 4))) for _ in range(2)]
            tg = [hol[j] - ta[j] + r.randint(-1, 1) for j in range(2)]
            c = random_gauge(r, flat_torus_cocycle(ta, tg), band=min(band, 1))
            h = tuple(cycle_holonomies(c))
            cocycles.append(c)
            labels.append(h)
            rows.append({"index": n, "holonomy": [x.render() for x in h]})
    else:
        raise NerveMismatch("flat moduli are enumerated on the circle and T^2 nerves")
    for c in cocycles:
        if not is_cocycle(c).ok:
            raise NotACocycle("sample is not a cocycle")
    flat = all(gauge_invariants(c).get("curvature") == "0" for c in cocycles)
    regauged = [random_gauge(r, c, band=min(band, 1) if nerve.dim > 1 else band) for c in cocycles]
    invariant = all(cycle_holonomies(c2) == cycle_holonomies(c) for c, c2 in zip(cocycles, regauged))
    additive = all(
        cycle_holonomies(cocycles[i] + cocycles[i + 1])
        == [mod_one(a + b) for a, b in zip(cycle_holonomies(cocycles[i]), cycle_holonomies(cocycles[i + 1]))]
        for i in range(len(cocycles) - 1))
    ok, pairs = _classify(cocycles, labels, band)
    classes: dict = {}
    for n, lab in enumerate(labels):
        key = lab.render() if isinstance(lab, Scalar) else "(" + ", ".join(x.render() for x in lab) + ")"
        classes.setdefault(key, []).append(n)
    return {
        "nerve": nerve.describe(),
        "level": level,
        "band": band,
        "seed": seed,
        "samples": rows,
        "classes": {k: v for k, v in sorted(classes.items())},
        "pairs": pairs,
        "all_flat": flat,
        "holonomy_gauge_invariant": invariant,
        "holonomy_additive": additive,
        "classification_matches_holonomy": ok,
        "automorphisms": automorphisms(nerve, level, band=1),
    }
