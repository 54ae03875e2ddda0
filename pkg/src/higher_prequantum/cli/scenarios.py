"""Named, seeded experiments; each returns a Report with embedded assertions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .. import conventions
from ..cech import CoverNerve, Cochain, curvature, is_cocycle, total_differential
from ..cech.dglie import (
    SemidirectElement, compare_models, dg_lie_bracket, dglie_membership, r3_corpus,
)
from ..cech.prequant import (
    flat_moduli, is_integral, prequantize_torus, random_gauge,
)
from ..errors import InvalidOverride, NotIntegral, UnknownScenario
from ..exterior import Chart, CoefFn, Form, MultiVector
from ..exterior.grammar import parse_form, parse_multivector
from ..exterior.identities import identity_suite
from ..exterior.randomgen import random_form, random_polynomial, rng
from ..linfinity import (
    LieCocycle, abelian, invariant_three_form, string_extension, su2, verify_l_infinity,
)
from ..nplectic import (
    Observable, PreNPlectic, dw_check, jacobi_report, kernel_complex, l_infty_bracket,
    solve_hamiltonian,
)
from .report import Report


@dataclass(frozen=True)
class Scenario:
    name: str
    summary: str
    topic: str
    run: Callable
    defaults: dict = field(default_factory=dict)
    choices: dict = field(default_factory=dict)

    def params(self, overrides: dict) -> dict:
        out = dict(self.defaults)
        for key, raw in overrides.items():
            if key not in self.defaults:
                raise InvalidOverride(f"{self.name} has no parameter {key!r}; "
                                      f"known: {', '.join(sorted(self.defaults)) or 'none'}")
            out[key] = _coerce(key, raw, self.defaults[key], self.choices.get(key))
        return out


def _coerce(key, raw, default, choices):
    if not isinstance(raw, str):
        value = raw
    else:
        try:
            if isinstance(default, bool):
                if raw.lower() not in ("0", "1", "true", "false"):
                    raise ValueError(raw)
                value = raw.lower() in ("1", "true")
            elif isinstance(default, int):
                value = int(raw)
            elif isinstance(default, Fraction):
                value = Fraction(raw)
            else:
                value = raw
        except (ValueError, ZeroDivisionError):
            raise InvalidOverride(f"{key}={raw!r} is not a valid {type(default).__name__}") from None
    if choices is not None and value not in choices:
        raise InvalidOverride(f"{key} must be one of {', '.join(map(str, choices))}")
    if isinstance(value, int) and not isinstance(value, bool) and value < 0:
        raise InvalidOverride(f"{key} must be non-negative")
    return value


_CONV = {"contraction": conventions.CONTRACTIONS, "jacobi": conventions.JACOBI_SIGNS}


# ---------------------------------------------------------------------------
# scenario bodies
# ---------------------------------------------------------------------------

def _classical(rep: Report, p: dict, seed: int):
    r = rng(seed)
    chart = Chart.euclidean(2)
    P = PreNPlectic(parse_form("dx0^dx1", chart), 1)
    pairs = []
    for _ in range(p["pairs"]):
        f = random_polynomial(r, chart, max_deg=p["degree"])
        g = random_polynomial(r, chart, max_deg=p["degree"])
        pairs.append((f, g))
    points = [(Fraction(r.randint(-9, 9), r.randint(1, 5)), Fraction(r.randint(-9, 9), r.randint(1, 5)))
              for _ in range(p["points"])]
    rows = []
    mismatches = 0
    for f, g in pairs:
        a, _ = solve_hamiltonian(P, Form.function(f))
        b, _ = solve_hamiltonian(P, Form.function(g))
        br = l_infty_bracket(P, [Observable(P, 0, a), Observable(P, 0, b)]).payload.h.as_function()
        classical = f.partial(0) * g.partial(1) - f.partial(1) * g.partial(0)
        bad = [pt for pt in points if br.value_at(pt) != classical.value_at(pt)]
        mismatches += len(bad) + (br != classical)
        rows.append({"f": f.render(), "g": g.render(), "bracket": br.render(),
                     "exact_match": br == classical, "points_mismatched": len(bad)})
    rep.add("samples", rows)
    rep.add("points", [[str(x) for x in pt] for pt in points])
    rep.check("classical bracket agrees at every sample point", mismatches == 0,
              f"{len(pairs)} pairs x {len(points)} points")
    elements = [Observable(P, 0, solve_hamiltonian(P, Form.function(f))[0]) for f, _ in pairs[:4]]
    jr = jacobi_report(P, elements, 3)
    rep.add("jacobi", {k: v for k, v in jr.items() if k != "residuals"})
    rep.check("Jacobi residuals vanish to arity 3", jr["all_zero"])


def _r3_elements(seed: int, pairs: int, functions: int, degree: int):
    r = rng(seed)
    chart = Chart.euclidean(3)
    P = PreNPlectic(parse_form("dx0^dx1^dx2", chart), 2)
    elements = []
    for _ in range(pairs):
        h = Form(chart, 1, {(j,): random_polynomial(r, chart, max_deg=degree, nterms=2)
                            for j in range(3) if r.random() < 0.7})
        elements.append(Observable(P, 0, solve_hamiltonian(P, h)[0]))
    for _ in range(functions):
        elements.append(Observable(P, 1, Form.function(random_polynomial(r, chart, max_deg=degree))))
    return P, elements


def _r3_jacobi(rep: Report, p: dict, seed: int):
    P, elements = _r3_elements(seed, p["pairs"], p["functions"], p["degree"])
    rep.add("elements", [e.render() for e in elements])
    jr = jacobi_report(P, elements, p["max_arity"])
    rep.add("jacobi", {k: v for k, v in jr.items() if k != "residuals"})
    rep.add("nonzero_residuals", [row for row in jr["residuals"] if not row["zero"]])
    rep.check(f"generalized Jacobi vanishes to arity {p['max_arity']}", jr["all_zero"])
    if p["sweep"]:
        sweep = []
        for c, j in itertools.product(conventions.CONTRACTIONS, conventions.JACOBI_SIGNS):
            with conventions.using(contraction=c, jacobi=j):
                _, els = _r3_elements(seed, p["pairs"], p["functions"], p["degree"])
                nplectic_ok = jacobi_report(P, els, min(p["max_arity"], 4))["all_zero"]
                string_ok = verify_l_infinity(
                    string_extension(su2(), invariant_three_form(su2())), 4)["all_zero"]
            sweep.append({"contraction": c, "jacobi": j, "nplectic_zero": nplectic_ok,
                          "string_zero": string_ok})
        rep.add("convention_sweep", sweep)
        active = conventions.current().as_dict()
        mine = [s for s in sweep if s["contraction"] == active["contraction"]
                and s["jacobi"] == active["jacobi"]]
        rep.check("the active flag also validates the string Lie 2-algebra",
                  bool(mine) and mine[0]["string_zero"])


def _string(rep: Report, p: dict, seed: int):
    g = su2()
    mu = invariant_three_form(g)
    ext = string_extension(g, mu)
    rep.add("algebra", ext.to_json())
    for shifted in (False, True):
        res = verify_l_infinity(ext, p["max_arity"], shifted=shifted)
        rep.add("verify_" + res["picture"], res)
        rep.check(f"L-infinity relations vanish ({res['picture']} picture)", res["all_zero"])
    l3 = ext.bracket([ext.basis("e1"), ext.basis("e2"), ext.basis("e3")])
    rep.add("l3(e1,e2,e3)", l3.render(ext.names))
    rep.check("l3(e1,e2,e3) = c", l3.render(ext.names) == "1*c")


def _heisenberg(rep: Report, p: dict, seed: int):
    g = abelian(["e1", "e2"])
    omega = LieCocycle(g, 2, {("e1", "e2"): 1})
    ext = string_extension(g, omega)
    rep.add("algebra", ext.to_json())
    br = ext.bracket([ext.basis("e1"), ext.basis("e2")])
    rep.add("[e1,e2]", br.render(ext.names))
    rep.check("[e1,e2] = c", br.render(ext.names) == "1*c")
    res = verify_l_infinity(ext, p["max_arity"])
    rep.add("verify", res)
    rep.check("Lie identities vanish", res["all_zero"])


def _prequant(rep: Report, p: dict, seed: int):
    k = p["k"]
    T2 = Chart.torus(2)
    target = Form(T2, 2, {(0, 1): CoefFn.constant(T2, k)})
    integ = is_integral(target)
    rep.add("k", str(k))
    rep.add("integrality", integ)
    if not rep.check("curvature k dx^dy has integral periods", integ.integral, integ.as_dict()["periods"]):
        try:
            prequantize_torus(k)
        except NotIntegral as exc:
            rep.add("prequantization", f"refused: {exc}")
        return
    c = prequantize_torus(k)
    check = is_cocycle(c)
    rep.add("cocycle", c.render())
    rep.check("prequantization is a Deligne cocycle", check.ok)
    F = curvature(c)
    rep.add("curvature", F)
    rep.check("curvature equals k dx^dy", F == target)
    r = rng(seed)
    c2 = random_gauge(r, c, band=p["band"])
    rep.check("curvature is gauge invariant", curvature(c2) == F)
    rep.check("curvature periods are integral", is_integral(F).integral)


def _flat(nerve_kind):
    def body(rep: Report, p: dict, seed: int):
        nerve = CoverNerve.circle() if nerve_kind == "s1" else CoverNerve.torus(2)
        res = flat_moduli(nerve, 1, band=p["band"], seed=seed, samples=p["samples"])
        rep.add("moduli", res)
        rep.check("gauge classes coincide with holonomy classes", res["classification_matches_holonomy"])
        rep.check("samples are flat", res["all_flat"])
        rep.check("holonomy is gauge invariant", res["holonomy_gauge_invariant"])
        rep.check("holonomy is additive", res["holonomy_additive"])
        aut = res["automorphisms"]
        rep.check("automorphisms are the constants", aut["dimension"] == 1 and aut["all_constant"])
    return body


def _dglie(rep: Report, p: dict, seed: int):
    A, fields, members = r3_corpus()
    rep.add("fields", fields)
    memb = [dglie_membership(A, m) for m in members]
    rep.check("every corpus element is a member", all(m.member for m in memb))
    closed = True
    for x, y in itertools.product(members, repeat=2):
        closed &= dglie_membership(A, dg_lie_bracket(x, y)).member
    rep.check("membership is closed under the bracket", closed)
    report = compare_models(A, members, extra=p["extra"])
    rep.add("comparison", report)
    rep.check("images are Hamiltonian pairs", report["all_hamiltonian"])
    rep.check("every bracket defect is exact", report["all_exact"])
    chart = A.nerve.manifold
    x = SemidirectElement.on_patch(A.nerve, 2, parse_multivector("Dx0", chart),
                                   parse_form("x1*dx2", chart))
    y = SemidirectElement.on_patch(A.nerve, 2, parse_multivector("Dx1", chart),
                                   Form.zero(chart, 1))
    br = dg_lie_bracket(x, y)
    rep.add("example_bracket", br.render())
    rep.check("[(Dx0, x1 dx2), (Dx1, 0)] = (0, -dx2)",
              br.v.is_zero() and br.b.component((0,)) == parse_form("-dx2", chart))
    bad = SemidirectElement.on_patch(A.nerve, 2, parse_multivector("Dx0", chart), Form.zero(chart, 1))
    res = dglie_membership(A, bad)
    rep.check("(Dx0, 0) is rejected with residual dx1^dx2",
              not res.member and res.residual.component((0,)) == parse_form("dx1^dx2", chart))


def _kernel(dim, ns):
    def body(rep: Report, p: dict, seed: int):
        rows = []
        for n in ns:
            for band in range(1, p["band"] + 1):
                kc = kernel_complex(Chart.torus(dim), n=n, band=band)
                rows.append(kc.as_dict())
                rep.check(f"T{dim} n={n} band={band}: Betti numbers are binomial",
                          kc.betti == kc.expected, kc.betti)
        rep.add("complexes", rows)
    return body


def _dw(rep: Report, p: dict, seed: int):
    chart = Chart.euclidean(3)
    P = PreNPlectic(parse_form("dx0^dx1^dx2", chart), 2)
    fields = [parse_multivector("Dx0", chart), parse_multivector("Dx1", chart)]
    good = dw_check(P, parse_form("x2", chart), fields)
    rep.add("solution", {"H": "x2", "fields": ["Dx0", "Dx1"], "rhs": good.rhs,
                         "residual": good.residual, "note": good.note})
    rep.check("dH matches the contraction for H = x2", good.holds)
    wrong = dw_check(P, parse_form("x2 + x0", chart), fields)
    rep.add("perturbed", {"H": "x2 + x0", "residual": wrong.residual})
    rep.check("a perturbed Hamiltonian is rejected", not wrong.holds)
    r = rng(seed)
    rows = []
    ok = True
    for _ in range(p["samples"]):
        f = random_polynomial(r, chart, max_deg=2)
        v = [MultiVector(chart, 1, {(j,): random_polynomial(r, chart, max_deg=1, nterms=2)
                                    for j in range(3)}) for _ in range(2)]
        res = dw_check(P, Form.function(f), v)
        ok &= res.holds == (P.contract(v) == _grad(f))
        rows.append({"H": f.render(), "holds": res.holds})
    rep.add("random", rows)
    rep.check("random cases agree with a direct gradient comparison", ok)


def _grad(f: CoefFn) -> Form:
    chart = f.chart
    return Form(chart, 1, {(j,): f.partial(j) for j in range(chart.dim)})


def _identities(rep: Report, p: dict, seed: int):
    res = identity_suite(seed, p["per_degree"], p["max_dim"])
    rep.add("suite", res)
    for name, slot in res["per_identity"].items():
        rep.check(f"{name} holds on every sample", slot["failed"] == 0, slot)


def _dtot(rep: Report, p: dict, seed: int):
    r = rng(seed)
    rows = []
    ok = True
    for label, nerve in (("S1", CoverNerve.circle()), ("T2", CoverNerve.torus(2))):
        for level in range(1, nerve.dim + 1):
            for m in range(4):
                for _ in range(p["trials"]):
                    forms = {}
                    for q in range(m + 1):
                        if 0 <= m - q <= min(level, nerve.dim):
                            for s in nerve.simplices(q):
                                if r.random() < 0.5:
                                    forms[s] = random_form(r, nerve.chart(s), m - q, 0.5,
                                                           max_deg=1, nterms=2)
                    ints = {s: r.randint(-2, 2) for s in nerve.simplices(m + 1) if r.random() < 0.3}
                    c = Cochain(nerve, level, m, forms, ints)
                    zero = total_differential(total_differential(c)).is_zero()
                    ok &= zero
                    rows.append({"nerve": label, "level": level, "degree": m, "zero": zero})
    rep.add("trials", rows)
    rep.check("D o D = 0 on every random cochain", ok)


SCENARIOS = {s.name: s for s in [
    Scenario("classical-poisson-r2", "binary bracket on (R^2, dx^dy) vs the classical formula",
             "classical limit of the higher Poisson bracket (n = 1)", _classical,
             {"pairs": 20, "points": 10, "degree": 3, "contraction": "first-inner",
              "jacobi": "shuffle"}, _CONV),
    Scenario("r3-volume-jacobi", "generalized Jacobi to arity 4 on (R^3, volume form)",
             "L-infinity algebra of observables of a 2-plectic manifold", _r3_jacobi,
             {"pairs": 4, "functions": 2, "degree": 2, "max_arity": 4, "sweep": True,
              "contraction": "first-inner", "jacobi": "shuffle"}, _CONV),
    Scenario("string-su2", "string Lie 2-algebra of su(2) verified to arity 4",
             "extension of a Lie algebra by its invariant 3-cocycle", _string,
             {"max_arity": 4, "jacobi": "shuffle"}, {"jacobi": conventions.JACOBI_SIGNS}),
    Scenario("heisenberg-r2", "Heisenberg extension of the abelian R^2",
             "central extension by a 2-cocycle", _heisenberg, {"max_arity": 3}),
    Scenario("torus-prequantization", "Deligne cocycle with curvature k dx^dy on T^2",
             "prequantization of an integral 2-form", _prequant,
             {"k": Fraction(1), "band": 1}),
    Scenario("flat-moduli-s1", "flat cocycles on S^1 classified by holonomy",
             "moduli of flat U(1) connections on the circle", _flat("s1"),
             {"band": 2, "samples": 12}),
    Scenario("flat-moduli-t2", "flat cocycles on T^2 labelled by cycle holonomies",
             "moduli of flat U(1) connections on the 2-torus", _flat("t2"),
             {"band": 1, "samples": 6}),
    Scenario("dglie-compare-r3", "strict dg-Lie model vs Hamiltonian pairs on R^3",
             "strict model of the higher Poisson bracket", _dglie, {"extra": 1}),
    Scenario("kernel-betti-t2", "kernel complex Betti numbers on T^2, n = 1, 2",
             "fiber of the higher Kostant-Souriau extension", _kernel(2, (1, 2)), {"band": 2}),
    Scenario("kernel-betti-t3", "kernel complex Betti numbers on T^3, n = 2",
             "fiber of the higher Kostant-Souriau extension", _kernel(3, (2,)), {"band": 2}),
    Scenario("dw-check-r3", "de Donder-Weyl equation on (R^3, volume form)",
             "localized equations of motion", _dw, {"samples": 5}),
    Scenario("exterior-identities", "d^2, Leibniz, Cartan, contraction and Lie identities",
             "graded exterior calculus", _identities, {"per_degree": 100, "max_dim": 4}),
    Scenario("deligne-dtot-random", "D o D = 0 on random Cech-Deligne cochains",
             "total differential of the Deligne complex", _dtot, {"trials": 2}),
]}


def list_scenarios() -> list:
    return [{"name": s.name, "summary": s.summary} for s in sorted(SCENARIOS.values(), key=lambda s: s.name)]


def run_scenario(name: str, overrides: dict | None = None, seed: int = 0) -> Report:
    if name not in SCENARIOS:
        raise UnknownScenario(name)
    sc = SCENARIOS[name]
    params = sc.params(overrides or {})
    conv = {k: params[k] for k in ("contraction", "jacobi") if k in params}
    rep = Report("scenario", name, topic=sc.topic, seed=seed,
                 parameters={k: str(v) if isinstance(v, Fraction) else v for k, v in sorted(params.items())})
    with conventions.using(**conv):
        rep.header["conventions"] = conventions.current().as_dict()
        sc.run(rep, params, seed)
    return rep
