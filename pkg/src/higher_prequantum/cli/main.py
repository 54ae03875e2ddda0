"""Command-line front end: ``hpq <command> ...``; exit codes 0 pass, 1 assertion failure, 2 usage."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from .. import conventions
from ..cech import Cochain, CoverNerve, curvature, is_cocycle
from ..cech.dglie import SemidirectElement, compare_models, dglie_membership, r3_corpus
from ..cech.prequant import (
    cycle_holonomies, flat_circle_cocycle, flat_moduli, flat_torus_cocycle, gauge_reduce,
    prequantize_torus,
)
from ..errors import HigherPrequantumError
from ..exterior import Chart, Form
from ..exterior.grammar import parse_form, parse_multivector
from ..linfinity import (
    LieCocycle, LInfinityData, abelian, invariant_three_form, is_cocycle as lie_is_cocycle,
    string_extension, su2, verify_l_infinity, verify_morphism,
)
from ..nplectic import (
    Observable, PreNPlectic, dw_check, jacobi_report, kernel_complex, ks_cocycle,
    l_infty_bracket, solve_hamiltonian,
)
from .report import Report, emit_report
from .scenarios import list_scenarios, run_scenario


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# input parsing
# ---------------------------------------------------------------------------

def parse_chart(text: str) -> Chart:
    """``R3`` (euclidean) or ``T2`` (torus)."""
    text = text.strip()
    if len(text) >= 2 and text[0] in "RT" and text[1:].isdigit():
        dim = int(text[1:])
        return Chart.euclidean(dim) if text[0] == "R" else Chart.torus(dim)
    raise UsageError(f"chart must look like R3 or T2, got {text!r}")


def _structure(args) -> PreNPlectic:
    chart = parse_chart(args.chart)
    omega = parse_form(args.omega, chart)
    return PreNPlectic(omega, omega.degree - 1)


def parse_observable(P: PreNPlectic, text: str) -> Observable:
    """``v=<field>; h=<form>``, ``h=<form>`` (field solved for), or a bare form."""
    chart = P.chart
    parts = {}
    if "=" in text:
        for chunk in text.split(";"):
            if not chunk.strip():
                continue
            key, _, val = chunk.partition("=")
            parts[key.strip()] = val.strip()
        if set(parts) - {"v", "h"} or "h" not in parts:
            raise UsageError(f"observable {text!r}: use 'v=...; h=...' or 'h=...'")
        h = parse_form(parts["h"], chart, P.n - 1)
        if "v" in parts:
            return Observable.pair(P, parse_multivector(parts["v"], chart, 1), h)
        return Observable(P, 0, solve_hamiltonian(P, h)[0])
    return Observable.form(P, parse_form(text, chart))


_ALGEBRAS = {
    "su2": su2,
    "string-su2": lambda: string_extension(su2(), invariant_three_form(su2())),
    "heisenberg-r2": lambda: string_extension(abelian(["e1", "e2"]),
                                              LieCocycle(abelian(["e1", "e2"]), 2, {("e1", "e2"): 1})),
    "abelian-r2": lambda: abelian(["e1", "e2"]),
}


def load_algebra(spec: str) -> LInfinityData:
    if spec in _ALGEBRAS:
        return _ALGEBRAS[spec]()
    path = Path(spec)
    if not path.exists():
        raise UsageError(f"unknown algebra {spec!r}; built-ins: {', '.join(sorted(_ALGEBRAS))}")
    return LInfinityData.from_json(json.loads(path.read_text()))


def parse_cochain_values(g: LInfinityData, degree: int, values) -> LieCocycle:
    """``e1,e2,e3=1`` entries; the invariant 3-form when none are given."""
    if not values:
        if degree != 3:
            raise UsageError("give --value entries for cochains of degree other than 3")
        return invariant_three_form(g)
    table = {}
    for item in values:
        key, _, val = item.partition("=")
        if not val:
            raise UsageError(f"cochain value {item!r} must look like e1,e2=1")
        table[tuple(x.strip() for x in key.split(","))] = Fraction(val.strip())
    return LieCocycle(g, degree, table)


def load_cochain(spec: str) -> Cochain:
    """``prequant:K``, ``flat-s1:A,G``, ``flat-t2:AX,AY,GX,GY`` or a JSON file."""
    kind, _, rest = spec.partition(":")
    nums = [Fraction(x) for x in rest.split(",")] if rest else []
    if kind == "prequant" and len(nums) == 1:
        return prequantize_torus(nums[0])
    if kind == "flat-s1" and len(nums) == 2:
        return flat_circle_cocycle(*nums)
    if kind == "flat-t2" and len(nums) == 4:
        return flat_torus_cocycle(nums[:2], nums[2:])
    path = Path(spec)
    if not path.exists():
        raise UsageError(f"cochain {spec!r}: expected prequant:K, flat-s1:A,G, flat-t2:AX,AY,GX,GY "
                         "or a JSON file")
    return Cochain.from_json(json.loads(path.read_text()))


def parse_nerve(text: str) -> CoverNerve:
    table = {"S1": CoverNerve.circle, "T1": CoverNerve.circle,
             "T2": lambda: CoverNerve.torus(2), "T3": lambda: CoverNerve.torus(3)}
    if text not in table:
        raise UsageError(f"nerve must be one of {', '.join(table)}")
    return table[text]()


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_bracket(args, rep: Report):
    P = _structure(args)
    obs = [parse_observable(P, t) for t in args.obs]
    rep.add("inputs", {"chart": P.chart.describe(), "omega": P.omega, "n": P.n,
                       "observables": [o.render() for o in obs]})
    out = l_infty_bracket(P, obs)
    rep.add("output", {"degree": out.degree, "value": out.render()})


def cmd_jacobi(args, rep: Report):
    P = _structure(args)
    obs = [parse_observable(P, t) for t in args.obs]
    rep.add("inputs", {"chart": P.chart.describe(), "omega": P.omega, "n": P.n,
                       "observables": [o.render() for o in obs]})
    res = jacobi_report(P, obs, args.max_arity)
    rep.add("report", res)
    rep.check("generalized Jacobi residuals vanish", res["all_zero"])


def cmd_ks(args, rep: Report):
    P = _structure(args)
    fields = [parse_multivector(t, P.chart, 1) for t in args.field]
    rep.add("inputs", {"chart": P.chart.describe(), "omega": P.omega,
                       "fields": [f.render() for f in fields]})
    rep.add("cocycle", ks_cocycle(P, fields))


def cmd_kernel(args, rep: Report):
    chart = parse_chart(args.chart)
    kc = kernel_complex(chart, n=args.n, band=args.band)
    rep.add("complex", kc.as_dict())
    rep.check("Betti numbers are binomial", kc.betti == kc.expected)


def cmd_dw(args, rep: Report):
    P = _structure(args)
    H = parse_form(args.hamiltonian, P.chart, 0)
    fields = [parse_multivector(t, P.chart, 1) for t in args.field]
    res = dw_check(P, H, fields)
    rep.add("inputs", {"omega": P.omega, "H": H, "fields": [f.render() for f in fields]})
    rep.add("rhs", res.rhs)
    rep.add("residual", res.residual)
    rep.add("note", res.note)
    rep.check("dH equals the contraction", res.holds)


def cmd_lverify(args, rep: Report):
    L = load_algebra(args.algebra)
    rep.add("algebra", L.to_json())
    res = verify_l_infinity(L, args.max_arity, shifted=args.shifted)
    rep.add("report", res)
    rep.check("L-infinity relations vanish", res["all_zero"])


def cmd_cocycle(args, rep: Report):
    g = load_algebra(args.algebra)
    mu = parse_cochain_values(g, args.degree, args.value)
    ok, res = lie_is_cocycle(g, mu)
    rep.add("is_cocycle", ok)
    rep.add("residual", {",".join(k): v for k, v in sorted(res.items())})


def cmd_extend(args, rep: Report):
    g = load_algebra(args.algebra)
    mu = parse_cochain_values(g, args.degree, args.value)
    ext = string_extension(g, mu, central=args.central)
    rep.add("algebra", ext.to_json())
    res = verify_l_infinity(ext, args.max_arity)
    rep.add("verify", res)
    rep.check("extension satisfies the L-infinity relations", res["all_zero"])


def cmd_morphism(args, rep: Report):
    data = json.loads(Path(args.file).read_text())
    src, dst = load_algebra(data["source"]), load_algebra(data["target"])
    comps = {}
    for entry in data["components"]:
        k = len(entry["inputs"])
        comps.setdefault(k, {})[tuple(entry["inputs"])] = {
            o["generator"]: Fraction(str(o["c"])) for o in entry["output"]}
    res = verify_morphism(comps, src, dst, args.max_arity)
    rep.add("report", res)
    rep.check("morphism relations vanish", res["all_zero"])


def cmd_deligne(args, rep: Report):
    action = args.action
    if action == "check":
        c = load_cochain(args.cochain)
        res = is_cocycle(c)
        rep.add("cochain", c.to_json())
        rep.add("check", res.as_dict())
        rep.check("cochain is a cocycle", res.ok)
    elif action == "curv":
        c = load_cochain(args.cochain)
        rep.add("curvature", curvature(c))
    elif action == "holonomy":
        c = load_cochain(args.cochain)
        rep.add("holonomy", [h.render() for h in cycle_holonomies(c)])
    elif action == "gauge":
        c1, c2 = load_cochain(args.cochain), load_cochain(args.other)
        res = gauge_reduce(c1, c2, band=args.band)
        rep.add("gauge", res.as_dict())
    elif action == "flat":
        res = flat_moduli(parse_nerve(args.nerve), 1, band=args.band, seed=args.seed)
        rep.add("moduli", res)
        rep.check("gauge classes coincide with holonomy classes",
                  res["classification_matches_holonomy"])
    elif action == "dglie":
        A, fields, members = r3_corpus()
        rows = []
        for f, m in zip(fields, members):
            res = dglie_membership(A, m)
            rows.append({"v": f, "b": m.b.component((0,)), "member": res.member})
        if args.field:
            chart = A.nerve.manifold
            e = SemidirectElement.on_patch(A.nerve, 2, parse_multivector(args.field, chart, 1),
                                           parse_form(args.b or "0", chart, 1))
            res = dglie_membership(A, e)
            rows.append({"v": args.field, "b": args.b or "0", "member": res.member,
                         "residual": res.as_dict()["residual"]})
        rep.add("A", A.component((0,)))
        rep.add("membership", rows)
    elif action == "compare":
        A, fields, members = r3_corpus()
        res = compare_models(A, members)
        rep.add("fields", fields)
        rep.add("comparison", res)
        rep.check("images are Hamiltonian pairs", res["all_hamiltonian"])
        rep.check("every defect is exact", res["all_exact"])


def cmd_scenario(args, rep_unused=None):
    if args.action == "list":
        sys.stdout.write(emit_report({"scenarios": list_scenarios()}).decode())
        return 0
    overrides = {}
    for item in args.set or []:
        key, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"--set expects key=value, got {item!r}")
        overrides[key.strip()] = val.strip()
    start = time.perf_counter()
    rep = run_scenario(args.name, overrides, seed=args.seed)
    if args.timing:
        rep.timing = {"seconds": round(time.perf_counter() - start, 3)}
    _write(rep, args.json)
    return rep.exit_code


# ---------------------------------------------------------------------------
# plumbing
# ---------------------------------------------------------------------------

def _write(rep: Report, path):
    data = emit_report(rep)
    if path:
        Path(path).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _default_seed() -> int:
    raw = os.environ.get("HPQ_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"HPQ_SEED must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hpq", description="Exact higher Poisson brackets, "
                                "L-infinity extensions and Cech-Deligne prequantization.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--json", metavar="PATH", help="write the report here instead of stdout")
        sp.add_argument("--timing", action="store_true", help="add wall-clock timing to the report")
        sp.add_argument("--contraction", choices=conventions.CONTRACTIONS, default="first-inner")
        sp.add_argument("--jacobi", choices=conventions.JACOBI_SIGNS, default="shuffle")
        return sp

    def structure(sp):
        sp.add_argument("--chart", default="R3", help="R<d> or T<d>")
        sp.add_argument("--omega", default="dx0^dx1^dx2", help="closed (n+1)-form")
        return sp

    sp = structure(common(sub.add_parser("bracket", help="evaluate one multibracket")))
    sp.add_argument("--obs", action="append", required=True,
                    help="'v=<field>; h=<form>', 'h=<form>' or a bare form; repeat per argument")
    sp.set_defaults(fn=cmd_bracket)

    sp = structure(common(sub.add_parser("jacobi", help="generalized Jacobi identities")))
    sp.add_argument("--obs", action="append", required=True)
    sp.add_argument("--max-arity", type=int, default=4)
    sp.set_defaults(fn=cmd_jacobi)

    sp = structure(common(sub.add_parser("ks", help="contraction cocycle on Hamiltonian fields")))
    sp.add_argument("--field", action="append", required=True)
    sp.set_defaults(fn=cmd_ks)

    sp = common(sub.add_parser("kernel", help="Betti numbers of the kernel complex on a torus"))
    sp.add_argument("--chart", default="T2")
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--band", type=int, default=1)
    sp.set_defaults(fn=cmd_kernel)

    sp = structure(common(sub.add_parser("dw", help="de Donder-Weyl equation check")))
    sp.add_argument("--hamiltonian", "-H", required=True)
    sp.add_argument("--field", action="append", required=True)
    sp.set_defaults(fn=cmd_dw)

    sp = common(sub.add_parser("lverify", help="verify an L-infinity algebra"))
    sp.add_argument("--algebra", default="string-su2", help="built-in name or JSON file")
    sp.add_argument("--max-arity", type=int, default=4)
    sp.add_argument("--shifted", action="store_true", help="use the suspended symmetric picture")
    sp.set_defaults(fn=cmd_lverify)

    for name, fn, helptext in (("cocycle", cmd_cocycle, "Chevalley-Eilenberg cocycle test"),
                               ("extend", cmd_extend, "extension by a cocycle")):
        sp = common(sub.add_parser(name, help=helptext))
        sp.add_argument("--algebra", default="su2")
        sp.add_argument("--degree", type=int, default=3)
        sp.add_argument("--value", action="append", help="e1,e2,e3=1 (repeat)")
        if name == "extend":
            sp.add_argument("--central", default="c")
            sp.add_argument("--max-arity", type=int, default=4)
        sp.set_defaults(fn=fn)

    sp = common(sub.add_parser("morphism", help="verify an L-infinity morphism from a JSON file"))
    sp.add_argument("file")
    sp.add_argument("--max-arity", type=int, default=3)
    sp.set_defaults(fn=cmd_morphism)

    sp = common(sub.add_parser("deligne", help="Cech-Deligne computations"))
    sp.add_argument("action", choices=("check", "curv", "gauge", "holonomy", "flat", "dglie", "compare"))
    sp.add_argument("--cochain", default="prequant:1",
                    help="prequant:K, flat-s1:A,G, flat-t2:AX,AY,GX,GY or a JSON file")
    sp.add_argument("--other", help="second cochain for gauge")
    sp.add_argument("--nerve", default="S1")
    sp.add_argument("--band", type=int, default=2)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--field", help="vector field for an extra dglie membership test")
    sp.add_argument("--b", help="1-form paired with --field")
    sp.set_defaults(fn=cmd_deligne)

    sp = sub.add_parser("scenario", help="named reproducible experiments")
    ssub = sp.add_subparsers(dest="action", required=True)
    ssub.add_parser("list")
    run = ssub.add_parser("run")
    run.add_argument("name")
    run.add_argument("--set", action="append", metavar="KEY=VALUE")
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--json", metavar="PATH")
    run.add_argument("--timing", action="store_true")
    sp.set_defaults(fn=None)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "seed", None) is None and hasattr(args, "seed"):
            args.seed = _default_seed()
        if args.command == "scenario":
            return cmd_scenario(args)
        rep = Report("command", args.command if args.command != "deligne" else f"deligne-{args.action}")
        with conventions.using(contraction=args.contraction, jacobi=args.jacobi):
            rep.header["conventions"] = conventions.current().as_dict()
            start = time.perf_counter()
            args.fn(args, rep)
        if args.timing:
            rep.timing = {"seconds": round(time.perf_counter() - start, 3)}
        _write(rep, args.json)
        return rep.exit_code
    except (UsageError, HigherPrequantumError, ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"hpq: error: {type(exc).__name__}: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
