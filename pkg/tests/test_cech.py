from fractions import Fraction
import random

import pytest
from hypothesis import given, strategies as st

from higher_prequantum.cech import (
    Cochain, CoverNerve, curvature, is_cocycle, lift_global, total_differential, zero_cochain,
)
from higher_prequantum.cech.dglie import (
    SemidirectElement, compare_models, dg_lie_bracket, dg_lie_differential, dglie_membership,
    r3_corpus,
)
from higher_prequantum.cech.prequant import (
    automorphisms, cycle_holonomies, flat_circle_cocycle, flat_moduli, flat_torus_cocycle,
    gauge_reduce, holonomy, is_integral, mod_one, prequantize_torus, random_gauge,
)
from higher_prequantum.errors import (
    DegreeMismatch, NerveMismatch, NotACocycle, NotAPrimitive, NotIntegral,
)
from higher_prequantum.exterior import Chart, CoefFn, Form, MultiVector, Scalar, d
from higher_prequantum.exterior.grammar import parse_form, parse_multivector
from higher_prequantum.exterior.randomgen import random_form, random_vector_field, rng

S1 = CoverNerve.circle()
T2 = CoverNerve.torus(2)
R3 = Chart.euclidean(3)
R3_COVER = CoverNerve.trivial(R3)


def random_cochain(r, nerve, level, degree, deligne=True):
    forms = {}
    for q in range(degree + 1):
        p = degree - q
        if not 0 <= p <= min(level, nerve.dim):
            continue
        for sigma in nerve.simplices(q):
            if r.random() < 0.5:
                forms[sigma] = random_form(r, nerve.chart(sigma), p, max_deg=1, max_mode=1,
                                           nterms=2, exact_scalars=True)
    ints = None
    if deligne:
        ints = {s: r.randint(-2, 2) for s in nerve.simplices(degree + 1)}
    return Cochain(nerve, level, degree, forms, ints)


def constant_function(nerve, sigma, value):
    return Form.function(CoefFn.constant(nerve.chart(sigma), value))


# -- total differential ---------------------------------------------------------

@given(st.integers(0, 10**6), st.sampled_from(["circle", "torus2"]), st.integers(0, 3),
       st.integers(1, 2))
def test_total_differential_squares_to_zero(seed, kind, degree, level):
    nerve = S1 if kind == "circle" else T2
    c = random_cochain(random.Random(seed), nerve, level, degree)
    assert total_differential(total_differential(c)).is_zero()


def test_constant_bottom_is_flat():
    c = Cochain(S1, 1, 0, {s: constant_function(S1, s, Fraction(1, 2)) for s in S1.simplices(0)}, {})
    assert total_differential(c).is_zero()
    assert is_cocycle(c).ok


def test_global_closed_one_form_is_a_cocycle():
    theta = Fraction(2, 7)
    c = lift_global(S1, Form(S1.manifold, 1, {(0,): Scalar(theta)}), 1)
    assert total_differential(c).is_zero()
    assert is_cocycle(c).ok


def test_single_patch_coordinate():
    chart = S1.chart((0,))
    c = Cochain(S1, 1, 0, {(0,): Form.function(CoefFn.coordinate(chart, 0))}, {})
    dc = total_differential(c)
    assert dc.component((0,)) == Form(chart, 1, {(0,): Scalar(1)})
    assert set(dc.forms) == {(0,), (0, 1), (0, 2)}
    assert not is_cocycle(c).ok


def test_integer_constant_residual_is_absorbed():
    c = flat_circle_cocycle(0, 1)
    check = is_cocycle(c)
    assert check.ok


def test_cochain_json_round_trip():
    c = prequantize_torus(2)
    assert Cochain.from_json(c.to_json()) == c


def test_cochain_degree_validation():
    with pytest.raises(DegreeMismatch):
        Cochain(S1, 1, 0, {(0, 1): Form(S1.chart((0, 1)), 1, {(0,): Scalar(1)})}, None)


def test_deligne_cochain_scales_only_by_integers():
    c = prequantize_torus(1)
    assert c.scale(3) == prequantize_torus(3)
    with pytest.raises(ValueError):
        c.scale(Fraction(1, 2))


# -- prequantization and curvature ------------------------------------------------

@pytest.mark.parametrize("k", [0, 1, 2, 5])
def test_prequantize_torus(k):
    c = prequantize_torus(k)
    assert is_cocycle(c).ok
    target = Form(T2.manifold, 2, {(0, 1): Scalar(k)})
    assert curvature(c) == target
    assert is_integral(curvature(c)).integral
    if k == 0:
        assert c.is_zero()


def test_prequantize_rejects_half():
    with pytest.raises(NotIntegral):
        prequantize_torus(Fraction(1, 2))


def test_curvature_examples():
    assert curvature(zero_cochain(T2, 1, 1)).is_zero()
    assert curvature(flat_circle_cocycle(Fraction(1, 3), 0)).is_zero()
    with pytest.raises(NotACocycle):
        curvature(Cochain(S1, 1, 1, {(0,): Form(S1.chart((0,)), 1, {(0,): Scalar(1)})}, {}))


@given(st.integers(0, 10**6), st.integers(-3, 3))
def test_curvature_is_gauge_invariant(seed, k):
    c = prequantize_torus(k)
    assert curvature(random_gauge(rng(seed), c, band=1)) == curvature(c)


def test_is_integral_examples():
    torus = T2.manifold
    three = is_integral(Form(torus, 2, {(0, 1): Scalar(3)}))
    assert three.integral and three.periods == {(0, 1): Scalar(3)}
    assert not is_integral(Form(torus, 2, {(0, 1): Scalar(Fraction(1, 2))})).integral
    wavy = CoefFn.constant(torus, 1) + CoefFn.monomial(torus, (0, 0), (1, 0))
    out = is_integral(Form(torus, 2, {(0, 1): wavy}))
    assert out.integral and out.periods == {(0, 1): Scalar(1)}


# -- holonomy ---------------------------------------------------------------------

def test_holonomy_examples():
    assert holonomy(zero_cochain(S1, 1, 1)) == 0
    assert holonomy(flat_circle_cocycle(Fraction(1, 3), 0)) == Scalar(Fraction(1, 3))
    assert holonomy(flat_circle_cocycle(Fraction(5, 3), 0)) == Scalar(Fraction(2, 3))
    assert holonomy(flat_circle_cocycle(0, Fraction(1, 3))) == Scalar(Fraction(1, 3))


def test_holonomy_rejects_wrong_nerve():
    with pytest.raises(NerveMismatch):
        holonomy(prequantize_torus(1))


def test_mod_one():
    assert mod_one(Scalar(Fraction(-1, 4))) == Scalar(Fraction(3, 4))


@given(st.integers(0, 10**6), st.fractions(-3, 3, max_denominator=6),
       st.fractions(-3, 3, max_denominator=6))
def test_holonomy_gauge_invariant_and_additive(seed, a, g):
    r = rng(seed)
    c1 = flat_circle_cocycle(a, g)
    c2 = flat_circle_cocycle(g, a / 2)
    assert holonomy(random_gauge(r, c1, band=2)) == holonomy(c1) == mod_one(Scalar(a + g))
    assert holonomy(c1 + c2) == mod_one(holonomy(c1) + holonomy(c2))


def test_torus_cycle_holonomies():
    c = flat_torus_cocycle([Fraction(1, 3), 0], [0, Fraction(1, 2)])
    assert cycle_holonomies(c) == [Scalar(Fraction(1, 3)), Scalar(Fraction(1, 2))]


# -- gauge equivalence -------------------------------------------------------------

def test_gauge_reduce_self():
    c = prequantize_torus(1)
    res = gauge_reduce(c, c)
    assert res.equivalent and res.witness.is_zero()


def test_gauge_reduce_same_holonomy_different_realization():
    c1 = flat_circle_cocycle(Fraction(1, 3), 0)
    c2 = flat_circle_cocycle(0, Fraction(1, 3))
    res = gauge_reduce(c1, c2, band=2)
    assert res.equivalent
    assert total_differential(res.witness) == c1 - c2


def test_gauge_reduce_holonomy_obstruction():
    res = gauge_reduce(flat_circle_cocycle(Fraction(1, 3), 0), flat_circle_cocycle(Fraction(1, 4), 0))
    assert res.outcome == "obstructed" and not res.equivalent
    assert "holonomy" in res.reason


def test_gauge_reduce_band_too_small():
    c = flat_circle_cocycle(0, 0)
    b = Cochain(S1, 1, 0, {s: Form.function(CoefFn.monomial(S1.chart(s), (0,), (2,)))
                           for s in S1.simplices(0)}, {})
    shifted = c + total_differential(b)
    assert gauge_reduce(c, shifted, band=1).outcome == "no_witness_in_band"
    assert gauge_reduce(c, shifted, band=2).equivalent


@given(st.integers(0, 10**6))
def test_gauge_reduce_finds_random_gauges(seed):
    c = prequantize_torus(1)
    other = random_gauge(rng(seed), c, band=1)
    res = gauge_reduce(other, c, band=1)
    assert res.equivalent
    assert total_differential(res.witness) == other - c


# -- flat moduli -------------------------------------------------------------------

def test_flat_moduli_circle():
    rep = flat_moduli(S1, band=2, seed=0)
    assert len(rep["samples"]) == 12
    assert rep["all_flat"] and rep["holonomy_gauge_invariant"] and rep["holonomy_additive"]
    assert rep["classification_matches_holonomy"]
    assert len(rep["classes"]) == 6
    same = [p for p in rep["pairs"] if p["same_holonomy"]]
    assert same and all(p["outcome"] == "equivalent" for p in same)
    assert all(p["outcome"] == "obstructed" for p in rep["pairs"] if not p["same_holonomy"])


def test_flat_moduli_torus_labels_are_holonomy_pairs():
    rep = flat_moduli(T2, band=1, seed=1, samples=6)
    assert rep["classification_matches_holonomy"]
    assert set(rep["classes"]) == {"(0, 0)", "(1/3, 1/2)", "(1/4, 0)"}


def test_automorphisms_are_constants():
    out = automorphisms(S1)
    assert out["dimension"] == 1 and out["all_constant"]
    assert automorphisms(T2)["all_constant"]


# -- dg-Lie model -----------------------------------------------------------------

def element(nerve, n, v_text, b_text, chart=R3):
    v = parse_multivector(v_text, chart) if v_text else None
    b = parse_form(b_text, chart, n - 1)
    return SemidirectElement.on_patch(nerve, n, v, b)


def test_constant_fields_commute_on_torus():
    T3 = Chart.torus(3)
    cover = CoverNerve.trivial(T3)
    x = element(cover, 2, "Dx0", "0", T3)
    y = element(cover, 2, "Dx1", "0", T3)
    assert dg_lie_bracket(x, y).is_zero()


def test_bracket_lie_derivative_example():
    x = element(R3_COVER, 2, "Dx0", "x1*dx2")
    assert dg_lie_bracket(x, SemidirectElement.zero(R3_COVER, 2)).is_zero()
    out = dg_lie_bracket(x, element(R3_COVER, 2, "Dx1", "0"))
    assert out.v.is_zero()
    assert out.b.component((0,)) == parse_form("-dx2", R3)


def random_element(r, nerve, n, degree):
    chart = nerve.manifold
    v = random_vector_field(r, chart, max_deg=0, max_mode=1, nterms=2, exact_scalars=True) \
        if degree == 0 else None
    b = random_cochain(r, nerve, n, n - 1 - degree, deligne=False)
    return SemidirectElement(nerve, n, degree, v, b)


def br(x, y):
    out = dg_lie_bracket(x, y)
    if out is None:
        return SemidirectElement.zero(x.nerve, x.n, min(x.degree + y.degree, x.n - 1))
    return out


@given(st.integers(0, 10**6), st.sampled_from([(0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0)]))
def test_dg_lie_graded_jacobi(seed, degrees):
    r = random.Random(seed)
    x, y, z = (random_element(r, T2, 2, g) for g in degrees)
    lhs = br(x, br(y, z))
    sign = -1 if (x.degree * y.degree) % 2 else 1
    rhs = br(br(x, y), z) + br(y, br(x, z)).scale(sign)
    assert lhs == rhs


@given(st.integers(0, 10**6), st.sampled_from([(1, 0), (0, 1), (1, 1)]))
def test_dg_lie_differential_is_a_derivation(seed, degrees):
    r = random.Random(seed)
    x, y = (random_element(r, T2, 2, g) for g in degrees)

    def diff(e):
        out = dg_lie_differential(e) if e is not None else None
        return out

    bracket = dg_lie_bracket(x, y)
    lhs = diff(bracket) if bracket is not None else None
    dx, dy = diff(x), diff(y)
    parts = []
    if dx is not None:
        parts.append(br(dx, y))
    if dy is not None:
        term = br(x, dy)
        parts.append(term if x.degree % 2 == 0 else -term)
    if lhs is None:
        assert all(p.is_zero() for p in parts)
        return
    rhs = parts[0]
    for p in parts[1:]:
        rhs = rhs + p
    assert lhs == rhs


@given(st.integers(0, 10**6))
def test_dg_lie_differential_squares_to_zero(seed):
    r = random.Random(seed)
    e = random_element(r, T2, 3, 2)
    once = dg_lie_differential(e)
    assert dg_lie_differential(once).b.is_zero()


def test_bracket_is_graded_antisymmetric():
    r = random.Random(4)
    x, y = random_element(r, T2, 2, 0), random_element(r, T2, 2, 1)
    assert dg_lie_bracket(x, y) == -dg_lie_bracket(y, x)


def test_membership_examples():
    A, _, _ = r3_corpus()
    assert dglie_membership(A, SemidirectElement.zero(R3_COVER, 2)).member
    assert dglie_membership(A, element(R3_COVER, 2, "Dx0", "x1*dx2")).member
    res = dglie_membership(A, element(R3_COVER, 2, "Dx0", "0"))
    assert not res.member
    assert res.residual.component((0,)) == parse_form("dx1^dx2", R3)


def test_membership_closed_under_bracket():
    A, _, members = r3_corpus()
    for x in members:
        for y in members:
            assert dglie_membership(A, dg_lie_bracket(x, y)).member


def test_compare_models_on_corpus():
    A, fields, members = r3_corpus()
    assert len(members) == 6
    out = compare_models(A, members, omega=parse_form("dx0^dx1^dx2", R3))
    assert out["all_hamiltonian"] and out["all_exact"]
    assert len(out["defects"]) == 15
    for row in out["defects"]:
        prim = parse_form(row["primitive"], R3, 0)
        assert d(prim) == parse_form(row["defect"], R3, 1)


def test_compare_models_zero_member():
    A, _, members = r3_corpus()
    out = compare_models(A, [members[3], SemidirectElement.zero(R3_COVER, 2)])
    assert out["defects"][0]["defect"] == "0"


def test_compare_models_rejects_wrong_primitive():
    A, _, members = r3_corpus()
    with pytest.raises(NotAPrimitive):
        compare_models(A, members, omega=parse_form("2*dx0^dx1^dx2", R3))


def test_element_degree_rules():
    with pytest.raises(DegreeMismatch):
        SemidirectElement(R3_COVER, 2, 1, parse_multivector("Dx0", R3))
    assert isinstance(SemidirectElement.zero(R3_COVER, 2).v, MultiVector)
