from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from higher_prequantum import conventions
from higher_prequantum.errors import BranchError, ChartMismatch, DegreeMismatch, ParseError
from higher_prequantum.exterior import (
    TAU, AffineMap, Chart, CoefFn, Form, I, MultiVector, Scalar, contract, d, evaluate,
    integrate_torus, lie_bracket, lie_derivative, pullback, vector_field, wedge,
)
from higher_prequantum.exterior import randomgen as rg
from higher_prequantum.exterior.grammar import parse_form, parse_multivector, parse_scalar
from higher_prequantum.exterior.primitive import find_primitive
from higher_prequantum.exterior.serialize import graded_from_json, scalar_from_json, to_json

R2, R3 = Chart.euclidean(2), Chart.euclidean(3)
S1, T2 = Chart.torus(1), Chart.torus(2)


def F(text, chart=R2, degree=None):
    return parse_form(text, chart, degree)


def V(text, chart=R2):
    return parse_multivector(text, chart)


# -- scalars ---------------------------------------------------------------

def test_scalar_laurent_identities():
    assert TAU * TAU.inverse() == 1
    assert (Scalar(Fraction(2, 4)) * TAU).render() == "1/2*tau^1"
    assert Scalar.gaussian(1, 2).render() == "(1+2*i)"
    assert Scalar(0).render() == "0"
    assert I * I == -1


def test_scalar_non_unit_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        (TAU + 1).inverse()


@given(st.integers(0, 10**6))
def test_scalar_ring_axioms(seed):
    r = rg.rng(seed)
    a, b, c = (rg.random_scalar(r) for _ in range(3))
    assert (a + b) * c == a * c + b * c
    assert a * (b * c) == (a * b) * c
    assert a - a == 0
    assert parse_scalar(a.render(expr=True)) == a


# -- wedge -----------------------------------------------------------------

def test_wedge_examples():
    w = wedge(F("dx0"), F("dx1"))
    assert w.items() == [((0, 1), CoefFn.constant(R2))]
    assert wedge(F("dx0"), F("dx0")).is_zero()
    assert wedge(F("x0*dx1"), F("x1*dx0")) == F("-x0*x1*dx0^dx1")


def test_wedge_against_antisymmetrization():
    # (a ^ b)(e_i, e_j) = a_i b_j - a_j b_i for 1-forms
    a, b = F("x0*dx1"), F("x1*dx0")
    comp = a.component((0,)) * b.component((1,)) - a.component((1,)) * b.component((0,))
    assert wedge(a, b).component((0, 1)) == comp


def test_wedge_chart_mismatch():
    with pytest.raises(ChartMismatch):
        wedge(F("dx0"), F("dx0", R3))


# -- d ---------------------------------------------------------------------

def test_d_examples():
    assert d(F("x0*dx1")) == F("dx0^dx1")
    assert d(F("E[1]", S1)) == F("i*tau*E[1]*dx0", S1)
    f = F("x0**2*x1 + x0*E[0,0]")
    assert d(d(f)).is_zero()


# -- contraction -------------------------------------------------------------

def test_contract_examples():
    assert contract(V("Dx0"), F("dx0^dx1")) == F("dx1")
    assert contract(V("Dx1"), F("dx0^dx1")) == F("-dx0")
    vol = F("dx0^dx1^dx2", R3)
    assert contract(V("Dx0^Dx1^Dx2", R3), vol) == F("1", R3)


def test_contract_iterates_single_slots():
    vol = F("dx0^dx1^dx2", R3)
    x, y, z = (V(f"Dx{j}", R3) for j in range(3))
    assert contract(wedge(wedge(x, y), z), vol) == contract(z, contract(y, contract(x, vol)))
    with conventions.using(contraction="last-inner"):
        assert contract(wedge(x, y), vol) == contract(x, contract(y, vol))


def test_contract_degree_mismatch():
    with pytest.raises(DegreeMismatch):
        contract(V("Dx0^Dx1"), F("dx0"))


# -- Lie operations ----------------------------------------------------------

def test_lie_bracket_examples():
    assert lie_bracket(V("Dx0"), V("Dx1")).is_zero()
    assert lie_bracket(V("x0*Dx1"), V("x1*Dx0")) == V("x0*Dx0 - x1*Dx1")
    v = V("(x0**2 + x1)*Dx0")
    assert lie_bracket(v, v).is_zero()


def test_lie_bracket_is_commutator_of_derivations():
    from higher_prequantum.exterior import apply_vector
    v, w = V("x0*Dx1"), V("x1*Dx0")
    for f in (CoefFn.coordinate(R2, 0), CoefFn.coordinate(R2, 1), parse_form("x0**2*x1", R2).as_function()):
        lhs = apply_vector(lie_bracket(v, w), f)
        assert lhs == apply_vector(v, apply_vector(w, f)) - apply_vector(w, apply_vector(v, f))


def test_lie_derivative_examples():
    assert lie_derivative(V("Dx0"), F("x0*dx1")) == F("dx1")
    assert lie_derivative(V("x0*Dx0"), F("dx0")) == F("dx0")


# -- pullback and integration ------------------------------------------------

def test_pullback_examples():
    src = Chart.patch([(0, 1)])
    tgt = Chart.patch([(1, 2)])
    phi = AffineMap.translation(src, tgt, [1])
    assert pullback(phi, parse_form("dx0", tgt)) == parse_form("dx0", src)
    src2, tgt2 = Chart.patch([(0, 1), (0, 1)]), Chart.patch([(1, 2), (0, 1)])
    phi2 = AffineMap.translation(src2, tgt2, [1, 0])
    assert pullback(phi2, parse_form("x0*dx1", tgt2)) == parse_form("(x0+1)*dx1", src2)
    f = parse_form("x0*x1", tgt2)
    assert pullback(phi2, d(f)) == d(pullback(phi2, f))


def test_pullback_breaking_fourier_mode():
    src, tgt = Chart.patch([(0, 1)]), Chart.patch([(0, 1)])
    phi = AffineMap.translation(src, tgt, [Fraction(1, 3)])
    with pytest.raises(BranchError):
        pullback(phi, parse_form("E[1]", tgt))


def test_integrate_torus_examples():
    assert integrate_torus(F("3*dx0^dx1", T2), (0, 1)) == 3
    assert integrate_torus(F("E[1,0]*dx0^dx1", T2), (0, 1)) == 0
    # the x-cycle sees only the dx component at y = 0
    assert integrate_torus(F("3*dx0 + E[0,2]*dx1", T2), (0,)) == 3
    with pytest.raises(ValueError):
        integrate_torus(F("dx0^dx1", R2), (0, 1))


def test_evaluate_examples():
    R1 = Chart.euclidean(1)
    assert evaluate(parse_form("x0**2", R1).as_function(), [Fraction(3, 2)]) == pytest.approx(9 / 4)
    assert evaluate(CoefFn.fourier(S1, [1]), [Fraction(1, 2)]) == pytest.approx(-1)
    assert CoefFn.fourier(S1, [1]).value_at([Fraction(1, 2)]) == -1
    vals = evaluate(F("(x0 + x1)*dx0^dx1"), [1, 2])
    assert vals[(0, 1)] == pytest.approx(3)


# -- grammar and serialization -----------------------------------------------

@pytest.mark.parametrize("text", ["dx0 dx1", "dx0^", "x7", "dx0*dx1", "dx0 + Dx0", "x0 + dx0"])
def test_parse_errors(text):
    with pytest.raises((ParseError, DegreeMismatch)):
        parse_form(text, R2) if "Dx" not in text else parse_multivector(text, R2)


@given(st.integers(0, 10**6), st.integers(1, 4))
def test_render_parse_json_roundtrip(seed, dim):
    r = rg.rng(seed)
    chart = rg.random_chart(r, dim)
    a = rg.random_form(r, chart, r.randint(0, dim))
    assert parse_form(a.render(), chart, a.degree) == a
    assert graded_from_json(to_json(a)) == a
    s = rg.random_scalar(r)
    assert scalar_from_json(to_json(s)) == s


# -- primitives --------------------------------------------------------------

def test_primitive_of_exact_forms():
    beta = F("dx1^dx2", R3)
    alpha = find_primitive(beta)
    assert d(alpha) == beta
    assert find_primitive(F("dx0^dx1", T2)) is None  # nonzero period
    osc = F("E[1,0]*dx0^dx1", T2)
    assert d(find_primitive(osc)) == osc


# -- identity suite ----------------------------------------------------------

def _iota(v, a):
    """Contraction with the convention that it kills functions (None)."""
    return None if a.degree == 0 else contract(v, a)


def _d(a):
    return None if a is None else d(a)


def _wedge(a, b):
    return None if a is None or b is None else wedge(a, b)


def _sum(*terms):
    terms = [t for t in terms if t is not None]
    return sum(terms[1:], terms[0])


@given(st.integers(0, 10**6), st.integers(1, 4))
def test_d_squared_and_leibniz(seed, dim):
    r = rg.rng(seed)
    chart = rg.random_chart(r, dim)
    a = rg.random_form(r, chart, r.randint(0, dim))
    b = rg.random_form(r, chart, r.randint(0, dim - a.degree))
    assert d(d(a)).is_zero()
    sign = -1 if a.degree % 2 else 1
    assert d(wedge(a, b)) == wedge(d(a), b) + wedge(a, d(b)) * sign


@given(st.integers(0, 10**6), st.integers(1, 4))
def test_contraction_identities(seed, dim):
    r = rg.rng(seed)
    chart = rg.random_chart(r, dim)
    v = rg.random_vector_field(r, chart)
    a = rg.random_form(r, chart, r.randint(1, dim))
    b = rg.random_form(r, chart, r.randint(0, dim - a.degree))
    if a.degree >= 2:
        assert contract(v, contract(v, a)).is_zero()
    sign = -1 if a.degree % 2 else 1
    rhs_b = _wedge(a, _iota(v, b))
    assert _iota(v, wedge(a, b)) == _sum(wedge(contract(v, a), b), rhs_b and rhs_b * sign)
    if dim >= 2 and a.degree >= 2:
        w = rg.random_vector_field(r, chart)
        assert contract(wedge(v, w), a) == -contract(wedge(w, v), a)


@given(st.integers(0, 10**6), st.integers(1, 4))
def test_cartan_and_lie_commutator(seed, dim):
    r = rg.rng(seed)
    chart = rg.random_chart(r, dim)
    v, w = rg.random_vector_field(r, chart), rg.random_vector_field(r, chart)
    a = rg.random_form(r, chart, r.randint(0, dim))
    cartan = _sum(_d(_iota(v, a)), _iota(v, d(a)) if a.degree < dim else None)
    assert lie_derivative(v, a) == cartan
    assert lie_derivative(v, d(a)) == d(lie_derivative(v, a))
    lhs = lie_derivative(v, lie_derivative(w, a)) - lie_derivative(w, lie_derivative(v, a))
    assert lhs == lie_derivative(lie_bracket(v, w), a)
