from fractions import Fraction
import random

import pytest
import sympy
from hypothesis import given, strategies as st

from higher_prequantum.errors import (
    DegreeMismatch, NonConstantOmega, NotClosed, NotHamiltonian,
)
from higher_prequantum.exterior import Chart, Form, MultiVector, d
from higher_prequantum.exterior.grammar import parse_form, parse_multivector
from higher_prequantum.nplectic import (
    HamiltonianPair, Observable, PreNPlectic, arity_sign, check_pre_nplectic, dw_check,
    jacobi_report, kernel_complex, ks_cocycle, l_infty_bracket, nondegenerate_at,
    solve_hamiltonian,
)

R2, R3 = Chart.euclidean(2), Chart.euclidean(3)
SYMPLECTIC = PreNPlectic(parse_form("dx0^dx1", R2), 1)
VOLUME = PreNPlectic(parse_form("dx0^dx1^dx2", R3), 2)


def F(text, chart=R2, degree=None):
    return parse_form(text, chart, degree)


def V(text, chart=R2):
    return parse_multivector(text, chart)


def pair(P, h):
    return Observable(P, 0, solve_hamiltonian(P, h)[0])


# -- structures --------------------------------------------------------------

def test_pre_nplectic_validation():
    check_pre_nplectic(F("dx0^dx1"), 1)
    check_pre_nplectic(F("dx0^dx1^dx2", R3), 2)
    with pytest.raises(NotClosed):
        check_pre_nplectic(F("x0*dx1^dx2", R3), 1)
    with pytest.raises(DegreeMismatch):
        check_pre_nplectic(F("dx0^dx1"), 2)


def test_nondegeneracy():
    zero = (Fraction(0),) * 3
    assert nondegenerate_at(SYMPLECTIC, (Fraction(1, 3), Fraction(-2)))
    assert nondegenerate_at(VOLUME, zero)
    assert not nondegenerate_at(PreNPlectic(F("dx0^dx1", R3), 1), zero)


# -- Hamiltonian pairs -------------------------------------------------------

def test_solve_hamiltonian_examples():
    p, kernel = solve_hamiltonian(SYMPLECTIC, F("x0", degree=0))
    assert p.v == V("Dx1") and kernel == []
    p, _ = solve_hamiltonian(SYMPLECTIC, F("x1", degree=0))
    assert p.v == V("-Dx0")
    p, _ = solve_hamiltonian(VOLUME, F("-x1*dx2", R3))
    assert p.v == V("Dx0", R3)


def test_solve_hamiltonian_degenerate_kernel_and_failure():
    P = PreNPlectic(F("dx0^dx1", R3), 1)
    p, kernel = solve_hamiltonian(P, F("x0", R3, degree=0))
    assert kernel == [V("Dx2", R3)]
    with pytest.raises(NotHamiltonian):
        solve_hamiltonian(P, F("x2", R3, degree=0))


def test_solve_hamiltonian_rejects_non_constant_omega():
    P = PreNPlectic(F("(1+x0**2)*dx0^dx1"), 1)
    with pytest.raises(NonConstantOmega):
        solve_hamiltonian(P, F("x0", degree=0))


def test_pair_constructor_validates():
    with pytest.raises(NotHamiltonian):
        HamiltonianPair(SYMPLECTIC, V("Dx0"), F("x0", degree=0))


# -- brackets ----------------------------------------------------------------

def test_arity_signs():
    assert [arity_sign(k) for k in (3, 4, 5)] == [-1, -1, 1]


def test_binary_bracket_is_classical_poisson():
    x, y = pair(SYMPLECTIC, F("x0", degree=0)), pair(SYMPLECTIC, F("x1", degree=0))
    out = l_infty_bracket(SYMPLECTIC, [x, y])
    assert out.degree == 0
    assert out.payload.v.is_zero()
    assert out.payload.h == F("1", degree=0)


def test_ternary_bracket_on_coordinate_pairs():
    xs = [pair(VOLUME, F(t, R3)) for t in ("-x1*dx2", "-x2*dx0", "-x0*dx1")]
    assert [x.payload.v for x in xs] == [V("Dx0", R3), V("Dx1", R3), V("Dx2", R3)]
    out = l_infty_bracket(VOLUME, xs)
    assert out.degree == 1
    assert out.payload == F("-1", R3, degree=0)


def test_unary_bracket_edges():
    f = Observable(VOLUME, 1, F("x0*x1", R3, degree=0))
    out = l_infty_bracket(VOLUME, [f])
    assert out.degree == 0 and out.payload.v.is_zero()
    assert out.payload.h == F("x1*dx0 + x0*dx1", R3)
    assert l_infty_bracket(VOLUME, [out]).is_zero()


def test_mixed_degree_bracket_vanishes():
    x = pair(VOLUME, F("-x1*dx2", R3))
    f = Observable(VOLUME, 1, F("x0", R3, degree=0))
    assert l_infty_bracket(VOLUME, [x, f]).is_zero()


def test_bracket_arity_zero_rejected():
    with pytest.raises(ValueError):
        l_infty_bracket(VOLUME, [])


@given(st.integers(0, 10**6))
def test_binary_bracket_is_skew_and_bilinear(seed):
    r = random.Random(seed)

    def rand_h():
        return F(f"{r.randint(-3, 3)}*x0**2 + {r.randint(-3, 3)}*x0*x1 + {r.randint(-3, 3)}*x1",
                 degree=0)

    a, b, c = (pair(SYMPLECTIC, rand_h()) for _ in range(3))
    ab = l_infty_bracket(SYMPLECTIC, [a, b])
    assert ab == -l_infty_bracket(SYMPLECTIC, [b, a])
    lhs = l_infty_bracket(SYMPLECTIC, [a + c.scale(2), b])
    assert lhs == ab + l_infty_bracket(SYMPLECTIC, [c, b]).scale(2)


@given(st.integers(0, 10**6), st.permutations([0, 1, 2]))
def test_ternary_bracket_is_graded_skew(seed, perm):
    r = random.Random(seed)
    xs = []
    for _ in range(3):
        h = F(f"{r.randint(-2, 2)}*x1*dx2 + {r.randint(-2, 2)}*x2*dx0 + {r.randint(-2, 2)}*x0**2*dx1",
              R3, degree=1)
        xs.append(pair(VOLUME, h))
    base = l_infty_bracket(VOLUME, xs)
    inversions = sum(1 for i in range(3) for j in range(i + 1, 3) if perm[i] > perm[j])
    sign = -1 if inversions % 2 else 1
    permuted = l_infty_bracket(VOLUME, [xs[i] for i in perm])
    assert permuted == base.scale(sign)


def test_classical_bracket_against_sympy_oracle():
    x0, x1 = sympy.symbols("x0 x1")
    r = random.Random(7)
    for _ in range(5):
        f = sum(r.randint(-3, 3) * x0 ** i * x1 ** j for i in range(3) for j in range(3 - i))
        g = sum(r.randint(-3, 3) * x0 ** i * x1 ** j for i in range(3) for j in range(3 - i))
        a, b = pair(SYMPLECTIC, F(str(f), degree=0)), pair(SYMPLECTIC, F(str(g), degree=0))
        ours = l_infty_bracket(SYMPLECTIC, [a, b]).payload.h.as_function()
        oracle = sympy.expand(sympy.diff(f, x0) * sympy.diff(g, x1) - sympy.diff(f, x1) * sympy.diff(g, x0))
        for _ in range(10):
            pt = (Fraction(r.randint(-9, 9), r.randint(1, 4)), Fraction(r.randint(-9, 9), r.randint(1, 4)))
            want = oracle.subs({x0: sympy.Rational(pt[0]), x1: sympy.Rational(pt[1])})
            assert ours.value_at(pt).as_fraction() == Fraction(str(want))


# -- Jacobi -----------------------------------------------------------------

def test_jacobi_classical_coordinates():
    xs = [pair(SYMPLECTIC, F(t, degree=0)) for t in ("x0", "x1", "1")]
    rep = jacobi_report(SYMPLECTIC, xs, 2)
    assert rep["all_zero"] and rep["conventions"]["jacobi"] == "shuffle"


def test_jacobi_constant_fields_volume_to_arity_four():
    xs = [pair(VOLUME, F(t, R3)) for t in ("-x1*dx2", "-x2*dx0", "-x0*dx1")]
    assert jacobi_report(VOLUME, xs, 4)["all_zero"]


def test_jacobi_quadratic_pairs_volume_to_arity_four():
    texts = ("-x1*dx2 + x0*x1*dx0", "x0**2*dx1 - x2*dx0", "x1*x2*dx2 + x0*dx1")
    xs = [pair(VOLUME, F(t, R3)) for t in texts]
    xs.append(Observable(VOLUME, 1, F("x0*x2", R3, degree=0)))
    rep = jacobi_report(VOLUME, xs, 4)
    assert rep["all_zero"], [r for r in rep["residuals"] if not r["zero"]][:3]


def test_jacobi_report_arity_bound():
    with pytest.raises(ValueError):
        jacobi_report(VOLUME, [], 6)


# -- Kostant-Souriau ------------------------------------------------------------

def test_ks_cocycle_examples():
    assert ks_cocycle(SYMPLECTIC, [V("Dx1")]) == F("-dx0")
    assert ks_cocycle(VOLUME, [V("Dx0", R3), V("Dx1", R3)]) == F("dx2", R3)
    assert ks_cocycle(VOLUME, [V(f"Dx{j}", R3) for j in range(3)]) == F("1", R3, degree=0)


def test_ks_cocycle_rejects_non_hamiltonian_field():
    with pytest.raises(NotHamiltonian):
        ks_cocycle(SYMPLECTIC, [V("x0*Dx0")])


def test_ks_cocycle_matches_binary_bracket():
    a = pair(VOLUME, F("-x1*dx2 + x0**2*dx1", R3))
    b = pair(VOLUME, F("x1*x2*dx2 - x2*dx0", R3))
    br = l_infty_bracket(VOLUME, [a, b])
    assert ks_cocycle(VOLUME, [a.payload, b.payload]) == br.payload.h


@pytest.mark.parametrize("dim,n,band,expected", [
    (2, 1, 2, [1]),
    (2, 2, 2, [1, 2]),
    (3, 2, 1, [1, 3]),
    (2, 1, 1, [1]),
    (2, 2, 1, [1, 2]),
    (3, 2, 2, [1, 3]),
])
def test_kernel_complex_betti(dim, n, band, expected):
    out = kernel_complex(Chart.torus(dim), n, band).as_dict()
    assert out["betti"] == expected == out["expected_binomial"]
    assert out["match"]


def test_kernel_complex_from_structure_and_rejects_flat_space():
    T2 = Chart.torus(2)
    P = PreNPlectic(Form(T2, 2, {(0, 1): F("1", T2, degree=0).as_function()}), 1)
    assert kernel_complex(P, band=2).betti == [1]
    with pytest.raises(ValueError):
        kernel_complex(R2, 1, 1)


# -- de Donder-Weyl -------------------------------------------------------------

def test_dw_examples():
    dx, dy = V("Dx0", R3), V("Dx1", R3)
    ok = dw_check(VOLUME, F("x2", R3, degree=0), [dx, dy])
    assert ok.holds and ok.residual.is_zero() and "form component" in ok.note
    bad = dw_check(VOLUME, F("0", R3, degree=0), [dx, dy])
    assert not bad.holds and bad.residual == F("-dx2", R3)
    assert dw_check(SYMPLECTIC, F("-x0", degree=0), [V("Dx1")]).holds


def test_dw_arity_mismatch():
    with pytest.raises(ValueError):
        dw_check(VOLUME, F("x2", R3, degree=0), [V("Dx0", R3)])


def test_hamiltonian_invariant_after_bracket():
    a = pair(VOLUME, F("x0*x1*dx2", R3))
    b = pair(VOLUME, F("x2**2*dx0", R3))
    out = l_infty_bracket(VOLUME, [a, b]).payload
    assert (VOLUME.contract([out.v]) + d(out.h)).is_zero()
    assert isinstance(out.v, MultiVector)
