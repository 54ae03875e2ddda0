import itertools
import random

import pytest
import sympy
from hypothesis import given, strategies as st

from higher_prequantum import conventions
from higher_prequantum.errors import NotAComplex, NotACocycle
from higher_prequantum.exterior import Scalar
from higher_prequantum.linfinity import (
    LInfinityData, LieCocycle, abelian, invariant_three_form, is_cocycle, jacobi_residual,
    homology, lie_algebra, string_extension, su2, verify_l_infinity, verify_morphism,
)


def corrupted_su2():
    # an extra e1 term in [e1, e2] breaks Jacobi
    return lie_algebra(["e1", "e2", "e3"], {
        ("e1", "e2"): {"e3": 1, "e1": 1}, ("e2", "e3"): {"e1": 1}, ("e3", "e1"): {"e2": 1},
    })


def identity_components(L):
    return {1: {(g,): {g: 1} for g in L.names}}


# -- storage ------------------------------------------------------------------

@given(st.permutations([0, 1, 2]))
def test_skew_normalization_round_trips(perm):
    L = LInfinityData(["a", "b", "c", "z"], [0, 0, 0, 1], 3)
    L.set_bracket((0, 1, 2), {"z": 1})
    inversions = sum(1 for i in range(3) for j in range(i + 1, 3) if perm[i] > perm[j])
    got = L.bracket_basis(tuple(perm))
    assert got.terms == {3: Scalar(-1 if inversions % 2 else 1)}


def test_repeated_degree_zero_arguments_vanish():
    g = su2()
    assert g.bracket_basis((0, 0)).is_zero()


def test_json_round_trip():
    ext = string_extension(su2(), invariant_three_form(su2()))
    back = LInfinityData.from_json(ext.to_json())
    assert back.names == ext.names and back.degrees == ext.degrees
    assert back.brackets == ext.brackets


# -- relations ----------------------------------------------------------------

def test_su2_is_lie():
    rep = verify_l_infinity(su2(), 3)
    assert rep["all_zero"] and rep["per_arity"]["3"]["checked"] == 1


def test_abelian_shifted_line_passes():
    assert verify_l_infinity(abelian(["c"], [1]), 3)["all_zero"]


def test_corrupted_su2_fails_at_arity_three():
    rep = verify_l_infinity(corrupted_su2(), 3)
    assert not rep["all_zero"]
    assert {r["arity"] for r in rep["nonzero_residuals"]} == {3}


def test_single_sign_flip_of_su2_is_still_lie():
    flipped = lie_algebra(["e1", "e2", "e3"], {
        ("e1", "e2"): {"e3": -1}, ("e2", "e3"): {"e1": 1}, ("e3", "e1"): {"e2": 1},
    })
    assert verify_l_infinity(flipped, 3)["all_zero"]


def test_arity_three_residual_is_classical_jacobiator():
    g = corrupted_su2()
    for tup in itertools.combinations_with_replacement(range(3), 3):
        xs = [g.basis(t) for t in tup]
        br = lambda a, b: g.bracket([a, b])
        x, y, z = xs
        classical = br(br(x, y), z) + br(br(y, z), x) + br(br(z, x), y)
        res = jacobi_residual(g, tup)
        assert res == classical or res == -classical


def test_max_arity_bound():
    with pytest.raises(ValueError):
        verify_l_infinity(su2(), 5)


# -- cocycles -----------------------------------------------------------------

def test_invariant_three_form_is_cocycle():
    ok, res = is_cocycle(su2(), invariant_three_form(su2()))
    assert ok and res == {}


def test_abelian_two_cochain_is_cocycle():
    g = abelian(["e1", "e2"])
    assert is_cocycle(g, LieCocycle(g, 2, {("e1", "e2"): 5}))[0]


def test_su2_one_cochain_is_not_a_cocycle():
    g = su2()
    ok, res = is_cocycle(g, LieCocycle(g, 1, {("e1",): 1}))
    assert not ok
    assert res == {("e2", "e3"): Scalar(-1)}


def test_every_su2_two_cochain_is_a_cocycle():
    # d maps 2-cochains into the 3-cochains, all of which are closed in dimension 3
    g = su2()
    assert is_cocycle(g, LieCocycle(g, 2, {("e1", "e2"): 1}))[0]


def test_cochain_skewness():
    g = su2()
    mu = invariant_three_form(g)
    assert mu(("e1", "e2", "e3")) == 1
    assert mu(("e2", "e1", "e3")) == -1
    assert mu(("e1", "e1", "e3")) == 0


# -- extensions ---------------------------------------------------------------

def test_string_lie_two_algebra():
    ext = string_extension(su2(), invariant_three_form(su2()))
    assert ext.names == ["e1", "e2", "e3", "c"] and ext.degrees == [0, 0, 0, 1]
    l3 = ext.bracket([ext.basis("e1"), ext.basis("e2"), ext.basis("e3")])
    assert l3.terms == {3: Scalar(1)}
    assert verify_l_infinity(ext, 4)["all_zero"]
    assert verify_l_infinity(ext, 4, shifted=True)["all_zero"]


def test_heisenberg_extension():
    g = abelian(["e1", "e2"])
    ext = string_extension(g, LieCocycle(g, 2, {("e1", "e2"): 1}))
    assert ext.degrees == [0, 0, 0]
    assert ext.bracket([ext.basis("e1"), ext.basis("e2")]).terms == {2: Scalar(1)}
    assert verify_l_infinity(ext, 3)["all_zero"]


def test_zero_cocycle_gives_product():
    ext = string_extension(su2(), LieCocycle(su2(), 3, {}))
    assert 3 not in ext.brackets or not ext.brackets[3]
    assert verify_l_infinity(ext, 4)["all_zero"]


def test_extension_refuses_non_cocycle():
    g = su2()
    with pytest.raises(NotACocycle):
        string_extension(g, LieCocycle(g, 1, {("e1",): 1}))


@given(st.integers(0, 10**6))
def test_abelian_extensions_always_pass(seed):
    r = random.Random(seed)
    g = abelian(["a1", "a2", "a3"])
    vals = {tup: r.randint(-3, 3) for tup in itertools.combinations(g.names, 2)}
    ext = string_extension(g, LieCocycle(g, 2, vals))
    assert verify_l_infinity(ext, 3)["all_zero"]


@pytest.mark.parametrize("contraction,jacobi", list(itertools.product(
    conventions.CONTRACTIONS, conventions.JACOBI_SIGNS)))
def test_string_algebra_under_every_convention(contraction, jacobi):
    with conventions.using(contraction=contraction, jacobi=jacobi):
        ext = string_extension(su2(), invariant_three_form(su2()))
        assert verify_l_infinity(ext, 4)["all_zero"]


# -- morphisms ----------------------------------------------------------------

def test_identity_morphism():
    g = su2()
    assert verify_morphism(identity_components(g), g, g, 3)["all_zero"]


def test_projection_from_string_algebra():
    g = su2()
    ext = string_extension(g, invariant_three_form(g))
    comps = {1: {(e,): {e: 1} for e in g.names}}
    assert verify_morphism(comps, ext, g, 4)["all_zero"]


def test_scaling_one_generator_is_not_a_morphism():
    g = su2()
    comps = {1: {("e1",): {"e1": 2}, ("e2",): {"e2": 1}, ("e3",): {"e3": 1}}}
    rep = verify_morphism(comps, g, g, 2)
    assert not rep["all_zero"]
    assert {r["arity"] for r in rep["nonzero_residuals"]} == {2}


# -- homology -----------------------------------------------------------------

def test_homology_examples():
    assert homology([1], []) == [1]
    assert homology([1, 1], [[[1]]]) == [0, 0]


def test_fourier_circle_complex():
    # d on the band |k| <= 1: e_k -> i k e_k dx
    modes = [-1, 0, 1]
    mat = [[k if r == c else 0 for c, k in enumerate(modes)] for r in range(3)]
    assert homology([3, 3], [mat]) == [1, 1]


def test_homology_rejects_non_complex():
    with pytest.raises(NotAComplex):
        homology([1, 1, 1], [[[1]], [[1]]])


@given(st.integers(0, 10**6))
def test_homology_invariant_under_basis_permutation(seed):
    r = random.Random(seed)
    a = [[r.randint(-2, 2) for _ in range(3)] for _ in range(2)]
    # rows of the second map annihilate the image of the first
    null = sympy.Matrix(a).T.nullspace()
    b = [[int(x) for x in (v.T * sympy.ilcm(*[q.q for q in v]))] for v in null] or [[0, 0]]
    dims = [3, 2, len(b)]
    base = homology(dims, [a, b])
    p0, p1 = r.sample(range(3), 3), r.sample(range(2), 2)
    a_perm = [[a[i][j] for j in p0] for i in p1]
    b_perm = [[row[i] for i in p1] for row in b]
    assert homology(dims, [a_perm, b_perm]) == base
