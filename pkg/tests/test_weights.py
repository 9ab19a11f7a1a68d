import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from kpsym.weights import (
    AlgebraSpec, affine_fold, affine_fold_e, alcove_labels, apply_C, apply_J, check_weight,
    enumerate_weights, expected_size, form, inner_product, o_count, omega, orbit, rho_e,
    rho_norm, rotate, simple_root, t_charge, to_e, from_e, vacuum, weyl_dimension)

A = AlgebraSpec.simple


@pytest.mark.parametrize("r,k,expected", [(1, 2, [((2, 0),), ((1, 1),), ((0, 2),)])])
def test_enumerate_small(r, k, expected):
    assert list(enumerate_weights(A(r, k))) == expected


@pytest.mark.parametrize("factors,n", [(((1, 2),), 3), (((2, 1),), 3), (((2, 3),), 10),
                                       (((1, 3), (2, 2)), 24), (((3, 2), (1, 1), (1, 4)), 100)])
def test_counts(factors, n):
    spec = AlgebraSpec(factors)
    table = enumerate_weights(spec)
    assert table.n == n == expected_size(spec)
    assert table[0] == vacuum(spec)
    assert len(set(table)) == n


def test_level_one_weights():
    assert set(enumerate_weights(A(2, 1))) == {((1, 0, 0),), ((0, 1, 0),), ((0, 0, 1),)}


def test_product_order_is_lexicographic():
    spec = AlgebraSpec(((1, 1), (1, 2)))
    assert list(enumerate_weights(spec))[:4] == [((1, 0), (2, 0)), ((1, 0), (1, 1)),
                                                  ((1, 0), (0, 2)), ((0, 1), (2, 0))]


@pytest.mark.parametrize("bad", ["", "b2", "a1,a1"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        AlgebraSpec.parse(bad, "1")


@pytest.mark.parametrize("factors", [((0, 1),), ((1, 0),), ()])
def test_spec_validation(factors):
    with pytest.raises(ValueError):
        AlgebraSpec(factors)


def test_parse_roundtrip():
    spec = AlgebraSpec.parse("a2, A1", "3,2")
    assert spec.factors == ((2, 3), (1, 2))
    assert str(spec) == "a2,a1 @ 3,2"


def test_check_weight():
    spec = A(2, 2)
    assert check_weight(spec, [[1, 1, 0]]) == ((1, 1, 0),)
    for bad in ([[1, 1, 1]], [[3, -1, 0]], [[1, 1]]):
        with pytest.raises(ValueError):
            check_weight(spec, bad)


@pytest.mark.parametrize("labels,t", [((0, 1, 0), 1), ((3, 0, 0), 0), ((1, 1, 1), 3), ((0, 0, 3), 6)])
def test_t_charge(labels, t):
    assert t_charge(AlgebraSpec.simple(2, sum(labels)), (labels,), 0) == t


def test_t_charge_bad_factor():
    with pytest.raises(IndexError):
        t_charge(A(2, 3), ((3, 0, 0),), 1)


def test_t_shift_under_J():
    spec = A(2, 3)
    w = ((3, 0, 0),)
    jw = apply_J(spec, w, [1])
    assert jw == ((0, 3, 0),)
    assert t_charge(spec, jw, 0) % 3 == (3 * 1 + t_charge(spec, w, 0)) % 3


@pytest.mark.parametrize("r,k", [(1, 3), (2, 2), (3, 3), (4, 2)])
def test_t_congruence_all(r, k):
    spec = A(r, k)
    for w in enumerate_weights(spec):
        for a in range(r + 1):
            assert (t_charge(spec, apply_J(spec, w, [a]), 0) - k * a - t_charge(spec, w, 0)) % (r + 1) == 0


def test_apply_J_examples():
    assert apply_J(A(2, 3), ((3, 0, 0),), [1]) == ((0, 3, 0),)
    assert apply_J(A(1, 6), ((1, 5),), [1]) == ((5, 1),)
    assert apply_J(A(2, 3), ((1, 2, 0),), [3]) == ((1, 2, 0),)
    assert apply_J(A(2, 3), ((1, 2, 0),), [-1]) == apply_J(A(2, 3), ((1, 2, 0),), [2])


def test_apply_C_examples():
    assert apply_C(A(2, 3), ((1, 2, 0),), [1]) == ((1, 0, 2),)
    assert apply_C(A(2, 3), ((1, 2, 0),), [0]) == ((1, 2, 0),)
    for w in enumerate_weights(A(1, 5)):
        assert apply_C(A(1, 5), w, [1]) == w


def test_orbits():
    assert orbit(A(2, 1), vacuum(A(2, 1))) == frozenset(enumerate_weights(A(2, 1)))
    assert orbit(A(1, 2), ((1, 1),)) == {((1, 1),)}
    # level 2 of A_2 splits into [k Lambda_0] and [omega_1], three weights each
    om = orbit(A(2, 2), omega(A(2, 2), 0))
    assert om == {((1, 1, 0),), ((0, 1, 1),), ((1, 0, 1),)}
    assert om | orbit(A(2, 2), vacuum(A(2, 2))) == set(enumerate_weights(A(2, 2)))


def test_level_one_orbit_iff_o_equals_one():
    spec = A(3, 3)
    vac_orbit = orbit(spec, vacuum(spec))
    for w in enumerate_weights(spec):
        assert (w in vac_orbit) == (o_count(spec, w, 0) == 1)


def test_o_count():
    assert o_count(A(2, 3), vacuum(A(2, 3)), 0) == 1
    assert o_count(A(2, 3), omega(A(2, 3), 0), 0) == 2
    assert o_count(A(2, 3), ((1, 1, 1),), 0) == 3


def test_form_examples():
    assert form(1, (1,), (1,)) == Fraction(1, 2)
    assert form(2, (1, 1), (1, 1)) == 2
    for r in range(1, 7):
        for i in range(1, r + 1):
            a = simple_root(r, i)
            assert form(r, a, a) == 2
        assert rho_norm(r) == Fraction((r + 1) * r * (r + 2), 12)


def test_form_dimension_mismatch():
    with pytest.raises(ValueError):
        form(2, (1,), (1, 0))


def test_inner_product_sums_factors():
    spec = AlgebraSpec(((1, 1), (2, 1)))
    assert inner_product(spec, [(1,), (1, 1)], [(1,), (1, 1)]) == Fraction(1, 2) + 2


vec = st.lists(st.integers(-6, 6), min_size=3, max_size=3)


@given(vec, vec, vec, st.integers(-4, 4))
def test_form_bilinear_symmetric(x, y, z, c):
    assert form(3, x, y) == form(3, y, x)
    xz = [a + c * b for a, b in zip(x, z)]
    assert form(3, xz, y) == form(3, x, y) + c * form(3, z, y)
    assert (3 + 1) * form(3, x, y) == int((3 + 1) * form(3, x, y))


def test_e_coordinates_roundtrip():
    assert to_e((1, 2)) == [3, 2, 0]
    assert from_e([5, 4, 2, 2]) == (1, 2, 0)
    assert rho_e(3) == [3, 2, 1, 0]


def test_affine_fold_examples():
    spec = A(1, 2)
    # shifted labels (lambda_0 + 1, lambda_1 + 1); only the finite part matters
    assert affine_fold(spec, 0, (1, 2)) == ((1, 1), 1)
    assert affine_fold(spec, 0, (0, 4)) == (None, 0)
    assert affine_fold(spec, 0, (-1, 5)) == ((0, 2), -1)


@settings(max_examples=200)
@given(st.integers(1, 4), st.integers(1, 5), st.data())
def test_affine_fold_idempotent(r, k, data):
    kbar = k + r + 1
    v = data.draw(st.lists(st.integers(-30, 30), min_size=r + 1, max_size=r + 1))
    folded, sign = affine_fold_e(v, kbar)
    if sign == 0:
        assert folded is None
        return
    labels = alcove_labels(folded, kbar)
    assert min(labels) >= 1 and sum(labels) == kbar
    again, s2 = affine_fold_e(folded, kbar)
    assert again == tuple(folded) and s2 == 1


@settings(max_examples=100)
@given(st.integers(1, 4), st.integers(1, 6), st.data())
def test_J_order_and_C_involution(r, k, data):
    spec = A(r, k)
    table = enumerate_weights(spec)
    w = table[data.draw(st.integers(0, table.n - 1))]
    assert apply_J(spec, w, [r + 1]) == w
    assert apply_C(spec, apply_C(spec, w, [1]), [1]) == w
    labels = w[0]
    assert rotate(rotate(labels, 1), r) == labels


@pytest.mark.parametrize("finite,dim", [((0,), 1), ((1,), 2), ((1, 1), 8), ((2, 0), 6), ((1, 0, 1), 15)])
def test_weyl_dimension(finite, dim):
    assert weyl_dimension(finite) == dim


def test_table_json_and_permutation():
    table = enumerate_weights(A(1, 2))
    assert table.to_json()["weights"] == [[[2, 0]], [[1, 1]], [[0, 2]]]
    assert table.permutation(lambda w: (rotate(w[0], 1),)) == (2, 1, 0)
    assert math.comb(4, 2) == expected_size(A(2, 2))
