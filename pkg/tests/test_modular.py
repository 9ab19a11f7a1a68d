import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from kpsym.modular import (
    build_modular_data, char_ratio, conductor, galois_action, galois_defect, modular_data,
    q_dimension, q_omega1_closed, smatrix_json, texp_strings)
from kpsym.weights import AlgebraSpec, enumerate_weights, omega, vacuum

from oracles import brute_s_entry

A = AlgebraSpec.simple


def test_s_a1_level1_frozen():
    md = modular_data(A(1, 1))
    expected = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
    assert np.max(np.abs(md.S - expected)) < 1e-12


def test_texp_a1_level1_frozen():
    md = modular_data(A(1, 1))
    assert md.texp == (Fraction(23, 12), Fraction(5, 12))
    assert md.anomaly == (Fraction(-1, 24), Fraction(5, 24))
    # central charge 1: T_00 = exp(-2 pi i c/24)
    assert cmath.isclose(md.T()[0, 0], cmath.exp(-2j * math.pi / 24))


def test_s_a1_level2_frozen():
    md = modular_data(A(1, 2))
    expected = np.array([[1, math.sqrt(2), 1], [math.sqrt(2), 0, -math.sqrt(2)],
                         [1, -math.sqrt(2), 1]]) / 2
    assert np.max(np.abs(md.S - expected)) < 1e-12
    assert texp_strings(md) == ["15/8", "1/4", "7/8"]  # 2h - c/12 with c = 3/2


@pytest.mark.parametrize("r,k", [(1, 1), (1, 4), (2, 1), (2, 3), (3, 2), (3, 3)])
def test_determinant_matches_weyl_sum(r, k):
    md = modular_data(A(r, k))
    table = md.table
    for a in range(md.n):
        for b in range(md.n):
            ref = brute_s_entry(r, k, table[a][0], table[b][0])
            assert abs(md.S[a, b] - ref) < 1e-10


@pytest.mark.parametrize("factors", [((1, 3),), ((2, 2),), ((1, 2), (2, 1)), ((3, 1), (1, 1), (1, 2))])
def test_unitary_symmetric_square(factors):
    md = modular_data(AlgebraSpec(factors))
    S, n = md.S, md.n
    assert np.max(np.abs(S @ S.conj().T - np.eye(n))) < 1e-9
    assert np.max(np.abs(S - S.T)) < 1e-9
    C = np.zeros((n, n))
    C[np.arange(n), md.conjugation()] = 1
    assert np.max(np.abs(S @ S - C)) < 1e-9
    assert abs(np.sum(np.abs(S[0]) ** 2) - 1) < 1e-12
    row = S[0].real
    assert np.all(row >= row[0] - 1e-9) and row[0] > 0


def test_product_is_kron():
    spec = AlgebraSpec(((1, 2), (2, 1)))
    md = modular_data(spec)
    assert np.allclose(md.S, np.kron(*md.factor_S))
    a, b = modular_data(A(1, 2)), modular_data(A(2, 1))
    for t, w in enumerate(md.table):
        i, j = a.table.index[(w[0],)], b.table.index[(w[1],)]
        assert md.anomaly[t] == a.anomaly[i] + b.anomaly[j]


def test_build_is_deterministic():
    table = enumerate_weights(A(2, 3))
    assert smatrix_json(build_modular_data(table)) == smatrix_json(build_modular_data(table))


@pytest.mark.parametrize("r,k", [(1, 2), (1, 7), (2, 4), (3, 3), (4, 2)])
def test_qdim(r, k):
    spec = A(r, k)
    md = modular_data(spec)
    assert q_dimension(md, vacuum(spec)) == pytest.approx(1.0, abs=1e-14)
    assert q_dimension(md, omega(spec, 0)) == pytest.approx(q_omega1_closed(r, k), abs=1e-12)
    ratio = (md.S[:, 0] / md.S[0, 0]).real
    for t, w in enumerate(md.table):
        assert abs(q_dimension(md, w) - ratio[t]) < 1e-9


def test_qdim_a1_level2():
    md = modular_data(A(1, 2))
    assert q_dimension(md, ((1, 1),)) == pytest.approx(math.sqrt(2), abs=1e-14)


@pytest.mark.parametrize("factors", [((1, 2),), ((2, 2),), ((3, 2),), ((1, 1), (2, 2))])
def test_char_ratio(factors):
    spec = AlgebraSpec(factors)
    md = modular_data(spec)
    S = md.S
    for a, lam in enumerate(md.table):
        for b, mu in enumerate(md.table):
            assert abs(char_ratio(md, lam, mu) - S[a, b] / S[0, b]) < 1e-9
    assert char_ratio(md, vacuum(spec), md.table[-1]) == pytest.approx(1.0)


def test_char_ratio_bound():
    md = modular_data(A(3, 4))
    with pytest.raises(ValueError):
        char_ratio(md, ((0, 2, 0, 2),), vacuum(A(3, 4)), dim_bound=10)


def test_galois_a1_level1():
    md = modular_data(A(1, 1))
    assert conductor(md.spec) == 24
    with pytest.raises(ValueError):
        galois_action(md, 2)
    ga = galois_action(md, 5)
    assert galois_defect(md, ga) < 1e-12
    ident = galois_action(md, 25)
    assert ident.image == (0, 1) and ident.signs == (1, 1)


def test_galois_fold_of_doubled_weight():
    # at level 1 the shifted value 2 of (1,0) doubled is 2, inside the alcove {1, 2}
    from kpsym.modular import galois_factor
    assert galois_factor((1, 0), 1, 2) == ((0, 1), 1)


@pytest.mark.parametrize("factors", [((2, 2),), ((1, 3), (1, 1)), ((3, 1),)])
def test_galois_all_ell(factors):
    md = modular_data(AlgebraSpec(factors))
    M = conductor(md.spec)
    for ell in range(1, M):
        if math.gcd(ell, M) == 1:
            ga = galois_action(md, ell)
            assert sorted(ga.image) == list(range(md.n))
            assert galois_defect(md, ga) < 1e-9
    ga = galois_action(md, M + 1)
    assert ga.image == tuple(range(md.n)) and set(ga.signs) == {1}


def test_smatrix_json_shape():
    out = smatrix_json(modular_data(A(1, 1)))
    assert out["n"] == 2 and len(out["entries"]) == 4
    assert out["weights"] == [[[1, 0]], [[0, 1]]]
