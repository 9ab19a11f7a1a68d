import pytest

from kpsym.autoinv import identity, is_automorphism_invariant, sigma_m
from kpsym.modular import modular_data
from kpsym.search import (
    SearchBoundError, brute_force, search_all, search_report, signature_classes, verlinde_row_sums)
from kpsym.weights import AlgebraSpec, enumerate_weights, o_count

A = AlgebraSpec.simple


def test_examples():
    assert search_all(modular_data(A(1, 5))) == [identity(6)]
    md = modular_data(A(2, 3))
    assert search_all(md) == sorted([identity(10), md.conjugation()])
    assert search_all(modular_data(A(1, 6))) == sorted([identity(7), sigma_m(A(1, 6), 1)])


@pytest.mark.parametrize("factors", [((1, 1),), ((1, 3),), ((2, 2),), ((1, 1), (1, 2)), ((7, 1),)])
def test_matches_brute_force(factors):
    md = modular_data(AlgebraSpec(factors))
    assert search_all(md) == brute_force(md)


@pytest.mark.parametrize("factors", [((2, 4),), ((1, 2), (1, 2)), ((3, 2), (1, 1))])
def test_soundness(factors):
    md = modular_data(AlgebraSpec(factors))
    for p in search_all(md):
        assert is_automorphism_invariant(md, p)


def test_classes_fix_vacuum_and_respect_fusion_degree():
    spec = AlgebraSpec(((2, 3), (1, 2)))
    md = modular_data(spec)
    cls = signature_classes(md)
    R = verlinde_row_sums(md)
    for t, w in enumerate(md.table):
        for u, x in enumerate(md.table):
            if cls[t] == cls[u]:
                assert md.texp[t] == md.texp[u]
                assert sorted(R[t]) == sorted(R[u])
    # the row sum against omega_1 of a factor is the fusion degree o_i
    table = enumerate_weights(spec)
    w1 = table.index[((2, 1, 0), (2, 0))]
    for t, w in enumerate(table):
        assert R[t, w1] == o_count(spec, w, 0)


def test_bound():
    md = modular_data(A(2, 3))
    with pytest.raises(SearchBoundError):
        search_all(md, bound=5)
    with pytest.raises(SearchBoundError):
        brute_force(modular_data(A(1, 9)))


def test_report():
    a, b, c = (0, 1, 2), (2, 1, 0), (1, 0, 2)
    rep = search_report([a, b], [a, b])
    assert rep["agree"] and not rep["unexplained"] and not rep["not_found"]
    rep = search_report([a, b], [a])
    assert rep["unexplained"] == [b] and not rep["agree"]
    rep = search_report([a], [a, c])
    assert rep["not_found"] == [c] and rep["search_count"] == 1 and rep["classified_count"] == 2
