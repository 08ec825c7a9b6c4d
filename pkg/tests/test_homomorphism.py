from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from complexons.complexon import HomogeneousComplexon, apply_block_permutation, pixel_complexon
from complexons.experiments import random_step
from complexons.homomorphism import (
    BudgetExceeded,
    hom_count,
    ind_count,
    t_hom,
    t_hom_complexon,
    t_hom_hypergraph,
    t_ind_by_inclusion_exclusion,
    t_ind_complexon,
    t_ind_finite,
)
from complexons.sampling import costa_farber, flag, linial_meshulam
from complexons.simplicial import Hypergraph, enumerate_complexes, from_facets, full_simplex, relabel

EDGE = from_facets(2, [(1, 2)])
TRI = full_simplex(3)
VERTEX = from_facets(1, [])
HALF = Fraction(1, 2)


def test_hom_count_examples():
    assert hom_count(EDGE, EDGE) == 2
    assert hom_count(EDGE, TRI) == 6
    assert t_hom(EDGE, TRI).value == Fraction(2, 3)
    K = from_facets(4, [(1, 2, 3), (3, 4)])
    assert hom_count(K, K) >= 1


def test_ind_count_examples():
    assert ind_count(EDGE, TRI) == 6
    assert t_ind_finite(EDGE, TRI).value == 1
    assert ind_count(from_facets(2, []), TRI) == 0
    assert ind_count(TRI, EDGE) == 0
    K = from_facets(4, [(1, 2, 3), (3, 4)])
    assert ind_count(K, K) == 2


def test_finite_density_examples():
    assert t_hom(VERTEX, from_facets(4, [(1, 2, 3), (3, 4)])).value == 1
    assert t_ind_finite(EDGE, EDGE).value == 1
    assert t_hom(EDGE, TRI).method == "exact-count"


def test_budget_guard():
    with pytest.raises(BudgetExceeded):
        hom_count(TRI, full_simplex(4), budget=10)


def test_complexon_density_examples():
    assert t_hom_complexon(TRI, linial_meshulam(2, HALF)).value == HALF
    assert t_hom_complexon(TRI, flag(HALF)).value == Fraction(1, 8)
    assert t_hom_complexon(VERTEX, flag(HALF)).value == 1


def test_monte_carlo_reports_error():
    res = t_hom_complexon(TRI, flag(0.5), "monte-carlo", samples=20_000, seed=1)
    assert res.std_error is not None
    assert abs(res.value - 0.125) < 4 * res.std_error + 1e-12
    assert t_hom_complexon(TRI, flag(HALF)).std_error is None


def test_induced_density_examples():
    p = Fraction(3, 10)
    assert t_ind_complexon(from_facets(2, []), flag(p)).value == 1 - p
    assert t_ind_complexon(TRI, flag(HALF)).value == Fraction(1, 8)
    assert t_ind_complexon(full_simplex(4), flag(HALF, 2)).value == 0


def test_inclusion_exclusion_examples():
    p = Fraction(3, 10)
    assert t_ind_by_inclusion_exclusion(from_facets(2, []), flag(p)).value == 1 - p
    assert t_ind_by_inclusion_exclusion(TRI, flag(p)).value == t_hom_complexon(TRI, flag(p)).value
    hollow = from_facets(3, [(1, 2), (1, 3), (2, 3)])
    assert t_ind_by_inclusion_exclusion(hollow, flag(HALF, 2)).value == 0
    assert t_ind_complexon(hollow, flag(HALF, 2)).value == 0


def test_hypergraph_density_examples():
    W = costa_farber(0, 1)
    assert t_hom_hypergraph(Hypergraph(3, frozenset({(1, 2, 3)})), W).value == 1
    assert t_hom_hypergraph(Hypergraph(3, frozenset()), W).value == 1
    assert t_hom_hypergraph(Hypergraph(2, frozenset({(1, 2)})), costa_farber(Fraction(2, 7))).value == Fraction(2, 7)


def test_pixel_consistency_small():
    for K in enumerate_complexes(3, 2):
        P = pixel_complexon(K, max_dim=2)
        for F in enumerate_complexes(3, 2):
            assert t_hom(F, K).value == t_hom_complexon(F, P).value


def test_induced_densities_sum_to_one():
    for W in (flag(HALF), costa_farber(Fraction(1, 3), Fraction(3, 5))):
        assert sum(t_ind_complexon(F, W).value for F in enumerate_complexes(3, 2)) == 1


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000), st.permutations((1, 2, 3)))
def test_densities_invariant_under_block_permutation(seed, perm):
    rng = np.random.default_rng(seed)
    W = random_step(3, 2, rng)
    U = apply_block_permutation(W, perm)
    for F in enumerate_complexes(3, 2):
        assert t_hom_complexon(F, U).value == t_hom_complexon(F, W).value
        assert t_ind_complexon(F, U).value == t_ind_complexon(F, W).value


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_inclusion_exclusion_matches_direct(seed):
    rng = np.random.default_rng(seed)
    W = random_step(2, 2, rng)
    for F in enumerate_complexes(3, 2):
        assert t_ind_by_inclusion_exclusion(F, W).value == t_ind_complexon(F, W).value


@st.composite
def complex_and_extra(draw):
    n = draw(st.integers(2, 4))
    sets = [s for k in (2, 3) for s in combinations(range(1, n + 1), k)]
    chosen = draw(st.lists(st.sampled_from(sets), unique=True, max_size=6))
    K = from_facets(n, chosen)
    missing = [s for s in combinations(range(1, n + 1), 2) if s not in K]
    return K, missing


@settings(max_examples=40, deadline=None)
@given(complex_and_extra(), st.sampled_from([EDGE, TRI, from_facets(3, [(1, 2)])]))
def test_adding_a_simplex_never_decreases_single_facet_counts(data, F):
    K, missing = data
    if not missing:
        return
    bigger = from_facets(K.n, [*K.simplices, missing[0]])
    assert hom_count(F, bigger) >= hom_count(F, K)


@settings(max_examples=30, deadline=None)
@given(complex_and_extra(), st.permutations((1, 2, 3, 4)))
def test_relabelled_target_same_density(data, perm):
    K, _ = data
    p = tuple(v for v in perm if v <= K.n)
    for F in (EDGE, TRI):
        assert t_hom(F, relabel(K, p)).value == t_hom(F, K).value


def test_homogeneous_closed_forms():
    p = Fraction(2, 5)
    W = HomogeneousComplexon((p, Fraction(1, 3)))
    assert t_hom_complexon(TRI, W).value == p ** 3 * Fraction(1, 3)
    assert t_ind_complexon(from_facets(3, [(1, 2), (1, 3), (2, 3)]), W).value == p ** 3 * Fraction(2, 3)
