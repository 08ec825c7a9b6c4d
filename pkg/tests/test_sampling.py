from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from complexons.complexon import HomogeneousComplexon, pixel_complexon
from complexons.homomorphism import t_ind_complexon
from complexons.sampling import (
    closure_distribution,
    code_distribution,
    complex_code,
    costa_farber,
    decode_complex,
    flag,
    linial_meshulam,
    sample_complex,
    sample_complex_codes,
    sample_from_weighted,
    sample_hypergraph,
    sample_hypergraph_codes,
    weighted_from_points,
)
from complexons.simplicial import (
    SimplicialComplex,
    WeightedComplex,
    enumerate_complexes,
    from_facets,
    full_simplex,
    lower_closure,
    relabel,
)
from complexons.homomorphism import t_hom_complexon


def test_weighted_from_points_examples():
    H = weighted_from_points(HomogeneousComplexon((0.3,)), [0.1, 0.7])
    assert H.weight((1, 2)) == 0.3
    assert weighted_from_points(flag(0.5), [0.4]).weights == {}
    K = from_facets(3, [(1, 2)])
    P = pixel_complexon(K)
    mids = [(b - 0.5) / 3 for b in (3, 1, 2)]
    H = weighted_from_points(P, mids)
    L = relabel(K, (2, 3, 1))
    for s in combinations((1, 2, 3), 2):
        assert H.weight(s) == (1 if s in L else 0)


def test_latents_checked():
    with pytest.raises(ValueError):
        weighted_from_points(flag(0.5), [0.2, 1.5])


def test_sample_from_weighted_examples():
    ones = WeightedComplex(4, {}, max_dim=2)
    assert sample_from_weighted(ones, 0) == from_facets(4, list(combinations(range(1, 5), 3)))
    zeros = {s: 0 for k in (2, 3) for s in combinations(range(1, 5), k)}
    assert sample_from_weighted(WeightedComplex(4, zeros, max_dim=2), 0) == from_facets(4, [])


def test_triangle_fill_rate():
    n, p, trials = 20, 0.5, 200
    tri = {s: p for s in combinations(range(1, n + 1), 3)}
    H = WeightedComplex(n, tri, max_dim=2)
    rng = np.random.default_rng(11)
    filled = sum(sample_from_weighted(H, rng).count(2) for _ in range(trials))
    total = trials * len(tri)
    se = (p * (1 - p) / total) ** 0.5
    assert abs(filled / total - p) < 4 * se


def test_sample_complex_examples():
    assert sample_complex(5, costa_farber(1, 1), seed=3).complex == from_facets(5, list(combinations(range(1, 6), 3)))
    a, b = sample_complex(12, flag(0.4), seed=9), sample_complex(12, flag(0.4), seed=9)
    assert a == b and a.dumps() == b.dumps()


def test_full_triangle_probability():
    codes = sample_complex_codes(3, flag(0.5), 100_000, seed=5)
    full = complex_code(full_simplex(3), 2)
    freq = float(np.mean(codes == full))
    se = (0.125 * 0.875 / len(codes)) ** 0.5
    assert abs(freq - 0.125) < 4 * se


def test_sample_hypergraph_examples():
    H = sample_hypergraph(6, costa_farber(0, 1), seed=1).complex
    assert H.count(1) == 0 and H.count(2) == 20
    assert lower_closure(H).count(1) == 0
    assert sample_hypergraph(6, costa_farber(0, 0), seed=1).complex.edges == frozenset()


def test_zoo():
    p = Fraction(2, 5)
    assert t_hom_complexon(full_simplex(3), linial_meshulam(2, p)).value == p
    assert flag(p, 3).probs == costa_farber(p, 1, 1).probs
    assert all(costa_farber(1, 1, 1).eval(d, (0.2,) * (d + 1)) == 1 for d in (1, 2, 3))
    with pytest.raises(ValueError):
        flag(1.2)


def test_record_format():
    text = sample_complex(4, flag(0.5), seed=2).dumps()
    lines = text.strip().splitlines()
    assert lines[-2].startswith("latents: ") and len(lines[-2].split()) == 5
    assert lines[-1] == "seed: 2"


def test_batch_matches_induced_densities():
    W = flag(0.5)
    codes = sample_complex_codes(3, W, 50_000, seed=8)
    dist = code_distribution(codes)
    for F in enumerate_complexes(3, 2):
        t = float(t_ind_complexon(F, W).value)
        se = (t * (1 - t) / len(codes)) ** 0.5
        assert abs(float(dist.get(complex_code(F, 2), 0)) - t) < 4 * se + 1e-12


def test_batch_codes_are_complexes():
    for c in np.unique(sample_complex_codes(4, flag(0.5), 5000, seed=2)):
        assert isinstance(decode_complex(c, 4, 2), SimplicialComplex)


def test_closure_distributions_exact_cases():
    ones = costa_farber(1, 1)
    codes = sample_hypergraph_codes(3, ones, 1000, seed=1)
    full = complex_code(full_simplex(3), 2)
    assert closure_distribution(codes, 3, 2, "lower") == {full: 1}
    assert closure_distribution(codes, 3, 2, "upper") == {full: 1}


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 9), st.floats(0, 1), st.floats(0, 1), st.integers(0, 2 ** 32))
def test_samples_downward_closed_and_reproducible(n, p, q, seed):
    W = costa_farber(p, q)
    rec = sample_complex(n, W, seed)
    assert isinstance(rec.complex, SimplicialComplex)
    assert rec.complex.max_dim <= 2
    assert rec == sample_complex(n, W, seed)
    assert len(rec.latents) == n


def test_edge_density_concentration():
    p, n, trials = 0.3, 50, 100
    pairs = n * (n - 1) // 2
    edges = sum(sample_complex(n, flag(p, 1), seed=s).complex.count(1) for s in range(trials))
    se = (p * (1 - p) / (pairs * trials)) ** 0.5
    assert abs(edges / (pairs * trials) - p) < 4 * se
