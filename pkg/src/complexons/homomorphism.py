"""Homomorphism counts and densities for complexes, complexons and hypergraphs.

Densities of a complex ``F`` in a complexon all share one integrand shape: a
product over *factors*, each a vertex subset of ``F`` carrying either ``W`` or
``1 - W``.  ``exact-step`` mode sums that product over block assignments of a
stepfunction with rational arithmetic; ``monte-carlo`` mode averages it over
uniform latent vectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from .complexon import Complexon, HomogeneousComplexon, StepComplexon, facet_complexon
from .simplicial import Hypergraph, SimplicialComplex, antifacets, facets, falling_factorial

DEFAULT_BUDGET = 10 ** 8
DEFAULT_SAMPLES = 10 ** 5

EXACT_COUNT = "exact-count"
EXACT_STEP = "exact-step"
MONTE_CARLO = "monte-carlo"


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class DensityResult:
    value: Fraction | float
    method: str
    std_error: float | None = None

    def __post_init__(self):
        if (self.std_error is not None) != (self.method == MONTE_CARLO):
            raise ValueError("std_error is reported for monte-carlo results only")

    def __float__(self):
        return float(self.value)


# --- finite complexes ----------------------------------------------------------------


def _by_top_vertex(sets: Sequence[tuple[int, ...]], k: int) -> list[list[tuple[int, ...]]]:
    """Group 1-based vertex sets by their largest vertex, as 0-based index lists."""
    groups = [[] for _ in range(k)]
    for s in sets:
        groups[max(s) - 1].append(tuple(v - 1 for v in s))
    return groups


def _check_budget(base: int, k: int, budget: int):
    if base ** k > budget:
        raise BudgetExceeded(f"{base}^{k} candidate maps exceed the budget of {budget}")


def hom_count(F: SimplicialComplex, K: SimplicialComplex, budget: int = DEFAULT_BUDGET) -> int:
    """Number of maps ``V(F) -> V(K)`` sending every simplex onto a simplex of equal dimension.

    Backtracks over vertex images in order, rejecting a partial map as soon as a
    fully mapped simplex fails.
    """
    k, n = F.n, K.n
    _check_budget(n, k, budget)
    checks = _by_top_vertex(F.higher_simplices(), k)
    target = K.simplices
    phi = [0] * k

    def extend(i):
        if i == k:
            return 1
        total = 0
        for v in range(1, n + 1):
            phi[i] = v
            ok = True
            for s in checks[i]:
                img = tuple(sorted({phi[j] for j in s}))
                if len(img) != len(s) or img not in target:
                    ok = False
                    break
            if ok:
                total += extend(i + 1)
        return total

    return extend(0)


def ind_count(F: SimplicialComplex, K: SimplicialComplex, budget: int = DEFAULT_BUDGET) -> int:
    """Number of injective maps under which ``sigma in F`` iff its image is in ``K``."""
    k, n = F.n, K.n
    if k > n:
        return 0
    _check_budget(n, k, budget)
    subsets = [s for size in range(2, k + 1) for s in combinations(range(1, k + 1), size)]
    checks = _by_top_vertex(subsets, k)
    inside = [[(s, tuple(v + 1 for v in s) in F.simplices) for s in grp] for grp in checks]
    target = K.simplices
    phi = [0] * k
    used = set()

    def extend(i):
        if i == k:
            return 1
        total = 0
        for v in range(1, n + 1):
            if v in used:
                continue
            phi[i] = v
            if all((tuple(sorted(phi[j] for j in s)) in target) == want for s, want in inside[i]):
                used.add(v)
                total += extend(i + 1)
                used.discard(v)
        return total

    return extend(0)


def t_hom(F: SimplicialComplex, K: SimplicialComplex, budget: int = DEFAULT_BUDGET) -> DensityResult:
    """``hom(F, K) / vert(K)^vert(F)``."""
    return DensityResult(Fraction(hom_count(F, K, budget), K.n ** F.n), EXACT_COUNT)


def t_ind_finite(F: SimplicialComplex, K: SimplicialComplex, budget: int = DEFAULT_BUDGET) -> DensityResult:
    perms = falling_factorial(K.n, F.n)
    if perms == 0:
        return DensityResult(Fraction(0), EXACT_COUNT)
    return DensityResult(Fraction(ind_count(F, K, budget), perms), EXACT_COUNT)


# --- complexon integrals ----------------------------------------------------------------


def _as_step(W: Complexon) -> StepComplexon:
    if isinstance(W, StepComplexon):
        return W
    if isinstance(W, HomogeneousComplexon):
        return W.as_step()
    raise TypeError("exact-step needs a stepfunction or homogeneous complexon")


def _scaled(values) -> tuple[list, int]:
    """Integers with a common denominator: ``values[i] == ints[i] / L``."""
    L = math.lcm(*(v.denominator for v in values)) if len(values) else 1
    return [v.numerator * (L // v.denominator) for v in values], L


def _table(W: StepComplexon, d: int):
    cache = W.__dict__.setdefault("_scaled_tables", {})
    if d not in cache:
        cache[d] = _scaled(W.exact_tensor(d).ravel().tolist())
    return cache[d]


def _integrate_step(k: int, factors, W: StepComplexon, budget: int) -> Fraction:
    # integer arithmetic throughout; the common denominator is applied once at the end
    _check_budget(W.m, k, budget)
    m = W.m
    tables = {}
    plus, minus = [], []
    for s, sign in factors:
        d = len(s) - 1
        if d > W.max_dim:
            if sign > 0:
                return Fraction(0)
            continue  # 1 - 0
        if d not in tables:
            tables[d] = _table(W, d)
        (plus if sign > 0 else minus).append(s)
    den = 1
    groups = [[] for _ in range(k)]
    for s, sign in [(s, 1) for s in plus] + [(s, -1) for s in minus]:
        ints, L = tables[len(s) - 1]
        den *= L
        s = tuple(sorted(s))  # symmetric tensors; the last vertex gets stride 1
        head = [(j, m ** (len(s) - 1 - i)) for i, j in enumerate(s[:-1])]
        groups[s[-1]].append((head, ints, L, sign))
    widths, Lw = _scaled([Fraction(w) for w in W.widths])
    den *= Lw ** k
    blocks = [0] * k

    def extend(i, acc):
        if i == k:
            return acc
        total = 0
        here = [(sum(blocks[j] * st for j, st in head), ints, L, sign) for head, ints, L, sign in groups[i]]
        for b in range(m):
            blocks[i] = b
            val = acc * widths[b]
            for off, ints, L, sign in here:
                c = ints[off + b]
                val *= c if sign > 0 else L - c
                if not val:
                    break
            if val:
                total += extend(i + 1, val)
        return total

    return Fraction(extend(0, 1), den)


def _integrate_mc(k: int, factors, W: Complexon, samples: int, seed, chunk: int = 20_000):
    rng = np.random.default_rng(seed)
    vals = []
    left = samples
    while left > 0:
        b = min(chunk, left)
        X = rng.random((b, k))
        prod = np.ones(b)
        for s, sign in factors:
            w = W.eval_batch(len(s) - 1, X[:, list(s)])
            prod *= w if sign > 0 else 1.0 - w
        vals.append(prod)
        left -= b
    v = np.concatenate(vals)
    se = float(v.std(ddof=1) / np.sqrt(len(v))) if len(v) > 1 else 0.0
    return float(v.mean()), se


def integrate(k: int, factors, W: Complexon, method: str = EXACT_STEP, budget: int = DEFAULT_BUDGET,
              samples: int = DEFAULT_SAMPLES, seed=0) -> DensityResult:
    """Integrate ``prod W(x_s)`` (sign +1) or ``prod (1 - W(x_s))`` (sign -1) over ``[0,1]^k``.

    ``factors`` are ``(0-based vertex tuple, sign)`` pairs.
    """
    if method == EXACT_STEP:
        return DensityResult(_integrate_step(k, factors, _as_step(W), budget), EXACT_STEP)
    if method == MONTE_CARLO:
        mean, se = _integrate_mc(k, factors, W, samples, seed)
        return DensityResult(mean, MONTE_CARLO, se)
    raise ValueError(f"unknown method {method!r}")


def _zero_based(sets):
    return [tuple(v - 1 for v in s) for s in sets]


def hom_factors(F: SimplicialComplex):
    return [(s, 1) for s in _zero_based(F.higher_simplices())]


def ind_factors(F: SimplicialComplex, dmax: int):
    anti = sorted(antifacets(F, dmax), key=lambda s: (len(s), s))
    return hom_factors(F) + [(s, -1) for s in _zero_based(anti)]


def t_hom_complexon(F: SimplicialComplex, W: Complexon, method: str = EXACT_STEP, **kw) -> DensityResult:
    return integrate(F.n, hom_factors(F), W, method, **kw)


def t_ind_complexon(F: SimplicialComplex, W: Complexon, method: str = EXACT_STEP, **kw) -> DensityResult:
    """Induced density: simplices of ``F`` weigh ``W``, antifacets weigh ``1 - W``."""
    return integrate(F.n, ind_factors(F, W.max_dim), W, method, **kw)


def t_hom_hypergraph(H: Hypergraph, W: Complexon, method: str = EXACT_STEP, **kw) -> DensityResult:
    factors = [(s, 1) for s in _zero_based(sorted(H.edges, key=lambda e: (len(e), e)))]
    return integrate(H.n, factors, W, method, **kw)


def t_hom_faceted(F: SimplicialComplex, W: Complexon, method: str = EXACT_STEP, **kw) -> DensityResult:
    """Density of the facets of ``F`` in the faceted transform of ``W``.

    Each facet of dimension at least one contributes a single factor of the
    faceted complexon; isolated vertices contribute 1.
    """
    fac = sorted((f for f in facets(F) if len(f) >= 2), key=lambda s: (len(s), s))
    return integrate(F.n, [(s, 1) for s in _zero_based(fac)], facet_complexon(W), method, **kw)


def t_ind_by_inclusion_exclusion(F: SimplicialComplex, W: Complexon, budget: int = DEFAULT_BUDGET,
                                 method: str = EXACT_STEP, **kw) -> DensityResult:
    """Alternating sum of ``t(F + G, W)`` over sets ``G`` of antifacets of dimension at most ``D``."""
    anti = sorted((a for a in antifacets(F, W.max_dim) if len(a) <= W.max_dim + 1),
                  key=lambda s: (len(s), s))
    if 2 ** len(anti) > budget:
        raise BudgetExceeded(f"2^{len(anti)} antifacet subsets exceed the budget")
    base = hom_factors(F)
    total = Fraction(0) if method == EXACT_STEP else 0.0
    var = 0.0
    for r in range(len(anti) + 1):
        for G in combinations(anti, r):
            # G adds only minimal non-faces, so F + G stays downward closed
            SimplicialComplex(F.n, F.simplices | frozenset(G))
            res = integrate(F.n, base + [(s, 1) for s in _zero_based(G)], W, method, budget=budget, **kw)
            total += res.value if r % 2 == 0 else -res.value
            if res.std_error is not None:
                var += res.std_error ** 2
    if method == MONTE_CARLO:
        return DensityResult(total, MONTE_CARLO, var ** 0.5)
    return DensityResult(total, method)


def hypergraph_probability(H: Hypergraph, W: Complexon, method: str = EXACT_STEP, **kw) -> DensityResult:
    """``Pr(H(n, W) = H)``: edges weigh ``W``, every other set of size ``2..D+1`` weighs ``1 - W``."""
    n, D = H.n, W.max_dim
    factors = []
    for size in range(2, min(D + 1, n) + 1):
        for s in combinations(range(1, n + 1), size):
            factors.append((tuple(v - 1 for v in s), 1 if s in H.edges else -1))
    if any(len(e) > D + 1 for e in H.edges):
        return DensityResult(Fraction(0) if method == EXACT_STEP else 0.0, method,
                             0.0 if method == MONTE_CARLO else None)
    return integrate(n, factors, W, method, **kw)
