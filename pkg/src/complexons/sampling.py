"""Random complexes and hypergraphs sampled from complexons.

A record draws ``n`` uniform latents, then decides simplices dimension by
dimension in lexicographic order, one uniform per candidate.  In a complex a
``(d+1)``-set is a candidate only when all of its faces made it; in a
hypergraph every set of size ``2..D+1`` is a candidate.

The batch samplers at the bottom draw many small samples at once and return
integer codes (one bit per subset); they follow the same distribution but not
the same draw order as the per-record functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import numpy as np

from .complexon import Complexon, HomogeneousComplexon, bouquet_curve
from .simplicial import (
    DEFAULT_DMAX,
    Hypergraph,
    SimplicialComplex,
    WeightedComplex,
    _extension_candidates,
    dumps,
    lower_closure,
    upper_closure,
)

__all__ = [
    "SampleRecord", "weighted_from_points", "sample_from_weighted", "sample_complex",
    "sample_hypergraph", "linial_meshulam", "flag", "costa_farber", "bouquet_curve",
    "subset_order", "sample_complex_codes", "sample_hypergraph_codes", "decode_complex",
    "decode_hypergraph", "complex_code", "closure_distribution", "code_distribution",
]


@dataclass(frozen=True)
class SampleRecord:
    complex: SimplicialComplex | Hypergraph
    latents: tuple
    seed: int | None

    def dumps(self) -> str:
        side = "latents: " + " ".join(repr(float(x)) for x in self.latents)
        return dumps(self.complex) + side + f"\nseed: {self.seed}\n"


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def _check_latents(latents) -> np.ndarray:
    x = np.asarray(latents, dtype=float)
    if x.ndim != 1 or np.any((x < 0) | (x > 1)):
        raise ValueError("latents must be a list of numbers in [0,1]")
    return x


def weighted_from_points(W: Complexon, latents) -> WeightedComplex:
    """``omega(sigma) = W(x_sigma)`` for every ``sigma`` with ``2 <= |sigma| <= D+1``."""
    x = _check_latents(latents)
    n = len(x)
    weights = {}
    for size in range(2, min(W.max_dim + 1, n) + 1):
        sets = list(combinations(range(1, n + 1), size))
        vals = W.eval_batch(size - 1, x[np.array(sets) - 1])
        weights.update(zip(sets, vals.tolist()))
    return WeightedComplex(n, weights, max_dim=W.max_dim)


def _grow(n: int, D: int, weigh, rng) -> SimplicialComplex:
    present = {(v,) for v in range(1, n + 1)}
    for size in range(2, min(D + 1, n) + 1):
        cands = _extension_candidates(present, n, size)
        if not cands:
            break
        w = weigh(cands)
        u = rng.random(len(cands))
        present.update(c for c, keep in zip(cands, u < w) if keep)
    return SimplicialComplex(n, frozenset(present))


def sample_from_weighted(H: WeightedComplex, seed=None) -> SimplicialComplex:
    """Inductive inclusion: a set enters with probability ``omega`` once its faces are in."""
    rng = _rng(seed)
    return _grow(H.n, H.max_dim, lambda cands: np.array([float(H.weight(c)) for c in cands]), rng)


def sample_complex(n: int, W: Complexon, seed=0) -> SampleRecord:
    """One draw from ``K(n, W)``: latents first, then simplices by dimension."""
    if n < 1:
        raise ValueError("need at least one vertex")
    rng = np.random.default_rng(seed)
    x = rng.random(n)

    def weigh(cands):
        idx = np.array(cands, dtype=int) - 1
        return W.eval_batch(idx.shape[1] - 1, x[idx])

    K = _grow(n, W.max_dim, weigh, rng)
    return SampleRecord(K, tuple(x.tolist()), seed)


def sample_hypergraph(n: int, W: Complexon, seed=0) -> SampleRecord:
    """One draw from ``H(n, W)``: every set of size ``2..D+1`` independently, no closure."""
    if n < 1:
        raise ValueError("need at least one vertex")
    rng = np.random.default_rng(seed)
    x = rng.random(n)
    edges = []
    for size in range(2, min(W.max_dim + 1, n) + 1):
        sets = np.array(list(combinations(range(1, n + 1), size)), dtype=int)
        w = W.eval_batch(size - 1, x[sets - 1])
        keep = rng.random(len(sets)) < w
        edges.extend(tuple(int(v) for v in s) for s in sets[keep])
    return SampleRecord(Hypergraph(n, frozenset(edges)), tuple(x.tolist()), seed)


# --- model zoo --------------------------------------------------------------------------


def _prob(p):
    if not 0 <= p <= 1:
        raise ValueError(f"probability {p} outside [0,1]")
    return p


def linial_meshulam(d: int, p, D: int | None = None) -> HomogeneousComplexon:
    """1 below dimension ``d``, ``p`` at ``d``, 0 above (up to ``D``, default ``d``)."""
    D = d if D is None else D
    if d < 1 or D < d:
        raise ValueError("need 1 <= d <= D")
    _prob(p)
    return HomogeneousComplexon(tuple(1 if j < d else p if j == d else 0 for j in range(1, D + 1)))


def flag(p, D: int = DEFAULT_DMAX) -> HomogeneousComplexon:
    """Random flag complex: ``p`` on edges, 1 on every higher dimension."""
    _prob(p)
    return HomogeneousComplexon((p,) + (1,) * (D - 1))


def costa_farber(*ps) -> HomogeneousComplexon:
    if not ps:
        raise ValueError("need at least one probability")
    return HomogeneousComplexon(tuple(_prob(p) for p in ps))


# --- batch samplers for small n ---------------------------------------------------------


@lru_cache(maxsize=None)
def subset_order(n: int, D: int) -> tuple:
    """Subsets of size ``2..min(D+1, n)`` in dimension-major lexicographic order; bit ``i`` is entry ``i``."""
    return tuple(s for size in range(2, min(D + 1, n) + 1) for s in combinations(range(1, n + 1), size))


def _batch_weights(W: Complexon, X: np.ndarray, order) -> np.ndarray:
    out = np.empty((X.shape[0], len(order)))
    for i, s in enumerate(order):
        out[:, i] = W.eval_batch(len(s) - 1, X[:, [v - 1 for v in s]])
    return out


def _codes(bits: np.ndarray) -> np.ndarray:
    if bits.shape[1] > 62:
        raise ValueError("too many subsets for integer codes")
    return (bits.astype(np.int64) << np.arange(bits.shape[1], dtype=np.int64)).sum(axis=1)


def sample_complex_codes(n: int, W: Complexon, trials: int, seed=0, chunk: int = 50_000) -> np.ndarray:
    """Codes of ``trials`` independent draws of ``K(n, W)``."""
    order = subset_order(n, W.max_dim)
    pos = {s: i for i, s in enumerate(order)}
    faces = [[pos[f] for f in combinations(s, len(s) - 1)] if len(s) > 2 else [] for s in order]
    rng = np.random.default_rng(seed)
    out = []
    left = trials
    while left > 0:
        b = min(chunk, left)
        X = rng.random((b, n))
        w = _batch_weights(W, X, order)
        U = rng.random((b, len(order)))
        bits = np.zeros((b, len(order)), dtype=bool)
        for i in range(len(order)):
            ok = U[:, i] < w[:, i]
            for f in faces[i]:
                ok &= bits[:, f]
            bits[:, i] = ok
        out.append(_codes(bits))
        left -= b
    return np.concatenate(out) if out else np.zeros(0, dtype=np.int64)


def sample_hypergraph_codes(n: int, W: Complexon, trials: int, seed=0, chunk: int = 50_000) -> np.ndarray:
    """Codes of ``trials`` independent draws of ``H(n, W)``."""
    order = subset_order(n, W.max_dim)
    rng = np.random.default_rng(seed)
    out = []
    left = trials
    while left > 0:
        b = min(chunk, left)
        X = rng.random((b, n))
        w = _batch_weights(W, X, order)
        out.append(_codes(rng.random((b, len(order))) < w))
        left -= b
    return np.concatenate(out) if out else np.zeros(0, dtype=np.int64)


def _members(code: int, order) -> list:
    return [s for i, s in enumerate(order) if code >> i & 1]


def decode_complex(code: int, n: int, D: int) -> SimplicialComplex:
    sims = {(v,) for v in range(1, n + 1)} | set(_members(int(code), subset_order(n, D)))
    return SimplicialComplex(n, frozenset(sims))


def decode_hypergraph(code: int, n: int, D: int) -> Hypergraph:
    return Hypergraph(n, frozenset(_members(int(code), subset_order(n, D))))


def complex_code(K: SimplicialComplex, D: int) -> int:
    order = subset_order(K.n, D)
    return sum(1 << i for i, s in enumerate(order) if s in K.simplices)


def closure_distribution(codes: np.ndarray, n: int, D: int, which: str) -> dict:
    """Empirical distribution of lower or upper closures of hypergraph codes, keyed by complex code."""
    close = lower_closure if which == "lower" else upper_closure
    vals, counts = np.unique(codes, return_counts=True)
    out: dict[int, int] = {}
    for v, c in zip(vals.tolist(), counts.tolist()):
        key = complex_code(close(decode_hypergraph(v, n, D)), D)
        out[key] = out.get(key, 0) + c
    total = len(codes)
    return {k: Fraction(c, total) for k, c in out.items()}


def code_distribution(codes: np.ndarray) -> dict:
    vals, counts = np.unique(codes, return_counts=True)
    return {int(v): Fraction(int(c), len(codes)) for v, c in zip(vals, counts)}
