"""Finite simplicial complexes, weighted complexes and hypergraphs.

Vertices are the integers ``1..n``.  Every simplex is stored as a strictly
increasing tuple, singletons included, so membership tests are a single
hash lookup.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product
from math import comb
from typing import Iterable, Iterator, Mapping

DEFAULT_DMAX = 3
ENUMERATION_LIMIT = 5


def _canon(simplex: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(set(int(v) for v in simplex)))


def _check_vertices(n: int, simplex: tuple[int, ...]) -> None:
    if not simplex:
        raise ValueError("empty simplex")
    if simplex[0] < 1 or simplex[-1] > n:
        raise ValueError(f"vertex out of range 1..{n}: {simplex}")


def _faces(simplex: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    """All nonempty subsets of ``simplex`` (including itself)."""
    for k in range(1, len(simplex) + 1):
        yield from combinations(simplex, k)


@dataclass(frozen=True)
class SimplicialComplex:
    n: int
    simplices: frozenset

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        for s in self.simplices:
            if list(s) != sorted(set(s)):
                raise ValueError(f"simplex {s} is not strictly increasing")
            _check_vertices(self.n, s)
        for v in range(1, self.n + 1):
            if (v,) not in self.simplices:
                raise ValueError(f"missing vertex {v}")
        for s in self.simplices:
            if len(s) > 1:
                for f in combinations(s, len(s) - 1):
                    if f not in self.simplices:
                        raise ValueError(f"not downward closed: {f} missing below {s}")

    def __contains__(self, simplex) -> bool:
        return tuple(simplex) in self.simplices

    def __len__(self) -> int:
        return len(self.simplices)

    @property
    def max_dim(self) -> int:
        return max((len(s) for s in self.simplices), default=0) - 1

    def dim_simplices(self, d: int) -> list[tuple[int, ...]]:
        """Sorted list of the ``d``-simplices."""
        return sorted(s for s in self.simplices if len(s) == d + 1)

    def count(self, d: int) -> int:
        return sum(1 for s in self.simplices if len(s) == d + 1)

    def higher_simplices(self) -> list[tuple[int, ...]]:
        """Simplices of size at least two, dimension-major then lexicographic."""
        return sorted((s for s in self.simplices if len(s) >= 2), key=lambda s: (len(s), s))

    def edges_as_hypergraph(self) -> "Hypergraph":
        return Hypergraph(self.n, frozenset(s for s in self.simplices if len(s) >= 2))

    def __repr__(self) -> str:
        body = ", ".join("".join(map(str, s)) if self.n < 10 else str(s)
                         for s in self.higher_simplices())
        return f"SimplicialComplex(n={self.n}, {{{body}}})"


@dataclass(frozen=True)
class Hypergraph:
    """Arbitrary set system on ``1..n``; singletons are implicit."""

    n: int
    edges: frozenset

    def __post_init__(self):
        for e in self.edges:
            if len(e) < 2 or list(e) != sorted(set(e)):
                raise ValueError(f"bad hyperedge {e}")
            _check_vertices(self.n, e)

    def __contains__(self, edge) -> bool:
        return tuple(edge) in self.edges

    def count(self, d: int) -> int:
        return sum(1 for e in self.edges if len(e) == d + 1)


@dataclass(frozen=True)
class WeightedComplex:
    """Weights on subsets of ``1..n``; absent keys weigh 1, sizes above ``max_dim + 1`` weigh 0."""

    n: int
    weights: Mapping = field(default_factory=dict)
    max_dim: int = DEFAULT_DMAX

    def __post_init__(self):
        clean = {}
        for s, w in dict(self.weights).items():
            s = _canon(s)
            if len(s) < 2:
                raise ValueError("weights on singletons are fixed at 1")
            _check_vertices(self.n, s)
            if not 0 <= w <= 1:
                raise ValueError(f"weight {w} of {s} outside [0,1]")
            clean[s] = w
        object.__setattr__(self, "weights", clean)

    def weight(self, simplex):
        s = tuple(simplex)
        if len(s) <= 1:
            return 1
        if len(s) > self.max_dim + 1:
            return 0
        return self.weights.get(s, 1)


def from_facets(n: int, facets: Iterable[Iterable[int]], dmax: int | None = None) -> SimplicialComplex:
    """Downward closure of ``facets`` together with all ``n`` vertices.

    ``dmax`` truncates the closure to simplices of dimension at most ``dmax``.
    """
    simplices = {(v,) for v in range(1, n + 1)}
    for f in facets:
        f = _canon(f)
        _check_vertices(n, f)
        if dmax is not None and len(f) > dmax + 1:
            for sub in combinations(f, dmax + 1):
                simplices.update(_faces(sub))
        else:
            simplices.update(_faces(f))
    return SimplicialComplex(n, frozenset(simplices))


def facets(K: SimplicialComplex) -> set[tuple[int, ...]]:
    out = set()
    for s in K.simplices:
        # s is maximal iff no one-vertex extension is present
        if not any(tuple(sorted(s + (v,))) in K.simplices
                   for v in range(1, K.n + 1) if v not in s):
            out.add(s)
    return out


def _extension_candidates(present: set, n: int, size: int) -> list[tuple[int, ...]]:
    """All ``size``-subsets of ``1..n`` whose ``(size-1)``-faces are all in ``present``.

    Built by extending each present ``(size-1)``-set with larger vertices, so the
    output is in lexicographic order.
    """
    if size == 1:
        return [(v,) for v in range(1, n + 1)]
    if size == 2:
        return list(combinations(range(1, n + 1), 2))
    base = sorted(s for s in present if len(s) == size - 1)
    ext: dict[tuple, set] = {}
    for s in (s for s in present if len(s) == size - 1):
        ext.setdefault(s[:-1], set()).add(s[-1])
    out = []
    for tau in base:
        allowed = None
        for i in range(len(tau)):
            prefix = tau[:i] + tau[i + 1:]
            vs = ext.get(prefix, set())
            allowed = set(vs) if allowed is None else allowed & vs
            if not allowed:
                break
        if allowed:
            top = tau[-1]
            out.extend(tau + (v,) for v in sorted(allowed) if v > top)
    return out


def antifacets(K: SimplicialComplex, dmax: int | None = None) -> set[tuple[int, ...]]:
    """Minimal vertex sets that are not simplices of ``K``.

    Sizes run from 2 up to ``n``, or up to ``min(n, dmax + 2)`` when ``dmax`` is given.
    """
    cap = K.n if dmax is None else min(K.n, dmax + 2)
    out = set()
    for size in range(2, cap + 1):
        for c in _extension_candidates(K.simplices, K.n, size):
            if c not in K.simplices:
                out.add(c)
    return out


def lower_closure(H: Hypergraph) -> SimplicialComplex:
    simplices = {(v,) for v in range(1, H.n + 1)}
    size = 2
    while True:
        layer = [c for c in _extension_candidates(simplices, H.n, size) if c in H.edges]
        if not layer:
            break
        simplices.update(layer)
        size += 1
    return SimplicialComplex(H.n, frozenset(simplices))


def upper_closure(H: Hypergraph) -> SimplicialComplex:
    return from_facets(H.n, H.edges)


def blowup(K: SimplicialComplex, m: int) -> SimplicialComplex:
    """Replace every vertex ``v`` by clones ``(v-1)*m + j`` for ``j = 1..m``."""
    if m < 1:
        raise ValueError("blowup factor must be positive")
    simplices = set()
    for s in K.simplices:
        for copies in product(range(1, m + 1), repeat=len(s)):
            simplices.add(tuple(sorted((v - 1) * m + j for v, j in zip(s, copies))))
    return SimplicialComplex(K.n * m, frozenset(simplices))


def skeleton(K: SimplicialComplex, d: int) -> SimplicialComplex:
    if d < 0:
        raise ValueError("skeleton dimension must be nonnegative")
    return SimplicialComplex(K.n, frozenset(s for s in K.simplices if len(s) <= d + 1))


def induced_subcomplex(K: SimplicialComplex, S: Iterable[int]) -> SimplicialComplex:
    """Subcomplex on ``S``, relabelled ``1..|S|`` in increasing order of ``S``."""
    S = _canon(S)
    _check_vertices(K.n, S)
    relabel = {v: i + 1 for i, v in enumerate(S)}
    keep = frozenset(tuple(relabel[v] for v in s) for s in K.simplices
                     if all(v in relabel for v in s))
    return SimplicialComplex(len(S), keep)


def relabel(K: SimplicialComplex, perm: Mapping[int, int] | tuple[int, ...]) -> SimplicialComplex:
    """Image of ``K`` under the vertex bijection ``v -> perm[v]``.

    A tuple ``perm`` is read as ``perm[v - 1]``.
    """
    if not isinstance(perm, Mapping):
        perm = {v + 1: p for v, p in enumerate(perm)}
    if sorted(perm.values()) != list(range(1, K.n + 1)):
        raise ValueError("not a permutation of the vertices")
    return SimplicialComplex(K.n, frozenset(tuple(sorted(perm[v] for v in s)) for s in K.simplices))


def delete_vertex(K: SimplicialComplex, v: int | None = None) -> SimplicialComplex:
    """Remove vertex ``v`` (default: the last one) and every simplex containing it."""
    v = K.n if v is None else v
    return induced_subcomplex(K, [u for u in range(1, K.n + 1) if u != v])


def enumerate_complexes(n: int, d: int) -> list[SimplicialComplex]:
    """Every labelled simplicial complex on ``1..n`` of dimension at most ``d``."""
    if n > ENUMERATION_LIMIT:
        raise ValueError(f"enumeration is doubly exponential; n must be <= {ENUMERATION_LIMIT}")
    out = []

    def grow(size, present):
        if size > d + 1 or size > n:
            out.append(SimplicialComplex(n, frozenset(present)))
            return
        cands = _extension_candidates(present, n, size)
        for mask in range(1 << len(cands)):
            chosen = {c for i, c in enumerate(cands) if mask >> i & 1}
            if not chosen and size < min(d + 1, n):
                # nothing of this size means nothing larger either
                out.append(SimplicialComplex(n, frozenset(present)))
                continue
            grow(size + 1, present | chosen)

    grow(2, frozenset((v,) for v in range(1, n + 1)))
    return out


def canonical_form(K: SimplicialComplex) -> tuple:
    """Lexicographically smallest relabelling; equal iff isomorphic."""
    best = None
    for p in permutations(range(1, K.n + 1)):
        img = tuple(sorted((tuple(sorted(p[v - 1] for v in s)) for s in K.simplices),
                           key=lambda s: (len(s), s)))
        if best is None or img < best:
            best = img
    return (K.n, best)


def isomorphism_classes(complexes: Iterable[SimplicialComplex]) -> list[SimplicialComplex]:
    """First representative of each isomorphism class, input order preserved."""
    seen = set()
    reps = []
    for K in complexes:
        key = canonical_form(K)
        if key not in seen:
            seen.add(key)
            reps.append(K)
    return reps


def faceted_weights(H: WeightedComplex) -> WeightedComplex:
    """Weights multiplied over all sub-simplices of size at least two."""
    out = {}
    for size in range(2, min(H.n, H.max_dim + 1) + 1):
        for s in combinations(range(1, H.n + 1), size):
            w = 1
            for k in range(2, size + 1):
                for sub in combinations(s, k):
                    w = w * H.weight(sub)
                    if w == 0:
                        break
                if w == 0:
                    break
            if w != 1:
                out[s] = w
    return WeightedComplex(H.n, out, H.max_dim)


def indicator_weights(K: SimplicialComplex, dmax: int = DEFAULT_DMAX) -> WeightedComplex:
    """0/1 weighted complex whose support is ``K`` (up to ``dmax``)."""
    out = {}
    for size in range(2, min(K.n, dmax + 1) + 1):
        for s in combinations(range(1, K.n + 1), size):
            if s not in K.simplices:
                out[s] = 0
    return WeightedComplex(K.n, out, dmax)


def full_simplex(n: int, dmax: int | None = None) -> SimplicialComplex:
    return from_facets(n, [range(1, n + 1)] if n else [], dmax=dmax)


def empty_complex(n: int) -> SimplicialComplex:
    return from_facets(n, [])


def falling_factorial(n: int, k: int) -> int:
    """Number of injective maps from a ``k``-set into an ``n``-set."""
    out = 1
    for i in range(k):
        out *= n - i
    return max(out, 0)


def count_labelled(n: int, d: int) -> int:
    return len(enumerate_complexes(n, d))


# --- facet-list text format -------------------------------------------------

def dumps(obj: SimplicialComplex | Hypergraph, dmax: int | None = None) -> str:
    if isinstance(obj, Hypergraph):
        d = dmax if dmax is not None else max((len(e) - 1 for e in obj.edges), default=0)
        lines = [f"hyper n {obj.n} d {d}"]
        lines += [" ".join(map(str, e)) for e in sorted(obj.edges, key=lambda e: (len(e), e))]
    else:
        d = dmax if dmax is not None else max(obj.max_dim, 0)
        lines = [f"n {obj.n} d {d}"]
        lines += [" ".join(map(str, f)) for f in sorted(facets(obj), key=lambda f: (len(f), f))]
    return "\n".join(lines) + "\n"


def loads(text: str) -> SimplicialComplex | Hypergraph:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [(i + 1, ln) for i, ln in enumerate(lines) if ln]
    if not lines:
        raise ValueError("empty input")
    lineno, header = lines[0]
    tok = header.split()
    hyper = tok and tok[0] == "hyper"
    if hyper:
        tok = tok[1:]
    if len(tok) != 4 or tok[0] != "n" or tok[2] != "d":
        raise ValueError(f"line {lineno}: expected header 'n <N> d <D>', got {header!r}")
    try:
        n, d = int(tok[1]), int(tok[3])
    except ValueError:
        raise ValueError(f"line {lineno}: non-integer header field") from None
    sets = []
    for lineno, ln in lines[1:]:
        try:
            verts = [int(x) for x in ln.split()]
        except ValueError:
            raise ValueError(f"line {lineno}: non-integer vertex in {ln!r}") from None
        if verts != sorted(set(verts)):
            raise ValueError(f"line {lineno}: vertices must be strictly increasing")
        if verts[0] < 1 or verts[-1] > n:
            raise ValueError(f"line {lineno}: vertex out of range 1..{n}")
        if len(verts) > d + 1:
            raise ValueError(f"line {lineno}: set of size {len(verts)} exceeds d={d}")
        sets.append(tuple(verts))
    if hyper:
        return Hypergraph(n, frozenset(s for s in sets if len(s) >= 2))
    return from_facets(n, sets)


def num_subsets(n: int, max_size: int) -> int:
    return sum(comb(n, k) for k in range(2, max_size + 1))


def as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)
