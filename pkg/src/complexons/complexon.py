"""Complexon representations.

A complexon is a stack of symmetric kernels ``[0,1]^(d+1) -> [0,1]`` for
``d = 1..D``.  Everything above the truncation dimension ``D`` evaluates to 0
and dimension 0 evaluates to 1.

Stepfunctions keep one full symmetric tensor per dimension (shape ``(m,)*(d+1)``),
either as ``float64`` or as an ``object`` array of :class:`fractions.Fraction`
when built from rational inputs.  Diagonal cells, where a block index repeats,
are ordinary cells with positive measure.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Callable, Mapping, Sequence

import numpy as np

from .simplicial import DEFAULT_DMAX, Hypergraph, SimplicialComplex, WeightedComplex

Number = float | Fraction


def _is_exact(v) -> bool:
    return isinstance(v, (Fraction, int)) and not isinstance(v, bool)


def _check_unit(v, what="value"):
    if not 0 <= v <= 1:
        raise ValueError(f"{what} {v} outside [0,1]")


class Complexon:
    """Evaluation interface shared by every representation."""

    max_dim: int = DEFAULT_DMAX

    def eval(self, d: int, x: Sequence[float]):
        x = tuple(x)
        if len(x) != d + 1:
            raise ValueError(f"dimension {d} needs {d + 1} coordinates, got {len(x)}")
        for c in x:
            if not 0 <= c <= 1:
                raise ValueError(f"coordinate {c} outside [0,1]")
        if d < 1:
            return 1
        if d > self.max_dim:
            return 0
        return self._eval(d, x)

    def _eval(self, d, x):
        raise NotImplementedError

    def eval_batch(self, d: int, X) -> np.ndarray:
        """Vectorised ``eval`` over the rows of an ``(N, d+1)`` array, as floats."""
        X = np.asarray(X, dtype=float).reshape(-1, d + 1)
        if d < 1:
            return np.ones(len(X))
        if d > self.max_dim:
            return np.zeros(len(X))
        return self._eval_batch(d, X)

    def _eval_batch(self, d, X):
        return np.array([float(self._eval(d, tuple(row))) for row in X])

    def eval_grid(self, d: int, points) -> np.ndarray:
        """Values on the full grid ``points^(d+1)``."""
        points = np.asarray(points, dtype=float)
        k = len(points)
        idx = np.indices((k,) * (d + 1)).reshape(d + 1, -1).T
        return self.eval_batch(d, points[idx]).reshape((k,) * (d + 1))


# --- stepfunctions -------------------------------------------------------------


def _symmetrize_check(T: np.ndarray, d: int):
    for perm in permutations(range(d + 1)):
        if perm == tuple(range(d + 1)):
            continue
        if not np.array_equal(T, np.transpose(T, perm)):
            raise ValueError(f"dimension-{d} tensor is not symmetric")


class StepComplexon(Complexon):
    """Stepfunction on a partition of ``[0,1]`` into ``m`` consecutive intervals.

    ``widths`` defaults to the uniform ``1/m`` equipartition.  Block indices in
    the public API are 1-based, as in ``value(1, (1, 2))``.
    """

    def __init__(self, m: int, tensors: Mapping[int, np.ndarray], max_dim: int | None = None,
                 widths: Sequence | None = None, check: bool = True):
        if m < 1:
            raise ValueError("need at least one block")
        self.m = int(m)
        dims = [int(d) for d in tensors]
        self.max_dim = int(max_dim if max_dim is not None else max(dims, default=1))
        if widths is None:
            self.widths = tuple(Fraction(1, self.m) for _ in range(self.m))
            self.uniform = True
        else:
            widths = tuple(w if _is_exact(w) else Fraction(w) for w in widths)
            if len(widths) != self.m or any(w <= 0 for w in widths):
                raise ValueError("widths must be m positive numbers")
            if sum(widths) != 1:
                raise ValueError("widths must sum to 1")
            self.widths = widths
            self.uniform = all(w == widths[0] for w in widths)
        self._tensors: dict[int, np.ndarray] = {}
        for d, T in tensors.items():
            d = int(d)
            T = np.asarray(T)
            if d < 1 or d > self.max_dim:
                raise ValueError(f"tensor dimension {d} outside 1..{self.max_dim}")
            if T.shape != (self.m,) * (d + 1):
                raise ValueError(f"dimension-{d} tensor has shape {T.shape}")
            if T.dtype != object:
                T = T.astype(float)
            if check:
                lo, hi = T.min(), T.max()
                if lo < 0 or hi > 1:
                    raise ValueError(f"dimension-{d} values outside [0,1]")
                if T.size <= 100_000:
                    _symmetrize_check(T, d)
            T.setflags(write=False)
            self._tensors[d] = T
        self.exact = any(T.dtype == object for T in self._tensors.values())
        self._bounds = np.cumsum([0.0] + [float(w) for w in self.widths])

    # construction helpers

    @classmethod
    def from_values(cls, m: int, values: Mapping[int, Mapping[tuple, Number]],
                    max_dim: int | None = None, widths=None) -> "StepComplexon":
        """Build from ``{d: {sorted 1-based block tuple: value}}``; missing cells are 0."""
        exact = all(_is_exact(v) for vals in values.values() for v in vals.values())
        D = max_dim if max_dim is not None else max(values, default=1)
        tensors = {}
        for d in range(1, D + 1):
            T = np.empty((m,) * (d + 1), dtype=object) if exact else np.zeros((m,) * (d + 1))
            if exact:
                T.fill(Fraction(0))
            for key, v in values.get(d, {}).items():
                key = tuple(sorted(key))
                if len(key) != d + 1 or key[0] < 1 or key[-1] > m:
                    raise ValueError(f"bad block tuple {key} for dimension {d}")
                _check_unit(v)
                v = Fraction(v) if exact else float(v)
                for p in set(permutations(key)):
                    T[tuple(b - 1 for b in p)] = v
            tensors[d] = T
        return cls(m, tensors, max_dim=D, widths=widths)

    @classmethod
    def constant(cls, values: Sequence, m: int = 1) -> "StepComplexon":
        tensors = {}
        for d, v in enumerate(values, start=1):
            if _is_exact(v):
                T = np.empty((m,) * (d + 1), dtype=object)
                T.fill(Fraction(v))
            else:
                T = np.full((m,) * (d + 1), float(v))
            tensors[d] = T
        return cls(m, tensors, max_dim=len(values))

    def tensor(self, d: int) -> np.ndarray:
        if d in self._tensors:
            return self._tensors[d]
        if 1 <= d:
            zero = np.zeros((self.m,) * (d + 1))
            if self.exact:
                zero = zero.astype(object) * Fraction(0)
            return zero
        raise ValueError("dimension must be >= 1")

    def exact_tensor(self, d: int) -> np.ndarray:
        """Tensor as an object array of Fractions (floats converted exactly)."""
        T = self.tensor(d)
        if T.dtype == object:
            return np.vectorize(Fraction, otypes=[object])(T)
        return np.vectorize(lambda v: Fraction(float(v)), otypes=[object])(T)

    def float_tensor(self, d: int) -> np.ndarray:
        T = self.tensor(d)
        return T.astype(float) if T.dtype == object else T

    def value(self, d: int, blocks: Sequence[int]):
        """Value on the cell of 1-based ``blocks`` (any order)."""
        if len(blocks) != d + 1:
            raise ValueError("wrong number of block indices")
        if d > self.max_dim:
            return 0
        b = tuple(sorted(int(i) - 1 for i in blocks))
        if b[0] < 0 or b[-1] >= self.m:
            raise ValueError("block index out of range")
        return self.tensor(d)[b]

    def values(self, d: int) -> dict[tuple, Number]:
        """Sorted 1-based block multiset -> value."""
        T = self.tensor(d)
        out = {}
        for key in _multisets(self.m, d + 1):
            out[tuple(k + 1 for k in key)] = T[key]
        return out

    def block_of(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.uniform:
            return np.minimum((x * self.m).astype(int), self.m - 1)
        return np.clip(np.searchsorted(self._bounds, x, side="right") - 1, 0, self.m - 1)

    def _eval(self, d, x):
        b = tuple(sorted(int(i) for i in self.block_of(x)))
        return self.tensor(d)[b]

    def _eval_batch(self, d, X):
        idx = self.block_of(X)
        return self.float_tensor(d)[tuple(idx.T)]

    def with_tensors(self, tensors, max_dim=None, check=False) -> "StepComplexon":
        return StepComplexon(self.m, tensors, max_dim=max_dim if max_dim is not None else self.max_dim,
                             widths=None if self.uniform else self.widths,
                             check=check)

    def equals(self, other: "StepComplexon") -> bool:
        if self.m != other.m or self.widths != other.widths:
            return False
        D = max(self.max_dim, other.max_dim)
        return all(np.array_equal(self.tensor(d), other.tensor(d)) for d in range(1, D + 1))

    def is_constant(self, d: int) -> bool:
        T = self.tensor(d)
        flat = T.ravel()
        return bool(np.all(flat == flat[0]))

    def __repr__(self):
        kind = "exact" if self.exact else "float"
        return f"StepComplexon(m={self.m}, D={self.max_dim}, {kind})"


def _multisets(m: int, k: int):
    from itertools import combinations_with_replacement
    return combinations_with_replacement(range(m), k)


@dataclass(frozen=True)
class HomogeneousComplexon(Complexon):
    """Constant ``p_d`` on every ``[0,1]^(d+1)``."""

    probs: tuple

    def __post_init__(self):
        probs = tuple(self.probs)
        for p in probs:
            _check_unit(p, "probability")
        object.__setattr__(self, "probs", probs)

    @property
    def max_dim(self) -> int:
        return len(self.probs)

    def prob(self, d: int):
        if d < 1:
            return 1
        return self.probs[d - 1] if d <= len(self.probs) else 0

    def _eval(self, d, x):
        return self.prob(d)

    def _eval_batch(self, d, X):
        return np.full(len(X), float(self.prob(d)))

    def as_step(self, m: int = 1) -> StepComplexon:
        return StepComplexon.constant(self.probs, m=m)


# --- Cech complexon on a curve ---------------------------------------------------


def bouquet_curve(t):
    """Bouquet of two unit circles centred at (-1, 0) and (1, 0), traced over ``[0,1]``.

    Accepts a scalar or an array; returns shape ``(2,)`` or ``(N, 2)``.
    """
    arr = np.asarray(t, dtype=float)
    if np.any((arr < 0) | (arr > 1)):
        raise ValueError("curve parameter outside [0,1]")
    c, s = np.cos(4 * np.pi * arr), np.sin(4 * np.pi * arr)
    x = np.where(arr < 0.5, c - 1, 1 - c)
    out = np.stack([x, s], axis=-1)
    return out


def polyline_curve(points) -> Callable:
    """Piecewise linear curve through ``points`` at equally spaced parameters."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or len(pts) == 0:
        raise ValueError("polyline needs at least one point")
    if len(pts) == 1:
        return lambda t: np.broadcast_to(pts[0], np.shape(t) + pts[0].shape).copy()
    grid = np.linspace(0, 1, len(pts))

    def curve(t):
        t = np.asarray(t, dtype=float)
        return np.stack([np.interp(t, grid, pts[:, k]) for k in range(pts.shape[1])], axis=-1)

    return curve


class CechCurveComplexon(Complexon):
    """1 when the curve images of the coordinates have diameter below ``epsilon``."""

    def __init__(self, curve: Callable, epsilon: float, max_dim: int = DEFAULT_DMAX, name: str = "curve"):
        if not epsilon > 0:
            raise ValueError("epsilon must be positive")
        self.curve = curve
        self.epsilon = float(epsilon)
        self.max_dim = max_dim
        self.name = name

    def _eval(self, d, x):
        return int(self._eval_batch(d, np.array([x], dtype=float))[0])

    def _eval_batch(self, d, X):
        P = self.curve(X)  # (N, d+1, k)
        diam2 = np.zeros(len(X))
        for i, j in combinations(range(d + 1), 2):
            diam2 = np.maximum(diam2, np.sum((P[:, i] - P[:, j]) ** 2, axis=-1))
        return (np.sqrt(diam2) < self.epsilon).astype(float)

    def __repr__(self):
        return f"CechCurveComplexon({self.name}, epsilon={self.epsilon}, D={self.max_dim})"


def cech_complexon(curve="bouquet", epsilon: float = 0.5, max_dim: int = DEFAULT_DMAX) -> CechCurveComplexon:
    if isinstance(curve, str):
        if curve != "bouquet":
            raise ValueError(f"unknown built-in curve {curve!r}")
        return CechCurveComplexon(bouquet_curve, epsilon, max_dim, name="bouquet")
    if callable(curve):
        return CechCurveComplexon(curve, epsilon, max_dim)
    return CechCurveComplexon(polyline_curve(curve), epsilon, max_dim, name="polyline")


# --- faceting ----------------------------------------------------------------------


class FacetedComplexon(Complexon):
    """Pointwise product of ``base`` over every sub-tuple of size at least two."""

    def __init__(self, base: Complexon):
        self.base = base
        self.max_dim = base.max_dim

    def _eval(self, d, x):
        out = 1
        for k in range(2, d + 2):
            for sub in combinations(x, k):
                out = out * self.base._eval(k - 1, sub)
        return out

    def _eval_batch(self, d, X):
        out = np.ones(len(X))
        for k in range(2, d + 2):
            for cols in combinations(range(d + 1), k):
                out = out * self.base.eval_batch(k - 1, X[:, cols])
        return out


def _face_product(tensors: Mapping[int, np.ndarray], d: int, m: int, exact: bool) -> np.ndarray:
    shape = (m,) * (d + 1)
    if exact:
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(1))
    else:
        out = np.ones(shape)
    for k in range(2, d + 2):
        T = tensors[k - 1]
        for axes in combinations(range(d + 1), k):
            missing = [a for a in range(d + 1) if a not in axes]
            out = out * np.expand_dims(T, missing) if missing else out * T
    return out


def facet_complexon(W: Complexon) -> Complexon:
    """Faceted transform; closed form for stepfunctions and homogeneous complexons."""
    if isinstance(W, HomogeneousComplexon):
        q = []
        for d in range(1, W.max_dim + 1):
            v = 1
            for j in range(1, d + 1):
                v = v * W.probs[j - 1] ** math.comb(d + 1, j + 1)
            q.append(v)
        return HomogeneousComplexon(tuple(q))
    if isinstance(W, StepComplexon):
        tensors = {d: W.tensor(d) for d in range(1, W.max_dim + 1)}
        out = {d: _face_product(tensors, d, W.m, W.exact) for d in range(1, W.max_dim + 1)}
        return W.with_tensors(out)
    return FacetedComplexon(W)


# --- pixel pictures ---------------------------------------------------------------


def pixel_complexon(K: SimplicialComplex | WeightedComplex, max_dim: int | None = None,
                    exact: bool | None = None) -> StepComplexon:
    """Stepfunction on ``n`` equal blocks; cells with a repeated block are 0.

    For an unweighted complex the 0/1 values are stored as floats (exact in
    binary) unless ``exact`` is set.
    """
    n = K.n
    if isinstance(K, WeightedComplex):
        D = K.max_dim if max_dim is None else max_dim
        if exact is None:
            exact = all(_is_exact(v) for v in K.weights.values())
    else:
        D = max(K.max_dim, 1) if max_dim is None else max_dim
        exact = bool(exact)
    tensors = {}
    for d in range(1, D + 1):
        shape = (n,) * (d + 1)
        if exact:
            T = np.empty(shape, dtype=object)
            T.fill(Fraction(0))
        else:
            T = np.zeros(shape)
        if isinstance(K, WeightedComplex):
            for s in combinations(range(1, n + 1), d + 1):
                w = K.weight(s)
                if w:
                    _fill_sym(T, s, Fraction(w) if exact else float(w))
        else:
            sims = np.array(K.dim_simplices(d), dtype=int).reshape(-1, d + 1) - 1
            if len(sims):
                if exact:
                    for s in sims:
                        _fill_sym(T, tuple(s + 1), Fraction(1))
                else:
                    for perm in permutations(range(d + 1)):
                        T[tuple(sims[:, list(perm)].T)] = 1.0
        tensors[d] = T
    return StepComplexon(n, tensors, max_dim=D, check=n <= 12)


def pixel_hypergraph(H: Hypergraph, max_dim: int | None = None) -> StepComplexon:
    """Pixel stepfunction of a hypergraph: 1 on cells of edges, 0 elsewhere."""
    n = H.n
    D = max((len(e) - 1 for e in H.edges), default=1) if max_dim is None else max_dim
    tensors = {}
    for d in range(1, D + 1):
        T = np.zeros((n,) * (d + 1))
        sims = np.array([e for e in H.edges if len(e) == d + 1], dtype=int).reshape(-1, d + 1) - 1
        for perm in permutations(range(d + 1)):
            T[tuple(sims[:, list(perm)].T)] = 1.0
        tensors[d] = T
    return StepComplexon(n, tensors, max_dim=D, check=False)


def _fill_sym(T, simplex, value):
    idx = tuple(v - 1 for v in simplex)
    for p in permutations(idx):
        T[p] = value


# --- projection, permutation, refinement ---------------------------------------------


def _overlap_matrix(src_bounds: Sequence, dst_bounds: Sequence) -> np.ndarray:
    """``M[p, b] = |P_p cap B_b| / |P_p|`` with exact Fractions."""
    P, B = len(dst_bounds) - 1, len(src_bounds) - 1
    M = np.empty((P, B), dtype=object)
    for p in range(P):
        lo, hi = dst_bounds[p], dst_bounds[p + 1]
        for b in range(B):
            ov = min(hi, src_bounds[b + 1]) - max(lo, src_bounds[b])
            M[p, b] = ov / (hi - lo) if ov > 0 else Fraction(0)
    return M


def _bounds_of(W: StepComplexon) -> list[Fraction]:
    out = [Fraction(0)]
    for w in W.widths:
        out.append(out[-1] + w)
    return out


def _contract_all_axes(T: np.ndarray, M: np.ndarray) -> np.ndarray:
    out = T
    for _ in range(T.ndim):
        # contract leading axis, push the new axis to the back
        out = np.tensordot(out, M, axes=([0], [1]))
    return out


def project(W: Complexon, breakpoints: Sequence, resolution: int = 64) -> StepComplexon:
    """Average ``W`` over the cells of the interval partition given by ``breakpoints``.

    ``breakpoints`` are the interior cut points (or the full list including 0 and 1).
    Exact for stepfunction and homogeneous inputs; midpoint quadrature with about
    ``resolution`` points per unit length per axis otherwise.
    """
    bounds = [Fraction(b) if not isinstance(b, Fraction) else b for b in breakpoints]
    if not bounds or bounds[0] != 0:
        bounds = [Fraction(0)] + bounds
    if bounds[-1] != 1:
        bounds = bounds + [Fraction(1)]
    widths = [bounds[i + 1] - bounds[i] for i in range(len(bounds) - 1)]
    if any(w <= 0 for w in widths):
        raise ValueError("partition has a degenerate or out-of-order part")
    P = len(widths)
    uniform = all(w == Fraction(1, P) for w in widths)
    wid = None if uniform else widths
    if isinstance(W, HomogeneousComplexon):
        out = StepComplexon.constant(W.probs, m=P)
        return out if uniform else StepComplexon(P, {d: out.tensor(d) for d in range(1, W.max_dim + 1)},
                                                  max_dim=W.max_dim, widths=wid)
    if isinstance(W, StepComplexon):
        M = _overlap_matrix(_bounds_of(W), bounds)
        if not W.exact:
            M = M.astype(float)
        tensors = {d: _contract_all_axes(W.tensor(d), M) for d in range(1, W.max_dim + 1)}
        return StepComplexon(P, tensors, max_dim=W.max_dim, widths=wid, check=False)
    tensors = {}
    pts, owner = [], []
    for p, w in enumerate(widths):
        k = max(1, int(round(resolution * float(w))))
        lo = float(bounds[p])
        pts.extend(lo + (np.arange(k) + 0.5) * float(w) / k)
        owner.extend([p] * k)
    pts, owner = np.array(pts), np.array(owner)
    counts = np.bincount(owner, minlength=P).astype(float)
    for d in range(1, W.max_dim + 1):
        G = W.eval_grid(d, pts)
        S = G
        for _ in range(d + 1):
            S = np.moveaxis(np.add.reduceat(S, np.flatnonzero(np.diff(np.r_[-1, owner])), axis=0), 0, -1)
        norm = np.ones((P,) * (d + 1))
        for ax in range(d + 1):
            shape = [1] * (d + 1)
            shape[ax] = P
            norm = norm * counts.reshape(shape)
        tensors[d] = np.clip(S / norm, 0.0, 1.0)
    return StepComplexon(P, tensors, max_dim=W.max_dim, widths=wid, check=False)


def apply_block_permutation(W: StepComplexon, perm: Sequence[int]) -> StepComplexon:
    """Relabel blocks: the result at ``(b_1..)`` is ``W`` at ``(perm[b_1]..)`` (1-based)."""
    p = np.asarray(perm, dtype=int) - 1
    if sorted(p.tolist()) != list(range(W.m)):
        raise ValueError("not a bijection on the blocks")
    if not W.uniform:
        raise ValueError("block permutations are measure preserving only on equipartitions")
    tensors = {d: W.tensor(d)[np.ix_(*([p] * (d + 1)))] for d in range(1, W.max_dim + 1)}
    return W.with_tensors(tensors)


def refine(W: StepComplexon, k: int) -> StepComplexon:
    """Split every block into ``k`` equal sub-blocks (same function on ``[0,1]``)."""
    if not W.uniform:
        raise ValueError("refine expects an equipartition")
    tensors = {}
    for d in range(1, W.max_dim + 1):
        T = W.tensor(d)
        for ax in range(d + 1):
            T = np.repeat(T, k, axis=ax)
        tensors[d] = T
    return StepComplexon(W.m * k, tensors, max_dim=W.max_dim, check=False)


def refine_to_common(W1: StepComplexon, W2: StepComplexon) -> tuple[StepComplexon, StepComplexon]:
    """Express both on a shared partition: ``lcm(m1, m2)`` equal blocks for equipartitions."""
    if W1.uniform and W2.uniform:
        L = math.lcm(W1.m, W2.m)
        return refine(W1, L // W1.m), refine(W2, L // W2.m)
    bounds = sorted(set(_bounds_of(W1)) | set(_bounds_of(W2)))
    return project(W1, bounds), project(W2, bounds)


def as_step(W: Complexon) -> StepComplexon:
    if isinstance(W, StepComplexon):
        return W
    if isinstance(W, HomogeneousComplexon):
        return W.as_step()
    raise TypeError(f"{type(W).__name__} is not a stepfunction; project it first")


def truncate(W: StepComplexon, d: int) -> StepComplexon:
    """Same values up to dimension ``d``, zero above."""
    return W.with_tensors({j: W.tensor(j) for j in range(1, min(d, W.max_dim) + 1)}, max_dim=W.max_dim)


# --- weight sequences --------------------------------------------------------------


@dataclass(frozen=True)
class WeightSequence:
    alphas: tuple

    def __post_init__(self):
        a = tuple(self.alphas)
        if any(x < 0 for x in a):
            raise ValueError("weights must be nonnegative")
        object.__setattr__(self, "alphas", a)

    @classmethod
    def default(cls, D: int = DEFAULT_DMAX) -> "WeightSequence":
        return cls(tuple(Fraction(1, 2 ** j) for j in range(1, D + 1)))

    @classmethod
    def parse(cls, text: str) -> "WeightSequence":
        return cls(tuple(Fraction(t.strip()) for t in text.split(",") if t.strip()))

    def __getitem__(self, j: int):
        return self.alphas[j - 1] if 1 <= j <= len(self.alphas) else 0

    def __len__(self):
        return len(self.alphas)

    def total(self, upto: int | None = None):
        a = self.alphas if upto is None else self.alphas[:upto]
        return sum(a, Fraction(0)) if all(_is_exact(x) for x in a) else float(sum(a))


# --- text format -----------------------------------------------------------------------


def _fmt(v) -> str:
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def dumps(W: StepComplexon | HomogeneousComplexon) -> str:
    if isinstance(W, HomogeneousComplexon):
        lines = [f"complexon homog D {W.max_dim}"]
        lines += [f"d {d} {_fmt(p)}" for d, p in enumerate(W.probs, start=1)]
    elif isinstance(W, StepComplexon):
        if not W.uniform:
            raise ValueError("text format covers equipartition stepfunctions only")
        lines = [f"complexon step m {W.m} D {W.max_dim}"]
        for d in range(1, W.max_dim + 1):
            for key, v in W.values(d).items():
                lines.append(f"d {d} {' '.join(map(str, key))} {_fmt(v)}")
    else:
        raise TypeError(f"cannot serialise {type(W).__name__}")
    return "\n".join(lines) + "\n"


class MissingEntryWarning(UserWarning):
    pass


def parse(text: str) -> tuple[StepComplexon | HomogeneousComplexon, list[tuple]]:
    """Parse the text format; also return the list of cells that defaulted to 0."""
    rows = [(i + 1, ln.split("#", 1)[0].split()) for i, ln in enumerate(text.splitlines())]
    rows = [(i, t) for i, t in rows if t]
    if not rows:
        raise ValueError("empty complexon file")
    lineno, head = rows[0]

    def val(tok, ln):
        try:
            v = Fraction(tok)
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"line {ln}: bad value {tok!r}") from None
        if not 0 <= v <= 1:
            raise ValueError(f"line {ln}: value {tok} outside [0,1]")
        return v

    def intf(tok, ln, what):
        try:
            return int(tok)
        except ValueError:
            raise ValueError(f"line {ln}: bad {what} {tok!r}") from None

    if head[:2] == ["complexon", "homog"] and len(head) == 4 and head[2] == "D":
        D = intf(head[3], lineno, "D")
        probs = {}
        for ln, t in rows[1:]:
            if len(t) != 3 or t[0] != "d":
                raise ValueError(f"line {ln}: expected 'd <d> <value>'")
            d = intf(t[1], ln, "dimension")
            if not 1 <= d <= D:
                raise ValueError(f"line {ln}: dimension {d} outside 1..{D}")
            probs[d] = val(t[2], ln)
        missing = [(d,) for d in range(1, D + 1) if d not in probs]
        return HomogeneousComplexon(tuple(probs.get(d, Fraction(0)) for d in range(1, D + 1))), missing
    if head[:2] == ["complexon", "step"] and len(head) == 6 and head[2] == "m" and head[4] == "D":
        m, D = intf(head[3], lineno, "m"), intf(head[5], lineno, "D")
        values: dict[int, dict] = {d: {} for d in range(1, D + 1)}
        for ln, t in rows[1:]:
            if len(t) < 3 or t[0] != "d":
                raise ValueError(f"line {ln}: expected 'd <d> <blocks> <value>'")
            d = intf(t[1], ln, "dimension")
            if not 1 <= d <= D:
                raise ValueError(f"line {ln}: dimension {d} outside 1..{D}")
            if len(t) != d + 4:
                raise ValueError(f"line {ln}: dimension {d} needs {d + 1} block indices")
            blocks = tuple(intf(x, ln, "block") for x in t[2:-1])
            if list(blocks) != sorted(blocks):
                raise ValueError(f"line {ln}: block indices must be sorted")
            if blocks[0] < 1 or blocks[-1] > m:
                raise ValueError(f"line {ln}: block index outside 1..{m}")
            values[d][blocks] = val(t[-1], ln)
        missing = [(d,) + tuple(k + 1 for k in key) for d in range(1, D + 1)
                   for key in _multisets(m, d + 1) if tuple(k + 1 for k in key) not in values[d]]
        return StepComplexon.from_values(m, values, max_dim=D), missing
    raise ValueError(f"line {lineno}: unknown header {' '.join(head)!r}")


def loads(text: str):
    W, missing = parse(text)
    if missing:
        warnings.warn(f"{len(missing)} missing entries defaulted to 0", MissingEntryWarning, stacklevel=2)
    return W
