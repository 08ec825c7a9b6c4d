"""Cut norms of weighted multidimensional arrays and cut distances of complexons.

Arrays carry one weight vector per axis (block measures).  The cut norm is the
largest ``|sum_{i in S_1 x ... x S_r} A[i] w_1[i_1] ... w_r[i_r]|`` over subset
tuples.  Exact values come from enumeration, heuristic ones from alternating
maximization; in both cases the reported value is recomputed from the
certificate by :func:`box_value`, so a certificate always reproduces its value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from typing import Sequence

import numpy as np

from .complexon import (
    Complexon,
    HomogeneousComplexon,
    StepComplexon,
    WeightSequence,
    apply_block_permutation,
    as_step,
    pixel_complexon,
    project,
    refine,
    refine_to_common,
)
from .simplicial import SimplicialComplex, blowup

EXACT = "exact"
HEURISTIC = "heuristic-lower-bound-of-max"

GUARD_BITS = 26
DEFAULT_RESTARTS = 20
PERMUTATION_BUDGET = 40320


class CutGuardError(ValueError):
    """Exact enumeration would exceed the subset-tuple guard."""


# --- arrays ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MultiArray:
    """Real array of arity ``r`` with a positive weight vector per axis.

    Object arrays (Fractions) are treated as exact; weights default to ``1/m``.
    """

    values: np.ndarray
    weights: tuple = None

    def __post_init__(self):
        A = np.asarray(self.values)
        if A.ndim < 1:
            raise ValueError("need at least one axis")
        exact = A.dtype == object
        if exact:
            A = np.vectorize(Fraction, otypes=[object])(A) if A.size else A
        else:
            A = A.astype(float)
            if not np.all(np.isfinite(A)):
                raise ValueError("entries must be finite")
        if self.weights is None:
            ws = tuple(_uniform(m, exact) for m in A.shape)
        else:
            if len(self.weights) != A.ndim:
                raise ValueError("one weight vector per axis")
            ws = []
            for m, w in zip(A.shape, self.weights):
                w = [Fraction(x) for x in w] if exact else [float(x) for x in w]
                if len(w) != m or any(x <= 0 for x in w):
                    raise ValueError("weights must be positive, one per index")
                if exact and sum(w) != 1 or not exact and abs(sum(w) - 1) > 1e-9:
                    raise ValueError("weights on each axis must sum to 1")
                ws.append(np.array(w, dtype=object if exact else float))
            ws = tuple(ws)
        object.__setattr__(self, "values", A)
        object.__setattr__(self, "weights", ws)

    @property
    def arity(self) -> int:
        return self.values.ndim

    @property
    def shape(self) -> tuple:
        return self.values.shape

    @property
    def exact(self) -> bool:
        return self.values.dtype == object

    def weighted(self) -> np.ndarray:
        B = self.values
        for ax, w in enumerate(self.weights):
            shape = [1] * self.arity
            shape[ax] = len(w)
            B = B * w.reshape(shape)
        return B

    def __neg__(self):
        return MultiArray(-self.values, self.weights)


def _uniform(m: int, exact: bool) -> np.ndarray:
    if exact:
        return np.array([Fraction(1, m)] * m, dtype=object)
    return np.full(m, 1.0 / m)


def _zero(A: MultiArray):
    return Fraction(0) if A.exact else 0.0


@dataclass(frozen=True)
class CutValue:
    """A cut-norm value with the subset tuple (1-based indices) attaining it."""

    value: Fraction | float
    certificate: tuple | dict
    exactness: str

    def __float__(self):
        return float(self.value)


def box_value(A: MultiArray, certificate: Sequence[Sequence[int]]):
    """Signed weighted sum of ``A`` over the box given by 1-based index sets."""
    if any(len(S) == 0 for S in certificate):
        return _zero(A)
    idx = np.ix_(*[np.asarray(S, dtype=int) - 1 for S in certificate])
    sub = A.weighted()[idx]
    if A.exact:
        return sum(sub.ravel().tolist(), Fraction(0))
    return float(np.sum(sub))


def _finish(A: MultiArray, cert, exactness: str, one_sided: bool) -> CutValue:
    cert = tuple(tuple(sorted(int(i) for i in S)) for S in cert)
    v = box_value(A, cert)
    return CutValue(v if one_sided else abs(v), cert, exactness)


def _sign_shortcut(A: MultiArray, one_sided: bool):
    """Full sets are optimal when all weighted entries share a sign."""
    B = A.weighted()
    full = tuple(tuple(range(1, m + 1)) for m in A.shape)
    if np.all(B >= 0):
        return _finish(A, full, EXACT, one_sided)
    if np.all(B <= 0):
        if one_sided:
            return _finish(A, tuple(() for _ in A.shape), EXACT, one_sided)
        return _finish(A, full, EXACT, one_sided)
    return None


# --- exact enumeration -------------------------------------------------------------------


def _integer_scaled(B: np.ndarray):
    """Object array of Fractions -> integer array with a common denominator."""
    flat = B.ravel().tolist()
    den = 1
    for x in flat:
        den = math.lcm(den, x.denominator)
    ints = [int(x * den) for x in flat]
    big = max((abs(v) for v in ints), default=0) * max(len(ints), 1)
    if big < 2 ** 62:
        return np.array(ints, dtype=np.int64).reshape(B.shape)
    return np.array(ints, dtype=object).reshape(B.shape)


def _masks(m: int, dtype) -> np.ndarray:
    codes = np.arange(2 ** m)[:, None]
    return ((codes >> np.arange(m)) & 1).astype(dtype)


def _mask_to_set(code: int, m: int) -> tuple[int, ...]:
    return tuple(i + 1 for i in range(m) if code >> i & 1)


def cut_norm_exact(A: MultiArray, one_sided: bool = False) -> CutValue:
    """Maximize over all subset tuples.

    The last axis is optimized in closed form (take the indices whose marginal
    has the right sign), so only the other axes are enumerated.
    """
    if sum(A.shape) > GUARD_BITS:
        raise CutGuardError(f"2^{sum(A.shape)} subset tuples exceed the 2^{GUARD_BITS} guard")
    quick = _sign_shortcut(A, one_sided)
    if quick is not None:
        return quick
    B = A.weighted()
    if A.exact:
        B = _integer_scaled(B)
    shape = A.shape
    G = B.reshape((1,) + shape)
    for m in shape[:-1]:
        N = G.shape[0]
        rest = G.shape[2:]
        M = _masks(m, G.dtype)
        G = np.matmul(M[None], G.reshape(N, m, -1)).reshape((N * 2 ** m,) + rest)
    pos = np.where(G > 0, G, 0).sum(axis=1)
    neg = -np.where(G < 0, G, 0).sum(axis=1)
    score = pos if one_sided else np.maximum(pos, neg)
    best = int(np.argmax(score))
    cert = []
    code = best
    for m in reversed(shape[:-1]):
        cert.append(_mask_to_set(code % 2 ** m, m))
        code //= 2 ** m
    cert.reverse()
    row = G[best]
    last = row > 0 if one_sided or pos[best] >= neg[best] else row < 0
    cert.append(tuple(int(i) + 1 for i in np.flatnonzero(last)))
    return _finish(A, cert, EXACT, one_sided)


# --- alternating maximization -----------------------------------------------------------


def _marginal(B: np.ndarray, S: list[np.ndarray], ax: int) -> np.ndarray:
    T = B
    for a in reversed(range(B.ndim)):
        if a != ax:
            T = np.tensordot(T, S[a], axes=([a], [0]))
    return T


def cut_norm_heuristic(A: MultiArray, restarts: int = DEFAULT_RESTARTS, seed=0,
                       one_sided: bool = False) -> CutValue:
    """Alternating maximization from random starts; a lower bound on the cut norm.

    Each axis in turn is reset to the indices with positive marginal; a run stops
    once a full sweep brings no improvement.  Both signs are tried unless
    ``one_sided``.
    """
    quick = _sign_shortcut(A, one_sided)
    if quick is not None:
        return quick
    B = A.weighted().astype(float)
    rng = np.random.default_rng(seed)
    signs = (1.0,) if one_sided else (1.0, -1.0)
    best_val, best_cert = 0.0, tuple(() for _ in A.shape)
    for _ in range(restarts):
        init = [(rng.random(m) < 0.5).astype(float) for m in A.shape]
        for sign in signs:
            S = [s.copy() for s in init]
            cur = sign * _marginal(B, S, 0) @ S[0]
            improved = True
            while improved:
                improved = False
                for ax in range(A.arity):
                    g = sign * _marginal(B, S, ax)
                    new = (g > 0).astype(float)
                    val = float(g @ new)
                    if val > cur + 1e-12:
                        S[ax], cur, improved = new, val, True
            if cur > best_val + 1e-12:
                best_val = cur
                best_cert = tuple(tuple(int(i) + 1 for i in np.flatnonzero(s)) for s in S)
    return _finish(A, best_cert, HEURISTIC, one_sided)


def cut_norm(A: MultiArray, mode: str = "auto", restarts: int = DEFAULT_RESTARTS, seed=0,
             one_sided: bool = False) -> CutValue:
    """``mode`` is ``exact``, ``heuristic`` or ``auto`` (exact within the guard)."""
    if mode == "exact" or mode == "auto" and sum(A.shape) <= GUARD_BITS:
        return cut_norm_exact(A, one_sided)
    if mode in ("heuristic", "auto"):
        return cut_norm_heuristic(A, restarts, seed, one_sided)
    raise ValueError(f"unknown mode {mode!r}")


def one_sided_cut_norm(A: MultiArray, mode: str = "exact", **kw) -> CutValue:
    """``max`` of the signed box sum; empty sets are allowed, so the value is >= 0."""
    return cut_norm(A, mode, one_sided=True, **kw)


def cut_norm_upper_bound(A: MultiArray) -> float:
    """Certified upper bound without enumeration.

    The smaller of the larger one-signed mass and, over each axis, the spectral
    norm of the flattening times ``sqrt`` of the box size.
    """
    B = A.weighted().astype(float)
    mass = max(float(B[B > 0].sum()), float(-B[B < 0].sum()))
    best = mass
    size = B.size
    for ax in range(A.arity):
        M = np.moveaxis(B, ax, 0).reshape(B.shape[ax], -1)
        small = M @ M.T if M.shape[0] <= M.shape[1] else M.T @ M
        spec = math.sqrt(max(float(np.linalg.eigvalsh(small)[-1]), 0.0))
        best = min(best, spec * math.sqrt(size))
    return best * (1 + 1e-9)


# --- stepfunction distances ----------------------------------------------------------------


def _difference(W1: StepComplexon, W2: StepComplexon, d: int) -> MultiArray:
    exact = W1.exact or W2.exact
    if exact:
        D = W1.exact_tensor(d) - W2.exact_tensor(d)
        w = [Fraction(x) for x in W1.widths]
    else:
        D = W1.float_tensor(d) - W2.float_tensor(d)
        w = [float(x) for x in W1.widths]
    return MultiArray(D, tuple([w] * (d + 1)))


def _common(W1: Complexon, W2: Complexon) -> tuple[StepComplexon, StepComplexon]:
    return refine_to_common(as_step(W1), as_step(W2))


def d_cut_d(W1: Complexon, W2: Complexon, d: int, mode: str = "auto",
            restarts: int = DEFAULT_RESTARTS, seed=0) -> CutValue:
    """Labeled cut distance of the dimension-``d`` kernels."""
    U, W = _common(W1, W2)
    if d > U.max_dim and d > W.max_dim:
        empty = tuple(() for _ in range(d + 1))
        return CutValue(Fraction(0) if U.exact or W.exact else 0.0, empty, EXACT)
    return cut_norm(_difference(U, W, d), mode, restarts, seed)


def _alphas(alphas) -> WeightSequence:
    if isinstance(alphas, WeightSequence):
        return alphas
    return WeightSequence(tuple(alphas))


def _combine(parts: dict, a: WeightSequence) -> CutValue:
    total = 0
    for j, cv in parts.items():
        total = total + a[j] * cv.value
    tag = EXACT if all(cv.exactness == EXACT for cv in parts.values()) else HEURISTIC
    return CutValue(total, {j: cv.certificate for j, cv in parts.items()}, tag)


def d_cut(W1: Complexon, W2: Complexon, alphas, mode: str = "auto",
          restarts: int = DEFAULT_RESTARTS, seed=0, _stop=None) -> CutValue:
    """``sum_j alpha_j d_cut_j``; the certificate maps each dimension to its subsets."""
    a = _alphas(alphas)
    U, W = _common(W1, W2)
    D = max(U.max_dim, W.max_dim)
    parts = {}
    running = 0
    for j in range(1, len(a) + 1):
        if a[j] == 0 or j > D:
            continue
        parts[j] = d_cut_d(U, W, j, mode, restarts, seed)
        running = running + a[j] * parts[j].value
        if _stop is not None and running >= _stop:
            break
    return _combine(parts, a)


def _float_step(W: Complexon) -> StepComplexon:
    S = as_step(W)
    if not S.exact:
        return S
    return S.with_tensors({d: S.float_tensor(d) for d in range(1, S.max_dim + 1)})


def d_cut_upper_bound(W1: Complexon, W2: Complexon, alphas, exact_limit: int = 12) -> float:
    """Certified upper bound on ``d_cut``: exact per dimension when the cells are
    few, :func:`cut_norm_upper_bound` otherwise."""
    a = _alphas(alphas)
    # floats throughout: refining an exact constant to many blocks is costly
    U, W = refine_to_common(_float_step(W1), _float_step(W2))
    total = 0.0
    for j in range(1, len(a) + 1):
        if a[j] == 0 or j > max(U.max_dim, W.max_dim):
            continue
        A = _difference(U, W, j)
        if (j + 1) * U.m <= exact_limit:
            v = float(cut_norm_exact(A).value)
        else:
            v = cut_norm_upper_bound(A)
        total += float(a[j]) * v
    return total


def _disjoint_configs(k: int, r: int) -> np.ndarray:
    """Ways to hand ``k`` equal parts of one block to ``r`` sets or to none."""
    out = []
    for counts in product(range(k + 1), repeat=r):
        if sum(counts) <= k:
            out.append(counts)
    return np.array(out, dtype=int)


def disjoint_cut_sup(W1: Complexon, W2: Complexon, d: int, parts: int | None = None,
                     limit: int = 2 ** 22) -> CutValue:
    """Best box over pairwise disjoint sets, splitting each block into equal parts.

    Each block is cut into ``parts`` (default ``d + 1``) equal pieces and every
    piece goes to at most one of the ``d + 1`` sets.  The result is a lower bound
    on the supremum over disjoint measurable sets; with ``d + 1`` pieces it is
    at least ``d_cut_d / (d+1)^(d+1)``.  The certificate lists, per set, the
    ``(block, lo, hi)`` slices in block-relative coordinates.
    """
    U, W = _common(W1, W2)
    r = d + 1
    k = parts or r
    A = _difference(U, W, d)
    m = U.m
    configs = _disjoint_configs(k, r)
    total = len(configs) ** m
    if total > limit:
        raise CutGuardError(f"{total} disjoint configurations exceed the limit {limit}")
    B = A.weighted().astype(float)
    shares = configs / k  # (c, r)
    best, best_abs = None, -1.0
    for chunk in _chunks(m, len(configs)):
        # chunk: (n, m) config indices per block
        vals = B
        # contract axes one at a time; axis i uses share of set i
        n = chunk.shape[0]
        vals = np.broadcast_to(B, (n,) + B.shape)
        for i in reversed(range(r)):
            s = shares[chunk, i]  # (n, m)
            vals = np.einsum("n...b,nb->n...", vals, s)
        idx = int(np.argmax(np.abs(vals)))
        if abs(vals[idx]) > best_abs + 1e-15:
            best_abs = float(abs(vals[idx]))
            best = chunk[idx]
    cert = []
    for i in range(r):
        pieces = []
        for b in range(m):
            counts = configs[best[b]]
            lo = int(counts[:i].sum())
            if counts[i]:
                pieces.append((b + 1, Fraction(lo, k), Fraction(lo + counts[i], k)))
        cert.append(tuple(pieces))
    cert = tuple(cert)
    return CutValue(abs(disjoint_value(A, cert)), cert, EXACT)


def _chunks(m: int, c: int, size: int = 4096):
    codes = np.arange(c ** m)
    for start in range(0, len(codes), size):
        block = codes[start:start + size]
        out = np.empty((len(block), m), dtype=int)
        for b in range(m):
            out[:, b] = block // c ** (m - 1 - b) % c
        yield out


def disjoint_value(A: MultiArray, certificate) -> Fraction | float:
    """Signed integral over a box of block slices ``(block, lo, hi)`` per axis."""
    vecs = []
    for pieces, w in zip(certificate, A.weights):
        v = np.array([_zero(A)] * len(w), dtype=object if A.exact else float)
        for b, lo, hi in pieces:
            v[b - 1] += (hi - lo) if A.exact else float(hi - lo)
        vecs.append(v)
    T = A.weighted()
    for v in reversed(vecs):
        T = np.tensordot(T, v, axes=([T.ndim - 1], [0]))
    return T if A.exact else float(T)


# --- unlabeled distance ----------------------------------------------------------------------


@dataclass(frozen=True)
class DeltaResult:
    upper: CutValue
    lower: Fraction | float
    permutation: tuple
    search: str


def _all_constant(W: StepComplexon, D: int) -> bool:
    return all(W.is_constant(j) for j in range(1, D + 1))


def delta_cut(W1: Complexon, W2: Complexon, alphas, budget: int = PERMUTATION_BUDGET, seed=0,
              mode: str = "auto", blowup_factor: int = 1, restarts: int = 5,
              F_list: Sequence[SimplicialComplex] | None = None) -> DeltaResult:
    """Sandwich for the unlabeled cut distance.

    ``upper`` is the least ``d_cut`` over explored block permutations of ``W1``
    (all of them when ``m!`` fits the budget and ``m <= 8``, swap descent
    otherwise).  ``lower`` is the counting-lemma bound over ``F_list`` (0 if none).
    """
    a = _alphas(alphas)
    U, W = _common(W1, W2)
    if blowup_factor > 1:
        U, W = refine(U, blowup_factor), refine(W, blowup_factor)
    D = max(U.max_dim, W.max_dim)
    lower = counting_lemma_lower_bound(U, W, F_list, a) if F_list else 0
    ident = tuple(range(1, U.m + 1))
    if not U.uniform:
        return DeltaResult(d_cut(U, W, a, mode), lower, ident, "identity")
    if _all_constant(U, D) or _all_constant(W, D):
        return DeltaResult(d_cut(U, W, a, mode), lower, ident, "constant")

    def cost(perm, stop=None):
        return d_cut(apply_block_permutation(U, perm), W, a, mode, _stop=stop)

    best = cost(ident)
    best_perm = ident
    if U.m <= 8 and math.factorial(U.m) <= budget:
        for perm in permutations(ident):
            if best.value == 0:
                break
            cv = cost(perm, best.value)
            if cv.value < best.value:
                best, best_perm = cv, perm
        search = "permutation-exact" if best.exactness == EXACT else "permutation-heuristic"
        return DeltaResult(best, lower, best_perm, search)
    rng = np.random.default_rng(seed)
    spent = 1
    starts = [ident] + [tuple(int(x) + 1 for x in rng.permutation(U.m)) for _ in range(restarts - 1)]
    for start in starts:
        perm, cur = start, cost(start)
        spent += 1
        improved = True
        while improved and spent < budget:
            improved = False
            for i in range(U.m):
                for j in range(i + 1, U.m):
                    cand = list(perm)
                    cand[i], cand[j] = cand[j], cand[i]
                    cand = tuple(cand)
                    cv = cost(cand, cur.value)
                    spent += 1
                    if cv.value < cur.value:
                        perm, cur, improved = cand, cv, True
        if cur.value < best.value:
            best, best_perm = cur, perm
    return DeltaResult(best, lower, best_perm, "swap-descent")


def delta_cut_complexes(K1: SimplicialComplex, K2: SimplicialComplex, alphas, m: int = 1,
                        max_vertices: int = 64, **kw) -> CutValue:
    """Unlabeled distance of two complexes via blowups to a common vertex count."""
    n1, n2 = K1.n, K2.n
    N = m * n1 * n2
    if N > max_vertices:
        raise CutGuardError(f"blowups on {N} vertices exceed {max_vertices}")
    a = _alphas(alphas)
    D = max(K1.max_dim, K2.max_dim, 1)
    P1 = pixel_complexon(blowup(K1, m * n2), max_dim=D)
    P2 = pixel_complexon(blowup(K2, m * n1), max_dim=D)
    return delta_cut(P1, P2, a, **kw).upper


def counting_lemma_lower_bound(U: Complexon, W: Complexon, F_list, alphas) -> Fraction | float:
    """``max_F |t(F,U) - t(F,W)| * min_j alpha_j / |F^(j)|``, a lower bound on delta.

    The counting lemma gives ``gap <= sum_j |F^(j)| delta_j``, which is at most
    ``max_j(|F^(j)| / alpha_j) * sum_j alpha_j delta_j``.
    """
    from .homomorphism import t_hom_complexon

    a = _alphas(alphas)
    best = 0
    for F in F_list or ():
        betas = {j: F.count(j) for j in range(1, F.max_dim + 1) if F.count(j)}
        if not betas:
            continue
        scale = min(Fraction(a[j]) / b if a[j] else Fraction(0) for j, b in betas.items())
        if scale == 0:
            continue
        gap = abs(t_hom_complexon(F, U).value - t_hom_complexon(F, W).value)
        best = max(best, gap * scale)
    return best


# --- weak regularity ----------------------------------------------------------------------


@dataclass
class RegularityResult:
    labels: np.ndarray
    cells: tuple
    step: StepComplexon
    measured: dict
    bound: float
    converged: bool
    history: list = field(default_factory=list)

    @property
    def blocks(self) -> int:
        return self.step.m


def _base_of(W: Complexon, grid: int) -> StepComplexon:
    if isinstance(W, StepComplexon):
        return W
    if isinstance(W, HomogeneousComplexon):
        return W.as_step()
    return project(W, [Fraction(i, grid) for i in range(1, grid)], resolution=grid)


def _class_average(B: StepComplexon, labels: np.ndarray, k: int, d: int):
    """Class-level averages of dimension ``d`` and their pullback to base cells."""
    w = np.array([float(x) for x in B.widths])
    C = np.zeros((B.m, k))
    C[np.arange(B.m), labels] = w
    mu = C.sum(axis=0)
    T = B.float_tensor(d)
    S = T
    for _ in range(d + 1):
        S = np.tensordot(S, C, axes=([0], [0]))
    for ax in range(d + 1):
        shape = [1] * (d + 1)
        shape[ax] = k
        S = S / mu.reshape(shape)
    back = S[np.ix_(*([labels] * (d + 1)))]
    return S, back, mu


def _relabel_dense(labels: np.ndarray) -> np.ndarray:
    _, out = np.unique(labels, return_inverse=True)
    return out


def weak_regularity_partition(W: Complexon, blocks: int | None = None, epsilon: float | None = None,
                              d: int = 1, grid: int = 64, restarts: int = DEFAULT_RESTARTS,
                              seed=0, max_rounds: int = 50) -> RegularityResult:
    """Refine a partition of base cells until the projection is cut-close to ``W``.

    Base cells are the blocks of a stepfunction, or ``grid`` equal intervals for
    other kernels.  Each round finds a high-deviation box of ``W - W_P`` per
    dimension with the heuristic cut norm and splits the classes by its sets,
    stopping at ``epsilon``, at ``blocks`` classes, or when nothing changes.
    """
    if blocks is None and epsilon is None:
        raise ValueError("give a block target or an epsilon")
    cap = blocks if blocks is not None else 10 ** 9
    B = _base_of(W, grid)
    dims = [j for j in range(1, min(d, B.max_dim) + 1)]
    labels = np.zeros(B.m, dtype=int)
    rng = np.random.default_rng(seed)
    history = []
    converged = False
    measured = {}
    for _ in range(max_rounds):
        k = int(labels.max()) + 1
        measured, worst, worst_cert = {}, -1.0, None
        for j in dims:
            _, back, _ = _class_average(B, labels, k, j)
            A = MultiArray(B.float_tensor(j) - back, tuple([[float(x) for x in B.widths]] * (j + 1)))
            cv = cut_norm_heuristic(A, restarts, int(rng.integers(2 ** 32)))
            measured[j] = float(cv.value)
            if measured[j] > worst:
                worst, worst_cert = measured[j], cv.certificate
        history.append((k, max(measured.values(), default=0.0)))
        if epsilon is not None and max(measured.values(), default=0.0) <= epsilon:
            converged = True
            break
        if worst_cert is None or worst <= 1e-15 or k >= cap:
            converged = worst <= 1e-15
            break
        new = labels.copy()
        changed = False
        for S in worst_cert:
            member = np.zeros(B.m, dtype=int)
            member[np.asarray(S, dtype=int) - 1] = 1
            cand = _relabel_dense(new * 2 + member)
            if cand.max() + 1 > cap:
                break
            if cand.max() > new.max():
                changed = True
            new = cand
        if not changed:
            break
        labels = new
    k = int(labels.max()) + 1
    tensors, mu = {}, None
    for j in range(1, B.max_dim + 1):
        S, _, mu = _class_average(B, labels, k, j)
        tensors[j] = np.clip(S, 0.0, 1.0)
    widths = [Fraction(float(x)).limit_denominator(10 ** 12) for x in mu]
    widths[-1] = 1 - sum(widths[:-1], Fraction(0))
    step = StepComplexon(k, tensors, max_dim=B.max_dim, widths=widths, check=False)
    cells = tuple(tuple(int(i) + 1 for i in np.flatnonzero(labels == c)) for c in range(k))
    bound = math.sqrt((d + 1) / math.log2(k)) if k > 1 else math.inf
    return RegularityResult(labels, cells, step, measured, bound, converged, history)


def _to_fraction(x) -> Fraction:
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def equipartition_adjust(P, n: int) -> list[list[tuple[Fraction, Fraction]]]:
    """Turn a partition of ``[0,1]`` into ``n`` classes of measure ``1/n``.

    ``P`` is a list of classes, each a list of ``(lo, hi)`` intervals, or a flat
    list of breakpoints.  Every class is cut into ``1/n`` chunks from the left;
    the leftover pieces are pooled in order and cut again.
    """
    classes = _as_classes(P)
    if n < len(classes):
        raise ValueError(f"cannot fit {len(classes)} classes into {n} parts")
    step = Fraction(1, n)
    out, pool = [], []
    for cls in classes:
        chunks, rest = _cut(cls, step)
        out.extend(chunks)
        pool.extend(rest)
    chunks, rest = _cut(pool, step)
    out.extend(chunks)
    if rest:
        raise AssertionError("pooled remainder is not a multiple of 1/n")
    return out


def _as_classes(P):
    P = list(P)
    if not P or not isinstance(P[0], (list, tuple)):
        pts = sorted({_to_fraction(x) for x in P} | {Fraction(0), Fraction(1)})
        return [[(pts[i], pts[i + 1])] for i in range(len(pts) - 1)]
    classes = []
    for cls in P:
        if isinstance(cls[0], (list, tuple)):
            classes.append([(_to_fraction(a), _to_fraction(b)) for a, b in cls])
        else:
            a, b = cls
            classes.append([(_to_fraction(a), _to_fraction(b))])
    total = sum((b - a for cls in classes for a, b in cls), Fraction(0))
    if total != 1:
        raise ValueError("classes must cover measure 1")
    return classes


def _cut(intervals, step: Fraction):
    """Greedy left-to-right chunks of measure ``step``; returns (chunks, leftover)."""
    chunks, cur, filled = [], [], Fraction(0)
    for a, b in intervals:
        while a < b:
            take = min(b - a, step - filled)
            cur.append((a, a + take))
            filled += take
            a += take
            if filled == step:
                chunks.append(_merge(cur))
                cur, filled = [], Fraction(0)
    return chunks, cur


def _merge(intervals):
    out = []
    for a, b in intervals:
        if out and out[-1][1] == a:
            out[-1] = (out[-1][0], b)
        else:
            out.append((a, b))
    return out
