"""Acceptance criteria 1-14, one test each, at their stated tolerances.

Each test prints a single ``criterion N: PASS|FAIL`` line; the lines are also
collected into the terminal summary by ``conftest.py``.
"""

import os
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np

from complexons.complexon import HomogeneousComplexon, apply_block_permutation, facet_complexon, pixel_complexon
from complexons.cutnorm import (
    MultiArray,
    cut_norm_exact,
    cut_norm_heuristic,
    d_cut_d,
    delta_cut,
    disjoint_cut_sup,
    one_sided_cut_norm,
)
from complexons.experiments import EXPERIMENTS, complexes_up_to, make_config, random_step, run, trial_seed
from complexons.homomorphism import (
    t_hom,
    t_hom_complexon,
    t_hom_faceted,
    t_ind_by_inclusion_exclusion,
    t_ind_complexon,
)

ALPHAS = (Fraction(1, 2), Fraction(1, 4))


def _rows(report, suffix):
    return [r for r in report.rows if r.experiment.endswith(suffix)]


def _counting_pairs(trials=50, seed=1, m_max=3, D=2, q=4):
    # same draws as the counting-lemma runner
    for t in range(trials):
        rng = np.random.default_rng(trial_seed(seed, "counting-lemma", t))
        U = random_step(int(rng.integers(1, m_max + 1)), D, rng, q)
        W = random_step(int(rng.integers(1, m_max + 1)), D, rng, q)
        yield U, W


def test_criterion_01_faceting_identity(criterion):
    W = HomogeneousComplexon((Fraction(1, 2), 1))
    start = time.perf_counter()
    value = facet_complexon(W).eval(2, (0.1, 0.5, 0.9))
    elapsed = time.perf_counter() - start
    criterion(1, value == Fraction(1, 8), f"faceted dim-2 value {value}", elapsed, 1e-3)


def test_criterion_02_pixel_consistency(criterion):
    start = time.perf_counter()
    family = complexes_up_to(4, 2)
    bad = 0
    for K in family:
        P = pixel_complexon(K, max_dim=2)
        for F in family:
            bad += t_hom(F, K).value != t_hom_complexon(F, P).value
    pairs = len(family) ** 2
    criterion(2, bad == 0, f"{pairs} (F, K) pairs, {bad} mismatches", time.perf_counter() - start, 120)


def test_criterion_03_faceted_density_identity(criterion):
    start = time.perf_counter()
    family = complexes_up_to(4, 3)
    bad, first = 0, None
    for i in range(20):
        rng = np.random.default_rng(1000 + i)
        W = random_step(int(rng.integers(1, 4)), 3, rng)
        for F in family:
            a, b = t_hom_complexon(F, W).value, t_hom_faceted(F, W).value
            if a != b:
                bad += 1
                first = first or (i, sorted(F.higher_simplices()), a, b)
    detail = f"{20 * len(family)} (F, W) pairs, {bad} mismatches"
    if first:
        detail += f"; first: W#{first[0]} F={first[1]} t={first[2]} faceted={first[3]}"
    criterion(3, bad == 0, detail, time.perf_counter() - start, 120)


def test_criterion_04_induced_sampling(criterion):
    start = time.perf_counter()
    rep = run(make_config("ind-sample"))
    freq = _rows(rep, "full-simplex-frequency")[0].measured
    full = _rows(rep, "/full-simplex")[0]
    totals = _rows(rep, "total-minus-one")
    ok = rep.ok and all(r.measured == 0 for r in totals) and full.status == "pass"
    cells = [r for r in rep.rows if "/complex-" in r.experiment]
    inside = sum(r.status == "pass" for r in cells)
    detail = (f"{inside}/{len(cells)} complex frequencies within 4 SE; "
              f"Pr(full 2-simplex) = {freq:.4f} vs 0.125 (4 SE = {full.bound:.4f})")
    criterion(4, ok, detail, time.perf_counter() - start, 60)


def test_criterion_05_counting_lemma(criterion):
    start = time.perf_counter()
    rep = run(make_config("counting-lemma"))
    counts = {k: sum(r.measured for r in _rows(rep, f"{k}-violations")) for k in ("hom", "faceted", "ind")}
    excess = {k: max(r.measured for r in _rows(rep, f"{k}-max-excess")) for k in counts}
    ok = all(v == 0 for v in counts.values())
    detail = ", ".join(f"{k}: {counts[k]} violations (max excess {excess[k]})" for k in counts)
    criterion(5, ok, detail, time.perf_counter() - start, 300)


def test_criterion_06_inclusion_exclusion(criterion):
    start = time.perf_counter()
    family = complexes_up_to(4, 2)
    bad = checked = 0
    for pair in _counting_pairs():
        for W in pair:
            for F in family:
                checked += 1
                bad += t_ind_by_inclusion_exclusion(F, W).value != t_ind_complexon(F, W).value
    criterion(6, bad == 0, f"{checked} (F, W) cases, {bad} mismatches", time.perf_counter() - start, 120)


def test_criterion_07_cut_norm_oracle(criterion):
    start = time.perf_counter()
    below = equal = ident = 0
    gaps = []
    for i in range(100):
        rng = np.random.default_rng(2000 + i)
        d = 1 + i % 2
        vals = rng.integers(-8, 9, size=(4,) * (d + 1))
        A = MultiArray(np.vectorize(lambda v: Fraction(int(v), 8), otypes=[object])(vals))
        ex = cut_norm_exact(A).value
        h = cut_norm_heuristic(A, restarts=20, seed=i).value
        below += h <= ex
        equal += h == ex
        gaps.append(float(ex - h))
        ident += ex == max(one_sided_cut_norm(A).value, one_sided_cut_norm(-A).value)
    ok = below == 100 and equal >= 95 and ident == 100
    detail = (f"heuristic <= exact {below}/100, equal {equal}/100, one-sided identity {ident}/100, "
              f"max gap {max(gaps):.4f}")
    criterion(7, ok, detail, time.perf_counter() - start, 60)


def test_criterion_08_disjoint_sandwich(criterion):
    start = time.perf_counter()
    good = 0
    for i in range(50):
        rng = np.random.default_rng(3000 + i)
        m, d = int(rng.integers(2, 5)), 1 + i % 2
        U, W = random_step(m, 2, rng), random_step(m, 2, rng)
        dis = disjoint_cut_sup(U, W, d).value
        full = d_cut_d(U, W, d, "exact").value
        good += dis <= full <= (d + 1) ** (d + 1) * dis
    criterion(8, good == 50, f"{good}/50 instances satisfy the sandwich", time.perf_counter() - start, 60)


def test_criterion_09_sampling_lemma(criterion):
    start = time.perf_counter()
    rep = run(make_config("sampling-lemma"))
    ups = _rows(rep, "delta-upper")
    within = sum(r.measured <= r.bound for r in ups)
    medians = [r.measured for r in _rows(rep, "/median")]
    trend = _rows(rep, "median-not-decreasing")[0].measured == 0
    bound = min(r.bound for r in ups)
    ok = within == len(ups) and trend
    detail = (f"{within}/{len(ups)} certified upper bounds <= paper bound (smallest {bound:.3f}, "
              f"vacuous above 0.75); medians {', '.join(f'{m:.4f}' for m in medians)}")
    criterion(9, ok, detail, time.perf_counter() - start, 600)


def test_criterion_10_triples_only_counterexample(criterion):
    start = time.perf_counter()
    rep = run(make_config("ul-convergence", model="cf:0:1", n_grid=(20, 40), trials=20,
                          params={"faceted_model": ""}))
    low = _rows(rep, "lower-edges")
    deficit = _rows(rep, "upper-edge-deficit")
    ok = len(low) == 40 and all(r.measured == 0 for r in low) and all(r.measured == 0 for r in deficit)
    detail = (f"lower-closure edges max {max(r.measured for r in low)} over {len(low)} trials; "
              f"upper-closure edge density min {1 - max(r.measured for r in deficit)}")
    criterion(10, ok, detail, time.perf_counter() - start, 60)


def test_criterion_11_hypergraph_equivalence(criterion):
    start = time.perf_counter()
    rep = run(make_config("hypergraph-equivalence"))
    tvs = {r.experiment.rsplit("-", 1)[1]: r.measured for r in _rows(rep, "") if "/tv-" in r.experiment}
    exact = {r.experiment.rsplit("-", 1)[1]: r.measured for r in rep.rows if "exact-tv" in r.experiment}
    ok = all(v < 0.01 for v in tvs.values())
    detail = ("empirical TV " + ", ".join(f"{k}={v:.4f}" for k, v in tvs.items())
              + "; exact TV " + ", ".join(f"{k}={float(v):.4f}" for k, v in exact.items()))
    criterion(11, ok, detail, time.perf_counter() - start, 120)


def test_criterion_12_block_permutation_invariance(criterion):
    start = time.perf_counter()
    family = complexes_up_to(4, 2)
    dens_bad = 0
    deltas = []
    for i, m in enumerate((3, 4, 5, 6, 6)):
        rng = np.random.default_rng(4000 + i)
        W = random_step(m, 2, rng)
        perm = tuple(int(x) + 1 for x in rng.permutation(m))
        U = apply_block_permutation(W, perm)
        for F in family:
            dens_bad += t_hom_complexon(F, U).value != t_hom_complexon(F, W).value
        res = delta_cut(U, W, ALPHAS)
        deltas.append((m, res.upper.value, res.search))
    ok = dens_bad == 0 and all(v == 0 and s == "permutation-exact" for _, v, s in deltas)
    detail = (f"{dens_bad} density mismatches; delta "
              + ", ".join(f"m={m}: {v} ({s})" for m, v, s in deltas))
    criterion(12, ok, detail, time.perf_counter() - start, 60)


def test_criterion_13_cech_bouquet(criterion):
    start = time.perf_counter()
    rep = run(make_config("cech-bouquet"))
    found = [r.measured for r in _rows(rep, "induced-cycles")]
    thr = _rows(rep, "threshold")[0].measured
    ok = thr == 12 and len(found) == 10 and not any(found)
    detail = f"threshold {thr}; induced 4..8-cycles per trial {found}"
    criterion(13, ok, detail, time.perf_counter() - start, 180)


SMALL = {
    "counting-lemma": ["--trials", "3"],
    "sampling-lemma": ["--n-grid", "20,30", "--trials", "2"],
    "ul-convergence": ["--trials", "3", "--param", "faceted_grid=[10,20]", "--param", "faceted_trials=2"],
    "weighted-sample": ["--n-grid", "10,20", "--trials", "2"],
}


def _verify(name, out, hashseed):
    env = dict(os.environ, PYTHONHASHSEED=str(hashseed))
    cmd = [sys.executable, "-m", "complexons.cli", "verify", name, "--seed", "7", "--out", str(out)]
    proc = subprocess.run(cmd + SMALL.get(name, []), env=env, capture_output=True, text=True)
    assert proc.returncode in (0, 1), proc.stderr
    return out.read_bytes()


def test_criterion_14_determinism(criterion, tmp_path):
    start = time.perf_counter()
    same = []
    for name in EXPERIMENTS:
        a = _verify(name, tmp_path / f"{name}-a.csv", 1)
        b = _verify(name, tmp_path / f"{name}-b.csv", 2)
        same.append(a == b and len(a.splitlines()) > 1)
    detail = f"{sum(same)}/{len(same)} verify suites byte-identical across two processes"
    criterion(14, all(same), detail, time.perf_counter() - start, 900)
