import csv
import io
import math
from fractions import Fraction

import pytest

from complexons.experiments import (
    FAIL,
    INFO,
    PASS,
    UNCOUNTED,
    VACUOUS,
    ExperimentConfig,
    cech_threshold,
    judge,
    make_config,
    parse_model,
    r_nd,
    run,
    sampling_lemma_bound,
    trial_seed,
    weighted_sample_bound,
)


def _rows(report, suffix):
    return [r for r in report.rows if r.experiment.endswith(suffix)]


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig("counting-lemma", trials=0)
    with pytest.raises(ValueError):
        ExperimentConfig("counting-lemma", n_grid=())
    with pytest.raises(ValueError):
        ExperimentConfig("counting-lemma", alphas=(Fraction(1, 2), Fraction(-1, 4)))
    with pytest.raises(ValueError):
        make_config("no-such-experiment")


def test_digest_ignores_output_path():
    a = make_config("lccm", out="x.csv")
    b = make_config("lccm")
    assert a.digest() == b.digest()
    assert a.digest() != make_config("lccm", seed=5).digest()


def test_judge():
    assert judge(1, None) == INFO
    assert judge(1, 2) == PASS
    assert judge(1, 2, trivial=2) == VACUOUS
    assert judge(3, 2) == FAIL
    assert judge(3, 2, counted=False) == UNCOUNTED


def test_bound_formulas():
    assert r_nd(4, 2) == Fraction(1, 4)
    assert r_nd(3, 3) == 1 - Fraction(6, 27)
    assert sampling_lemma_bound(16, 2, (Fraction(1, 2), Fraction(1, 4))) == pytest.approx(33 / 2 * 0.75)
    assert weighted_sample_bound(256, 1, 0.375) == pytest.approx((3 * 2 ** 0.375 + 1) / 256 ** 0.375)


def test_cech_threshold():
    assert cech_threshold(0.5) == 12 == math.floor(math.pi / math.asin(0.25))
    with pytest.raises(ValueError):
        cech_threshold(2.0)


def test_parse_model():
    assert parse_model("flag:1/2:3").probs == (Fraction(1, 2), 1, 1)
    assert parse_model("lm:2:1/3").probs == (1, Fraction(1, 3))
    assert parse_model("cf:0:1").probs == (0, 1)
    assert parse_model("zero:2").probs == (0, 0)
    with pytest.raises(ValueError):
        parse_model("nonsense:1")


def test_trial_seeds_differ():
    seeds = {trial_seed(1, "x", n, t) for n in (3, 4) for t in range(5)}
    assert len(seeds) == 10
    assert trial_seed(1, "x", 3) != trial_seed(1, "y", 3)


def test_counting_lemma_small():
    rep = run(make_config("counting-lemma", trials=3, n_grid=(3,)))
    assert not _rows(rep, "hom-violations")[0].measured
    homog = _rows(rep, "homogeneous-edge")[0]
    assert homog.measured == homog.bound == Fraction(3, 10)


def test_ind_sample_zero_model():
    rep = run(make_config("ind-sample", model="zero:2", samples=2000))
    assert rep.ok
    assert _rows(rep, "t-ind-total-minus-one")[0].measured == 0


def test_lccm_small():
    rep = run(make_config("lccm", samples=20_000))
    assert rep.ok
    assert _rows(rep, "disjoint-edges-max-z")


@pytest.mark.parametrize("model", ["one:2", "zero:2"])
def test_hypergraph_equivalence_degenerate(model):
    rep = run(make_config("hypergraph-equivalence", model=model, samples=5000))
    assert rep.ok
    assert all(r.measured == 0 for r in rep.rows)


def test_ul_convergence_trivial_model():
    rep = run(make_config("ul-convergence", model="cf:0:0", n_grid=(8,), trials=3,
                          params={"faceted_model": ""}))
    assert rep.ok
    assert all(r.measured == 0 for r in _rows(rep, "lower-edges") + _rows(rep, "upper-edges"))


def test_ul_counterexample_rows():
    rep = run(make_config("ul-convergence", n_grid=(10,), trials=3, params={"faceted_model": ""}))
    assert rep.ok
    assert all(r.measured == 0 for r in _rows(rep, "lower-edges"))
    assert all(r.measured == 0 for r in _rows(rep, "upper-edge-deficit"))


def test_sampling_lemma_complete_model():
    rep = run(make_config("sampling-lemma", model="one:2", n_grid=(8,), trials=2))
    ups = _rows(rep, "delta-upper")
    assert all(r.status in (VACUOUS, UNCOUNTED, PASS) for r in ups)
    # only the diagonal cells of the pixel picture differ from W = 1
    assert all(r.measured <= float(r_nd(8, 2) / 2 + r_nd(8, 3) / 4) + 1e-9 for r in ups)


def test_inverse_counting_small():
    rep = run(make_config("inverse-counting", trials=4))
    assert rep.ok
    assert all(r.measured == 0 for r in _rows(rep, "gap-zero"))


def test_cech_small():
    rep = run(make_config("cech-bouquet", n_grid=(30,), trials=2))
    assert rep.ok
    assert _rows(rep, "threshold")[0].measured == 12


def test_csv_shape_and_determinism():
    cfg = make_config("lccm", samples=5000)
    a, b = run(cfg).to_csv(), run(cfg).to_csv()
    assert a == b
    rows = list(csv.reader(io.StringIO(a)))
    assert rows[0] == ["experiment", "n", "trial", "measured", "bound", "status", "seed"]


def test_pass_flags_recomputable():
    rep = run(make_config("inverse-counting", trials=4))
    for r in rep.rows:
        if "/implication" in r.experiment:
            continue
        assert r.status == judge(r.measured, r.bound, r.trivial, r.status != UNCOUNTED)
    assert rep.aggregate()["failures"] == sum(r.status == FAIL for r in rep.rows)


def test_failing_statistical_cells_are_rerun():
    rep = run(make_config("lccm", samples=300, params={"tv": 1e-4}))
    reruns = [r for r in rep.rows if r.experiment.endswith("/rerun")]
    assert reruns and not rep.ok
    for r in rep.rows:
        if r.status == UNCOUNTED:
            twin = [x for x in reruns if x.experiment == r.experiment + "/rerun" and x.n == r.n]
            assert twin and twin[0].status != FAIL
