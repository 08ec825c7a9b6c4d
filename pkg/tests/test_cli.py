import json

import numpy as np

from complexons.cli import main
from complexons.complexon import loads
from complexons.simplicial import loads as load_complex


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_model(capsys):
    code, out, _ = _run(capsys, "model", "flag:1/2:2")
    assert code == 0
    assert loads(out).probs == (0.5, 1)


def test_sample_is_deterministic(capsys):
    a = _run(capsys, "sample", "6", "flag:1/2", "--seed", "4")[1]
    b = _run(capsys, "sample", "6", "flag:1/2", "--seed", "4")[1]
    assert a == b and "latents:" in a and a.rstrip().endswith("seed: 4")


def test_density(tmp_path, capsys):
    F = tmp_path / "tri.txt"
    F.write_text("n 3 d 2\n1 2 3\n")
    code, out, _ = _run(capsys, "density", str(F), "flag:1/2")
    assert code == 0
    assert json.loads(out) == {"value": "1/8", "method": "exact-step"}
    code, out, _ = _run(capsys, "density", str(F), "flag:1/2", "--induced")
    assert json.loads(out)["value"] == "1/8"


def test_cutnorm_array(tmp_path, capsys):
    path = tmp_path / "a.txt"
    np.savetxt(path, np.array([[0.5, -0.5], [-0.5, 0.5]]))
    code, out, _ = _run(capsys, "cutnorm", str(path))
    res = json.loads(out)
    assert code == 0 and res["value"] == 0.125 and res["exactness"] == "exact"


def test_cutdist(capsys):
    code, out, _ = _run(capsys, "cutdist", "flag:1/5", "flag:1/2", "--alphas", "1/2,1/4")
    res = json.loads(out)
    assert code == 0 and res["upper"] == "3/20" and res["lower"] == "3/20"


def test_regularize(capsys):
    code, out, _ = _run(capsys, "regularize", "flag:1/2", "--blocks", "2")
    assert code == 0 and json.loads(out)["blocks"] == 1


def test_verify_and_exit_codes(tmp_path, capsys):
    out = tmp_path / "r.csv"
    code, _, _ = _run(capsys, "verify", "lccm", "--out", str(out))
    assert code == 0
    assert out.read_text().splitlines()[0] == "experiment,n,trial,measured,bound,status,seed"
    code, text, _ = _run(capsys, "verify", "lccm", "--samples", "4000", "--format", "json")
    assert json.loads(text)["provenance"]["seed"] == 1


def test_hyper_alias(capsys):
    code, text, _ = _run(capsys, "hyper", "ul", "--n-grid", "6", "--trials", "2", "--model", "cf:0:0",
                         "--param", "faceted_model=")
    assert code == 0
    assert text.startswith("experiment,")


def test_errors_give_code_two(capsys):
    code, _, err = _run(capsys, "model", "nonsense:1")
    assert code == 2 and err.startswith("error:")
    code, _, err = _run(capsys, "verify", "lccm", "--param", "tv")
    assert code == 2


def test_failing_verify_exits_one(capsys):
    code, text, _ = _run(capsys, "verify", "lccm", "--samples", "200", "--param", "tv=0.001")
    assert code == 1 and ",fail," in text


def test_sample_output_parses(tmp_path, capsys):
    path = tmp_path / "k.txt"
    _run(capsys, "sample", "5", "flag:1/2", "--seed", "1", "--out", str(path))
    body = "".join(l for l in path.read_text().splitlines(True) if not l.startswith(("latents", "seed")))
    assert load_complex(body).n == 5
