import json

import numpy as np
import pytest

from degseq import DegreeFunction, MotifGraph, ParseError, SimpleGraph, io
from degseq.cli import main


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_parse_degrees_and_errors():
    assert io.parse_degrees("3 1\n 2 # comment\n").tolist() == [3, 1, 2]
    with pytest.raises(ParseError) as info:
        io.parse_degrees("1 2\n3 x\n", path="d.txt")
    assert str(info.value).startswith("d.txt:2:")
    with pytest.raises(ParseError):
        io.parse_degrees("1 -2")
    with pytest.raises(ParseError):
        io.parse_degrees("")
    assert io.parse_degrees("0.5 1.5", integer=False).tolist() == [0.5, 1.5]


def test_degree_function_round_trip(tmp_path):
    f = DegreeFunction([0.8, 0.6, 0.2], f0=0.9)
    path = tmp_path / "f.txt"
    io.write_degree_function(path, f)
    assert io.read_degree_function(path) == f
    with pytest.raises(ParseError):
        io.parse_degree_function("2\n0.5 0.5")
    with pytest.raises(ParseError):
        io.parse_degree_function("2\n0.5 0.2 0.4")


def test_graph_round_trip(tmp_path):
    G = SimpleGraph.from_edges(5, [(0, 1), (1, 4), (2, 3)])
    path = tmp_path / "g.txt"
    io.write_graph(path, G)
    assert io.read_graph(path) == G
    with pytest.raises(ParseError) as info:
        io.parse_graph("3\n0 1\n2 1\n")
    assert info.value.line == 3
    with pytest.raises(ParseError):
        io.parse_graph("3\n0 1\n0 1\n")


def test_beta_and_motif_round_trip(tmp_path):
    beta = np.array([0.1, -2.5, 3.0])
    io.write_beta(tmp_path / "b.txt", beta)
    assert np.array_equal(io.read_beta(tmp_path / "b.txt"), beta)
    H = MotifGraph.cycle(4)
    io.write_motif(tmp_path / "h.txt", H)
    assert io.read_motif(tmp_path / "h.txt") == H
    with pytest.raises(ParseError):
        io.parse_motif("3\n1 1\n")


def test_cli_check(tmp_path, capsys):
    assert main(["check", _write(tmp_path, "a", "1 1")]) == 0
    assert main(["check", "--json", _write(tmp_path, "b", "2 0")]) == 1
    out = json.loads(capsys.readouterr().out.split("\n", 1)[1])
    assert out["schema"] == "degseq-kit/1" and out["first_violation_k"] == 1
    assert main(["check", _write(tmp_path, "c", "1 x")]) == 2
    assert "c:1:" in capsys.readouterr().err
    assert main(["check", str(tmp_path / "missing")]) == 2


def test_cli_fit_exit_codes(tmp_path, capsys):
    reg = _write(tmp_path, "reg", " ".join(["20"] * 50))
    assert main(["fit", "--json", reg]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["status"] == "Converged"
    assert np.allclose(report["beta_hat"], 0.5 * np.log(20 / 29), atol=1e-8)
    assert report["config"]["tol"] == 1e-10
    assert main(["fit", _write(tmp_path, "star", "5 1 1 1 1 1")]) == 3
    assert main(["fit", _write(tmp_path, "zero", "0 1 1")]) == 4
    assert main(["fit", "--max-iter", "2", reg + ""]) in (0, 1)
    x0 = _write(tmp_path, "x0", "\n".join(["0.1"] * 50))
    assert main(["fit", "--x0", x0, reg]) == 0


def test_cli_posterior_mode(tmp_path, capsys):
    d = _write(tmp_path, "d", "1 1")
    d0 = _write(tmp_path, "d0", "0.5 0.5")
    assert main(["posterior-mode", d, "--n0", "1", "--d0-file", d0]) == 0
    report = json.loads(capsys.readouterr().out)
    assert np.allclose(report["beta_hat"], 0.5 * np.log(3), atol=1e-8)
    assert report["n0"] == 1.0


def test_cli_sample(tmp_path):
    beta = _write(tmp_path, "beta", "\n".join(["-10"] * 20))
    out1, out2 = tmp_path / "g1", tmp_path / "g2"
    assert main(["sample", beta, "--seed", "5", "--out", str(out1)]) == 0
    assert main(["sample", beta, "--seed", "5", "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    G = io.read_graph(out1)
    assert G.n == 20 and G.num_edges <= 1


def test_cli_limit(tmp_path, capsys):
    f = _write(tmp_path, "f", "1\n0.5\n0.5\n")
    tri = tmp_path / "tri.txt"
    io.write_motif(tri, MotifGraph.triangle())
    wcsv = tmp_path / "w.csv"
    assert main(["limit", f, "--grid", "64", "--motif", str(tri), "--w-csv", str(wcsv)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert max(abs(v) for v in out["g"]) <= 1e-10
    assert out["hom_densities"][0]["t"] == pytest.approx(0.125, abs=1e-10)
    assert np.loadtxt(wcsv, delimiter=",").shape == (64, 64)
    bad = _write(tmp_path, "bad", "2\n0.9 0.9 0.1")
    assert main(["limit", bad]) == 1
    assert "condition (ii)" in capsys.readouterr().err


def test_cli_limit_grid_agreement(tmp_path, capsys):
    f = _write(tmp_path, "f", "2\n0.6 0.6 0.4")
    gs = {}
    for grid in (64, 256):
        assert main(["limit", f, "--grid", str(grid), "--builtin", "edge"]) == 0
        fit = json.loads(capsys.readouterr().out)
        gs[grid] = np.repeat(fit["g"], 256 // grid)
    assert np.mean(np.abs(gs[64] - gs[256])) <= 1e-6


def test_cli_interior(tmp_path):
    assert main(["interior", _write(tmp_path, "f", "1\n0.5 0.5")]) == 0
    assert main(["interior", _write(tmp_path, "g", "1\n1 1")]) == 1


def test_cli_consistency_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["consistency", "--n", "20", "30", "--trials", "3", "--seed", "7"]
    assert main(args + ["--out", str(a)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["seed"] == 7 and report["config"]["max_iter"] == 5000
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[0] == "n,trial,i,beta,beta_hat"
    assert main(["consistency", "--n", "20", "--L", "0", "--seed", "1"]) == 2


def test_consistency_independent_of_thread_count(monkeypatch):
    from degseq.experiments import ExperimentSpec, run_consistency

    spec = ExperimentSpec(n_list=(25,), trials=4, seed=2)
    serial = run_consistency(spec, workers=1).scatter_csv()
    monkeypatch.setenv("DEGSEQ_THREADS", "3")
    assert run_consistency(spec).scatter_csv() == serial
