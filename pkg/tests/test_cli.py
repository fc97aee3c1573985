import json
import subprocess
import sys

import numpy as np
import pytest

from spectral_spread.cli import run
from spectral_spread.descriptors import load_embedding
from spectral_spread.graph import generate_barbell, load_edge_list, write_edge_list


@pytest.fixture
def karate_file(tmp_path, karate):
    p = tmp_path / "karate.el"
    write_edge_list(p, karate)
    return p


def test_generate_barbell(tmp_path):
    out = tmp_path / "b.el"
    assert run(["generate", "barbell", "--m1", "5", "--m2", "10", "-o", str(out)]) == 0
    assert load_edge_list(out).graph.n_edges == 31
    meta = json.loads((tmp_path / "b.el.run.json").read_text())
    assert meta["command"] == "generate" and meta["params"]["m1"] == 5


def test_generate_mirrored_karate(tmp_path):
    out = tmp_path / "m.el"
    assert run(["generate", "mirrored-karate", "--mirror-edges", "3", "--seed", "2", "-o", str(out)]) == 0
    g = load_edge_list(out).graph
    corr = json.loads((tmp_path / "m.el.corr.json").read_text())["correspondence"]
    assert (g.n_nodes, g.n_edges) == (68, 159) and len(corr) == 68


def test_generate_mirrored_from_file(tmp_path):
    src = tmp_path / "p.el"
    src.write_text("0 1\n1 2\n")
    out = tmp_path / "m.el"
    assert run(["generate", "mirrored", "-i", str(src), "-o", str(out)]) == 0
    assert load_edge_list(out).graph.n_nodes == 6


def test_embed_shape(tmp_path, karate_file):
    out = tmp_path / "emb.csv"
    code = run(["embed", "gsse", "--beta", "-1000", "-r", "20", "-t", "32", "-i", str(karate_file), "-o", str(out)])
    assert code == 0
    emb, ids = load_embedding(out)
    assert emb.shape == (34, 32) and len(ids) == 34
    assert emb.meta["config"]["beta"] == -1000.0


def test_embed_edges(tmp_path, karate_file):
    out = tmp_path / "e.csv"
    assert run(["embed", "gse", "--edges", "-t", "8", "-i", str(karate_file), "-o", str(out)]) == 0
    emb, ids = load_embedding(out)
    assert emb.shape == (78, 16) and ids[0] == "0-1"


@pytest.mark.parametrize("method", ["baseline-wks", "bcg-wks"])
def test_embed_baselines(tmp_path, karate_file, method):
    out = tmp_path / "x.csv"
    assert run(["embed", method, "-i", str(karate_file), "-o", str(out)]) == 0


def test_bcg(tmp_path, karate_file):
    out = tmp_path / "bcg.el"
    table = tmp_path / "ebc.csv"
    assert run(["bcg", "-i", str(karate_file), "-o", str(out), "--ebc-table", str(table)]) == 0
    g = load_edge_list(out).graph
    assert g.n_edges == 78 and g.weights.max() > 1
    assert table.read_text().splitlines()[0] == "u,v,ebc"


def test_spreads(tmp_path):
    g = generate_barbell(5, 10)
    el = tmp_path / "b.el"
    write_edge_list(el, g)
    sig = tmp_path / "sig.csv"
    np.savetxt(sig, np.random.default_rng(0).standard_normal((5, 20)), delimiter=",")
    out = tmp_path / "spreads.csv"
    assert run(["spreads", "-i", str(el), "--signals", str(sig), "--beta", "-200", "-o", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "signal,s_L,s_W,in_bounds,trade_off,q_beta"
    assert len(lines) == 6
    assert all(line.split(",")[3] == "1" for line in lines[1:])


def test_spreads_wrong_width(tmp_path, karate_file):
    sig = tmp_path / "sig.csv"
    np.savetxt(sig, np.ones((2, 5)), delimiter=",")
    assert run(["spreads", "-i", str(karate_file), "--signals", str(sig), "-o", str(tmp_path / "o.csv")]) == 1


def test_eval_structural_sweep(tmp_path):
    out = tmp_path / "rep.json"
    code = run(["eval-structural", "--methods", "gsse", "--mirror-edges", "1-2", "--seeds", "1", "--r-values", "8", "-o", str(out)])
    assert code == 0
    rep = json.loads(out.read_text())
    assert {"best", "avg"} <= set(rep["values"]["gsse"])


def test_eval_structural_from_embedding(tmp_path):
    el = tmp_path / "m.el"
    assert run(["generate", "mirrored-karate", "-o", str(el)]) == 0
    emb = tmp_path / "emb.csv"
    assert run(["embed", "gsse", "-r", "16", "-i", str(el), "-o", str(emb)]) == 0
    out = tmp_path / "rep.json"
    assert run(["eval-structural", "-i", str(emb), "--correspondence", str(el) + ".corr.json", "-o", str(out)]) == 0
    assert json.loads(out.read_text())["value"] == 1.0


def test_eval_align(tmp_path, capsys):
    assert run(["eval-align", "--methods", "gsse", "--noise", "0.1", "--seeds", "1", "-r", "8", "-t", "8"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["metric"] == "alignment_accuracy"


def test_eval_forecast(tmp_path):
    g = generate_barbell(5, 10)
    failed = np.array([4 <= u and v <= 15 for u, v in g.edges], dtype=np.int8)
    el = tmp_path / "f.el"
    write_edge_list(el, g, edge_labels=failed)
    out = tmp_path / "f.json"
    assert run(["eval-forecast", "-i", str(el), "-r", "8", "-t", "16", "--symmetric-edges", "-o", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert set(rep["values"]) == {"FL", "WKS-L_BE", "GSE", "GSSE"}
    assert rep["values"]["FL"]["success_rate"] == 1.0


def test_cluster_and_project(tmp_path, karate_file):
    emb = tmp_path / "emb.csv"
    assert run(["embed", "gsse", "-i", str(karate_file), "-o", str(emb)]) == 0
    labels = tmp_path / "labels.txt"
    labels.write_text("\n".join("a" if i < 17 else "b" for i in range(34)) + "\n")
    rep = tmp_path / "c.json"
    assert run(["cluster", "-i", str(emb), "--labels", str(labels), "-k", "5", "-o", str(rep)]) == 0
    assert 0.5 <= json.loads(rep.read_text())["value"] <= 1.0
    proj = tmp_path / "p.csv"
    assert run(["project", "-i", str(emb), "--dims", "2", "-o", str(proj)]) == 0
    assert load_embedding(proj)[0].shape == (34, 2)


class TestExitCodes:
    def test_missing_file(self, tmp_path, capsys):
        assert run(["embed", "gsse", "-i", str(tmp_path / "nope.el"), "-o", str(tmp_path / "o.csv")]) == 1
        assert "spectral_spread" in capsys.readouterr().err

    def test_unknown_subcommand(self):
        assert run(["frobnicate"]) == 1

    def test_bad_edge_list(self, tmp_path, capsys):
        bad = tmp_path / "bad.el"
        bad.write_text("0 1\n2 2\n")
        assert run(["bcg", "-i", str(bad), "-o", str(tmp_path / "o.el")]) == 1
        assert "spectral_spread.graph" in capsys.readouterr().err

    def test_degenerate_spectrum_is_validation(self, tmp_path):
        k3 = tmp_path / "k3.el"
        k3.write_text("0 1\n0 2\n1 2\n")
        assert run(["embed", "gsse", "-r", "3", "-i", str(k3), "-o", str(tmp_path / "o.csv")]) == 1

    def test_numerical_failure_is_2(self, tmp_path, karate_file, monkeypatch, capsys):
        from spectral_spread import cli, spectral

        def broken(*args, **kwargs):
            raise spectral.SpectralError("eigensolver did not converge")

        monkeypatch.setattr(cli, "embed", broken)
        assert run(["embed", "gsse", "-i", str(karate_file), "-o", str(tmp_path / "o.csv")]) == 2
        assert "numerical failure" in capsys.readouterr().err

    def test_help(self):
        assert run(["--help"]) == 0


class TestConfig:
    def test_file_then_flag(self, tmp_path, karate_file):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"t": 8, "r": 6, "beta": -200.0}))
        out = tmp_path / "e.csv"
        assert run(["embed", "gsse", "--config", str(cfg), "-t", "12", "-i", str(karate_file), "-o", str(out)]) == 0
        params = json.loads((tmp_path / "e.csv.run.json").read_text())["params"]
        assert (params["t"], params["r"], params["beta"]) == (12, 6, -200.0)
        assert load_embedding(out)[0].shape == (34, 12)

    def test_unknown_key(self, tmp_path, karate_file):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"gamma": 3}))
        assert run(["embed", "gsse", "--config", str(cfg), "-i", str(karate_file), "-o", str(tmp_path / "e.csv")]) == 1

    def test_replay_bit_exact(self, tmp_path, karate_file):
        out = tmp_path / "e.csv"
        assert run(["embed", "gse", "-r", "12", "-t", "16", "-i", str(karate_file), "-o", str(out)]) == 0
        first = out.read_bytes()
        meta = json.loads((tmp_path / "e.csv.run.json").read_text())
        assert meta["inputs"]["input"]["sha256"]
        out.unlink()
        assert run(["embed", "--config", str(tmp_path / "e.csv.run.json")]) == 0
        assert out.read_bytes() == first


def test_module_entry_point(tmp_path):
    out = tmp_path / "b.el"
    proc = subprocess.run(
        [sys.executable, "-m", "spectral_spread", "generate", "barbell", "-o", str(out)], capture_output=True, text=True
    )
    assert proc.returncode == 0 and out.exists()
