import json
import subprocess
import sys

import numpy as np
import pytest

from snirkit import gen_sbm, read_edgelist, write_edgelist
from snirkit.cli import main
from snirkit.simlab import TruthSpec, gen_snir_data


@pytest.fixture
def dataset(tmp_path):
    g = gen_sbm(500, seed=1)
    s1 = np.argsort(-g.in_degree, kind="stable")[:3]
    y = gen_snir_data(g, TruthSpec(s1, np.array([0.7, 0.6, 0.8])), seed=2)
    edges = tmp_path / "edges.txt"
    write_edgelist(g, edges)
    resp = tmp_path / "y.csv"
    resp.write_text("node,score\n" + "".join(f"{i},{v:.17g}\n" for i, v in enumerate(y)))
    return g, y, s1, edges, resp


def test_fit_writes_json(dataset, tmp_path, capsys):
    g, y, s1, edges, resp = dataset
    out = tmp_path / "fit.json"
    assert main(["fit", "--edges", str(edges), "--responses", str(resp), "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert set(map(str, s1)) <= set(rep["selected"])
    assert rep["config"]["command"] == "fit"


def test_fit_by_column_name_and_m(dataset, capsys):
    g, y, s1, edges, resp = dataset
    assert main(["fit", "--edges", str(edges), "--responses", str(resp),
                 "--response-col", "score", "--m", "20"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["config"]["m"] == 20


def test_usage_errors(dataset, capsys):
    g, y, s1, edges, resp = dataset
    assert main([]) == 1
    assert main(["fit", "--edges", str(edges)]) == 1
    assert main(["fit", "--edges", str(edges), "--responses", str(resp), "--gamma", "0.5", "--m", "3"]) == 1
    assert main(["fit", "--edges", str(edges), "--responses", str(resp), "--gamma", "1.5"]) == 1
    assert main(["simulate", "--preset", "er"]) == 1
    assert main(["bogus"]) == 1


def test_data_errors(dataset, tmp_path):
    g, y, s1, edges, resp = dataset
    assert main(["fit", "--edges", str(tmp_path / "nope"), "--responses", str(resp)]) == 2
    partial = tmp_path / "partial.csv"
    partial.write_text("".join(f"{i},{v}\n" for i, v in enumerate(y[:-5])))
    assert main(["fit", "--edges", str(edges), "--responses", str(partial)]) == 2
    assert main(["fit", "--edges", str(edges), "--responses", str(partial), "--missing", "zero"]) == 0
    bad = tmp_path / "bad.csv"
    bad.write_text("0,abc\n")
    assert main(["fit", "--edges", str(edges), "--responses", str(bad)]) == 2
    zero = tmp_path / "zero.csv"
    zero.write_text("".join(f"{i},0\n" for i in range(g.n)))
    assert main(["fit", "--edges", str(edges), "--responses", str(zero)]) == 2


def test_generate_and_centrality(tmp_path, capsys):
    out = tmp_path / "g.txt"
    assert main(["generate", "--preset", "er", "--n", "80", "--seed", "3", "--out", str(out)]) == 0
    g = read_edgelist(out)
    assert g.n == 80
    assert main(["centrality", "--edges", str(out)]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "node,in_degree,out_degree,betweenness,harmonic"
    assert len(lines) == 81


def test_simulate_csv_and_config(tmp_path, capsys):
    assert main(["simulate", "--preset", "sbm", "--n", "300", "--reps", "2", "--s1", "3"]) == 0
    text = capsys.readouterr().out.splitlines()
    assert text[0] == "setting,N,S1,TPR,FPR,CFP,Err,secs_per_fit"
    assert text[1].startswith("sbm,300,3,")
    cfg = tmp_path / "study.toml"
    cfg.write_text('reps = 2\nsetting = "hetero"\n[generator]\nkind = "er"\nn = 300\n'
                   '[truth]\nsize = 3\nhetero = [0.5, 1.5]\n')
    assert main(["simulate", "--config", str(cfg)]) == 0
    assert capsys.readouterr().out.splitlines()[1].startswith("hetero,300,3,")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["simulate", "--config", str(bad)]) == 2


def test_compare_and_dynamic(dataset, tmp_path, capsys):
    g, y, s1, edges, resp = dataset
    assert main(["compare", "--edges", str(edges), "--responses", str(resp)]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert {"snir", "indegree", "response", "betweenness", "harmonic"} <= set(rep)
    per = tmp_path / "periods.csv"
    per.write_text("".join(f"{i},{1 + i % 2}\n" for i in range(g.n)))
    assert main(["dynamic", "--edges", str(edges), "--responses", str(resp),
                 "--periods", str(per)]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert set(rep) == {"period1", "period2", "config"}


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "snirkit", "--help"], capture_output=True, text=True)
    assert r.returncode == 0 and "fit" in r.stdout
