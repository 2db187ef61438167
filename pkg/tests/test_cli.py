import json
import os

import pytest

from hflab.cli import (EXIT_ACCEPT, EXIT_CONFIG, EXIT_GATE, EXIT_OK,
                       load_config, main)


def write_config(tmp_path, **overrides):
    cfg = {
        "weight": {"family": "freud", "m": 2.0, "rho": 0.0},
        "interp": {"nu": 2, "l": 0, "n_list": [4, 8], "n": 6},
        "functions": ["sin"],
        "x_list": [-1.0, 0.5],
        "t_list": [1, 4, 16],
        "output": str(tmp_path / "out"),
    }
    cfg.update(overrides)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg))
    return str(path)


@pytest.fixture(autouse=True)
def isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("HFLAB_CACHE", str(tmp_path / "cache"))


def read_artifact(tmp_path, name):
    with open(tmp_path / "out" / name) as fh:
        return fh.read()


def test_mrs_csv_content(tmp_path, capsys):
    assert main(["mrs", write_config(tmp_path)]) == EXIT_OK
    body = read_artifact(tmp_path, "mrs.csv")
    lines = body.splitlines()
    assert lines[0].startswith("# hflab ")
    assert lines[1].startswith("# config_sha256=")
    assert lines[2] == "t,a_t,delta_t,T_a_t,eps_t"
    row4 = dict(zip(lines[2].split(","), lines[4].split(",")))
    assert float(row4["a_t"]) == pytest.approx(2.0, rel=1e-12)
    assert float(row4["delta_t"]) == pytest.approx(0.25, rel=1e-12)
    assert float(row4["T_a_t"]) == pytest.approx(2.0, rel=1e-12)


def test_mrs_determinism(tmp_path, capsys):
    path = write_config(tmp_path)
    assert main(["mrs", path]) == EXIT_OK
    first = read_artifact(tmp_path, "mrs.csv")
    assert main(["mrs", path]) == EXIT_OK
    assert read_artifact(tmp_path, "mrs.csv") == first


def test_nodes_and_cache_reuse(tmp_path, capsys):
    path = write_config(tmp_path)
    assert main(["nodes", path]) == EXIT_OK
    cache_files = os.listdir(tmp_path / "cache")
    assert len(cache_files) == 1
    first = read_artifact(tmp_path, "nodes_n6.csv")
    # second run must load the cached table and reproduce the bytes
    assert main(["nodes", path]) == EXIT_OK
    assert read_artifact(tmp_path, "nodes_n6.csv") == first
    assert os.listdir(tmp_path / "cache") == cache_files
    assert len(first.splitlines()) == 2 + 1 + 6  # headers + csv header + rows


def test_cache_checksum_validation(tmp_path, capsys):
    path = write_config(tmp_path)
    assert main(["nodes", path]) == EXIT_OK
    cache_file = os.path.join(tmp_path / "cache",
                              os.listdir(tmp_path / "cache")[0])
    with open(cache_file) as fh:
        payload = json.load(fh)
    payload["beta"][0] = "999.0"
    with open(cache_file, "w") as fh:
        json.dump(payload, fh)
    assert main(["nodes", path]) == EXIT_CONFIG


def test_interp_split_sums(tmp_path, capsys):
    assert main(["interp", write_config(tmp_path)]) == EXIT_OK
    lines = read_artifact(tmp_path, "interp_n6.csv").splitlines()[3:]
    for line in lines:
        _, _, L, X, Y, Z = line.split(",")
        assert float(L) == pytest.approx(float(X) + float(Y) + float(Z),
                                         abs=1e-12)


def test_converge_manifest(tmp_path, capsys):
    assert main(["converge", write_config(tmp_path)]) == EXIT_OK
    manifest = json.loads("\n".join(
        l for l in read_artifact(tmp_path, "converge_manifest.json")
        .splitlines() if not l.startswith("#")))
    assert manifest["passed"] is True
    assert manifest["functions"]["sin"]["strictly_decreasing"] is True
    assert "config_sha256" in manifest


def test_diagnose_report(tmp_path, capsys):
    assert main(["diagnose", write_config(
        tmp_path, diagnostics=["spacing", "mrs_residual"])]) == EXIT_OK
    body = read_artifact(tmp_path, "diagnose.txt")
    assert "[spacing]" in body and "[mrs_residual]" in body
    assert "band" in body


def test_exit_code_config_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["mrs", str(bad)]) == EXIT_CONFIG
    assert main(["mrs", str(tmp_path / "missing.json")]) == EXIT_CONFIG
    assert main(["mrs", write_config(
        tmp_path, functions=["unknown"])]) == EXIT_CONFIG
    assert main(["mrs", write_config(
        tmp_path, interp={"nu": 2, "n_list": [8, 4]})]) == EXIT_CONFIG


def test_exit_code_gate_rejection(tmp_path, capsys):
    assert main(["converge", write_config(
        tmp_path, interp={"nu": 3, "n_list": [4, 8]})]) == EXIT_GATE
    err = capsys.readouterr().err
    assert "odd" in err and "even" in err
    assert main(["converge", write_config(
        tmp_path, functions=["one"])]) == EXIT_GATE


def test_load_config_defaults(tmp_path):
    path = tmp_path / "minimal.json"
    path.write_text("{}")
    cfg = load_config(str(path))
    assert cfg.n_list == [8, 16, 32, 64]
    assert cfg.p == 2.0
    assert cfg.functions == ["sin"]
    assert len(cfg.checksum) == 64
