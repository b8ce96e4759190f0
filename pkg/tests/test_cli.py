import json

import numpy as np
import pytest

from qwalk.cli import main, parse_graph_spec, parse_init_spec
from qwalk.arcs import ArcSpace
from qwalk.errors import ConfigError
from qwalk.graphs import Cycle, Edgeless, Join, build, graph_from_json


# ----- spec parsing -----

def test_parse_graph_spec_families():
    g = parse_graph_spec("join k2c n=5")
    assert g.n == 7
    assert sorted(g.degree(v) for v in range(7)) == [4, 4, 4, 4, 4, 5, 5]
    assert parse_graph_spec("cycle n=6").n == 6
    assert parse_graph_spec("diamond n=2 loops=ends").has_loop(0)


def test_parse_graph_spec_errors():
    with pytest.raises(ConfigError, match="cycle requires n ≥ 3"):
        parse_graph_spec("cycle n=2")
    with pytest.raises(ConfigError, match="needs n="):
        parse_graph_spec("cycle")
    with pytest.raises(ConfigError, match="k2c, k2k, or k2p"):
        parse_graph_spec("join k9z n=3")
    with pytest.raises(ConfigError, match="unknown graph spec"):
        parse_graph_spec("octahedron n=1")
    with pytest.raises(ConfigError, match="unexpected token"):
        parse_graph_spec("cycle widdershins n=6")


def test_parse_graph_spec_file_round_trip(tmp_path, capsys):
    out = tmp_path / "g.json"
    assert main(["graph", "join k2k n=4", "--out", str(out)]) == 0
    g = parse_graph_spec(str(out))
    want = build(Join(Edgeless(2), Edgeless(4)))
    assert np.array_equal(g.adjacency, want.adjacency)


def test_parse_init_specs():
    g = build(Cycle(4))
    space = ArcSpace.from_graph(g)
    eq = parse_init_spec("equal", space, 0, seed=0)
    assert eq.shape == (1, space.n_arcs)
    haar = parse_init_spec("haar:5:3", space, 0, seed=0)
    assert haar.shape == (5, space.n_arcs)
    assert np.allclose(np.linalg.norm(haar, axis=1), 1.0)
    amps = parse_init_spec("1,1", space, 0, seed=0)
    assert np.allclose(np.linalg.norm(amps), 1.0)
    with pytest.raises(ConfigError, match="2 ports but 3"):
        parse_init_spec("1,0,0", space, 0, seed=0)
    with pytest.raises(ConfigError, match="bad amplitude"):
        parse_init_spec("1,spam", space, 0, seed=0)
    with pytest.raises(ConfigError, match="haar spec"):
        parse_init_spec("haar:2:3:4:5", space, 0, seed=0)


# ----- exit codes -----

def test_exit_codes(capsys):
    assert main(["graph", "cycle n=6"]) == 0
    assert main(["graph", "cycle n=1"]) == 1
    assert main(["dtqw", "--graph", "cycle n=4", "--bogus"]) == 1
    bad_coin = '{"0": [[1, 0], [0, 0.5]]}'
    assert main(["dtqw", "--graph", "cycle n=4", "--pair", "0,2",
                 "--policy", bad_coin]) == 2
    err = capsys.readouterr().err
    assert "config error" in err and "tolerance breach" in err


def test_validation_reports_all_problems(capsys):
    code = main(["dtqw", "--graph", "cycle n=6", "--pair", "0,19",
                 "--steps", "-3", "--track", "1,99"])
    assert code == 1
    err = capsys.readouterr().err
    assert "pair vertex 19" in err
    assert "steps must be positive" in err
    assert "tracked vertex 99" in err


# ----- dtqw workflow -----

def test_dtqw_files_and_determinism(tmp_path, capsys):
    base = tmp_path / "run"
    argv = ["dtqw", "--graph", "join k2c n=6", "--pair", "0,1",
            "--steps", "24", "--out", str(base)]
    assert main(argv) == 0
    csv_text = base.with_suffix(".csv").read_text()
    assert csv_text.splitlines()[0] == "step,v0,v1"
    assert len(csv_text.splitlines()) == 26
    report = json.loads(base.with_suffix(".json").read_text())["report"]
    assert report["pst_steps"] == [6, 18]
    assert report["strict_period"] == 12

    again = tmp_path / "again"
    argv2 = ["dtqw", "--graph", "join k2c n=6", "--pair", "0,1",
             "--steps", "24", "--out", str(again)]
    assert main(argv2) == 0
    assert again.with_suffix(".csv").read_text() == csv_text


def test_dtqw_haar_scan_mode(tmp_path):
    base = tmp_path / "scan"
    argv = ["dtqw", "--graph", "join k2k n=3", "--pair", "0,1",
            "--init", "haar:40:9", "--steps", "10", "--out", str(base)]
    assert main(argv) == 0
    data = json.loads(base.with_suffix(".json").read_text())
    assert data["command"] == "dtqw-scan"
    assert data["max_probability"] >= 1.0 - 1e-9
    # transfer recurs every 4 steps, so ties can land on any of 2, 6, 10
    assert data["best_step"] % 4 == 2


def test_config_file_and_cli_precedence(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"steps": 12}')
    base = tmp_path / "a"
    main(["dtqw", "--graph", "cycle n=4", "--pair", "0,2",
          "--config", str(cfg), "--out", str(base)])
    assert base.with_suffix(".csv").read_text().strip().splitlines()[-1].startswith("12,")
    base2 = tmp_path / "b"
    main(["dtqw", "--graph", "cycle n=4", "--pair", "0,2",
          "--config", str(cfg), "--steps", "5", "--out", str(base2)])
    assert base2.with_suffix(".csv").read_text().strip().splitlines()[-1].startswith("5,")


def test_seed_env_fallback(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("QWALK_SEED", "77")
    base = tmp_path / "env"
    main(["dtqw", "--graph", "join k2k n=3", "--pair", "0,1",
          "--init", "haar:1", "--steps", "4", "--out", str(base)])
    data = json.loads(base.with_suffix(".json").read_text())
    assert data["seed"] == 77


# ----- other commands -----

def test_ctqw_files(tmp_path):
    base = tmp_path / "ct"
    argv = ["ctqw", "--graph", "join k2k n=9", "--pair", "0,1",
            "--tmax", "5", "--dt", "0.01", "--out", str(base)]
    assert main(argv) == 0
    data = json.loads(base.with_suffix(".json").read_text())
    assert data["report"]["period"] == pytest.approx(2 * np.pi / np.sqrt(18), abs=1e-6)
    header = base.with_suffix(".csv").read_text().splitlines()[0]
    assert header == "t,v0,v1"


def test_decohere_classical_limit(tmp_path):
    base = tmp_path / "dec"
    argv = ["decohere", "--graph", "cycle n=4", "--policy", "O1",
            "--basis", "both", "--rate", "1", "--init", "1,0",
            "--pair", "0,2", "--steps", "6", "--out", str(base)]
    assert main(argv) == 0
    data = json.loads(base.with_suffix(".json").read_text())
    assert data["final_distribution"] == pytest.approx([0.5, 0.0, 0.5, 0.0], abs=1e-10)
    header = base.with_suffix(".csv").read_text().splitlines()[0]
    assert header == "step,v0,v1,v2,v3"


def test_decohere_rate_sweep(tmp_path):
    base = tmp_path / "rates"
    argv = ["decohere", "--graph", "join k2c n=3", "--rates", "0,1",
            "--steps", "6", "--out", str(base)]
    assert main(argv) == 0
    lines = base.with_suffix(".csv").read_text().splitlines()
    assert lines[0] == "rate,p_target"
    assert float(lines[1].split(",")[1]) == pytest.approx(1.0, abs=1e-9)
    assert float(lines[2].split(",")[1]) == pytest.approx(0.171875, abs=1e-9)


def test_decohere_flag_conflicts(capsys):
    code = main(["decohere", "--graph", "cycle n=4", "--rate", "0.2",
                 "--rates", "0.1,0.2", "--basis", "spin"])
    assert code == 1
    err = capsys.readouterr().err
    assert "either --rate or --rates" in err
    assert "basis must be" in err


def test_search_cli_schema(tmp_path, capsys):
    sink = tmp_path / "s.jsonl"
    argv = ["search", "--base", "4", "--max-new", "1", "--samples", "50",
            "--steps", "10", "--workers", "1", "--out", str(sink)]
    assert main(argv) == 0
    capsys.readouterr()
    lines = [l for l in sink.read_text().splitlines() if l.strip()]
    assert len(lines) == 24
    for line in lines:
        rec = json.loads(line)
        assert set(rec) == {"key", "descriptor", "policy", "best_p",
                            "best_step", "pst", "pst_steps", "frac_over_lambda"}
    # a second run must not duplicate finished cells
    assert main(argv) == 0
    capsys.readouterr()
    assert len(sink.read_text().splitlines()) == 24


def test_search_stdout_filters(tmp_path, capsys):
    argv = ["search", "--base", "4", "--max-new", "1", "--samples", "50",
            "--steps", "10", "--workers", "1", "--pst-only"]
    assert main(argv) == 0
    out = capsys.readouterr().out
    for line in out.splitlines():
        assert json.loads(line)["pst"] is True


def test_robust_cli(tmp_path):
    base = tmp_path / "rob"
    argv = ["robust", "--kind", "phase", "--n", "3", "--magnitudes",
            "0,3.141592653589793", "--out", str(base)]
    assert main(argv) == 0
    lines = base.with_suffix(".csv").read_text().splitlines()
    assert lines[0] == "magnitude,p_n3"
    assert float(lines[2].split(",")[1]) == pytest.approx(0.181424, abs=1e-5)


def test_interp_cli(tmp_path):
    base = tmp_path / "interp"
    argv = ["interp", "--n", "3", "--c-grid", "0,0.5,1", "--out", str(base)]
    assert main(argv) == 0
    lines = base.with_suffix(".csv").read_text().splitlines()
    assert lines[0] == "c,p_n3"
    assert float(lines[1].split(",")[1]) == pytest.approx(1.0, abs=1e-9)
    assert float(lines[3].split(",")[1]) == pytest.approx(1.0, abs=1e-9)
