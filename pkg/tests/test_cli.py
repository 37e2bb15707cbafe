import json

from click.testing import CliRunner

from diracsp.cli import main
from diracsp.datasets import dataset_path

FF = dataset_path("florentine_marriage.json")


def invoke(*args):
    return CliRunner().invoke(main, [str(a) for a in args])


def test_generate_and_info(tmp_path):
    out = tmp_path / "k.json"
    r = invoke("generate", "--nodes", 25, "--seed", 9, "-o", out)
    assert r.exit_code == 0, r.output
    assert "25 nodes" in r.output
    meta = json.loads(out.read_text())["meta"]
    assert meta["seed"] == 9 and meta["generator"] == "ngf"

    r = invoke("info", "-i", out)
    assert r.exit_code == 0
    assert "nodes=25 links=47 triangles=23" in r.output
    assert "betti=(1, 0, 0)" in r.output


def test_generate_requires_seed(tmp_path):
    r = invoke("generate", "--nodes", 10, "-o", tmp_path / "k.json")
    assert r.exit_code != 0


def test_info_rejects_invalid_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"format": "diracsp/complex/1", "nodes": 2,
                               "links": [[0, 1]], "triangles": [[0, 1, 2]]}))
    r = invoke("info", "-i", bad)
    assert r.exit_code == 3
    assert "error=IndexOutOfRange" in r.output or "error=MissingFace" in r.output


def test_synth_eigen_with_noise(tmp_path):
    sig = tmp_path / "sig.csv"
    r = invoke(
        "synth", "-i", FF, "--mode", "eigen", "--selector", "smallest_positive",
        "--alpha", "0.6", "--seed", 3, "-o", sig,
    )
    assert r.exit_code == 0, r.output
    assert sig.exists()
    assert (tmp_path / "sig.noisy.csv").exists()
    assert "snr=" in r.output


def test_synth_requires_seed_for_noise(tmp_path):
    r = invoke("synth", "-i", FF, "--alpha", "0.5", "-o", tmp_path / "s.csv")
    assert r.exit_code == 1
    assert "error=ValueError" in r.output


def test_synth_degenerate_selection_fails_cleanly(tmp_path):
    # filled triangle: +sqrt(3) has multiplicity 2 for D_1
    k = tmp_path / "tri.json"
    k.write_text(json.dumps({"format": "diracsp/complex/1", "nodes": 3,
                             "links": [[0, 1], [0, 2], [1, 2]],
                             "triangles": [[0, 1, 2]]}))
    r = invoke("synth", "-i", k, "--mode", "eigen", "-o", tmp_path / "s.csv")
    assert r.exit_code == 3
    assert "error=DegenerateSelection" in r.output


def test_sweep_m_cli_deterministic(tmp_path):
    args = (
        "sweep-m", "-i", FF, "--alphas", "0.6", "--taus", "10",
        "--ms", "0,0.5,1.0", "--seeds", "5", "--seed", "17",
    )
    r1 = invoke(*args, "-o", tmp_path / "a.csv")
    r2 = invoke(*args, "-o", tmp_path / "b.csv")
    assert r1.exit_code == 0, r1.output
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_learn_cli_writes_summary(tmp_path):
    r = invoke(
        "learn", "-i", FF, "--alphas", "0.5", "--taus", "7", "--m0s", "1.5",
        "--seeds", "3", "--seed", "4", "-o", tmp_path / "tr.csv",
    )
    assert r.exit_code == 0, r.output
    assert (tmp_path / "tr.csv").exists()
    assert (tmp_path / "tr.summary.csv").exists()


def test_learn_cli_plan_file(tmp_path):
    plan = {
        "dataset": {"kind": "file", "path": FF},
        "signal": {"mode": "eigen", "n": 1, "selector": "smallest_positive"},
        "alphas": [0.5],
        "taus": [7.0],
        "m0s": [1.5],
        "seeds": 2,
        "seed": 11,
    }
    pf = tmp_path / "plan.json"
    pf.write_text(json.dumps(plan))
    r = invoke("learn", "--plan", pf, "--seed", 11, "-o", tmp_path / "tr.csv")
    assert r.exit_code == 0, r.output
    header = (tmp_path / "tr.csv").read_text().splitlines()[1]
    assert '"seeds": 2' in header


def test_heatmap_cli_preset(tmp_path):
    r = invoke(
        "heatmap", "-i", FF, "--preset", "smallest", "--alphas", "0.5",
        "--taus", "5", "--seeds", "2", "--seed", "6", "-o", tmp_path / "h.csv",
    )
    assert r.exit_code == 0, r.output
    lines = (tmp_path / "h.csv").read_text().splitlines()
    assert '"m0s": [1.0]' in lines[1]


def test_basin_cli(tmp_path):
    r = invoke(
        "basin", "-i", FF, "--alphas", "0.6", "--taus", "7",
        "--m0s", "0.5,1.0", "--seeds", "2", "--seed", "8",
        "-o", tmp_path / "b.csv",
    )
    assert r.exit_code == 0, r.output


def test_bench_cli(tmp_path):
    r = invoke(
        "bench", "--sizes", "15,30", "--runs", "2", "--seed", "2",
        "-o", tmp_path / "bench.csv",
    )
    assert r.exit_code == 0, r.output
    assert "scaling exponent" in r.output
    assert "low confidence" in r.output


def test_stochastic_commands_require_seed(tmp_path):
    for cmd in (
        ("sweep-m", "-i", FF, "-o", tmp_path / "x.csv"),
        ("learn", "-i", FF, "-o", tmp_path / "x.csv"),
        ("heatmap", "-i", FF, "-o", tmp_path / "x.csv"),
        ("basin", "-i", FF, "-o", tmp_path / "x.csv"),
        ("bench", "-o", tmp_path / "x.csv"),
    ):
        r = invoke(*cmd)
        assert r.exit_code == 2, cmd
        assert "--seed" in r.output
