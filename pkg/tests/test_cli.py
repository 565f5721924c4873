import json

import pytest
from click.testing import CliRunner

from polycode.cli import main, run_experiment


@pytest.fixture
def runner():
    return CliRunner()


def test_genmatrix_json(runner):
    result = runner.invoke(main, ["genmatrix", "--n", "3", "--t", "1"])
    assert result.exit_code == 0
    obj = json.loads(result.output)
    assert obj["n"] == 3 and obj["t"] == 1
    assert obj["rows"] == [[1, 0], [0, 1], [1, 1]]


def test_pack_unpack_roundtrip(runner):
    result = runner.invoke(main, ["pack", "--n", "3", "--t", "1", "--k", "2",
                                  "--k0", "2", "--n0", "2",
                                  "--symbols", "0,1,1,0,0,0,1,1"])
    assert result.exit_code == 0
    rows = json.loads(result.output)["rows"]
    values = ",".join(str(v) for row in rows for v in row)
    result = runner.invoke(main, ["unpack", "--k", "2", "--k0", "2",
                                  "--values", values])
    assert result.exit_code == 0
    assert json.loads(result.output)["symbols"] == [0, 1, 1, 0, 0, 0, 1, 1]


def test_encode_decode_pipeline(runner, tmp_path):
    bundle_path = tmp_path / "bundle.json"
    result = runner.invoke(main, ["encode", "--n", "3", "--t", "1",
                                  "--k", "2", "--k0", "2", "--n0", "2",
                                  "--seed", "11", "-o", str(bundle_path)])
    assert result.exit_code == 0
    result = runner.invoke(main, ["decode", "-i", str(bundle_path)])
    assert result.exit_code == 0
    out = json.loads(result.output)
    assert out["distortion"] == "0"
    assert None not in out["reconstruction"]


def test_rd_curve_csv(runner):
    result = runner.invoke(main, ["rd-curve", "--n", "3", "--t", "1",
                                  "--points", "3"])
    assert result.exit_code == 0
    lines = result.output.strip().splitlines()
    assert lines[0].startswith("rate,")
    first = lines[1].split(",")
    assert first[1] == "1/2" and first[4] == "2/3"


def test_rd_curve_plot(runner, tmp_path):
    png = tmp_path / "rd.png"
    result = runner.invoke(main, ["rd-curve", "--n", "3", "--t", "1",
                                  "--points", "3", "-o", str(tmp_path / "rd.csv"),
                                  "--plot", str(png)])
    assert result.exit_code == 0
    assert png.stat().st_size > 0


def test_simulate_deterministic(runner):
    args = ["simulate", "--n", "3", "--t", "1", "--attacks", "30",
            "--seed", "5"]
    out1 = runner.invoke(main, args)
    out2 = runner.invoke(main, args)
    assert out1.exit_code == 0
    assert out1.output == out2.output
    assert json.loads(out1.output)["within_guarantee"] is True


def test_witness_command(runner):
    result = runner.invoke(main, ["witness", "--t", "2"])
    assert result.exit_code == 0
    assert json.loads(result.stdout)["report"]["ok"] is True
    assert "PASS" in result.stderr


def test_dss_sim_command(runner, tmp_path):
    scen = {
        "params": {"alpha": 1, "beta": 1, "n_initial": 8, "k": 7, "d": 7,
                   "t": 1, "node_cap": 40, "q": 65536, "r": 5},
        "roaming_repairs": 2,
    }
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(scen))
    result = runner.invoke(main, ["dss-sim", "--scenario", str(path),
                                  "--seed", "3"])
    assert result.exit_code == 0
    log = json.loads(result.output)
    assert log["ok"] is True


def test_dss_bounds_csv(runner):
    result = runner.invoke(main, ["dss-bounds", "--k", "7", "--d", "7",
                                  "--t", "1", "--points", "3"])
    assert result.exit_code == 0
    lines = result.output.strip().splitlines()
    assert lines[1].split(",")[1] == "1/15"
    assert lines[1].split(",")[3] == "1/3"  # MBR storage on the outer bound


def test_config_file_overrides_flags(runner, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"t": 1}))
    result = runner.invoke(main, ["genmatrix", "--n", "3", "--t", "2",
                                  "--config", str(cfg)])
    assert result.exit_code == 0
    assert json.loads(result.output)["t"] == 1


def test_run_experiment_dispatch(tmp_path):
    out = tmp_path / "m.json"
    status = run_experiment({"mode": "genmatrix", "n": 4, "t": 1,
                             "output": str(out)})
    assert status == 0
    assert json.loads(out.read_text())["n"] == 4


def test_run_experiment_rejects_bad_mode():
    assert run_experiment({"mode": "nope"}) == 2


def test_run_experiment_validation_error():
    assert run_experiment({"mode": "genmatrix", "n": 2, "t": 3}) == 2
