"""Test file for the command line interface."""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

import json
import pickle

import pytest

from pyredlab import cli
from pyredlab.errors import SimulationError
from pyredlab.experiments import TABLE_COLUMNS
from pyredlab.private import FILE_VERSION

from .conftest import example_topology


def _write(path, content):
    path.write_text(json.dumps(content))
    return str(path)


@pytest.fixture
def example_config(tmp_path):
    return _write(tmp_path / "example.json",
                  {"topology": example_topology(7.5).to_dict(),
                   "sim": {"busy_periods": 200, "warmup_periods": 10}})


def test_stability(example_config, capsys):
    assert cli.main(["stability", example_config]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["lambda_R"] == 8
    assert report["i_star"] == 3
    assert report["verdicts"] == {"0": "stable", "1": "stable",
                                  "2": "stable", "3": "stable"}


def test_stability_lambda_override(example_config, capsys):
    assert cli.main(["stability", example_config, "--lambda", "9"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["verdicts"]["0"] == "unstable"
    assert report["verdicts"]["3"] == "stable"


def test_topology_by_reference(tmp_path, capsys):
    example_topology().save(tmp_path / "topology.json")
    config = _write(tmp_path / "config.json", {"topology": "topology.json"})
    assert cli.main(["stability", config]) == 0
    assert json.loads(capsys.readouterr().out)["lambda_R"] == 8


def test_simulate_zero_arrivals(example_config, capsys):
    assert cli.main(["simulate", example_config, "--lambda", "0"]) == 0
    result = json.loads(capsys.readouterr().out)
    assert result["mean_jobs"] == 0
    assert result["completed_jobs"] == 0


def test_simulate_seed_determines_output(example_config, capsys):
    outputs = []
    for seed in ("3", "3", "4"):
        assert cli.main(["simulate", example_config, "--seed", seed,
                         "--busy-periods", "100"]) == 0
        outputs.append(capsys.readouterr().out)
    assert outputs[0] == outputs[1]
    assert outputs[0] != outputs[2]
    assert json.loads(outputs[0])["cycles"] == 100


def test_trajectory(example_config, tmp_path):
    out = tmp_path / "trajectory.csv"
    assert cli.main(["trajectory", example_config, "--horizon", "2",
                     "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "time,M_1,M_2,M_3,M_4"
    assert lines[1] == "0,0,0,0,0"
    assert lines[-1].startswith("2,")


def test_trajectory_json_and_pickle(example_config, tmp_path):
    """Both formats hold the same columns as the CSV."""
    csv_out = tmp_path / "trajectory.csv"
    assert cli.main(["trajectory", example_config, "--horizon", "2",
                     "--seed", "3", "--out", str(csv_out)]) == 0
    lines = csv_out.read_text().splitlines()
    assert cli.main(["trajectory", example_config, "--horizon", "2",
                     "--seed", "3", "--out", str(csv_out),
                     "--format", "json"]) == 0
    saved = json.loads((tmp_path / "trajectory.json").read_text())
    assert saved.pop("file-version") == FILE_VERSION
    assert list(saved) == lines[0].split(",")
    assert len(saved["time"]) == len(lines) - 1
    assert saved["time"][-1] == 2
    assert cli.main(["trajectory", example_config, "--horizon", "2",
                     "--seed", "3", "--out", str(tmp_path / "run.bin"),
                     "--format", "pickle"]) == 0
    with open(tmp_path / "run.pickle", "rb") as dumpfile:
        pickled = pickle.load(dumpfile)
    assert pickled.pop("file-version") == FILE_VERSION
    assert pickled["M_1"] == saved["M_1"]
    assert pickled["time"] == pytest.approx(saved["time"])


def test_saved_formats_need_out(example_config, capsys):
    assert cli.main(["trajectory", example_config, "--horizon", "2",
                     "--format", "json"]) == 1
    assert "--format" in capsys.readouterr().err


def test_trajectory_needs_positive_horizon(example_config, capsys):
    assert cli.main(["trajectory", example_config, "--horizon", "0"]) == 1
    assert "--horizon" in capsys.readouterr().err


def test_fluid(tmp_path):
    config = _write(tmp_path / "fluid.json",
                    {"topology": example_topology(7.5).to_dict(),
                     "fluid": {"initial_mass": [40, 40, 40, 30]}})
    out = tmp_path / "fluid.csv"
    assert cli.main(["fluid", config, "--out", str(out)]) == 0
    assert out.read_text().splitlines()[0] == "time,server,mass"
    events = json.loads((tmp_path / "fluid.events.json").read_text())
    assert [event["servers"] for event in events["events"]] \
        == [[3], [2], [0, 1]]
    assert events["stalled_stage"] is None


def test_fluid_json(tmp_path):
    config = _write(tmp_path / "fluid.json",
                    {"topology": example_topology(7.5).to_dict(),
                     "fluid": {"initial_mass": [40, 40, 40, 30]}})
    out = tmp_path / "drain.csv"
    assert cli.main(["fluid", config, "--out", str(out)]) == 0
    rows = out.read_text().splitlines()[1:]
    assert cli.main(["fluid", config, "--out", str(out),
                     "--format", "json"]) == 0
    saved = json.loads((tmp_path / "drain.json").read_text())
    assert saved["server"][:4] == [1, 2, 3, 4]
    assert saved["mass"][:4] == [40, 40, 40, 30]
    assert len(saved["time"]) == len(rows)
    assert (tmp_path / "drain.events.json").exists()


def test_fluid_from_type_mass(tmp_path, capsys):
    config = _write(tmp_path / "fluid.json",
                    {"topology": example_topology(7.5).to_dict(),
                     "fluid": {"initial_types": [1, 1, 1, 1, 1, 1],
                               "horizon": 3}})
    assert cli.main(["fluid", config]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[1:5] == ["0,1,3", "0,2,3", "0,3,3", "0,4,3"]


def test_table(capsys):
    assert cli.main(["table", "3"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "K,d,M,lambda_R,lambda_B"
    assert "4,2,4,8,4" in lines


def test_table_with_text_columns(tmp_path, capsys):
    """model and capacities columns are written verbatim"""
    assert cli.main(["table", "4"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == ",".join(TABLE_COLUMNS[4])
    assert lines[1].startswith("W,geometric,1,2,")
    assert any(line.startswith("WW,linear,4,4,7,") for line in lines)
    out = tmp_path / "table4.csv"
    assert cli.main(["table", "4", "--out", str(out)]) == 0
    assert out.read_text().splitlines() == lines


def test_sweep_writes_manifest(tmp_path):
    config = _write(tmp_path / "sweep.json",
                    {"sweep": {"family": "red_d_linear", "num_servers": [4],
                               "d": [2], "M": [4]}})
    out = tmp_path / "sweep.csv"
    assert cli.main(["sweep", config, "--out", str(out),
                     "--threads", "1"]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("family,model,K,d")
    assert lines[1].startswith("red_d_linear,red-2,4,2,M,4,")
    manifest = json.loads((tmp_path / "sweep.manifest.json").read_text())
    assert manifest["tool"] == "pyredlab"


@pytest.mark.parametrize("content, field", [
    ({"topology": example_topology().to_dict(), "sim": {"speed": 1}},
     "sim"),
    ({"topology": {"capacities": [1], "types": [{"servers": [1], "p": 1}]}},
     "topology.types[0].servers"),
    ({"topology": example_topology().to_dict(), "sim": {},
      "sweep": {"family": "red_d_linear"}}, "config"),
    ({"sim": {}}, "topology"),
])
def test_configuration_errors(tmp_path, capsys, content, field):
    config = _write(tmp_path / "bad.json", content)
    assert cli.main(["simulate", config]) == 1
    err = capsys.readouterr().err
    assert err.startswith("redlab: error: " + field)
    assert err.count("\n") == 1


def test_malformed_json_and_missing_file(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{\"topology\": ")
    assert cli.main(["stability", str(path)]) == 1
    assert "malformed JSON" in capsys.readouterr().err
    assert cli.main(["stability", str(tmp_path / "missing.json")]) == 1


def test_runtime_error_exit_code(example_config, monkeypatch, capsys):
    def failing_run(config):
        raise SimulationError("event loop\nbroke")

    monkeypatch.setattr(cli, "run", failing_run)
    assert cli.main(["simulate", example_config]) == 2
    assert capsys.readouterr().err == "redlab: error: event loop broke\n"
