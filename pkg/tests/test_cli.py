import json

import pytest

from srflow.cli import EXIT_CONFIG, EXIT_OK, load_config, main
from srflow.errors import ConfigError


def test_overrides_and_defaults():
    cfg = load_config(None, ["lattice.n_levels=21", "profile.kind=\"cylinder\""])
    assert cfg["lattice"]["n_levels"] == 21
    assert cfg["profile"]["kind"] == "cylinder"
    assert cfg["lattice"]["xi"] == 0.05


def test_validation_rejects_bad_fields():
    for bad in (["lattice.n_levels=3"], ["lattice.xi=-1"], ["solver=\"euler\""],
                ["lattice.closure=\"open\""], ["flow.bogus=1"], ["lattice.a_range=[1, 0]"]):
        with pytest.raises(ConfigError):
            load_config(None, bad)


def test_simulate_cylinder(tmp_path, capsys):
    out = tmp_path / "run"
    code = main(["simulate", "--out", str(out), "--set", "profile.kind=\"cylinder\"",
                 "--set", "lattice.n_levels=11", "--set", "flow.t_max=0.1"])
    assert code == EXIT_OK
    summary = json.loads((out / "summary.json").read_text())
    assert summary["reason"] == "max_time"
    assert summary["ratio_final"] == pytest.approx(2.0, abs=1e-3)
    first = (out / "trajectory.csv").read_text().splitlines()[0]
    assert first == f"# srflow trajectory schema=1 config_hash={summary['config_hash']}"


def test_malformed_config_writes_nothing(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text("{not json")
    out = tmp_path / "out"
    assert main(["simulate", "--config", str(cfg), "--out", str(out)]) == EXIT_CONFIG
    assert not out.exists()


def test_converge_rejects_two_resolutions(tmp_path, capsys):
    out = tmp_path / "c"
    assert main(["converge", "--out", str(out), "--set", "converge.N_list=[51, 101]"]) == EXIT_CONFIG
    assert "need ≥ 3 resolutions" in capsys.readouterr().err
    assert not out.exists()


def test_unknown_command():
    assert main(["frobnicate"]) == EXIT_CONFIG


def test_converge_ak(tmp_path):
    out = tmp_path / "c"
    code = main(["converge", "--out", str(out), "--set", "profile={\"kind\": \"angenent_knopf\"}"])
    assert code == EXIT_OK
    rep = json.loads((out / "convergence.json").read_text())
    assert rep["header"].startswith("# srflow convergence")
    assert (out / "convergence.csv").read_text().startswith("# srflow convergence")
