from __future__ import annotations

import csv
import io
import json

import pytest

from ifsbench.cli.main import main as cli
from ifsbench.cli.builtins import BUILTINS, builtin_config
from ifsbench.cli.config import ConfigError, config_from_dict, parse_config, serialize_config
from ifsbench.cli.emit import to_csv, to_text
from ifsbench.cli.runner import exit_code, load_report, report_body, run_experiment


def small_config(**overrides):
    data = {
        "schema": "ifsbench/1", "name": "small", "alphabet": 2,
        "subshift": {"type": "full", "alphabet": 2}, "space": {"type": "circle"},
        "maps": {"0": {"type": "circle-affine", "multiplier": 2, "rotation": "0"},
                 "1": {"type": "circle-affine", "multiplier": 1, "rotation": "1/3"}},
        "streams": {"s": {"type": "periodic", "period": "01"}},
        "points": {"x": "1/5"}, "seed": 7,
        "tasks": [{"op": "orbit", "params": {"stream": "s", "point": "x", "n": 12}}],
    }
    data.update(overrides)
    return data


def write(tmp_path, data):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(data))
    return str(path)


def test_round_trip():
    config = config_from_dict(small_config())
    assert parse_config(serialize_config(config)) == config


@pytest.mark.parametrize("change,field", [
    ({"alphabet": 0}, "alphabet"),
    ({"schema": "other/2"}, "schema"),
    ({"streams": {"s": {"type": "periodic", "period": "012"}}}, "streams.s"),
    ({"points": {"x": "1/0"}}, "points.x"),
    ({"maps": {"0": {"type": "circle-affine", "multiplier": 2}}}, "maps"),
    ({"tasks": [{"op": "nonsense"}]}, "tasks[0].op"),
    ({"tasks": [{"op": "orbit", "params": {"stream": "nope"}}]}, "tasks[0].params.stream"),
    ({"extra": 1}, "extra"),
])
def test_validation_names_the_field(change, field):
    with pytest.raises(ConfigError) as info:
        config_from_dict(small_config(**change))
    assert any(e.startswith(field) for e in info.value.errors)


def test_report_is_deterministic():
    config = config_from_dict(small_config())
    a, b = run_experiment(config), run_experiment(config)
    assert report_body(a) == report_body(b)
    assert load_report(json.loads(json.dumps(a))) == json.loads(json.dumps(a))


def test_workers_keep_task_order():
    tasks = [{"op": "orbit", "params": {"stream": "s", "point": "x", "n": n}} for n in (3, 5, 8)]
    config = config_from_dict(small_config(tasks=tasks))
    serial = run_experiment(config)
    parallel = run_experiment(config, workers=2)
    assert report_body(serial)["tasks"] == report_body(parallel)["tasks"]


def test_csv_orbit_table_has_n_plus_one_rows():
    report = run_experiment(config_from_dict(small_config()))
    rows = list(csv.reader(io.StringIO(to_csv(report))))
    assert rows[0] == ["task", "step", "exact", "float"]
    assert len(rows) == 1 + 13
    assert rows[1][:3] == ["0", "0", "1/5"]


def test_text_tokens_and_exit_codes():
    tasks = [{"op": "is_surjective", "params": {}},
             {"op": "orbit", "params": {"stream": "s", "point": "x", "n": 2}}]
    report = run_experiment(config_from_dict(small_config(tasks=tasks)))
    lines = to_text(report).splitlines()
    assert [ln.split()[0] for ln in lines] == ["PASS", "PASS"]
    assert exit_code(report) == 0
    tasks[0]["expect"] = "fail"
    report = run_experiment(config_from_dict(small_config(tasks=tasks)))
    assert exit_code(report) == 1 and to_text(report).startswith("FAIL")


def test_task_errors_are_captured():
    tasks = [{"op": "orbit", "params": {"stream": "s", "point": "x"}},
             {"op": "orbit", "params": {"stream": "s", "point": "x", "n": 2}}]
    report = run_experiment(config_from_dict(small_config(tasks=tasks)))
    assert report["tasks"][0]["status"] == "error" and report["tasks"][1]["status"] == "ok"
    assert exit_code(report) == 1


def test_cli_exit_codes(tmp_path, capsys):
    path = write(tmp_path, small_config())
    assert cli(["validate", "--config", path]) == 0
    assert "is valid" in capsys.readouterr().out
    assert cli(["check", "--config", path, "--format", "text"]) == 0
    assert capsys.readouterr().out.startswith("PASS")
    bad = write(tmp_path, small_config(alphabet=-1))
    assert cli(["check", "--config", bad]) == 3
    assert "alphabet" in capsys.readouterr().err
    assert cli(["transfer", "--config", path]) == 3


def test_inconclusive_exit_code(tmp_path):
    # no tracer exists, but a two-point grid cannot prove that
    data = small_config(tasks=[{"op": "check_specification", "params": {
        "stream": "s", "eps": "1/1000", "grid": 2,
        "spec": {"points": ["1/5", "1/7"], "pairs": [[0, 0], [1, 1]], "gap": 1}}}])
    report = run_experiment(config_from_dict(data))
    assert report["tasks"][0]["outcome"] == "inconclusive"
    assert exit_code(report) == 2


def test_seed_override_and_out_file(tmp_path):
    path = write(tmp_path, small_config())
    out = tmp_path / "r" / "report.json"
    assert cli(["check", "--config", path, "--seed", "11", "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["config"]["seed"] == 11


def test_horizon_scale_is_recorded(tmp_path):
    data = small_config(tasks=[{"op": "detect_periodicity", "params": {
        "stream": "s", "point": "x", "kind": "weakly", "horizon": 40}}])
    report = run_experiment(config_from_dict(data), horizon_scale=2.0)
    assert report["horizon_scale"] == 2.0
    assert report["tasks"][0]["report"]["parameters"]["horizon"] == 80


def test_cover_command(tmp_path, capsys):
    data = builtin_config("promotion-sofic").data
    path = write(tmp_path, data)
    assert cli(["cover", "--config", path]) == 0
    cover = json.loads(capsys.readouterr().out)
    assert len(cover["vertices"]) == 2


@pytest.mark.parametrize("name", sorted(set(BUILTINS) - {"morse-ex49"}))
def test_builtins_meet_their_expectations(name):
    report = run_experiment(builtin_config(name))
    assert exit_code(report) == 0, to_text(report)
