"""End-to-end command line checks: wire formats, exit codes, determinism."""

import csv
import json

import pytest

PARAMS = {"n": 1, "alpha": 1.0, "m": 0, "p": 2.0, "q": 2.0}


def write_json(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture()
def params_file(tmp_path):
    return write_json(tmp_path / "params.json", PARAMS)


def parse_jsonl(text):
    rows = [json.loads(line) for line in text.splitlines() if line]
    return rows[0], rows[1:]


def test_lattice_report(cli, params_file, tmp_path):
    out = tmp_path / "lat.jsonl"
    res = cli(["lattice", "--n", "1", "--r", "1.0", "--domain-radius", "6.0",
               "--probes", "2000", "--out", str(out)])
    assert res.returncode == 0
    config, rows = parse_jsonl(out.read_text())
    assert config["type"] == "config"
    assert config["command"] == "lattice"
    assert len(rows) == 1
    assert rows[0]["min_pair_distance"] >= 1.0
    assert rows[0]["uncovered_probe_count"] == 0


def test_config_echo_contains_defaults(cli, params_file, tmp_path):
    out = tmp_path / "v.jsonl"
    res = cli(["verify-norms", "--params", "@" + params_file, "--out", str(out)])
    assert res.returncode == 0
    config, rows = parse_jsonl(out.read_text())
    assert config["params"] == PARAMS
    assert config["version"]
    assert all(r["passed"] for r in rows)


def test_json_lines_round_trip(cli, params_file, tmp_path):
    out = tmp_path / "c.jsonl"
    res = cli(["carleson", "--params", "@" + params_file,
               "--measure", '{"kind": "gaussian", "rate": 1.0}',
               "--out", str(out)])
    assert res.returncode == 0
    for line in out.read_text().splitlines():
        obj = json.loads(line)
        assert json.dumps(obj, sort_keys=True, separators=(",", ":")) == line


def test_carleson_negative_verdict_still_exits_zero(cli, tmp_path):
    params = write_json(tmp_path / "p.json", {"n": 1, "alpha": 1.0, "m": 0, "p": 4.0, "q": 2.0})
    out = tmp_path / "c.jsonl"
    res = cli(["carleson", "--params", "@" + params,
               "--measure", '{"kind": "lebesgue"}', "--out", str(out)])
    assert res.returncode == 0
    _, rows = parse_jsonl(out.read_text())
    assert rows[0]["is_carleson"] == 0


def test_compop_row(cli, params_file, tmp_path):
    out = tmp_path / "op.jsonl"
    res = cli(["compop", "--params", "@" + params_file,
               "--symbol", '{"matrix": [[0.5]]}', "--out", str(out)])
    assert res.returncode == 0
    _, rows = parse_jsonl(out.read_text())
    assert rows[0]["bounded"] == 1
    assert rows[0]["compact"] == 1


def test_csv_format(cli, params_file, tmp_path):
    out = tmp_path / "v.csv"
    res = cli(["verify-norms", "--params", "@" + params_file,
               "--format", "csv", "--out", str(out)])
    assert res.returncode == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# config: ")
    json.loads(lines[0][len("# config: "):])
    header = lines[1].split(",")
    assert header == sorted(header)
    body = list(csv.DictReader(lines[1:]))
    assert len(body) >= 4


def test_unknown_param_key_fatal(cli, tmp_path):
    bad = write_json(tmp_path / "p.json", dict(PARAMS, alpah=2.0))
    res = cli(["verify-norms", "--params", "@" + bad])
    assert res.returncode == 2
    assert "alpah" in res.stderr


def test_missing_required_exponent_fatal(cli, tmp_path):
    bad = write_json(tmp_path / "p.json", {"n": 1, "alpha": 1.0, "m": 0, "p": 2.0})
    res = cli(["verify-norms", "--params", "@" + bad])
    assert res.returncode == 2


def test_malformed_json_fatal(cli, tmp_path):
    bad = tmp_path / "p.json"
    bad.write_text("{not json")
    res = cli(["verify-norms", "--params", "@" + str(bad)])
    assert res.returncode == 2


def test_unknown_measure_kind_fatal(cli, params_file):
    res = cli(["carleson", "--params", "@" + params_file,
               "--measure", '{"kind": "cauchy"}'])
    assert res.returncode == 2


def test_missing_params_file_io_error(cli):
    res = cli(["verify-norms", "--params", "@/nonexistent/params.json"])
    assert res.returncode == 3


def test_unwritable_output_io_error(cli, params_file):
    res = cli(["lattice", "--n", "1", "--r", "1.0", "--domain-radius", "6.0",
               "--probes", "100", "--out", "/nonexistent/dir/x.jsonl"])
    assert res.returncode == 3


def test_compop_radii_flag(cli, params_file, tmp_path):
    out = tmp_path / "op.jsonl"
    res = cli(["compop", "--params", "@" + params_file,
               "--symbol", '{"matrix": [[0.5]]}',
               "--radii", "0,1,2", "--out", str(out)])
    assert res.returncode == 0


def test_report_determinism(cli, params_file, tmp_path):
    args = ["carleson", "--params", "@" + params_file,
            "--measure", '{"kind": "gaussian", "rate": 1.0}']
    a = tmp_path / "a.jsonl"
    b = tmp_path / "b.jsonl"
    assert cli(args + ["--out", str(a)]).returncode == 0
    assert cli(args + ["--out", str(b)]).returncode == 0
    assert a.read_bytes() == b.read_bytes()


def test_stdout_when_no_out_flag(cli, params_file):
    res = cli(["compop", "--params", "@" + params_file,
               "--symbol", '{"matrix": [[0.5]]}'])
    assert res.returncode == 0
    config, rows = parse_jsonl(res.stdout)
    assert config["command"] == "compop"
    assert rows
