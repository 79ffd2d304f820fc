import csv
import json

import pytest

from gmsphere import cli


def run(args, capsys=None):
    return cli.main(args)


def test_verify_subset_writes_report(tmp_path):
    out = tmp_path / "r.jsonl"
    assert cli.main(["verify", "--filter", "diffeo.*", "--samples", "20", "--out", str(out), "--quiet"]) == 0
    entries = [json.loads(line) for line in out.read_text().splitlines()]
    assert entries and all(e["check"].startswith("diffeo.") for e in entries)
    assert all(e["status"] == "pass" and e["anchor"] for e in entries)
    assert all(e["samples"] > 0 for e in entries)


def test_reports_are_byte_identical(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    args = ["verify", "--filter", "actions.*", "--filter", "algebra.*", "--samples", "10", "--seed", "42", "--quiet"]
    cli.main(args + ["--out", str(a)])
    cli.main(args + ["--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_filter_does_not_perturb_other_checks(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    cli.main(["verify", "--filter", "actions.cocycle", "--samples", "10", "--out", str(a), "--quiet"])
    cli.main(["verify", "--filter", "actions.*", "--samples", "10", "--out", str(b), "--quiet"])
    first = a.read_text().splitlines()[0]
    assert first in b.read_text().splitlines()


def test_timing_adds_wall_time(tmp_path):
    out = tmp_path / "t.jsonl"
    cli.main(["verify", "--filter", "diffeo.span", "--samples", "5", "--timing", "--out", str(out), "--quiet"])
    assert "wall_time" in json.loads(out.read_text())


def test_l3_constant_curvature_entry(tmp_path):
    out = tmp_path / "l3.jsonl"
    code = cli.main(["verify", "--mu", "1", "--nu", "0.5", "--filter", "riemann.l3", "--out", str(out), "--quiet"])
    entry = json.loads(out.read_text())
    assert code == 0 and entry["status"] == "pass"


def test_failure_exit_code(tmp_path):
    code = cli.main(["verify", "--filter", "diffeo.span", "--samples", "5", "--tol", "diffeo.span=0",
                     "--out", str(tmp_path / "f.jsonl"), "--quiet"])
    assert code == 1


@pytest.mark.parametrize("args", [
    ["verify", "--filter", "nothing.*"],
    ["verify", "--tol", "nothing=1"],
    ["verify", "--tol", "diffeo.span"],
    ["verify", "--mu", "1"],
    ["verify", "--mu", "-1", "--nu", "1"],
    ["verify", "--all", "--filter", "diffeo.*"],
    ["verify", "--seed", "-3"],
    ["scan", "s7"],
    ["frobnicate"],
])
def test_usage_errors(args, capsys):
    assert cli.main(args) == 2


def test_unwritable_output():
    assert cli.main(["verify", "--filter", "diffeo.span", "--out", "/nonexistent/dir/r.jsonl", "--quiet"]) == 2


def test_list(capsys):
    assert cli.main(["list"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert any(line.startswith("riemann.l3\t") for line in lines)
    assert cli.main(["verify", "--list"]) == 0


def test_environment_overrides(tmp_path, monkeypatch):
    out = tmp_path / "env.jsonl"
    monkeypatch.setenv("GMSPHERE_SAMPLES", "7")
    monkeypatch.setenv("GMSPHERE_FILTER", "diffeo.span")
    monkeypatch.setenv("GMSPHERE_OUT", str(out))
    assert cli.main(["verify", "--quiet"]) == 0
    entry = json.loads(out.read_text())
    assert entry["check"] == "diffeo.span" and entry["samples"] == 14


def test_bad_environment_is_a_usage_error(monkeypatch):
    monkeypatch.setenv("GMSPHERE_SEED", "minus one")
    assert cli.main(["list"]) == 2


def _read_scan(path):
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# metric=")
    return lines[0], list(csv.DictReader(lines[1:]))


def test_scan_sigma2_endpoints(tmp_path):
    out = tmp_path / "s2.csv"
    assert cli.main(["scan", "sigma2", "--mu", "0.5", "--nu", "0.5", "--steps", "9", "--out", str(out)]) == 0
    header, rows = _read_scan(out)
    assert "mu_nu=(0.5,0.5)" in header and "steps=9" in header
    assert float(rows[0]["k_min"]) == pytest.approx(14.5, rel=1e-3)
    assert float(rows[-1]["k_min"]) == pytest.approx(-0.8, rel=1e-3)


def test_scan_sigma32_ratio(tmp_path):
    out = tmp_path / "s32.csv"
    assert cli.main(["scan", "sigma32", "--mu", "0.5", "--nu", "0.5", "--steps", "20", "--out", str(out)]) == 0
    _, rows = _read_scan(out)
    lo = min(float(r["k_min"]) for r in rows)
    hi = max(float(r["k_max"]) for r in rows)
    assert lo / hi == pytest.approx(1 / 145, rel=2e-2)


def test_scan_hemisphere_constant_at_mu_one(tmp_path):
    out = tmp_path / "h.csv"
    assert cli.main(["scan", "hemisphere", "--mu", "1", "--nu", "0.5", "--steps", "8", "--out", str(out)]) == 0
    _, rows = _read_scan(out)
    assert all(abs(float(r["k_min"]) - 1.0) < 1e-3 for r in rows)


def test_scan_is_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        cli.main(["scan", "l3", "--mu", "1", "--nu", "0.5", "--mu", "0.5", "--nu", "0.5", "--steps", "3",
                  "--out", str(path)])
    assert a.read_bytes() == b.read_bytes()
    _, rows = _read_scan(a)
    assert len(rows) == 6
