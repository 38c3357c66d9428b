"""Sweep driver behavior and the command line surface."""

import csv
import io
import json
import subprocess
import sys

import pytest

from quadrec.arith import DomainError
from quadrec.sweeps import CHECK_DEFAULT_BOUNDS, SweepConfig, run_check, summarize


def run_cli(*args):
    return subprocess.run([sys.executable, "-m", "quadrec.cli", *args],
                          capture_output=True, text=True, timeout=300)


def test_config_validation():
    SweepConfig(checks=("scholz",), bound=2)
    with pytest.raises(DomainError):
        SweepConfig(checks=("scholz",), bound=1)
    with pytest.raises(DomainError):
        SweepConfig(checks=("scholz",), precision_start=32)
    with pytest.raises(DomainError):
        SweepConfig(checks=("nope",))
    with pytest.raises(DomainError):
        SweepConfig(checks=(), output_format="yaml")
    with pytest.raises(DomainError):
        SweepConfig(checks=(), samples=0)
    with pytest.raises(DomainError):
        SweepConfig(checks=(), jobs=0)


def test_default_bounds_cover_all_checks():
    assert set(CHECK_DEFAULT_BOUNDS) == {
        "scholz", "scholz2", "duality", "triangles", "thm-sq", "pos-norm",
        "lemma-e", "candm", "candp", "norm-sign", "kuroda"}


def test_scholz_sweep_counts():
    cfg = SweepConfig(checks=("scholz",), bound=100)
    records = run_check("scholz", cfg)
    assert len(records) == 56
    assert summarize(records) == {"pass": 56, "fail": 0, "undecided": 0}
    assert records[0].instance.startswith("eps_")
    # both orientations of the first defined pair appear
    names = [r.instance for r in records]
    assert "eps_2|17" in names and "eps_17|2" in names


def test_duality_sweep_is_seed_deterministic():
    cfg1 = SweepConfig(checks=("duality",), samples=30, seed=9)
    cfg2 = SweepConfig(checks=("duality",), samples=30, seed=9)
    assert run_check("duality", cfg1) == run_check("duality", cfg2)


def test_candm_sweep_has_both_outcomes():
    cfg = SweepConfig(checks=("candm",), bound=60)
    records = run_check("candm", cfg)
    outcomes = {r.predicted for r in records}
    assert outcomes == {"square", "nonsquare"}
    assert all(r.verdict == "pass" for r in records)


def test_parallel_matches_sequential():
    seq = run_check("scholz", SweepConfig(checks=("scholz",), bound=120))
    par = run_check("scholz", SweepConfig(checks=("scholz",), bound=120, jobs=2))
    assert seq == par


def test_unknown_check_rejected():
    cfg = SweepConfig(checks=("scholz",))
    with pytest.raises(DomainError):
        run_check("made-up", cfg)


# --- command line ------------------------------------------------------------

def test_cli_symbol():
    out = run_cli("symbol", "legendre", "5", "29")
    assert out.returncode == 0
    assert out.stdout.strip() == "(5|29) = +1"
    out = run_cli("symbol", "quartic", "5", "29")
    assert "(5|29)_4 = -1" in out.stdout
    out = run_cli("symbol", "unit", "13", "17")
    assert "(eps_13|17) = -1" in out.stdout


def test_cli_symbol_domain_error_is_exit_2():
    out = run_cli("symbol", "quartic", "3", "7")
    assert out.returncode == 2
    assert "error:" in out.stderr


def test_cli_usage_errors_are_exit_1():
    assert run_cli("bogus").returncode == 1
    assert run_cli("symbol", "legendre", "5").returncode == 1
    assert run_cli("verify", "--check", "nonsense").returncode == 1
    assert run_cli("verify", "--format", "xml").returncode == 1
    assert run_cli("invariant").returncode == 1
    assert run_cli("invariant", "five-29").returncode == 1


def test_cli_invariant():
    out = run_cli("invariant", "2-5", "5-13", "13-2")
    assert out.returncode == 0
    assert "value 0" in out.stdout and "triangle" in out.stdout
    out = run_cli("invariant", "2-5")
    assert out.returncode == 2
    assert "odd" in out.stderr
    out = run_cli("invariant", "2-5", "5-13", "13-2", "--show-graph")
    assert "2 5 N" in out.stdout


def test_cli_verify_csv_shape():
    out = run_cli("verify", "--check", "candm", "--format", "csv")
    assert out.returncode == 0
    lines = out.stdout.splitlines()
    assert lines[0].startswith("# quadrec verify ")
    body = [ln for ln in lines if not ln.startswith("#")]
    rows = list(csv.reader(io.StringIO("\n".join(body))))
    assert rows[0] == ["check", "instance", "predicted", "oracle", "verdict"]
    assert all(len(r) == 5 for r in rows[1:])
    assert lines[-1].startswith("# summary pass=")


def test_cli_verify_json_lines_round_trip():
    out = run_cli("verify", "--check", "candm", "--format", "json-lines")
    assert out.returncode == 0
    payloads = [json.loads(ln) for ln in out.stdout.splitlines()
                if not ln.startswith("#")]
    records = [p for p in payloads if "check" in p]
    summaries = [p for p in payloads if "summary" in p]
    assert len(records) == 9
    assert len(summaries) == 1
    assert summaries[0]["summary"]["fail"] == 0
    assert {r["verdict"] for r in records} == {"pass"}
    assert all(set(r) == {"check", "instance", "predicted", "oracle", "verdict"}
               for r in records)


def test_cli_verify_warm_cache_reruns_identically(tmp_path):
    cache = tmp_path / "units.txt"
    args = ("verify", "--check", "lemma-e", "--bound", "120",
            "--cache", str(cache), "--format", "csv")
    first = run_cli(*args)
    assert first.returncode == 0
    assert cache.exists()
    second = run_cli(*args)
    strip = lambda s: [ln for ln in s.splitlines() if not ln.startswith("# quadrec")]
    assert strip(first.stdout) == strip(second.stdout)


def test_cli_verify_human_summary_line():
    out = run_cli("verify", "--check", "duality", "--samples", "10")
    assert out.returncode == 0
    assert out.stdout.splitlines()[-1] == "10 instances: 10 pass, 0 fail, 0 undecided"


def test_cli_verify_jobs_smoke():
    out = run_cli("verify", "--check", "scholz", "--bound", "80", "--jobs", "2")
    assert out.returncode == 0
