import json
import subprocess
import sys

import pytest

from qrr.cli import EXIT_CONSISTENCY, EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, load_config, run, run_suite


def write_cfg(tmp_path, **kw):
    cfg = {"schema": 1, "entries": [], "parallelism": 1}
    cfg.update(kw)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    return str(path)


def test_list(capsys):
    assert run(["list"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "rr-1" in out and "a2n-1-sum" in out


def test_verify_ok(capsys):
    assert run(["verify", "--id", "rr-1", "--order", "50"]) == EXIT_OK
    assert "rr-1 {}: pass" in capsys.readouterr().out


def test_verify_json(tmp_path):
    path = tmp_path / "r.json"
    assert run(["verify", "--id", "bressoud", "--param", "k=2", "--param", "p=1", "--order", "30", "--json", str(path)]) == 0
    data = json.loads(path.read_text())
    assert data["status"] == "pass" and data["params"] == {"k": 2, "p": 1}


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--id", "no-such-id"],
        ["verify", "--id", "rr-1", "--param", "n=2"],
        ["verify", "--id", "rr-1", "--param", "garbage"],
        ["verify", "--id", "a2n-1-sum-k2", "--param", "p=7"],
        ["verify"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors(argv, capsys):
    assert run(argv) == EXIT_USAGE
    assert capsys.readouterr().err


def test_dilog_command(tmp_path, capsys):
    path = tmp_path / "d.json"
    assert run(["dilog", "--max-K", "5", "--max-N", "5", "--json", str(path)]) == EXIT_OK
    data = json.loads(path.read_text())
    assert data["status"] == "pass"
    assert set(data["checks"]) >= {"level_sum", "even_level_half_sum", "fixed_point_vs_closed_form", "reflection"}


def test_config_validation_happens_first(tmp_path):
    bad = write_cfg(tmp_path, entries=[{"id": "rr-1", "order": 10}, {"id": "nope"}])
    assert run(["suite", "--config", bad]) == EXIT_USAGE
    with pytest.raises(Exception):
        load_config(write_cfg(tmp_path, schema=2))
    assert run(["suite", "--config", write_cfg(tmp_path, parallelism=0)]) == EXIT_USAGE
    assert run(["suite", "--config", write_cfg(tmp_path, entries=[{"id": "rr-1", "ordr": 3}])]) == EXIT_USAGE
    assert run(["suite", "--config", str(tmp_path / "missing.json")]) == EXIT_USAGE


ENTRIES = [
    {"id": "rr-1", "order": 40},
    {"id": "andrews-gordon", "params": {"k": 3, "p": 1}, "order": 30},
    {"id": "a2n-sum-p1", "params": {"n": 1, "k": 3}, "order": 15},
    {"id": "milne-specialized", "params": {"n": 1, "sigma": "1/3"}, "order": 6},
]


def _strip(reports):
    return [{k: v for k, v in r.items() if k != "wall_time_ms"} for r in reports]


def test_suite_parallelism_does_not_change_results(tmp_path, monkeypatch):
    serial, code1 = run_suite(load_config(write_cfg(tmp_path, entries=ENTRIES, parallelism=1)))
    monkeypatch.setenv("QRR_THREADS", "3")
    parallel, code2 = run_suite(load_config(write_cfg(tmp_path, entries=ENTRIES, parallelism=1)))
    assert code1 == code2 == EXIT_OK
    assert _strip(serial) == _strip(parallel)
    assert [r["id"] for r in parallel] == [e["id"] for e in ENTRIES]


def test_suite_writes_report(tmp_path):
    out = tmp_path / "out.json"
    cfg = write_cfg(tmp_path, entries=ENTRIES[:2], output_path=str(out), cross_checks={"order": 10})
    assert run(["suite", "--config", cfg]) == EXIT_OK
    data = json.loads(out.read_text())
    assert [r["id"] for r in data] == ["rr-1", "andrews-gordon", "cross-entry"]


def test_exit_codes_from_reports():
    from qrr.cli import _report_exit

    ok = {"status": "pass", "kind": "theorem"}
    fail = {"status": "fail", "kind": "theorem"}
    conj_fail = {"status": "fail", "kind": "conjecture"}
    broken = {"status": "error", "kind": "theorem", "error_type": "IntegralityError"}
    assert _report_exit([ok], False) == EXIT_OK
    assert _report_exit([ok, fail], False) == EXIT_MISMATCH
    assert _report_exit([conj_fail], False) == EXIT_OK
    assert _report_exit([conj_fail], True) == EXIT_MISMATCH
    assert _report_exit([fail, broken], False) == EXIT_CONSISTENCY


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qrr", "verify", "--id", "no-such-id"], capture_output=True, text=True)
    assert proc.returncode == EXIT_USAGE
    assert "unknown identity" in proc.stderr


def test_bad_thread_override(tmp_path, monkeypatch):
    monkeypatch.setenv("QRR_THREADS", "many")
    assert run(["suite", "--config", write_cfg(tmp_path, entries=ENTRIES[:1])]) == EXIT_USAGE


def test_bad_dilog_block(tmp_path):
    assert run(["suite", "--config", write_cfg(tmp_path, dilog={"max_Q": 3})]) == EXIT_USAGE
