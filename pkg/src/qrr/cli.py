"""Command-line driver: ``qrr list | verify | suite | dilog``.

Exit codes: 0 success, 1 mismatch, 2 usage or config error, 3 internal
consistency error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Sequence

from . import dilog
from .errors import ConsistencyError, ParameterError, QSeriesError
from .registry import cross_entry_checks, list_identities, make_instance, verify

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_CONSISTENCY = 0, 1, 2, 3
SCHEMA = 1


class ConfigError(Exception):
    pass


def _parse_params(pairs: Sequence[str]) -> dict:
    out = {}
    for item in pairs or ():
        key, sep, val = item.partition("=")
        if not sep or not key:
            raise ConfigError(f"--param expects key=value, got {item!r}")
        out[key.strip()] = val.strip()
    return out


def _write_json(path: Optional[str], payload) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    if path in (None, "-"):
        print(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def _report_exit(reports: list[dict], fail_on_conjecture: bool) -> int:
    code = EXIT_OK
    for r in reports:
        if r["status"] == "error":
            if r.get("error_type") == "ParameterError":
                code = max(code, EXIT_USAGE)
            else:
                code = max(code, EXIT_CONSISTENCY)
        elif r["status"] == "fail" and (r.get("kind") != "conjecture" or fail_on_conjecture):
            code = max(code, EXIT_MISMATCH)
    return code


def _verify_entry(job: tuple) -> dict:
    ident, params, order = job
    rep = verify(make_instance(ident, params), order)
    out = rep.to_dict()
    out["error_type"] = rep.error_type
    return out


# -- dilogarithm grid -----------------------------------------------------------


def dilog_report(max_K: int = 8, max_N: int = 8, max_k: int = 6, tba_max_N: int = 6, tba_max_k: int = 6) -> dict:
    """All numeric dilogarithm checks with their worst errors."""
    kir = max(abs(a - b) for K in range(2, max_K + 1) for N in range(2, max_N + 1) for a, b in [dilog.kirillov_check(K, N)])
    even = max(abs(a - b) for k in range(2, max_k + 1) for N in range(2, max_N + 1) for a, b in [dilog.kirillov_even_check(k, N)])
    tba_err, tba_sum, failures = 0.0, 0.0, []
    for N in range(2, tba_max_N + 1):
        for k in range(2, tba_max_k + 1):
            try:
                sol = dilog.tba_solve(N, k)
            except dilog.ConvergenceError as exc:
                failures.append(str(exc))
                continue
            ref = dilog.closed_form(N, k)
            tba_err = max(tba_err, max(abs(x - y) for r1, r2 in zip(sol.values, ref) for x, y in zip(r1, r2)))
            tba_sum = max(tba_sum, abs(sol.dilog_sum() - N * (N - 1) * (k - 1) / (2 * k + N - 1)))
    grid = [i / 100 for i in range(1, 100)]
    refl = max(abs(dilog.rogers_L(x) + dilog.rogers_L(1 - x) - dilog.L1) for x in grid)
    at_one = abs(dilog.rogers_L(1.0) - math.pi ** 2 / 6)
    checks = {
        "level_sum": {"max_error": kir, "tolerance": 1e-10},
        "even_level_half_sum": {"max_error": even, "tolerance": 1e-10},
        "fixed_point_vs_closed_form": {"max_error": tba_err, "tolerance": 1e-12, "failures": failures},
        "fixed_point_dilog_sum": {"max_error": tba_sum, "tolerance": 1e-10},
        "reflection": {"max_error": refl, "tolerance": 1e-12},
        "value_at_one": {"max_error": at_one, "tolerance": 1e-12},
    }
    for c in checks.values():
        c["ok"] = c["max_error"] < c["tolerance"] and not c.get("failures")
    return {
        "id": "dilog-grid",
        "params": {"max_K": max_K, "max_N": max_N, "max_k": max_k, "tba_max_N": tba_max_N, "tba_max_k": tba_max_k},
        "checks": checks,
        "status": "pass" if all(c["ok"] for c in checks.values()) else "fail",
    }


# -- subcommands ----------------------------------------------------------------


def _cmd_list(args) -> int:
    for e in list_identities():
        params = ", ".join(f"{k}={v!r}" for k, v in e.defaults.items()) or "-"
        print(f"{e.id:26s} {e.kind:11s} order={e.default_order:<4d} params: {params}  # {e.title}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    inst = make_instance(args.id, _parse_params(args.param))
    rep = verify(inst, args.order)
    data = rep.to_dict()
    data["error_type"] = rep.error_type
    if args.json:
        _write_json(args.json, data)
    print(f"{rep.id} {rep.params}: {rep.summary} [{rep.wall_time_ms:.0f} ms]")
    for note in rep.convention_notes:
        print(f"  note: {note}")
    return _report_exit([data], args.fail_on_conjecture)


def _int_block(cfg: dict, name: str, keys: set):
    block = cfg.get(name)
    if block is None:
        return None
    if not isinstance(block, dict) or not set(block) <= keys:
        raise ConfigError(f"{name} must be an object with keys from {sorted(keys)}")
    if not all(isinstance(v, int) and v >= 1 for v in block.values()):
        raise ConfigError(f"{name} values must be positive integers")
    return block


def _threads(default: int) -> int:
    raw = os.environ.get("QRR_THREADS")
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"QRR_THREADS must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise ConfigError(f"QRR_THREADS must be a positive integer, got {raw!r}")
    return value


def load_config(path: str) -> dict:
    """Read and fully validate a suite config; nothing is computed here."""
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not isinstance(cfg, dict) or cfg.get("schema") != SCHEMA:
        raise ConfigError(f"config must be an object with \"schema\": {SCHEMA}")
    entries = cfg.get("entries")
    if not isinstance(entries, list):
        raise ConfigError("config needs an \"entries\" list")
    jobs = []
    for i, e in enumerate(entries):
        if not isinstance(e, dict) or "id" not in e:
            raise ConfigError(f"entry {i} needs an \"id\"")
        extra = set(e) - {"id", "params", "order"}
        if extra:
            raise ConfigError(f"entry {i}: unknown field(s) {sorted(extra)}")
        params = e.get("params", {})
        if not isinstance(params, dict):
            raise ConfigError(f"entry {i}: params must be an object")
        order = e.get("order")
        if order is not None and (not isinstance(order, int) or order < 0):
            raise ConfigError(f"entry {i}: order must be a nonnegative integer")
        make_instance(e["id"], params)  # raises ParameterError on bad ids/params
        jobs.append((e["id"], params, order))
    par = cfg.get("parallelism", 1)
    if not isinstance(par, int) or par < 1:
        raise ConfigError("parallelism must be a positive integer")
    fail_conj = cfg.get("fail_on_conjecture", False)
    if not isinstance(fail_conj, bool):
        raise ConfigError("fail_on_conjecture must be a boolean")
    dil = _int_block(cfg, "dilog", {"max_K", "max_N", "max_k", "tba_max_N", "tba_max_k"})
    cross = _int_block(cfg, "cross_checks", {"order"})
    return {
        "jobs": jobs,
        "parallelism": par,
        "output_path": cfg.get("output_path"),
        "fail_on_conjecture": fail_conj,
        "dilog": dil,
        "cross_checks": cross,
    }


def run_suite(cfg: dict) -> tuple[list[dict], int]:
    par = _threads(cfg["parallelism"])
    jobs = cfg["jobs"]
    if par > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=par) as pool:
            reports = list(pool.map(_verify_entry, jobs))  # map keeps entry order
    else:
        reports = [_verify_entry(j) for j in jobs]
    code = _report_exit(reports, cfg["fail_on_conjecture"])
    if cfg["cross_checks"] is not None:
        rows = cross_entry_checks(**cfg["cross_checks"])
        ok = all(r[1] for r in rows)
        reports.append(
            {
                "id": "cross-entry",
                "params": dict(cfg["cross_checks"]),
                "status": "pass" if ok else "fail",
                "checks": [{"check": d, "ok": good, "detail": det} for d, good, det in rows],
            }
        )
        if not ok:
            code = max(code, EXIT_MISMATCH)
    if cfg["dilog"] is not None:
        rep = dilog_report(**cfg["dilog"])
        reports.append(rep)
        if rep["status"] != "pass":
            code = max(code, EXIT_MISMATCH)
    return reports, code


def _cmd_suite(args) -> int:
    cfg = load_config(args.config)
    if args.fail_on_conjecture:
        cfg["fail_on_conjecture"] = True
    reports, code = run_suite(cfg)
    for r in reports:
        print(f"{r['id']} {r.get('params', {})}: {r.get('summary', r['status'])}")
    out = args.output or cfg["output_path"]
    _write_json(out if out else "-", reports)
    return code


def _cmd_dilog(args) -> int:
    rep = dilog_report(args.max_K, args.max_N, args.max_k, args.tba_max_N, args.tba_max_k)
    for name, c in rep["checks"].items():
        print(f"{name:28s} max error {c['max_error']:.3e}  {'ok' if c['ok'] else 'FAIL'}")
    if args.json:
        _write_json(args.json, rep)
    return EXIT_OK if rep["status"] == "pass" else EXIT_MISMATCH


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qrr", description="Exact verification of q-series identities.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("list", help="list registered identities")

    v = sub.add_parser("verify", help="verify one identity")
    v.add_argument("--id", required=True)
    v.add_argument("--param", action="append", default=[], metavar="KEY=VAL")
    v.add_argument("--order", type=int, default=None)
    v.add_argument("--json", metavar="PATH", help="write the report here ('-' for stdout)")
    v.add_argument("--fail-on-conjecture", action="store_true")

    s = sub.add_parser("suite", help="run a JSON suite config")
    s.add_argument("--config", required=True)
    s.add_argument("--output", metavar="PATH", help="overrides output_path from the config")
    s.add_argument("--fail-on-conjecture", action="store_true")

    d = sub.add_parser("dilog", help="dilogarithm grid checks")
    d.add_argument("--max-K", dest="max_K", type=int, default=8)
    d.add_argument("--max-N", dest="max_N", type=int, default=8)
    d.add_argument("--max-k", dest="max_k", type=int, default=6)
    d.add_argument("--tba-max-N", dest="tba_max_N", type=int, default=6)
    d.add_argument("--tba-max-k", dest="tba_max_k", type=int, default=6)
    d.add_argument("--json", metavar="PATH")
    return p


_COMMANDS = {"list": _cmd_list, "verify": _cmd_verify, "suite": _cmd_suite, "dilog": _cmd_dilog}


def run(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, ParameterError) as exc:
        print(f"qrr: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConsistencyError as exc:
        print(f"qrr: internal consistency error: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except QSeriesError as exc:
        print(f"qrr: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY


def main() -> None:
    sys.exit(run())
