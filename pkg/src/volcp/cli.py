"""Command-line interface: ``volcp {test|estimate|simulate|montecarlo}``.

Exit codes: 0 when the command ran (the decision is in the report), 2 for
input or configuration errors, 3 for numerically degenerate data.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__
from .blockstats import BlockConfig, TruncationRule, default_block_length, default_truncation_constant
from .changepoint import detect_multiple
from .cusum import test_constant_vol
from .errors import ConfigError, DegenerateDataError, InputError
from .global_test import GlobalTestConfig, test_global
from .local_test import LocalTestConfig, test_vol_jump
from .montecarlo import MonteCarloTable, run_study
from .reports import report_from_dict
from .series import LogPriceSeries, read_csv, write_csv
from .simulate import PRESET_NAMES, preset, preset_block_length, simulate_ito

SCHEMA = 1
SEED_ENV = "VOLCP_SEED"
STATS = ("parametric", "local", "global", "global-standardized")
REPORT_COLUMNS = ("kind", "name", "raw_stat", "rescaled_stat", "critical_value", "decision", "level",
                  "critical_source", "p_value", "argmax_index", "k", "m", "truncation_u",
                  "details", "warnings")
MC_COLUMNS = ("section", "key", "empirical", "limit", "bootstrap")


# -- argument handling ------------------------------------------------------------

def _add_source(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="CSV with columns time and price or logprice")
    src.add_argument("--scenario", choices=PRESET_NAMES, help="simulate a preset path instead of reading data")
    p.add_argument("--n", type=int, help="increments for --scenario")


def _add_common(p: argparse.ArgumentParser, *, level: bool = True) -> None:
    p.add_argument("--seed", type=int, help=f"RNG seed (falls back to ${SEED_ENV})")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    if level:
        p.add_argument("--level", type=float, default=0.05)


def _add_truncation(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--trunc-c", type=float, help="truncation u_n = C sqrt(2 ln n / n)")
    g.add_argument("--trunc-u", type=float, help="explicit truncation level u_n")
    p.add_argument("--jumps", action="store_true",
                   help="the data contain price jumps; requires a truncation rule")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="volcp", description="Tests for changes in volatility.")
    parser.add_argument("--version", action="version", version=f"volcp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    t = sub.add_parser("test", help="run one test, or all of them with --all")
    _add_source(t)
    _add_common(t)
    _add_truncation(t)
    which = t.add_mutually_exclusive_group(required=True)
    which.add_argument("--stat", choices=STATS)
    which.add_argument("--all", action="store_true", help="parametric, truncated local and global tests")
    t.add_argument("--k", type=int, help="block length of the local test")
    t.add_argument("--K", type=int, help="spot-volatility window of the global test")
    t.add_argument("--bootstrap", type=int, metavar="B",
                   help="bootstrap replications (local: switch to wild-bootstrap critical values)")

    e = sub.add_parser("estimate", help="sequential detection of volatility jumps")
    _add_source(e)
    _add_common(e, level=False)
    _add_truncation(e)
    e.add_argument("--k", type=int, help="scan window")
    e.add_argument("--r", type=int, help="increments removed on each side of a detection (default 4k)")
    e.add_argument("--a", type=float, default=0.5, help="volatility regularity exponent")
    e.add_argument("--L", type=float, default=1.0, help="volatility Hölder constant")
    e.add_argument("--c-diamond", type=float, default=2.1, help="threshold constant (> 2)")

    s = sub.add_parser("simulate", help="simulate a preset scenario to CSV")
    s.add_argument("--scenario", choices=PRESET_NAMES, required=True)
    s.add_argument("--n", type=int)
    _add_common(s, level=False)

    m = sub.add_parser("montecarlo", help="size, power and null-law tables")
    m.add_argument("--scenario", choices=PRESET_NAMES, required=True)
    m.add_argument("--n", type=int)
    m.add_argument("--stat", choices=STATS, help="default: local, or global for global-* presets")
    m.add_argument("--reps", type=int, required=True)
    m.add_argument("--k", type=int)
    m.add_argument("--K", type=int)
    m.add_argument("--bootstrap", type=int, metavar="B")
    m.add_argument("--workers", type=int, help="worker processes (default: logical cores)")
    m.add_argument("--levels", default="0.01,0.05,0.1", help="comma-separated nominal levels")
    _add_common(m, level=False)
    _add_truncation(m)
    return parser


def resolve_seed(seed: int | None, required: bool) -> int | None:
    if seed is not None:
        return seed
    env = os.environ.get(SEED_ENV)
    if env is not None and env.strip():
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"{SEED_ENV}={env!r} is not an integer") from None
    if required:
        raise ConfigError(f"this command is stochastic: pass --seed or set {SEED_ENV}")
    return None


def _truncation(args) -> TruncationRule | None:
    if args.trunc_u is not None:
        return TruncationRule.explicit(args.trunc_u)
    if args.trunc_c is not None:
        return TruncationRule.scaled(args.trunc_c)
    if getattr(args, "jumps", False):
        raise ConfigError("--jumps needs a truncation rule: pass --trunc-c or --trunc-u")
    return None


def _load(args, seed: int | None) -> LogPriceSeries:
    if args.input is not None:
        if args.n is not None:
            raise ConfigError("--n applies to --scenario only")
        return read_csv(args.input)
    return simulate_ito(preset(args.scenario, n=args.n, seed=seed)).prices


def _block_length(args, n: int) -> int:
    if args.k is not None:
        return args.k
    return preset_block_length(n) if getattr(args, "scenario", None) else default_block_length(n)


# -- commands -----------------------------------------------------------------------

def cmd_test(args) -> tuple[list[dict], list[str]]:
    stochastic = args.scenario is not None or args.bootstrap is not None or args.all or args.stat == "global"
    seed = resolve_seed(args.seed, stochastic)
    args.seed = seed
    x = np.asarray(_load(args, seed).increments())
    n = x.size
    trunc = _truncation(args)
    warnings: list[str] = []
    stats = ("parametric", "local", "global") if args.all else (args.stat,)
    results = []
    for stat in stats:
        if stat == "parametric":
            results.append(test_constant_vol(x, args.level).to_dict())
        elif stat == "local":
            rule = trunc
            if args.all and rule is None:
                c = default_truncation_constant(x)
                rule = TruncationRule.scaled(c)
                warnings.append(f"no truncation given; using data-driven C={c:.6g}")
            source = "bootstrap" if args.bootstrap else "limit"
            cfg = LocalTestConfig(BlockConfig(_block_length(args, n), rule), level=args.level,
                                  critical_source=source, bootstrap_B=args.bootstrap or 1000)
            results.append(test_vol_jump(x, cfg, seed=seed).to_dict())
        else:
            mode = "standardized" if stat == "global-standardized" else "bootstrap"
            cfg = GlobalTestConfig(spot_window=args.K, bootstrap_B=args.bootstrap or 2000, mode=mode,
                                   level=args.level, seed=seed, truncation=trunc)
            results.append(test_global(x, cfg).to_dict())
    return results, warnings


def cmd_estimate(args) -> tuple[list[dict], list[str]]:
    seed = resolve_seed(args.seed, args.scenario is not None)
    args.seed = seed
    x = np.asarray(_load(args, seed).increments())
    k = _block_length(args, x.size)
    cfg = LocalTestConfig(BlockConfig(k, _truncation(args)), regularity_a=args.a,
                          lipschitz_L=args.L, c_diamond=args.c_diamond)
    res = detect_multiple(x, cfg, r=args.r)
    return [res.to_dict()], list(res.warnings)


def cmd_simulate(args) -> tuple[list[dict], list[str]]:
    args.seed = resolve_seed(args.seed, True)
    path = simulate_ito(preset(args.scenario, n=args.n, seed=args.seed))
    result = {
        "kind": "SimulatedPath",
        "n": path.prices.n,
        "true_change_points": list(path.true_change_points),
        "jumps": [list(j) for j in path.jumps],
    }
    args._series = (path.prices, {"vol": np.asarray(path.vol_path)})
    return [result], []


def _default_stat(scenario: str) -> str:
    return "global" if scenario.startswith("global") else "local"


def cmd_montecarlo(args) -> tuple[list[dict], list[str]]:
    args.seed = resolve_seed(args.seed, True)
    if args.reps < 1:
        raise ConfigError("--reps must be at least 1")
    stat = args.stat or _default_stat(args.scenario)
    args.stat = stat
    scenario = preset(args.scenario, n=args.n)
    try:
        levels = [float(v) for v in args.levels.split(",")]
    except ValueError:
        raise ConfigError(f"cannot parse --levels {args.levels!r}") from None
    if not all(0 < a < 1 for a in levels):
        raise ConfigError("levels must lie in (0, 1)")
    k = args.k if args.k is not None else preset_block_length(scenario.n)
    table = run_study(stat, scenario, args.reps, args.seed, k=k, truncation=_truncation(args),
                      bootstrap_B=args.bootstrap, K=args.K, levels=levels, workers=args.workers)
    args._table = table
    d = {"kind": "MonteCarloTable", "statistic": table.statistic, "scenario": table.scenario,
         "reps": table.reps, "rows": [list(r) for r in table.rows()]}
    return [d], []


COMMANDS = {"test": cmd_test, "estimate": cmd_estimate, "simulate": cmd_simulate,
            "montecarlo": cmd_montecarlo}


# -- serialization ------------------------------------------------------------------

def _config_echo(args) -> dict[str, Any]:
    return {k: v for k, v in sorted(vars(args).items()) if not k.startswith("_")}


def envelope(args, results: list[dict], warnings: list[str], seconds: float) -> dict[str, Any]:
    return {
        "schema": SCHEMA,
        "tool": "volcp",
        "version": __version__,
        "command": args.command,
        "config": _config_echo(args),
        "results": results,
        "timing": {"seconds": seconds},
        "warnings": warnings,
    }


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    return str(v)


def reports_to_csv(results: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPORT_COLUMNS)
    for r in results:
        w.writerow([_cell(r.get(c)) for c in REPORT_COLUMNS])
    return buf.getvalue()


_INT_FIELDS = {"argmax_index", "k", "m"}
_FLOAT_FIELDS = {"raw_stat", "rescaled_stat", "critical_value", "level", "p_value", "truncation_u"}


def reports_from_csv(text: str) -> list:
    """Parse :func:`reports_to_csv` output back into report objects."""
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        d: dict[str, Any] = {}
        for c, v in row.items():
            if c in ("details", "warnings"):
                d[c] = json.loads(v) if v else ({} if c == "details" else [])
            elif v == "":
                d[c] = None
            elif c == "decision":
                d[c] = v == "true"
            elif c in _INT_FIELDS:
                d[c] = int(v)
            elif c in _FLOAT_FIELDS:
                d[c] = float(v)
            else:
                d[c] = v
        if d["kind"] != "LocalTestReport":
            for c in ("k", "m", "truncation_u"):
                d.pop(c, None)
        out.append(report_from_dict(d))
    return out


def changepoints_to_csv(results: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("index", "theta_hat"))
    for r in results:
        for i, th in zip(r["indices"], r["theta_hats"]):
            w.writerow((i, repr(float(th))))
    return buf.getvalue()


def table_to_csv(table: MonteCarloTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(MC_COLUMNS)
    for row in table.rows():
        w.writerow([_cell(float(v)) if isinstance(v, (int, float)) and not isinstance(v, bool)
                    else _cell(v) for v in row])
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _render(args, results, warnings, seconds) -> None:
    if args.format == "json":
        _emit(json.dumps(envelope(args, results, warnings, seconds), indent=2) + "\n", args.out)
    elif args.command == "test":
        _emit(reports_to_csv(results), args.out)
    elif args.command == "estimate":
        _emit(changepoints_to_csv(results), args.out)
    elif args.command == "montecarlo":
        _emit(table_to_csv(args._table), args.out)
    if args.command == "simulate" and args.format == "csv":
        series, extra = args._series
        if args.out is None:
            raise ConfigError("simulate --format csv needs --out")
        write_csv(args.out, series, extra)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        results, warnings = COMMANDS[args.command](args)
        _render(args, results, warnings, time.perf_counter() - start)
    except (ConfigError, InputError, OSError) as exc:
        print(f"volcp: error: {exc}", file=sys.stderr)
        return 2
    except DegenerateDataError as exc:
        print(f"volcp: degenerate data: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
