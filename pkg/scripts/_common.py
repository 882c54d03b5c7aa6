"""Shared argument handling and output for the experiment scripts."""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import time


def parser(description: str, reps: int, seed: int) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(description=description)
    p.add_argument("--reps", type=int, default=reps, help="Monte Carlo replications per scenario")
    p.add_argument("--seed", type=int, default=seed, help="master seed")
    p.add_argument("--workers", type=int, default=1, help="worker processes (results do not depend on it)")
    p.add_argument("--out", help="write the JSON summary here instead of stdout")
    return p


def emit(args, payload: dict, started: float) -> None:
    payload = {"seed": args.seed, "reps": args.reps, "seconds": round(time.perf_counter() - started, 2), **payload}
    text = json.dumps(payload, indent=2, default=_default)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def table_summary(table) -> dict:
    d = dataclasses.asdict(table)
    d.pop("stats")
    d.pop("ecdf")
    return d


def _default(obj):
    if hasattr(obj, "tolist"):
        return obj.tolist()
    raise TypeError(type(obj).__name__)
