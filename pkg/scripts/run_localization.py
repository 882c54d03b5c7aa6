"""Accuracy of the single change-point estimator across sample sizes."""
from __future__ import annotations

import math
import time

import numpy as np

from _common import emit, parser
from volcp.blockstats import TruncationRule
from volcp.changepoint import estimate_single
from volcp.simulate import derive_seed, preset, simulate_ito


def errors(n: int, k: int, reps: int, seed: int, truncation) -> np.ndarray:
    out = np.empty(reps)
    for r in range(reps):
        scenario = preset("sv-jump", n=n).with_seed(derive_seed(seed, r))
        x = np.diff(simulate_ito(scenario).prices.values)
        out[r] = abs(estimate_single(x, k, truncation)[0] - scenario.vol_jump.time)
    return out


def main() -> None:
    p = parser(__doc__, reps=500, seed=700)
    p.add_argument("--sizes", type=int, nargs="+", default=[5_000, 10_000, 20_000])
    p.add_argument("--k-ref", type=int, default=500, help="window at n=10^4; scaled by sqrt(n/10^4)")
    p.add_argument("--trunc-c", type=float, default=1.0)
    args = p.parse_args()
    t0 = time.perf_counter()
    rows = {}
    for n in args.sizes:
        k = int(round(args.k_ref * math.sqrt(n / 10_000)))
        e = errors(n, k, args.reps, args.seed + n, TruncationRule.scaled(args.trunc_c))
        rows[n] = {"k": k, "median": float(np.median(e)), "mean": float(e.mean()),
                   "q90": float(np.quantile(e, 0.9)), "within_k_over_n": float(np.mean(e <= k / n))}
    emit(args, {"by_n": rows}, t0)


if __name__ == "__main__":
    main()
