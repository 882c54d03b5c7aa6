"""Global regularity test: bootstrap size, power against a rough fOU regime, and the standardized null law."""
from __future__ import annotations

import time

from _common import emit, parser, table_summary
from volcp.distributions import ks_cdf
from volcp.montecarlo import ks_distance, run_study
from volcp.simulate import ConstantVol, PathScenario, preset


def main() -> None:
    p = parser(__doc__, reps=1000, seed=901)
    p.add_argument("--n", type=int, default=10_000)
    p.add_argument("--K", type=int, default=100)
    p.add_argument("--B", type=int, default=2000)
    p.add_argument("--alt-reps", type=int, default=500)
    args = p.parse_args()
    t0 = time.perf_counter()
    null = run_study("global", preset("global-null", n=args.n), args.reps, args.seed, K=args.K,
                     bootstrap_B=args.B, workers=args.workers)
    alt = run_study("global", preset("global-alt", n=args.n), args.alt_reps, args.seed + 1,
                    K=args.K, bootstrap_B=args.B, workers=args.workers)
    std = run_study("global-standardized", PathScenario(args.n, ConstantVol(1.0)), args.reps, args.seed + 2,
                    K=args.K, workers=args.workers)
    emit(args, {
        "null": table_summary(null),
        "alternative": table_summary(alt),
        "standardized_ks_distance": ks_distance(std.stats, ks_cdf),
    }, t0)


if __name__ == "__main__":
    main()
