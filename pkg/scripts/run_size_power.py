"""Wild-bootstrap size and power of the truncated local test over a grid of jump sizes."""
from __future__ import annotations

import time

from _common import emit, parser, table_summary
from volcp.blockstats import TruncationRule
from volcp.montecarlo import run_study
from volcp.simulate import preset


def main() -> None:
    p = parser(__doc__, reps=1000, seed=601)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--k", type=int, default=275)
    p.add_argument("--B", type=int, default=1000, help="bootstrap draws per replication")
    p.add_argument("--jumps", type=float, nargs="+", default=[0.1, 0.2, 0.4])
    p.add_argument("--trunc-c", type=float, default=1.0)
    args = p.parse_args()
    t0 = time.perf_counter()
    kw = dict(k=args.k, truncation=TruncationRule.scaled(args.trunc_c), bootstrap_B=args.B,
              workers=args.workers)
    rows = {"null": table_summary(run_study("local", preset("sv-null", n=args.n), args.reps, args.seed, **kw))}
    for j, delta in enumerate(args.jumps):
        sc = preset("sv-jump", n=args.n, vol_jump_size=delta)
        rows[f"jump={delta}"] = table_summary(run_study("local", sc, args.reps, args.seed + 1 + j, **kw))
    emit(args, {"tables": rows}, t0)


if __name__ == "__main__":
    main()
