"""Order-recovery experiment for the model search.

Simulates five integrated series whose differences follow a known VAR(2)
with signed long-run effects on the target, then sweeps 23 nested sample
windows, orders 1..3, and all three restriction rules (207 combinations).
The sweep should settle on order 2 and report a reason for every rejection.
"""

import argparse
import collections
import datetime as dt
import time
from pathlib import Path

import numpy as np

from gridgap.frames import TimeSeriesFrame
from gridgap.search import ScoringConfig, SearchSpace, run_search, search_log_csv

NAMES = ("load", "stayhome", "onsite", "retail", "price")

A1 = np.array(
    [
        [0.25, 0.30, -0.15, 0.00, 0.15],
        [0.00, 0.30, 0.15, 0.00, 0.00],
        [0.00, 0.10, 0.25, 0.15, 0.00],
        [0.00, 0.00, 0.20, 0.30, 0.10],
        [0.00, 0.15, 0.00, 0.10, 0.30],
    ]
)
A2 = np.array(
    [
        [0.20, -0.25, -0.10, 0.15, 0.00],
        [0.00, 0.25, -0.20, 0.10, 0.00],
        [0.00, -0.15, 0.20, 0.00, 0.10],
        [0.00, 0.00, -0.15, 0.20, 0.00],
        [0.00, 0.10, 0.00, -0.15, 0.20],
    ]
)
INTERCEPT = np.array([0.05, 0.02, -0.03, 0.04, 0.00])
SIGMA = np.array(
    [
        [1.00, 0.20, 0.10, 0.00, 0.00],
        [0.20, 0.80, 0.15, 0.00, 0.00],
        [0.10, 0.15, 0.90, 0.10, 0.00],
        [0.00, 0.00, 0.10, 0.70, 0.05],
        [0.00, 0.00, 0.00, 0.05, 0.60],
    ]
)
# long-run cumulative effect signs of each driver on the target
SIGNS = {"stayhome": 1, "onsite": -1, "retail": 1, "price": 1}


def integrated_levels(seed: int, steps: int) -> TimeSeriesFrame:
    rng = np.random.default_rng(seed)
    chol = np.linalg.cholesky(SIGMA)
    burn = 200
    x = np.zeros((steps + burn, 5))
    for t in range(2, steps + burn):
        x[t] = INTERCEPT + A1 @ x[t - 1] + A2 @ x[t - 2] + chol @ rng.standard_normal(5)
    levels = np.cumsum(x[burn:], axis=0) + np.array([1000.0, 50.0, 30.0, 40.0, 20.0])
    start = dt.date(2019, 1, 1)
    dates = tuple(start + dt.timedelta(days=i) for i in range(steps))
    return TimeSeriesFrame(dates, NAMES, levels)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=16)
    parser.add_argument("--steps", type=int, default=560)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--log", help="optional path for the full sweep log CSV")
    args = parser.parse_args()

    frame = integrated_levels(args.seed, args.steps)
    end = frame.dates[-1]
    windows = tuple((frame.dates[0] + dt.timedelta(days=10 * k), end) for k in range(23))
    space = SearchSpace((NAMES,), windows, orders=(1, 2, 3), rules=(1, 2, 3))
    scoring = ScoringConfig(required_signs=SIGNS)
    print(f"sweeping {space.size()} combinations (seed {args.seed}, {args.steps} days)")

    start = time.perf_counter()
    result = run_search(frame, space, scoring, jobs=args.jobs)
    elapsed = time.perf_counter() - start

    chosen = result.chosen
    print(
        f"chosen: window {chosen.date_range[0]}..{chosen.date_range[1]}"
        f" order={chosen.order} rule={chosen.rule}"
        f" bic={chosen.stats['bic']:.4f} explainable={chosen.stats['explainable_rate']:.1f}%"
    )
    print(f"elapsed {elapsed:.1f}s")

    reasons = collections.Counter(
        r.status.split(":")[1] for r in result.records if r.status != "ok"
    )
    admissible = sum(1 for r in result.records if r.status == "ok")
    print(f"admissible: {admissible}")
    for reason, count in reasons.most_common():
        print(f"  failed:{reason:<14} {count}")

    print("top of the ranking (bic, aic):")
    for record in result.ranked()[:5]:
        if record.status != "ok":
            break
        print(
            f"  #{record.index:<4} order={record.order} rule={record.rule}"
            f" start={record.date_range[0]} bic={record.stats['bic']:.4f}"
        )

    if args.log:
        Path(args.log).write_text(search_log_csv(result))
        print(f"full log written to {args.log}")


if __name__ == "__main__":
    main()
