"""Mean cumulative arrivals per frame against U*(1-(1-p_a)^i), one column pair per p_a.

    python scripts/fig4_arrivals.py --seeds 1000 > fig4.csv
"""
import argparse

import numpy as np

from prioranging.arrival import expected_cumulative, simulate_cumulative
from prioranging.engine import replication_seed

ap = argparse.ArgumentParser()
ap.add_argument("--stations", type=int, default=200)
ap.add_argument("--frames", type=int, default=100)
ap.add_argument("--seeds", type=int, default=1000)
ap.add_argument("--seed", type=int, default=0)
args = ap.parse_args()

probs = np.round(np.arange(0.1, 1.01, 0.1), 1)
frames = np.arange(1, args.frames + 1)
cols = {}
for pa in probs:
    runs = np.stack([simulate_cumulative(args.stations, pa, args.frames,
                                         np.random.default_rng(replication_seed(args.seed, i)))
                     for i in range(args.seeds)])
    cols[f"mean_{pa}"] = runs.mean(axis=0)
    cols[f"expected_{pa}"] = expected_cumulative(args.stations, pa, frames)

print(",".join(["frame", *cols]))
for k, f in enumerate(frames):
    print(",".join([str(f)] + [f"{v[k]:.6f}" for v in cols.values()]))
