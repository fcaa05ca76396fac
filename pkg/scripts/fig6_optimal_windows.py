"""Full power-of-two window grid at 100 frames and the optimal pair per arrival probability.

    python scripts/fig6_optimal_windows.py --seeds 200 --tsrr 0.98 > fig6.csv
"""
import argparse
import sys

from prioranging.cli import format_sweep_csv
from prioranging.core import TABLE1
from prioranging.sweep import POW2_WINDOWS, find_optimal, sweep

ap = argparse.ArgumentParser()
ap.add_argument("--seeds", type=int, default=200)
ap.add_argument("--tsrr", type=float, default=0.98)
ap.add_argument("--alpha", type=float, default=0.25)
ap.add_argument("--jobs", type=int, default=1)
args = ap.parse_args()

rows = []
for pa in (0.1, 1.0):
    block = sweep(TABLE1.replace(n_frames=100), POW2_WINDOWS, POW2_WINDOWS, [args.alpha],
                  args.seeds, [pa], jobs=args.jobs)
    best = find_optimal(block, args.tsrr)
    pair = "none" if best is None else (f"({best.rssw_start_hp}, {best.rssw_start_lp}) "
                                        f"hp={best.hp_mean:.4f} lp={best.lp_mean:.4f}")
    print(f"p_a={pa}: optimal {pair}", file=sys.stderr)
    rows += block
sys.stdout.write(format_sweep_csv(rows))
