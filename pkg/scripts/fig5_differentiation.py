"""Success-ratio curves for the window pairs and code splits of the differentiation experiments.

    python scripts/fig5_differentiation.py --seeds 200 --out-dir results/
"""
import argparse
from pathlib import Path

from prioranging.cli import format_run_csv
from prioranging.core import TABLE1
from prioranging.engine import run_replications

ap = argparse.ArgumentParser()
ap.add_argument("--seeds", type=int, default=200)
ap.add_argument("--jobs", type=int, default=1)
ap.add_argument("--out-dir", type=Path, default=Path("results"))
args = ap.parse_args()
args.out_dir.mkdir(parents=True, exist_ok=True)

base = TABLE1.replace(arrival_prob=1.0)
cases = {}
for hp, lp in [(128, 128), (64, 256), (32, 512)]:
    cases[f"fig5a_{hp}_{lp}"] = base.replace(alpha=0.5, rssw_start_hp=hp, rssw_start_lp=lp)
for beta in (4, None):
    for alpha in (0.25, 0.5, 0.75):
        cases[f"fig5b_beta{beta or 'inf'}_alpha{alpha}"] = base.replace(
            alpha=alpha, beta=beta, rssw_start_hp=16, rssw_start_lp=64)

for name, config in cases.items():
    reps = run_replications(config, args.seeds, jobs=args.jobs)
    (args.out_dir / f"{name}.csv").write_text(format_run_csv(reps, config))
    print(f"{name}: final hp={reps.hp_ratio_mean[-1]:.4f} lp={reps.lp_ratio_mean[-1]:.4f}")
