#!/usr/bin/env python3
"""Vehicle-count sweep over all mechanisms, then figure summaries.

Produces runs/<mech>-V<v>-seed<s>/ for every combination and aggregates
the metrics into runs/figures/.  Scale the episode sizes down with
--slots/--episodes/--epochs for a quick look.
"""

import argparse
from pathlib import Path

from iov_bazaar.config import MECHANISMS, ExperimentConfig
from iov_bazaar.experiment import run_experiment, summarize_figures


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("runs"))
    ap.add_argument("--vehicles", type=int, nargs="+",
                    default=[20, 30, 40, 50, 60, 70, 80])
    ap.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2, 3, 4])
    ap.add_argument("--mechanisms", nargs="+", default=list(MECHANISMS))
    ap.add_argument("--slots", type=int, default=100)
    ap.add_argument("--episodes", type=int, default=8)
    ap.add_argument("--epochs", type=int, default=50)
    args = ap.parse_args()

    for mech in args.mechanisms:
        for v in args.vehicles:
            for seed in args.seeds:
                cfg = ExperimentConfig(
                    num_vehicles=v, mechanism=mech,
                    slots_per_episode=args.slots,
                    episodes_per_epoch=args.episodes, epochs=args.epochs)
                name = f"{mech}-V{v}-seed{seed}"
                rows = run_experiment(cfg, seed, args.out / name)
                print(f"{name}: final reward {rows[-1].reward:.3f}")
    for path in summarize_figures(args.out):
        print(path)


if __name__ == "__main__":
    main()
