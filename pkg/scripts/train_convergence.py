#!/usr/bin/env python3
"""Training-convergence experiment: MAPPO reward curve versus epochs.

Trains the madrl mechanism at a fixed vehicle count over several seeds
and prints a per-epoch mean reward table alongside a random baseline.
"""

import argparse
from pathlib import Path

import numpy as np

from iov_bazaar.config import ExperimentConfig
from iov_bazaar.experiment import run_experiment, summarize_figures


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("runs"))
    ap.add_argument("--vehicles", type=int, default=40)
    ap.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2, 3, 4])
    ap.add_argument("--epochs", type=int, default=300)
    ap.add_argument("--slots", type=int, default=20)
    ap.add_argument("--episodes", type=int, default=2)
    args = ap.parse_args()

    curves = []
    for mech in ("madrl", "random"):
        for seed in args.seeds:
            cfg = ExperimentConfig(
                num_vehicles=args.vehicles, mechanism=mech,
                slots_per_episode=args.slots,
                episodes_per_epoch=args.episodes, epochs=args.epochs)
            name = f"{mech}-V{args.vehicles}-seed{seed}"
            rows = run_experiment(cfg, seed, args.out / name)
            if mech == "madrl":
                curves.append([r.reward for r in rows])
            print(f"{name}: final reward {rows[-1].reward:.3f}")

    mean_curve = np.mean(curves, axis=0)
    stride = max(1, len(mean_curve) // 20)
    print("\nepoch  mean_reward")
    for e in range(0, len(mean_curve), stride):
        print(f"{e:5d}  {mean_curve[e]:.4f}")
    for path in summarize_figures(args.out):
        print(path)


if __name__ == "__main__":
    main()
