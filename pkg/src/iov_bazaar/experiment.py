"""Experiment orchestration: seeded runs, metric CSVs, figure summaries.

A run writes ``runs/<name>/{config.json, metrics.csv, checkpoint.json,
figures/}``.  ``summarize_figures`` aggregates every metrics.csv found
under a directory into tidy per-figure CSVs (mean and std over seeds) plus
minimal hand-emitted SVG line charts.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import MECHANISMS, ExperimentConfig
from .marl.trainer import EpochMetrics, Trainer, evaluate

CSV_COLUMNS = ("mechanism", "V", "seed", "epoch", "reward",
               "social_welfare", "budget", "latency_s")


@dataclass(frozen=True)
class MetricsRow:
    mechanism: str
    V: int
    seed: int
    epoch: int
    reward: float
    social_welfare: float
    budget: float
    latency_s: float

    def as_csv(self) -> list[str]:
        return [self.mechanism, str(self.V), str(self.seed), str(self.epoch),
                repr(self.reward), repr(self.social_welfare),
                repr(self.budget), repr(self.latency_s)]


def rows_from_epochs(epochs: list[EpochMetrics], mechanism: str, v: int,
                     seed: int) -> list[MetricsRow]:
    return [MetricsRow(mechanism, v, seed, e.epoch, e.reward,
                       e.social_welfare, e.budget, e.latency) for e in epochs]


def write_metrics_csv(path: Path, rows: list[MetricsRow]) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(row.as_csv())
    path.write_text(buf.getvalue())


def read_metrics_csv(path: Path) -> list[MetricsRow]:
    rows = []
    with path.open() as fh:
        for rec in csv.DictReader(fh):
            rows.append(MetricsRow(
                rec["mechanism"], int(rec["V"]), int(rec["seed"]),
                int(rec["epoch"]), float(rec["reward"]),
                float(rec["social_welfare"]), float(rec["budget"]),
                float(rec["latency_s"])))
    return rows


def run_experiment(config: ExperimentConfig, seed: int,
                   run_dir: Path) -> list[MetricsRow]:
    """Train (madrl) or evaluate (baseline), writing the run directory."""
    run_dir.mkdir(parents=True, exist_ok=True)
    (run_dir / "figures").mkdir(exist_ok=True)
    (run_dir / "config.json").write_text(config.to_json())

    if config.mechanism == "madrl":
        trainer = Trainer(config, seed)
        epochs = trainer.train()
        checkpoint = trainer.checkpoint()
    else:
        epochs = evaluate(config, seed, config.mechanism)
        checkpoint = {"seed": seed, "mechanism": config.mechanism}
    (run_dir / "checkpoint.json").write_text(
        json.dumps(checkpoint, sort_keys=True))

    rows = rows_from_epochs(epochs, config.mechanism, config.num_vehicles, seed)
    write_metrics_csv(run_dir / "metrics.csv", rows)
    return rows


def collect_rows(metrics_dir: Path) -> list[MetricsRow]:
    rows: list[MetricsRow] = []
    for path in sorted(metrics_dir.rglob("metrics.csv")):
        rows.extend(read_metrics_csv(path))
    return rows


def _tail_mean(rows: list[MetricsRow], field: str) -> float:
    """Mean of the last quarter of a run's epochs (converged window)."""
    ordered = sorted(rows, key=lambda r: r.epoch)
    k = max(1, len(ordered) // 4)
    return float(np.mean([getattr(r, field) for r in ordered[-k:]]))


def _write_summary(path: Path, header: list[str],
                   records: list[list]) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(records)
    path.write_text(buf.getvalue())


def summarize_figures(metrics_dir: Path, out_dir: Path | None = None) -> list[Path]:
    """Emit fig4..fig8 CSV summaries (and SVGs) from collected metrics."""
    rows = collect_rows(metrics_dir)
    out = out_dir if out_dir is not None else metrics_dir / "figures"
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    present = {r.mechanism for r in rows}
    for mech in MECHANISMS:
        if mech not in present:
            print(f"warning: no metrics for mechanism '{mech}'; "
                  "figure summaries will be partial", file=sys.stderr)

    # fig4: training convergence curve, one row per epoch (madrl only)
    madrl = [r for r in rows if r.mechanism == "madrl"]
    if madrl:
        by_epoch: dict[int, list[float]] = defaultdict(list)
        for r in madrl:
            by_epoch[r.epoch].append(r.reward)
        records = [[e, float(np.mean(v)), float(np.std(v))]
                   for e, v in sorted(by_epoch.items())]
        path = out / "fig4_convergence.csv"
        _write_summary(path, ["epoch", "reward_mean", "reward_std"], records)
        written.append(path)
        written.append(_svg_lines(
            out / "fig4_convergence.svg", "reward vs epoch",
            {"madrl": [(r[0], r[1]) for r in records]}))

    # fig5-8: converged metric vs vehicle count, per mechanism
    metric_figs = [("fig5_social_welfare", "social_welfare"),
                   ("fig6_reward", "reward"),
                   ("fig7_budget", "budget"),
                   ("fig8_latency", "latency_s")]
    for name, field in metric_figs:
        groups: dict[tuple[str, int], dict[int, list[MetricsRow]]] = defaultdict(
            lambda: defaultdict(list))
        for r in rows:
            groups[(r.mechanism, r.V)][r.seed].append(r)
        records = []
        curves: dict[str, list[tuple[float, float]]] = defaultdict(list)
        for (mech, v), by_seed in sorted(groups.items()):
            per_seed = [_tail_mean(seed_rows, field)
                        for _, seed_rows in sorted(by_seed.items())]
            mean, std = float(np.mean(per_seed)), float(np.std(per_seed))
            records.append([mech, v, mean, std])
            curves[mech].append((v, mean))
        if records:
            path = out / f"{name}.csv"
            _write_summary(path, ["mechanism", "V", f"{field}_mean",
                                  f"{field}_std"], records)
            written.append(path)
            written.append(_svg_lines(out / f"{name}.svg",
                                      f"{field} vs V", curves))
    return written


_SVG_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")


def _svg_lines(path: Path, title: str,
               curves: dict[str, list[tuple[float, float]]]) -> Path:
    """Minimal SVG line chart; no plotting dependency."""
    width, height, pad = 640, 400, 50
    pts = [p for c in curves.values() for p in c]
    xs = [p[0] for p in pts] or [0.0, 1.0]
    ys = [p[1] for p in pts] or [0.0, 1.0]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0

    def sx(x: float) -> float:
        return pad + (x - x0) / (x1 - x0) * (width - 2 * pad)

    def sy(y: float) -> float:
        return height - pad - (y - y0) / (y1 - y0) * (height - 2 * pad)

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
             f'height="{height}" viewBox="0 0 {width} {height}">',
             f'<text x="{width // 2}" y="20" text-anchor="middle" '
             f'font-family="sans-serif" font-size="14">{title}</text>',
             f'<rect x="{pad}" y="{pad}" width="{width - 2 * pad}" '
             f'height="{height - 2 * pad}" fill="none" stroke="#333"/>']
    for i, (label, series) in enumerate(sorted(curves.items())):
        color = _SVG_COLORS[i % len(_SVG_COLORS)]
        coords = " ".join(f"{sx(x):.1f},{sy(y):.1f}" for x, y in sorted(series))
        parts.append(f'<polyline points="{coords}" fill="none" '
                     f'stroke="{color}" stroke-width="1.5"/>')
        parts.append(f'<text x="{pad + 6}" y="{pad + 16 + 14 * i}" fill="{color}" '
                     f'font-family="sans-serif" font-size="12">{label}</text>')
    parts.append(f'<text x="{pad}" y="{height - pad + 16}" font-family="sans-serif" '
                 f'font-size="11">[{x0:g}, {x1:g}]</text>')
    parts.append(f'<text x="4" y="{pad}" font-family="sans-serif" '
                 f'font-size="11">[{y0:g}, {y1:g}]</text>')
    parts.append("</svg>")
    path.write_text("\n".join(parts))
    return path
