"""Dot plots of power.csv: one panel per scenario, statistics down the y axis."""
from __future__ import annotations

import csv
from collections import OrderedDict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

_MARKERS = ["o", "^", "s", "D", "v", "P", "X"]
_COLORS = ["tab:red", "tab:green", "tab:blue", "tab:purple", "tab:orange", "tab:brown", "tab:gray"]


def read_power_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def plot_power_csv(csv_path, out_dir=None, alpha: float = 0.05) -> list[Path]:
    """Write ``power_<scenario>.png`` for every scenario in the CSV; return the paths."""
    csv_path = Path(csv_path)
    out_dir = Path(out_dir) if out_dir is not None else csv_path.parent
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = read_power_csv(csv_path)
    by_scenario = OrderedDict()
    for r in rows:
        by_scenario.setdefault(r["scenario"], []).append(r)
    written = []
    for scenario, rs in by_scenario.items():
        stats = list(OrderedDict.fromkeys(r["statistic"] for r in rs))
        effects = sorted({float(r["effect"]) for r in rs})
        fig, ax = plt.subplots(figsize=(6, 0.35 * len(stats) + 1.5))
        for i, eff in enumerate(effects):
            pts = [(float(r["power"]), stats.index(r["statistic"])) for r in rs
                   if float(r["effect"]) == eff]
            ax.scatter([x for x, _ in pts], [y for _, y in pts],
                       marker=_MARKERS[i % len(_MARKERS)], color=_COLORS[i % len(_COLORS)],
                       label=f"effect = {eff:g}", zorder=3)
        ax.axvline(alpha, color="0.6", linestyle="--", linewidth=0.8)
        ax.set_yticks(range(len(stats)))
        ax.set_yticklabels(stats)
        ax.invert_yaxis()
        ax.set_xlim(-0.02, 1.02)
        ax.set_xlabel("power")
        ax.set_title(scenario)
        ax.grid(axis="x", color="0.9")
        ax.legend(loc="lower right", fontsize="small")
        fig.tight_layout()
        path = out_dir / f"power_{scenario}.png"
        fig.savefig(path, dpi=100, metadata={"Software": None})
        plt.close(fig)
        written.append(path)
    return written
