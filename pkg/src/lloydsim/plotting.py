"""Static SVG charts drawn from the per-replication CSVs."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .metrics import read_table  # noqa: E402

# Fixed salt and no timestamp keep repeated renders byte-identical.
matplotlib.rcParams["svg.hashsalt"] = "lloydsim"
_SVG_META = {"Date": None, "Creator": None}

PANELS = (
    ("capital", "Capital", "capital"),
    ("premium", "Premium offered (mean)", "premiums_offered_mean"),
    ("loss_ratio", "Loss ratio", "loss_ratio"),
)


def _save(fig, path: Path) -> Path:
    fig.savefig(path, format="svg", metadata=_SVG_META)
    plt.close(fig)
    return path


def syndicate_chart(table: dict, column: str, ylabel: str, title: str):
    fig, ax = plt.subplots(figsize=(7, 4))
    for sid in np.unique(table["syndicate_id"]).astype(int):
        mask = table["syndicate_id"] == sid
        ax.plot(table["year"][mask], table[column][mask], marker=".", linewidth=1, label=f"syndicate {sid}")
    ax.set_xlabel("year")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(alpha=0.3)
    ax.legend(fontsize=7, ncol=2)
    fig.tight_layout()
    return fig


def plot_seed(out_dir: Path, seed: int, label: str = "") -> list[Path]:
    """Capital, premium and loss-ratio trajectories per syndicate for one seed."""
    out_dir = Path(out_dir)
    table = read_table(out_dir / f"metrics_seed{seed}.csv")
    paths = []
    for stem, ylabel, column in PANELS:
        title = f"{label} seed {seed}".strip()
        fig = syndicate_chart(table, column, ylabel, title)
        paths.append(_save(fig, out_dir / f"{stem}_seed{seed}.svg"))
    return paths


def plot_uniform_deviation(out_dir: Path, seeds, label: str = "") -> Path:
    """Mean uniform deviation per year across seeds and live syndicates."""
    out_dir = Path(out_dir)
    per_year: dict[int, list[float]] = {}
    for seed in seeds:
        t = read_table(out_dir / f"exposure_seed{seed}.csv")
        held = t["policies_in_force"] > 0
        for y, d in zip(t["year"][held], t["uniform_deviation"][held]):
            per_year.setdefault(int(y), []).append(float(d))
    years = sorted(per_year)
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(years, [np.mean(per_year[y]) for y in years], marker=".")
    ax.set_xlabel("year")
    ax.set_ylabel("uniform deviation")
    ax.set_ylim(bottom=0)
    ax.set_title(label or "uniform deviation")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    return _save(fig, out_dir / "uniform_deviation.svg")
