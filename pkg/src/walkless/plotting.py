"""Static figure output for walk results."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .states import NodeDistribution


def save_distribution_svg(dist: NodeDistribution, path: str | Path, title: str = "") -> Path:
    path = Path(path)
    nodes = range(1, len(dist.probs) + 1)
    fig, ax = plt.subplots(figsize=(max(4.0, 0.5 * len(dist.probs) + 2.0), 3.2))
    ax.bar(nodes, dist.probs, color="#3b6ea5")
    ax.set_xlabel("node")
    ax.set_ylabel("probability")
    ax.set_xticks(list(nodes))
    ax.set_ylim(0, max(1e-9, float(dist.probs.max())) * 1.15)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
    return path
