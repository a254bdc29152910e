"""Bench figures, rendered to files with the Agg backend."""

from __future__ import annotations

import os
from collections import defaultdict
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "figure.figsize": (5.0, 3.2),
    "savefig.dpi": 150,
}


def _by_algo(rows: Sequence[Mapping]) -> dict[str, list[Mapping]]:
    out = defaultdict(list)
    for r in rows:
        out[r["algo"]].append(r)
    return out


def _scatter(rows, key, ylabel, path, logy=False):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        for algo, rs in sorted(_by_algo(rows).items()):
            ax.scatter([r["n"] for r in rs], [float(r[key]) for r in rs], s=12, label=algo, alpha=0.8)
        ax.set_xlabel("n")
        ax.set_ylabel(ylabel)
        if logy:
            ax.set_yscale("log")
        ax.legend(frameon=False)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)


def render(
    out_dir: str,
    rows: Sequence[Mapping],
    clusters: Sequence[Mapping] = (),
    depths: Sequence[int] = (),
) -> list[str]:
    """Write the bench figures to ``out_dir``; returns the file paths."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    p = os.path.join(out_dir, "wall_ms.png")
    _scatter(rows, "wall_ms", "wall time (ms)", p, logy=True)
    paths.append(p)
    p = os.path.join(out_dir, "maxflow_calls.png")
    _scatter(rows, "maxflow_calls", "max-flow calls", p, logy=True)
    paths.append(p)
    if clusters:
        p = os.path.join(out_dir, "cluster_budget.png")
        with plt.rc_context(STYLE):
            fig, ax = plt.subplots()
            used = [c["ssc_flows_max"] + c["swap_flows"] for c in clusters]
            budget = [c["budget"] for c in clusters]
            ax.scatter(budget, used, s=10, alpha=0.7)
            top = max(budget + used + [1])
            ax.plot([0, top], [0, top], color="0.5", lw=0.8)
            ax.set_xlabel("flow budget per cluster part")
            ax.set_ylabel("flows used")
            fig.tight_layout()
            fig.savefig(p)
            plt.close(fig)
        paths.append(p)
    if depths:
        p = os.path.join(out_dir, "recursion_depth.png")
        with plt.rc_context(STYLE):
            fig, ax = plt.subplots()
            ax.hist(depths, bins=range(0, max(depths) + 2), align="left", rwidth=0.8)
            ax.set_xlabel("partial tree recursion depth")
            ax.set_ylabel("calls")
            fig.tight_layout()
            fig.savefig(p)
            plt.close(fig)
        paths.append(p)
    return paths
