"""File-based figure rendering for CLI reports.

Everything here draws to PNG files with the Agg backend; nothing opens a
window.  These are opt-in companions to the delimited/JSON outputs, so
the rest of the package never imports this module.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _finish(fig, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def save_iteration_curves(per_iteration, path, init_accuracy=None) -> Path:
    """Accuracy and objective across adaptation iterations.

    ``per_iteration`` is the list of per-iteration records from an
    adaptation result.  Accuracy is skipped (axis left empty) when no
    ground truth was available.
    """
    iters = [rec["iteration"] for rec in per_iteration]
    acc = [rec["accuracy"] for rec in per_iteration]
    obj = [rec["objective"] for rec in per_iteration]

    fig, (ax_a, ax_o) = plt.subplots(1, 2, figsize=(9, 3.5))
    if all(a is not None for a in acc):
        xs, ys = iters, [100.0 * a for a in acc]
        if init_accuracy is not None:
            xs, ys = [0] + xs, [100.0 * init_accuracy] + ys
        ax_a.plot(xs, ys, marker="o")
        ax_a.set_ylabel("target accuracy (%)")
    else:
        ax_a.text(0.5, 0.5, "no ground truth", ha="center", va="center")
    ax_a.set_xlabel("iteration")
    ax_a.set_title("accuracy")

    ax_o.plot(iters, obj, marker="o", color="tab:orange")
    ax_o.set_xlabel("iteration")
    ax_o.set_ylabel("sum of eigenvalues")
    ax_o.set_title("objective")
    return _finish(fig, path)


def save_ablation_bars(rows, path) -> Path:
    """Bar chart of final accuracy per ablation row.

    Rows without ground truth (accuracy None) are drawn at zero height
    and annotated as unavailable.
    """
    labels = [r["row"] for r in rows]
    heights = [0.0 if r["accuracy"] is None else 100.0 * r["accuracy"] for r in rows]

    fig, ax = plt.subplots(figsize=(1.2 * len(rows) + 2, 3.8))
    bars = ax.bar(range(len(rows)), heights, color="tab:blue")
    for bar, r in zip(bars, rows):
        if r["accuracy"] is None:
            ax.text(
                bar.get_x() + bar.get_width() / 2, 1.0, "n/a", ha="center", fontsize=8
            )
    ax.set_xticks(range(len(rows)))
    ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("target accuracy (%)")
    ax.set_title("objective-term ablation")
    return _finish(fig, path)


def save_embedding_scatter(z_s, y_s, z_t, path, y_t=None) -> Path:
    """Scatter of the first two projected coordinates, source vs target.

    Source points are filled circles colored by class; target points are
    crosses, colored by ``y_t`` when given and gray otherwise.  A 1-D
    embedding is padded with a zero second coordinate.
    """
    z_s = np.asarray(z_s, dtype=float)
    z_t = np.asarray(z_t, dtype=float)
    if z_s.shape[0] == 1:
        z_s = np.vstack([z_s, np.zeros_like(z_s)])
        z_t = np.vstack([z_t, np.zeros_like(z_t)])

    fig, ax = plt.subplots(figsize=(5, 4.5))
    ax.scatter(
        z_s[0], z_s[1], c=np.asarray(y_s), cmap="tab10", s=18, label="source"
    )
    if y_t is None:
        ax.scatter(z_t[0], z_t[1], c="0.5", marker="x", s=18, label="target")
    else:
        ax.scatter(
            z_t[0],
            z_t[1],
            c=np.asarray(y_t),
            cmap="tab10",
            marker="x",
            s=18,
            label="target",
        )
    ax.set_xlabel("projected dim 1")
    ax.set_ylabel("projected dim 2")
    ax.legend(loc="best", fontsize=8)
    ax.set_title("projected embedding")
    return _finish(fig, path)


def save_benchmark_bars(task_rows, path) -> Path:
    """Bar chart of per-task accuracy from a benchmark summary."""
    labels = [r["name"] for r in task_rows]
    heights = [
        0.0 if r["accuracy"] is None else 100.0 * r["accuracy"] for r in task_rows
    ]
    fig, ax = plt.subplots(figsize=(1.2 * len(task_rows) + 2, 3.8))
    bars = ax.bar(range(len(task_rows)), heights, color="tab:green")
    for bar, r in zip(bars, task_rows):
        if r["accuracy"] is None:
            ax.text(
                bar.get_x() + bar.get_width() / 2, 1.0, "n/a", ha="center", fontsize=8
            )
    ax.set_xticks(range(len(task_rows)))
    ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("target accuracy (%)")
    ax.set_title("benchmark tasks")
    return _finish(fig, path)
