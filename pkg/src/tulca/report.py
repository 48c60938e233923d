"""Figure and table output for fitted models.

Renders the standard inspection views (core scatter, per-mode component
bars, projection heatmaps) to PNG files and writes the matching numbers
as comma-delimited text, so a fit can be examined without the service
running.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .covariance import LabeledDataset
from .cp import CoreSummary
from .optimizer import TulcaModel

_GROUP_CMAP = plt.get_cmap("tab10")


def _group_colors(labels: np.ndarray) -> list:
    return [_GROUP_CMAP(int(l) % 10) for l in labels]


def save_scatter(path: str | Path, summary: CoreSummary,
                 ds: LabeledDataset) -> Path:
    """Scatterplot of the first two core components, colored by group."""
    path = Path(path)
    pts = summary.scatter
    if pts.shape[1] < 2:
        pts = np.column_stack([pts[:, 0], np.zeros(len(pts))])
    fig, ax = plt.subplots(figsize=(5, 5))
    labels = ds.labels
    names = ds.group_names or tuple(f"group {l}" for l in range(labels.max() + 1))
    for l, name in enumerate(names):
        mask = labels == l
        ax.scatter(pts[mask, 0], pts[mask, 1], s=8, alpha=0.7,
                   color=_GROUP_CMAP(l % 10), label=name)
    ax.set_xlabel("component 1")
    ax.set_ylabel("component 2")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def save_mode_bars(path: str | Path, summary: CoreSummary,
                   mode_names: tuple[str, ...]) -> Path:
    """Bar charts of the per-mode component vectors (2(N-1) panels)."""
    path = Path(path)
    n_modes = len(summary.mode_bars)
    rank = summary.rank
    fig, axes = plt.subplots(n_modes, rank,
                             figsize=(3.2 * rank, 2.2 * n_modes),
                             squeeze=False)
    for k, bars in enumerate(summary.mode_bars):
        name = mode_names[k + 1] if k + 1 < len(mode_names) else f"mode {k + 2}"
        for r, vec in enumerate(bars):
            ax = axes[k][r]
            ax.bar(np.arange(len(vec)), vec, color="#4878a8")
            ax.axhline(0.0, color="0.6", lw=0.6)
            ax.set_title(f"{name}, component {r + 1}", fontsize=8)
            ax.tick_params(labelsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def save_projection_heatmaps(path: str | Path, model: TulcaModel,
                             mode_names: tuple[str, ...]) -> Path:
    """Divergent heatmap of each projection matrix (rows = dimensions)."""
    path = Path(path)
    projs = model.projections
    fig, axes = plt.subplots(1, len(projs),
                             figsize=(3.0 * len(projs), 4.0),
                             squeeze=False)
    for k, u in enumerate(projs):
        ax = axes[0][k]
        vmax = max(np.abs(u).max(), 1e-12)
        im = ax.imshow(u, aspect="auto", cmap="RdBu_r", vmin=-vmax, vmax=vmax)
        name = mode_names[k + 1] if k + 1 < len(mode_names) else f"mode {k + 2}"
        ax.set_title(name, fontsize=9)
        ax.set_xlabel("component")
        fig.colorbar(im, ax=ax, shrink=0.8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def _write_delimited(path: Path, header: list[str], rows: np.ndarray) -> None:
    np.savetxt(path, np.atleast_2d(rows), delimiter=",",
               header=",".join(header), comments="", fmt="%.12g")


def write_report(out_dir: str | Path, model: TulcaModel,
                 summary: CoreSummary, ds: LabeledDataset) -> list[Path]:
    """Write figures and delimited tables for one fitted model.

    Produces scatter/bars/heatmap PNGs plus CSVs for the scatter
    coordinates (with group labels), each projection matrix, and the
    per-mode objective values. Returns the created paths.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    names = ds.tensor.mode_names
    created = [
        save_scatter(out / "scatter.png", summary, ds),
        save_mode_bars(out / "mode_bars.png", summary, names),
        save_projection_heatmaps(out / "projections.png", model, names),
    ]

    pts = summary.scatter
    cols = [f"component_{r + 1}" for r in range(pts.shape[1])]
    table = np.column_stack([pts, ds.labels.astype(float)])
    p = out / "scatter.csv"
    _write_delimited(p, cols + ["group"], table)
    created.append(p)

    for k, u in enumerate(model.projections):
        p = out / f"projection_mode{k + 2}.csv"
        _write_delimited(p, [f"component_{r + 1}" for r in range(u.shape[1])], u)
        created.append(p)

    p = out / "objectives.csv"
    _write_delimited(p, ["mode", "trace_ratio", "iterations", "converged"],
                     np.column_stack([
                         np.arange(2, 2 + len(model.objective_per_mode)),
                         model.objective_per_mode,
                         model.iterations_per_mode,
                         np.asarray(model.converged_per_mode, dtype=float),
                     ]))
    created.append(p)
    return created
