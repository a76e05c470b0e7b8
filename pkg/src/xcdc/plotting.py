"""Matplotlib rendering of accuracy curves and score topomaps."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .classify import AccuracyCurve
from .dataset import ChannelLayout
from .topomap import TopomapGrid

# strip creation metadata so repeated runs produce identical bytes
_PNG_META = {"metadata": {"Software": "xcdc"}}


def plot_accuracy_curves(curves: dict[str, AccuracyCurve], path) -> None:
    """Accuracy vs channel count for one or more methods, with the
    all-channel reference as a dotted line."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for method, curve in curves.items():
        ax.plot(curve.ks, curve.accuracies, marker="o", ms=3, label=method)
        ax.axhline(curve.reference, ls=":", lw=0.8, color="gray")
    ax.set_xlabel("number of channels k")
    ax.set_ylabel("test accuracy")
    ax.set_ylim(0.0, 1.05)
    ax.legend(loc="lower right")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120, **_PNG_META)
    plt.close(fig)


def plot_topomap(
    grid: TopomapGrid,
    layout: ChannelLayout,
    path,
    marked_channels=(),
    title: str | None = None,
) -> None:
    """Interpolated score map with electrode dots; marked channels (e.g. the
    minimal subset) are drawn as white circles."""
    fig, ax = plt.subplots(figsize=(5, 4.5))
    im = ax.imshow(
        grid.values,
        origin="lower",
        extent=grid.extent,
        vmin=0.0,
        vmax=1.0,
        cmap="viridis",
    )
    pts = layout.positions
    marked = set(int(m) for m in marked_channels)
    plain = [i for i in range(len(layout)) if i not in marked]
    ax.scatter(pts[plain, 0], pts[plain, 1], s=12, c="black", zorder=3)
    if marked:
        idx = sorted(marked)
        ax.scatter(
            pts[idx, 0], pts[idx, 1], s=40, facecolors="white",
            edgecolors="black", zorder=4,
        )
    ax.set_xticks([])
    ax.set_yticks([])
    if title:
        ax.set_title(title)
    fig.colorbar(im, ax=ax, label="normalized score")
    fig.tight_layout()
    fig.savefig(path, dpi=120, **_PNG_META)
    plt.close(fig)
