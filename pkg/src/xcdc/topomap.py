"""Score normalization and scattered-to-grid interpolation for scalp maps."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import LinearNDInterpolator
from scipy.spatial import QhullError

from .dataset import ChannelLayout


@dataclass(frozen=True)
class TopomapGrid:
    """Regular grid of interpolated scores; NaN marks cells outside the
    electrode hull. ``values[row, col]`` maps to y index ``row`` and x index
    ``col``; axes run from extent min to max inclusive."""

    resolution: int
    values: np.ndarray  # (R, R), NaN outside the hull
    extent: tuple[float, float, float, float]  # xmin, xmax, ymin, ymax


def normalize_scores(scores) -> np.ndarray:
    """Affine map onto [0, 1]; order preserving."""
    scores = np.asarray(scores, dtype=np.float64)
    lo, hi = scores.min(), scores.max()
    if hi == lo:
        raise ValueError("cannot normalize scores that are all equal")
    return (scores - lo) / (hi - lo)


def topomap_grid(scores, layout: ChannelLayout, resolution: int = 64) -> TopomapGrid:
    """Interpolate normalized per-channel scores onto a regular grid.

    Piecewise-linear interpolation over a triangulation of the electrode
    positions: exact at the electrodes, NaN outside their convex hull.
    """
    if resolution < 8:
        raise ValueError("resolution must be >= 8")
    if len(layout) < 3:
        raise ValueError("need at least 3 electrodes for a topomap")
    scores = np.asarray(scores, dtype=np.float64)
    if scores.size != len(layout):
        raise ValueError("scores length must match layout size")
    normed = normalize_scores(scores)
    pts = layout.positions
    try:
        interp = LinearNDInterpolator(pts, normed)
    except QhullError as exc:
        raise ValueError("electrode layout is degenerate (collinear)") from exc
    xmin, ymin = pts.min(axis=0)
    xmax, ymax = pts.max(axis=0)
    xs = np.linspace(xmin, xmax, resolution)
    ys = np.linspace(ymin, ymax, resolution)
    gx, gy = np.meshgrid(xs, ys)
    values = interp(gx, gy)
    return TopomapGrid(
        resolution=resolution,
        values=values,
        extent=(float(xmin), float(xmax), float(ymin), float(ymax)),
    )
