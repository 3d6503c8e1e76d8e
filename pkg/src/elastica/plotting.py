"""Static SVG figures: shape outlines, energy traces and overlays.

Output is byte-stable for identical input: the SVG date stamp is dropped and
element ids are derived from a fixed hash salt.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .geometry import BoundaryCurve, ConvexShape, boundary_from_shape

SVG_METADATA = {"Date": None, "Creator": None}
HASH_SALT = "elastica"


def _outline(item, n: int = 512) -> np.ndarray:
    if isinstance(item, ConvexShape):
        return boundary_from_shape(item, n).points
    if isinstance(item, BoundaryCurve):
        return item.points
    pts = np.asarray(item, dtype=float)
    return np.vstack([pts, pts[:1]])


def _save(fig, path) -> None:
    with plt.rc_context({"svg.hashsalt": HASH_SALT, "svg.fonttype": "none"}):
        fig.savefig(path, format="svg", metadata=SVG_METADATA)
    plt.close(fig)


def plot_shapes(items, path, labels=None, title: str = "") -> None:
    """Closed outlines of one or more shapes, with a legend when labelled."""
    fig, ax = plt.subplots(figsize=(5, 5))
    for i, item in enumerate(items):
        pts = _outline(item)
        label = labels[i] if labels else None
        ax.plot(pts[:, 0], pts[:, 1], lw=1.2, label=label)
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    if title:
        ax.set_title(title)
    if labels:
        ax.legend(loc="best", frameon=False)
    _save(fig, path)


def plot_trace(energies, path, title: str = "") -> None:
    """Energy against iteration."""
    e = np.asarray(energies, dtype=float)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(np.arange(len(e)), e, marker="o", ms=3, lw=1.0)
    ax.set_xlabel("iteration")
    ax.set_ylabel("energy")
    if title:
        ax.set_title(title)
    _save(fig, path)
