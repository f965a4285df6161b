"""Deterministic SVG line plots of log-distance traces."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from ..errors import ArtifactIOError  # noqa: E402

MAX_POINTS = 2000


def thin_indices(n: int, max_points: int = MAX_POINTS) -> np.ndarray:
    """Evenly spaced indices into ``range(n)`` that always keep the last one."""
    if n <= max_points:
        return np.arange(n)
    idx = np.unique(np.linspace(0, n - 1, max_points).round().astype(int))
    return idx


def plot_curves(path, curves: Sequence[tuple[str, np.ndarray, np.ndarray]], title: str,
                ylabel: str = "log10 ||m_t||", xlabel: str = "iteration t") -> Path:
    """Write one polyline per ``(label, t, y)`` to a standalone SVG file.

    Non-finite ``y`` values (for example ``log10 0``) are dropped from the
    polyline.  Output is byte-stable for identical inputs.
    """
    path = Path(path)
    with plt.rc_context({"svg.hashsalt": "mies", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(7.0, 4.5))
        try:
            for label, t, y in curves:
                idx = thin_indices(len(t))
                tt, yy = np.asarray(t)[idx], np.asarray(y)[idx]
                ok = np.isfinite(yy)
                ax.plot(tt[ok], yy[ok], linewidth=0.9, label=label)
            ax.set_xlabel(xlabel)
            ax.set_ylabel(ylabel)
            ax.set_title(title)
            ax.grid(True, linewidth=0.3)
            if 0 < len(curves) <= 12:
                ax.legend(fontsize=7, ncol=2)
            fig.tight_layout()
            try:
                fig.savefig(path, format="svg", metadata={"Date": None})
            except OSError as exc:
                raise ArtifactIOError(f"cannot write plot: {exc.strerror}", path) from None
        finally:
            plt.close(fig)
    return path
