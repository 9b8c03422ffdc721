"""SVG line-plot rendering for the figure-reproduction pipeline.

Uses the Agg backend with a fixed hash salt and no embedded timestamp so
repeated runs produce identical files.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg", force=True)

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

plt.rcParams["svg.hashsalt"] = "qutritsim"


def save_line_plot(path, x, curves, xlabel: str, ylabel: str,
                   title: str) -> str:
    """Render labelled curves over a shared x grid to `path` as SVG.

    `curves` is a sequence of (label, y-values) pairs drawn in order.
    """
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    try:
        for label, y in curves:
            ax.plot(x, y, label=label)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        ax.set_title(title)
        ax.grid(True, alpha=0.3)
        ax.legend()
        fig.savefig(path, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
    return str(path)
