"""Figure rendering for rate curves.

The CSV emitted by the harness is the machine-readable artifact; this module
turns a curve into the companion two-panel figure (value error and action
error versus total samples, all four series with one-standard-error bands).
matplotlib is imported lazily so headless runs that never plot do not pay
for it.
"""

from __future__ import annotations

from .harness import ACTION_METRIC, VALUE_METRIC, RateCurve

__all__ = ["render_rate_curve"]

_PANELS = ((VALUE_METRIC, "Value error"), (ACTION_METRIC, "Action error"))
_SERIES = (
    ("general", "general bound"),
    ("clt", "CLT bound"),
    ("t", "t estimate"),
    ("observed", "observed rate"),
)


def render_rate_curve(curve: RateCurve, destination, *, title: str | None = None) -> None:
    """Render the curve to an image file (format chosen by file suffix)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(1, 2, figsize=(11.0, 4.25), sharey=True)
    for ax, (metric, panel_title) in zip(axes, _PANELS):
        rows = sorted(
            (row for row in curve.rows if row.metric == metric), key=lambda r: r.n
        )
        ax.set_title(panel_title if rows else f"{panel_title} (no data)")
        if not rows:
            continue
        ns = [row.n for row in rows]
        for attr, label in _SERIES:
            if attr == "observed":
                means = [row.observed for row in rows]
                ses = [row.observed_se for row in rows]
            else:
                means = [getattr(row, f"{attr}_mean") for row in rows]
                ses = [getattr(row, f"{attr}_se") for row in rows]
            (line,) = ax.plot(ns, means, marker="o", markersize=3, label=label)
            low = [max(0.0, m - s) for m, s in zip(means, ses)]
            high = [min(1.0, m + s) for m, s in zip(means, ses)]
            ax.fill_between(
                ns, low, high, alpha=0.2, color=line.get_color(), linewidth=0
            )
        ax.set_xscale("log")
        ax.set_xlabel("total samples n")
        ax.grid(True, alpha=0.3)
    axes[0].set_ylabel("error probability")
    axes[0].set_ylim(-0.02, 1.02)
    axes[0].legend(loc="upper right", fontsize=8)
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(destination, dpi=150)
    plt.close(fig)
