"""Report figures for ``bench`` and ``verify``."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .bench import loglog_slope  # noqa: E402


def plot_bench(rows, path) -> float:
    """Log-log stage times against ``m`` with the fitted core slope.

    Returns the slope (nan with fewer than two rows).
    """
    fig, ax = plt.subplots(figsize=(6, 4.2))
    m = [r.m for r in rows]
    for name, label in (("packing", "packing"), ("one_respecting", "1-respecting"),
                        ("descendant", "descendant")):
        ax.loglog(m, [getattr(r, name) for r in rows], "o-", lw=1, ms=4, label=label)
    ind = [(r.m, r.independent) for r in rows if r.independent is not None]
    if ind:
        ax.loglog(*zip(*ind), "s--", lw=1, ms=4, label="independent (quadratic)")
    core = [r.core for r in rows]
    ax.loglog(m, core, "k^-", lw=1.5, ms=5, label="core total")
    slope = loglog_slope(m, core)
    if not np.isnan(slope):
        xs = np.array([m[0], m[-1]], dtype=float)
        c = np.exp(np.mean(np.log(core) - slope * np.log(m)))
        ax.loglog(xs, c * xs ** slope, "k:", lw=1, label=f"fit, slope {slope:.2f}")
    ax.set_xlabel("edges m")
    ax.set_ylabel("wall time [s]")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8, frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return slope


def plot_verify(rates: dict, path) -> None:
    """Horizontal bars of the verification rates (all in [0, 1])."""
    names = list(rates)
    fig, ax = plt.subplots(figsize=(6, 0.45 * len(names) + 1.2))
    ax.barh(names, [rates[k] for k in names], color="0.55")
    ax.set_xlim(0, 1.05)
    ax.axvline(1.0, color="k", lw=0.8)
    ax.invert_yaxis()
    for i, k in enumerate(names):
        ax.text(min(rates[k], 1.0) - 0.01, i, f"{rates[k]:.3f}", va="center", ha="right",
                fontsize=8, color="white")
    ax.set_xlabel("rate")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
