"""Static figures rendered from sweep rows."""
from __future__ import annotations

import math
from fractions import Fraction
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

PALETTE = ("#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02")


def publication_axes(width=7.0, height=None):
    if height is None:
        height = width * (math.sqrt(5) - 1) / 2
    fig, ax = plt.subplots(figsize=(width, height), facecolor="w")
    ax.tick_params(labelsize=11)
    for side in ("top", "right"):
        ax.spines[side].set_visible(False)
    return fig, ax


def plot_sweep(rows, path, tsai_c=Fraction(1)):
    """Overlay log(lambda_hi) per k on the 54 log(2n+2)/(2n+2) curve and a c log N / N reference."""
    fig, ax = publication_axes()
    ks = sorted({r.k for r in rows})
    ns = sorted({r.n for r in rows})
    for idx, k in enumerate(ks):
        pts = [(r.n, float(r.log_lambda_hi)) for r in rows if r.k == k and r.log_lambda_hi is not None]
        if pts:
            xs, ys = zip(*pts)
            ax.plot(xs, ys, "o-", ms=3, lw=1, color=PALETTE[idx % len(PALETTE)],
                    label=f"log $\\lambda$ upper, k={k}")
    if ns:
        punct = [2 * n + 2 for n in ns]
        ax.plot(ns, [54 * math.log(x) / x for x in punct], "k--", lw=1.2,
                label="54 log(2n+2)/(2n+2)")
        c = float(tsai_c)
        ax.plot(ns, [c * math.log(x) / x for x in punct], ":", color="0.4", lw=1.2,
                label=f"{c:g} log(2n+2)/(2n+2)")
    ax.set_xlabel("n = m", fontsize=12)
    ax.set_ylabel("entropy", fontsize=12)
    ax.set_yscale("log")
    ax.legend(fontsize=9, frameon=False)
    fig.tight_layout()
    fig.savefig(Path(path), dpi=150)
    plt.close(fig)
