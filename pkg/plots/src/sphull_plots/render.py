"""Figure rendering: normalized-statistic histograms, moment-curve scatter
with the gamma overlay, and deficiency-ratio convergence.

All functions are pure with respect to their input rows: the same CSV yields
the same image (matplotlib's date metadata is suppressed and the SVG hash
salt is pinned).  Each render writes both PNG and SVG next to each other.
"""
from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "sphull-plots"

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

# Panel order and colors follow the figure conventions.
STAT_ORDER = ("width", "area", "volume")
GROUP_COLORS = ("tab:blue", "tab:orange", "tab:green", "tab:red",
                "tab:purple", "tab:brown")

WIDTH_AREA_LIMIT = 18.0 * math.sqrt(3.0) / (5.0 * math.pi)   # 1.984...
VOLUME_LIMIT = 4.0 * math.sqrt(3.0) / math.pi                # 2.205...


def _save(fig, out: str | Path) -> list[Path]:
    """Write the figure as PNG and SVG; returns both paths."""
    out = Path(out)
    paths = [out.with_suffix(".png"), out.with_suffix(".svg")]
    for p in paths:
        fig.savefig(p, metadata={"Date": None} if p.suffix == ".svg" else None)
    plt.close(fig)
    return paths


def render_hist(rows: list[dict], out: str | Path) -> dict:
    """Per-statistic histogram panels of the normalized metrics.

    Returns the output paths plus the mean ordering computed from the data,
    which is also printed as the annotation on the figure.
    """
    stats = [s for s in STAT_ORDER
             if any(r["statistic"] == s for r in rows)]
    extra = sorted({r["statistic"] for r in rows} - set(stats))
    stats += extra
    if not stats:
        raise ValueError("no statistics found in input rows")

    fig, axes = plt.subplots(1, len(stats), figsize=(4.2 * len(stats), 3.4),
                             squeeze=False)
    means = {}
    for ax, stat in zip(axes[0], stats):
        sub = [r for r in rows if r["statistic"] == stat]
        left = np.array([r["bin_left"] for r in sub])
        right = np.array([r["bin_right"] for r in sub])
        counts = np.array([r["count"] for r in sub])
        means[stat] = sub[0]["mean"]
        ax.bar(left, counts, width=right - left, align="edge",
               color="tab:blue", edgecolor="none")
        ax.axvline(means[stat], color="tab:red", linewidth=1.0)
        ax.set_title(f"normalized {stat}")
        ax.set_xlabel("value / ball value")
    axes[0][0].set_ylabel("count")

    ordering = sorted(means, key=means.get, reverse=True)
    annotation = " > ".join(f"{s} {means[s]:.5f}" for s in ordering)
    fig.suptitle(f"means: {annotation}", fontsize=10)
    fig.tight_layout(rect=(0, 0, 1, 0.92))
    return {"outputs": _save(fig, out), "ordering": ordering, "means": means,
            "annotation": annotation}


def render_curve(rows: list[dict], out: str | Path) -> dict:
    """Width-area and width-volume scatter with the moment-curve overlay.

    Sample points are colored by their n group; the gamma rows are drawn as
    a polyline over the parameter t.
    """
    samples = [r for r in rows if r["kind"] == "sample"]
    gamma = sorted((r for r in rows if r["kind"] == "gamma"),
                   key=lambda r: r["t"])
    if not samples:
        raise ValueError("no sample rows in input")
    groups = sorted({r["t"] for r in samples})

    fig, (ax_a, ax_v) = plt.subplots(1, 2, figsize=(9.0, 3.8))
    for i, n in enumerate(groups):
        pts = [r for r in samples if r["t"] == n]
        w = [r["width"] for r in pts]
        color = GROUP_COLORS[i % len(GROUP_COLORS)]
        ax_a.scatter(w, [r["area"] for r in pts], s=6, alpha=0.6,
                     color=color, label=f"n = {int(n)}")
        ax_v.scatter(w, [r["volume"] for r in pts], s=6, alpha=0.6,
                     color=color)
    if gamma:
        gw = [r["width"] for r in gamma]
        ax_a.plot(gw, [r["area"] for r in gamma], color="black",
                  linewidth=1.2, label="moment curve")
        ax_v.plot(gw, [r["volume"] for r in gamma], color="black",
                  linewidth=1.2)
    ax_a.set_xlabel("mean width")
    ax_a.set_ylabel("surface area")
    ax_v.set_xlabel("mean width")
    ax_v.set_ylabel("volume")
    ax_a.legend(fontsize=8, loc="upper left")
    fig.tight_layout()
    return {"outputs": _save(fig, out), "groups": [int(n) for n in groups],
            "gamma_points": len(gamma)}


def render_deficiency(rows: list[dict], out: str | Path) -> dict:
    """Deficiency-ratio convergence with horizontal asymptotes; log-x axis."""
    rows = sorted(rows, key=lambda r: r["n"])
    n = [r["n"] for r in rows]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(n, [r["width_ratio"] for r in rows], "o-", label="width ratio",
            markersize=4)
    ax.plot(n, [r["area_ratio"] for r in rows], "s-", label="area ratio",
            markersize=4)
    ax.plot(n, [r["volume_ratio"] for r in rows], "^-", label="volume ratio",
            markersize=4)
    ax.axhline(WIDTH_AREA_LIMIT, color="gray", linestyle="--", linewidth=0.9,
               label=f"{WIDTH_AREA_LIMIT:.4f}")
    ax.axhline(VOLUME_LIMIT, color="gray", linestyle=":", linewidth=0.9,
               label=f"{VOLUME_LIMIT:.4f}")
    ax.set_xscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel("random / model deficiency")
    ax.legend(fontsize=8)
    fig.tight_layout()
    return {"outputs": _save(fig, out), "points": len(rows),
            "asymptotes": (WIDTH_AREA_LIMIT, VOLUME_LIMIT)}
