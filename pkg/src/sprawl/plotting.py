"""Static figures written next to CLI reports (matplotlib, Agg backend)."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def hexagon_scan_figure(rows, path):
    """Scatter of E(H_{x,y}) over the parameter triangle; ``rows`` are ``(x, y, value)``."""
    xs = [float(r[0]) for r in rows]
    ys = [float(r[1]) for r in rows]
    vs = [float(r[2]) for r in rows]
    fig, ax = plt.subplots(figsize=(5.5, 4.5))
    sc = ax.scatter(xs, ys, c=vs, cmap="viridis", s=40, marker="s")
    fig.colorbar(sc, ax=ax, label=r"$E(H_{x,y})$")
    ax.plot([1, 2, 1, 1], [0, 0, 1, 0], color="0.4", lw=0.8)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_aspect("equal")
    ax.set_title("Hexagon sprawl over the parameter triangle")
    _save(fig, path)


def cayley_figure(result, path, limit=None):
    """E_n against n, with error bars in sample mode and an optional limit line."""
    ns = list(result.radii)
    vals = [float(v) for v in result.values]
    fig, ax = plt.subplots(figsize=(6, 4))
    if any(result.stderrs):
        ax.errorbar(ns, vals, yerr=list(result.stderrs), fmt="o-", ms=3, capsize=2)
    else:
        ax.plot(ns, vals, "o-", ms=3)
    if limit is not None:
        ax.axhline(float(limit), color="0.5", ls="--", lw=1, label=f"limit {float(limit):.6g}")
        ax.legend()
    ax.set_xlabel("n")
    ax.set_ylabel("E_n")
    ax.set_title(f"Word-metric sprawl, {result.group}")
    _save(fig, path)


def polygon_figure(L, path, title=""):
    """Planar perimeter drawn against the round circle of matching circumradius."""
    pts = [(float(x), float(y)) for x, y in L.vertices]
    r = max(math.hypot(x, y) for x, y in pts)
    fig, ax = plt.subplots(figsize=(5, 5))
    ts = [2 * math.pi * k / 400 for k in range(401)]
    ax.plot([r * math.cos(t) for t in ts], [r * math.sin(t) for t in ts], color="0.7", lw=0.8)
    ring = pts + pts[:1]
    ax.plot([p[0] for p in ring], [p[1] for p in ring], "-", lw=1)
    ax.plot([p[0] for p in pts], [p[1] for p in pts], ".", ms=4)
    ax.set_aspect("equal")
    ax.set_title(title)
    _save(fig, path)
