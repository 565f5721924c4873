"""Figure rendering for the report path of the CLI.

Curves are computed exactly elsewhere; this module only converts rows of
rational values to floats and draws them with matplotlib (Agg backend, file
output only).
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def plot_rd_curve(rows, n: int, t: int, path: str) -> None:
    """Distortion vs rate: achievable polytope segment and the MDS
    time-sharing line, from rd_tables() rows."""
    feasible = [r for r in rows if r["feasible"]]
    fig, ax = plt.subplots(figsize=(6, 4))
    if feasible:
        xs = [float(r["rate"]) for r in feasible]
        ax.plot(xs, [float(r["polytope"]) for r in feasible],
                marker="o", markersize=3, label="polytope code")
        ax.plot(xs, [float(r["mds"]) for r in feasible],
                linestyle="--", label="MDS time-sharing")
    ax.set_xlabel("rate R")
    ax.set_ylabel("distortion D")
    ax.set_title(f"Rate-distortion tradeoff, N={n}, T={t}")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_dss_bounds(rows, k: int, d: int, t: int, path: str) -> None:
    """Achievable (alpha, beta) pairs for unit capacity: outer bound vs the
    achievable curve, from the dss-bounds CSV rows."""
    fig, ax = plt.subplots(figsize=(6, 4))
    outer = [(float(r["beta"]), float(r["alpha_outer"]))
             for r in rows if r["alpha_outer"] is not None]
    inner = [(float(r["beta"]), float(r["alpha_achievable"]))
             for r in rows if r["alpha_achievable"] is not None]
    if outer:
        ax.plot(*zip(*outer), marker="o", markersize=3, label="cut-set outer bound")
    if inner:
        ax.plot(*zip(*inner), marker="s", markersize=3,
                label="achievable (syndrome decoding)")
    ax.set_xlabel("bandwidth beta")
    ax.set_ylabel("storage alpha")
    ax.set_title(f"Bandwidth-storage tradeoff, k={k}, d={d}, T={t}")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
