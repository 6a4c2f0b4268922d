"""Matplotlib renderings of the report artifacts.

Every report-producing command writes these PNG companions next to its
delimited output.  Figures are presentation artifacts: they are listed
in the manifest but never hashed.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _finish(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_region_figure(rows, path, title="admissible region") -> Path:
    """Membership map of the inverse-exponent lattice."""
    rows = list(rows)
    xs = np.array([float(r[0]) for r in rows])
    ys = np.array([float(r[1]) for r in rows])
    base = np.array([bool(r[2]) for r in rows])
    refined = np.array([bool(r[3]) for r in rows])
    fig, ax = plt.subplots(figsize=(5.2, 4.2))
    only_base = base & ~refined
    ax.plot(xs[only_base], ys[only_base], ".", ms=2, color="#9ecae1", label="base region")
    ax.plot(xs[refined], ys[refined], ".", ms=2, color="#08519c", label="refined region")
    ax.set_xlabel("x = 1/r")
    ax.set_ylabel("y = 1/q")
    ax.set_title(title)
    ax.legend(loc="upper right", markerscale=4)
    return _finish(fig, path)


def save_conservation_figure(traj, path) -> Path:
    fig, axes = plt.subplots(2, 1, figsize=(6.0, 5.0), sharex=True)
    drift = np.abs(traj.mass / traj.mass[0] - 1.0)
    axes[0].semilogy(traj.times, np.maximum(drift, 1e-18))
    axes[0].set_ylabel("relative mass drift")
    axes[1].plot(traj.times, traj.l2, label="L2")
    axes[1].plot(traj.times, traj.linf, label="Linf")
    axes[1].set_xlabel("t")
    axes[1].set_ylabel("norm")
    axes[1].legend()
    return _finish(fig, path)


def save_campaign_figure(sweep, path) -> Path:
    fig, axes = plt.subplots(1, 3, figsize=(11.0, 3.4))
    for n_val, camp in sweep.campaigns.items():
        ks = [s.k for s in camp.steps]
        axes[0].plot(ks, [s.v_norm for s in camp.steps], "o-", label=f"N={n_val}")
        axes[0].axhline(camp.budget_cap, ls="--", lw=0.8, color="gray")
        axes[1].semilogy(ks, [max(s.deviation, 1e-18) for s in camp.steps], "o-", label=f"N={n_val}")
    axes[0].set_xlabel("step k")
    axes[0].set_ylabel("||v_k||_2 (caps dashed)")
    axes[0].legend()
    axes[1].set_xlabel("step k")
    axes[1].set_ylabel("deviation from direct solve")
    ns = [float(n) for n in sweep.elapsed_by_n]
    axes[2].plot(ns, list(sweep.elapsed_by_n.values()), "s-")
    axes[2].set_xlabel("N")
    axes[2].set_ylabel("elapsed model time")
    axes[2].set_xscale("log", base=2)
    return _finish(fig, path)


def save_growth_figure(table, fit, path) -> Path:
    fig, ax = plt.subplots(figsize=(5.6, 4.0))
    weights = (1.0 + table.shifts**2) ** 0.5
    ax.loglog(weights, table.window_norms, "o", label="window norms")
    if fit is not None:
        span = np.array([weights[weights > 1].min(), weights.max()])
        anchor = table.window_norms[-1] / weights[-1] ** fit.exponent_estimate
        ax.loglog(span, anchor * span**fit.exponent_estimate, "-",
                  label=f"fit slope {fit.exponent_estimate:.3f}")
    ax.set_xlabel("<T>")
    ax.set_ylabel("window norm")
    ax.legend()
    return _finish(fig, path)
