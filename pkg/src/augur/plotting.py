"""Optional figures for the CLI ``--figure`` flag.

Each renderer reads only the ResultTable, so a figure can be redrawn from a
saved CSV as well.
"""

from __future__ import annotations

from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .results import ResultTable  # noqa: E402


def _search(ax, table):
    eta = np.array(table.column("eta"), dtype=float)
    hinted = np.array(table.column("probes_hinted"), dtype=float)
    ax.scatter(eta, hinted, s=6, alpha=0.5, label="hinted")
    ax.axhline(np.mean(table.column("probes_binary")), color="k", ls="--", label="binary (mean)")
    grid = np.arange(0, max(eta.max(), 1) + 1)
    ax.plot(grid, 2 * np.ceil(np.log2(grid + 1)) + 4, color="C3", label="bound")
    ax.set_xscale("symlog")
    ax.set_xlabel("eta = |hint - t(q)|")
    ax.set_ylabel("probes")


def _ski(ax, table):
    lam = np.array(table.column("lambda"), dtype=float)
    ratio = np.array(table.column("ratio"), dtype=float)
    bound = np.array(table.column("bound"), dtype=float)
    if len(lam) > 20000:  # thin large grids so the figure stays light
        keep = np.random.default_rng(0).choice(len(lam), 20000, replace=False)
        lam, ratio, bound = lam[keep], ratio[keep], bound[keep]
    for i, value in enumerate(sorted(set(lam.tolist()))):
        sel = lam == value
        ax.scatter(bound[sel], ratio[sel], s=4, alpha=0.4, color=f"C{i % 10}", label=f"lambda={value}")
    top = float(bound.max())
    ax.plot([1, top], [1, top], "k--", lw=1)
    ax.set_xlabel("bound")
    ax.set_ylabel("cost / OPT")


def _sketch(ax, table):
    rank = table.column("item_rank")
    true = np.array(table.column("true_count"), dtype=float)
    ax.loglog(rank, np.array(table.column("est_plain")) - true + 1, ".", ms=3, label="plain")
    ax.loglog(rank, np.array(table.column("est_learned")) - true + 1, ".", ms=3, label="learned")
    ax.set_xlabel("item rank")
    ax.set_ylabel("overestimate + 1")


def _bloom(ax, table):
    names = table.column("variant")
    x = np.arange(len(names))
    ax.bar(x - 0.2, table.column("fpr_measured"), 0.4, label="measured")
    ax.bar(x + 0.2, table.column("fpr_theoretical"), 0.4, label="expected")
    ax.set_xticks(x, names)
    ax.set_ylabel("false-positive rate")


def _cache(ax, table):
    names = table.column("policy")
    ax.bar(names, table.column("misses"))
    ax.axhline(table.rows[0][table.columns.index("opt_misses")], color="k", ls="--", label="OPT")
    ax.set_ylabel("misses")
    ax.tick_params(axis="x", rotation=30)


def _pom(ax, table):
    full, pred, _ = table.rows[0]
    ax.bar(["full", "predicted"], [full, pred])
    ax.set_ylabel("mean waiting time")


def _queue(ax, table):
    curves = defaultdict(list)
    flat = {}
    for dist, policy, alpha, mean_t, se, *_ in table.rows:
        if alpha is None:
            flat[(dist, policy)] = mean_t
        else:
            curves[(dist, policy)].append((alpha, mean_t, se))
    for i, ((dist, policy), pts) in enumerate(sorted(curves.items())):
        a, t, se = map(np.array, zip(*sorted(pts)))
        ax.errorbar(a, t, yerr=2 * se, marker="o", color=f"C{i}", label=f"{policy} ({dist})")
    for i, ((dist, policy), t) in enumerate(sorted(flat.items())):
        ax.axhline(t, ls="--", color=f"C{i + len(curves)}", label=f"{policy} ({dist})")
    ax.set_xlabel("alpha")
    ax.set_ylabel("mean time in system")


RENDERERS = {
    "search-bench": _search,
    "ski-grid": _ski,
    "sketch-bench": _sketch,
    "bloom-bench": _bloom,
    "cache-bench": _cache,
    "pom-static": _pom,
    "queue-bench": _queue,
}


def render(table: ResultTable, path: str | Path) -> None:
    """Draw the figure for ``table.config["experiment"]`` and save it to ``path``."""
    experiment = table.config["experiment"]
    fig, ax = plt.subplots(figsize=(6, 4))
    try:
        RENDERERS[experiment](ax, table)
        ax.set_title(experiment)
        if ax.get_legend_handles_labels()[0]:
            ax.legend(fontsize=7)
        fig.tight_layout()
        fig.savefig(path)
    finally:
        plt.close(fig)
