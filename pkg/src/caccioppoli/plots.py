"""Figure rendering for convergence reports (written next to the tables)."""

from __future__ import annotations

import numpy as np
import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.collections import PolyCollection

# stable metadata keeps repeated renders byte-identical
_PNG_META = {"Software": "caccioppoli"}
_FLOOR = 1e-18  # log plots cannot show exact zeros


def render_gap_figure(report, path):
    """Log-log gap curves versus n for one convergence report."""
    ns = [row.n for row in report.rows]
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    series = {
        "l1": [row.l1_gap for row in report.rows],
        "interface": [row.perimeter_gap for row in report.rows],
        "total variation": [row.tv_gap for row in report.rows],
    }
    for name in report.integrand_names:
        series[f"F[{name}]"] = [row.functional_gaps[name] for row in report.rows]
    for label, ys in series.items():
        ax.loglog(ns, np.maximum(ys, _FLOOR), marker="o", label=label)
    ax.set_xlabel("n")
    ax.set_ylabel("gap to the limit field")
    ax.set_title(f"family {report.family}: convergence gaps")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=130, metadata=_PNG_META)
    plt.close(fig)


def render_field_figure(u, path, title="partition"):
    """Snapshot of a partition: colored cells (2D) or a step plot (1D)."""
    fig, ax = plt.subplots(figsize=(5.4, 4.6))
    if u.dim == 1:
        a, b = u.interval
        xs = np.concatenate(([a], u.breakpoints, [b]))
        vals = [u.value_on_cell(k)[0] for k in range(len(u.cell_labels))]
        ax.stairs(vals, xs, fill=True, alpha=0.5)
        ax.set_xlabel("x")
        ax.set_ylabel("label value (first component)")
    else:
        polys = [u.cell_polygon(c) for c in range(len(u.cells))]
        coll = PolyCollection(
            polys,
            array=np.asarray(u.cell_labels, dtype=float),
            cmap="viridis",
            edgecolors="k",
            linewidths=0.3,
        )
        ax.add_collection(coll)
        box = u.bounding_box()
        ax.set_xlim(box[0], box[2])
        ax.set_ylim(box[1], box[3])
        ax.set_aspect("equal")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=130, metadata=_PNG_META)
    plt.close(fig)
