"""Figure rendering for report and distribution outputs.

Weights are exact rationals everywhere else; they are converted to
floats here only, at the plotting boundary.  The Agg backend keeps this
usable headless; every function writes a file and returns its path.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .surface import point_str  # noqa: E402


def save_distribution_figure(items, path: str, title: str = "") -> str:
    """Bar chart of a distribution or empirical tally.

    ``items`` are (point, weight) pairs; weights may be Fractions, ints,
    or booleans.
    """
    labels = [point_str(p) for p, _ in items]
    values = [float(w) for _, w in items]
    fig, ax = plt.subplots(figsize=(max(3.2, 0.9 * len(labels) + 1.2), 3.0))
    ax.bar(range(len(values)), values, color="#4878a8")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("weight")
    if title:
        ax.set_title(title, fontsize=10)
    ax.set_ylim(0, max(values + [1.0]) * 1.05)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_report_figure(report, path: str) -> str:
    """One horizontal bar per law: instance count, green for pass."""
    names = [r.name for r in report.results]
    counts = [r.instances for r in report.results]
    colors = [
        "#b04a4a" if not r.passed else ("#c8b14a" if r.vacuous else "#5a9a5a")
        for r in report.results
    ]
    fig, ax = plt.subplots(figsize=(7.0, 0.28 * len(names) + 1.4))
    ax.barh(range(len(names)), counts, color=colors)
    ax.set_yticks(range(len(names)))
    ax.set_yticklabels(names, fontsize=7)
    ax.invert_yaxis()
    ax.set_xlabel("instances checked")
    ax.set_xscale("symlog")
    fails = sum(1 for r in report.results if not r.passed)
    ax.set_title(
        f"law report: {len(names)} laws, {fails} failing (seed {report.config.seed})",
        fontsize=10,
    )
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
