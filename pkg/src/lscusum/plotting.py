"""Report figures: estimator path, CUSUM path with thresholds, p-value histogram.

Import order matters: the Agg backend is forced before pyplot loads so
figure rendering works headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .estimator import StepProcess  # noqa: E402

DPI = 150


def plot_integrated(mn: StepProcess, path, title: str = "Integrated parameter estimate"):
    """Step plot of the cumulative estimator M(u) against u."""
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.step(mn.grid(), mn.values, where="post", lw=1.2)
    ax.set_xlabel("u")
    ax.set_ylabel("M(u)")
    ax.set_title(title)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return path


def plot_cusum(tn: StepProcess, critical_values: dict, u_n: float, path,
               title: str = "CUSUM process"):
    """CUSUM path with one horizontal line per bootstrap critical value.

    The region below u_n, where the estimator has not started, is shaded.
    """
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.step(tn.grid(), tn.values, where="post", lw=1.2, label="T(u)")
    for level, cv in sorted(critical_values.items()):
        ax.axhline(cv, ls="--", lw=1.0, color="crimson",
                   label=f"critical value, level {level:g}")
        ax.axhline(-cv, ls="--", lw=1.0, color="crimson")
    if u_n > 0:
        ax.axvspan(0.0, u_n, color="gray", alpha=0.15)
    ax.set_xlabel("u")
    ax.set_ylabel("T(u)")
    ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return path


def plot_pvalue_histogram(pvalues, path, title: str = "Null p-values"):
    """Density histogram of p-values with the uniform reference line."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(pvalues, bins=20, range=(0.0, 1.0), density=True,
            edgecolor="black", alpha=0.75)
    ax.axhline(1.0, ls="--", lw=1.0, color="crimson", label="uniform density")
    ax.set_xlabel("p-value")
    ax.set_ylabel("density")
    ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return path
