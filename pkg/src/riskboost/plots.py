"""Figure rendering for reports. Matplotlib is imported lazily with the Agg
backend so library use never requires a display."""
from __future__ import annotations

import numpy as np

from .boosting import TrainReport
from .harness import SweepReport
from .robustness import RobustnessReport


def _plt():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def plot_tradeoff(sweep: SweepReport, path) -> str:
    """Complexity and adversarial distance against the training margin tau."""
    plt = _plt()
    taus = [r.tau for r in sweep.rows]
    ic = [r.report.summary()["ic"][0] for r in sweep.rows]
    er = [r.report.summary()["mean_er"][0] for r in sweep.rows]
    fig, ax1 = plt.subplots(figsize=(6, 4))
    ax1.plot(taus, ic, "o-", color="tab:blue", label="conditions")
    ax1.set_xlabel("tau")
    ax1.set_ylabel("mean conditions", color="tab:blue")
    ax2 = ax1.twinx()
    ax2.plot(taus, er, "s--", color="tab:red", label="mean exact radius")
    ax2.set_ylabel("mean exact radius", color="tab:red")
    ax1.set_title("margin vs complexity and robustness")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)


def plot_curve(points, path) -> str:
    """Test accuracy against model complexity, one marker per round budget."""
    plt = _plt()
    fig, ax = plt.subplots(figsize=(6, 4))
    xs = [p.mean_ic for p in points]
    ys = [p.mean_accuracy for p in points]
    es = [p.stderr_accuracy for p in points]
    ax.errorbar(xs, ys, yerr=es, fmt="o-", capsize=3)
    for p in points:
        ax.annotate(f"T={p.T}", (p.mean_ic, p.mean_accuracy), fontsize=8,
                    textcoords="offset points", xytext=(4, 4))
    ax.set_xlabel("mean conditions")
    ax.set_ylabel("mean test accuracy")
    ax.set_title("accuracy vs complexity")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)


def plot_er_histogram(rob: RobustnessReport, path) -> str:
    """Distribution of exact radii over the sampled points."""
    plt = _plt()
    finite = rob.ers[np.isfinite(rob.ers)]
    n_inf = int(len(rob.ers) - len(finite))
    fig, ax = plt.subplots(figsize=(6, 4))
    if len(finite):
        ax.hist(finite, bins=20, color="tab:gray", edgecolor="black")
    ax.axvline(rob.radius, color="tab:red", linestyle="--", label=f"radius {rob.radius:g}")
    title = f"exact radii on {rob.n_sampled} points"
    if n_inf:
        title += f" ({n_inf} unbounded)"
    ax.set_title(title)
    ax.set_xlabel("l-inf distance to flip")
    ax.set_ylabel("count")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)


def plot_advantage(report: TrainReport, path) -> str:
    """Per-round weak-learner advantage with the stopping threshold."""
    plt = _plt()
    rounds = [r.round for r in report.round_log]
    adv = [r.advantage for r in report.round_log]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(rounds, adv, "o-", markersize=3)
    ax.axhline(report.gamma_bbm, color="tab:red", linestyle="--",
               label=f"stop threshold {report.gamma_bbm:g}")
    ax.set_xlabel("round")
    ax.set_ylabel("advantage over 1/2")
    ax.set_title(f"weak-learner advantage ({report.stop_reason})")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)
