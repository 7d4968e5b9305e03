"""Static plots of result CSVs."""

from __future__ import annotations

from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .report import read_csv  # noqa: E402

_COMPARISON = {"mc": ("se_mean", "se_var"), "qmc": ("err_mean", "err_var"),
               "pce": ("mean_abs_err", "var_abs_err")}


def _series(rows, method, metric):
    groups = defaultdict(list)
    for r in rows:
        if r["method"] == method and r["metric"] == metric and isinstance(r["param"], float):
            groups[(r["model"], r["sigma"])].append(r)
    return groups


def plot_csv(path, fmt: str = "svg", out=None) -> Path:
    """Render a convergence or comparison plot; returns the output path.

    Convergence files plot mean and variance errors against the degree on
    a semilog-y scale. Files holding MC or QMC rows plot accuracy against
    time normalised by the slowest row. Beta sweeps plot the variance error
    against beta next to its first-order size.
    """
    rows = read_csv(path)
    if not rows:
        raise ValueError(f"{path}: no rows")
    out = Path(out) if out else Path(path).with_suffix(f".{fmt}")
    comparison = any(r["method"] in ("mc", "qmc") for r in rows)
    sweep = any(r["metric"] == "var_gap_first_order" for r in rows)
    fig, axes = plt.subplots(1, 2, figsize=(10, 4))
    labels = (("mean", 0), ("variance", 1))
    if sweep:
        for metric, style in (("var_abs_err", "o-"), ("var_gap_first_order", "k--")):
            for (model, sigma), series in _series(rows, "pce", metric).items():
                series.sort(key=lambda r: r["param"])
                axes[1].loglog([r["param"] for r in series], [r["value"] for r in series],
                               style, ms=3, label=f"{metric} sigma={sigma:g}")
        axes[1].set_xlabel("beta")
        axes[1].set_ylabel("absolute variance error")
        axes[0].set_visible(False)
    elif comparison:
        top = max(r["elapsed_s"] for r in rows) or 1.0
        for method, metrics in _COMPARISON.items():
            for (name, idx), metric in zip(labels, metrics):
                for (model, sigma), series in _series(rows, method, metric).items():
                    xs = [r["elapsed_s"] / top for r in series]
                    axes[idx].loglog(xs, [r["value"] for r in series], "o-", ms=3,
                                     label=f"{method} {model} sigma={sigma:g}")
                axes[idx].set_xlabel("relative time")
                axes[idx].set_ylabel(f"{name} error")
    else:
        for (name, idx), metric in zip(labels, ("mean_abs_err", "var_abs_err")):
            for (model, sigma), series in _series(rows, "pce", metric).items():
                series.sort(key=lambda r: r["param"])
                axes[idx].semilogy([r["param"] for r in series], [r["value"] for r in series],
                                   "o-", ms=3, label=f"{model} sigma={sigma:g}")
            axes[idx].set_xlabel("degree p")
            axes[idx].set_ylabel(f"absolute {name} error")
    for ax in axes:
        ax.grid(True, which="both", alpha=0.3)
        if ax.lines:
            ax.legend(fontsize=7)
    fig.suptitle(rows[0]["experiment"])
    fig.tight_layout()
    fig.savefig(out, format=fmt)
    plt.close(fig)
    return out
