"""Figure rendering for coverage curves.

Only the report path imports this module, so the rest of the command line
stays free of any plotting dependency; matplotlib is loaded lazily with a
file-output backend.
"""
from __future__ import annotations

from pathlib import Path

from .curves import CoverageCurve

__all__ = ["render_curves"]

_X_LABELS = {
    "tau_db": "SINR threshold (dB)",
    "n_t": "transmit array size",
    "lambda_b": "transmitter density (per square meter)",
}
_STYLES = {
    "analytic_prop1": dict(color="C0", linestyle="-"),
    "analytic_prop2": dict(color="C0", linestyle="-"),
    "analytic_cor2": dict(color="C2", linestyle="--"),
    "asymptotic": dict(color="C3", linestyle=":"),
    "mc_actual": dict(color="C1", marker="o"),
    "mc_sinc": dict(color="C4", marker="s"),
    "mc_cos": dict(color="C5", marker="^"),
    "mc_flattop": dict(color="C6", marker="v"),
}


def render_curves(curves: list[CoverageCurve], path, title: str | None = None) -> None:
    """Draw the curves into one labeled figure at the given path."""
    import matplotlib

    matplotlib.use("Agg", force=True)
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    for curve in curves:
        xs = [pt.x for pt in curve.points]
        ps = [pt.p for pt in curve.points]
        style = dict(_STYLES.get(curve.method, {}))
        if curve.method.startswith("mc_"):
            errs = [pt.stderr if pt.stderr is not None else 0.0 for pt in curve.points]
            ax.errorbar(
                xs, ps, yerr=errs, label=curve.method,
                linestyle="none", markersize=4.0, capsize=2.0, **style,
            )
        else:
            ax.plot(xs, ps, label=curve.method, **style)
    sweep = curves[0].sweep_name if curves else "tau_db"
    if sweep == "lambda_b":
        ax.set_xscale("log")
    if sweep == "n_t":
        ax.set_xscale("log", base=2)
    ax.set_xlabel(_X_LABELS[sweep])
    ax.set_ylabel("coverage probability")
    ax.set_ylim(-0.02, 1.02)
    ax.grid(True, alpha=0.3)
    if title:
        ax.set_title(title)
    if curves:
        ax.legend(loc="best", fontsize=9)
    fig.tight_layout()
    fig.savefig(Path(path), dpi=150)
    plt.close(fig)
