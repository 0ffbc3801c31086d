"""Figure rendering for survey outputs (Agg backend, files only)."""
from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def render(records: Sequence, kind: str, path: Path) -> None:
    from .lab import emit_plotdata

    rows = emit_plotdata(records, kind)[1:]
    fig, ax = plt.subplots(figsize=(7, 4.5), dpi=120)
    if kind == "ratio_vs_max":
        xs = [int(r[2]) for r in rows]
        ys = [float(r[4]) for r in rows]
        ax.scatter(xs, ys, s=12, alpha=0.6, edgecolors="none")
        ax.set_xlabel("max(|p|, |q|)")
        ax.set_ylabel("deg(g) / max(|p|, |q|)")
        ax.set_title("non-cyclotomic factor degree ratios")
        if ys:
            ax.axhline(min(ys), color="tab:red", lw=0.8, ls="--")
            ax.axhline(max(ys), color="tab:red", lw=0.8, ls="--")
    elif kind == "modulus_vs_q":
        xs = [int(r[1]) for r in rows]
        ys = [float(r[3]) for r in rows]
        ax.scatter(xs, ys, s=12, alpha=0.6, edgecolors="none")
        ax.set_xlabel("q")
        ax.set_ylabel("max |root|")
        ax.set_title("largest root modulus per cell")
    elif kind == "measure_hist":
        vals = [float(r[3]) for r in rows]
        if vals:
            ax.hist(vals, bins=min(40, max(5, len(vals) // 5)), color="tab:blue", alpha=0.8)
        ax.axvline(1.17628, color="tab:red", lw=0.8, ls="--", label="smallest Salem number")
        ax.set_xlabel("Mahler measure of non-cyclotomic factors")
        ax.set_ylabel("count")
        ax.legend(loc="best", fontsize=8)
    else:
        plt.close(fig)
        raise ValueError(f"unknown plot kind {kind!r}")
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
