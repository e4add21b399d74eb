# qb/plotting.py
from __future__ import annotations

import io

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .scenarios import SweepResult  # noqa: E402


def sweep_svg(result: SweepResult) -> str:
    """
    Two-panel SVG: W(t) per sweep value (solid) and catalyst energy drift
    E_cat(t) - E_cat(0) (dashed). Output is byte-stable for identical input.
    """
    s = result.scenario
    with plt.rc_context({"svg.hashsalt": "qbsim", "svg.fonttype": "none"}):
        fig, (ax_w, ax_c) = plt.subplots(2, 1, sharex=True, figsize=(7, 6))
        for p in result.points:
            tr = p.trajectory
            label = f"{s.sweep_label}={p.value:g}"
            line = ax_w.plot(tr.t, tr.W, lw=1.2, label=label)[0]
            ax_c.plot(tr.t, tr.E_cat - tr.E_cat[0], ls="--", lw=1.0, color=line.get_color(), label=label)

        ax_w.set_ylabel("W(t)")
        ax_w.set_title(s.name)
        ax_w.legend(loc="best", fontsize="small")
        ax_c.set_ylabel("E_cat(t) - E_cat(0)")
        ax_c.set_xlabel("t")
        fig.tight_layout()

        buf = io.StringIO()
        fig.savefig(buf, format="svg", metadata={"Date": None})
        plt.close(fig)
    return buf.getvalue()
