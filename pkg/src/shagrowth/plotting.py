"""Figures for growth reports (headless backend)."""

from __future__ import annotations

from fractions import Fraction

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .assembler import GrowthReport  # noqa: E402


def growth_figure(report: GrowthReport, l: int, d: int, path) -> None:
    ns = [r.n for r in report.layers]
    centers = [float(r.exponent.center) for r in report.layers]
    widths = [float(r.exponent.halfwidth) for r in report.layers]
    fig, (left, right) = plt.subplots(1, 2, figsize=(9, 3.6), constrained_layout=True)

    left.errorbar(ns, centers, yerr=widths, fmt="o-", capsize=3, color="tab:blue")
    left.set_xlabel("layer n")
    left.set_ylabel("exponent")
    left.set_title(f"ord_{report.p} of the quotient")

    scaled = [float(r.exponent.center / Fraction(l) ** (d * r.n)) for r in report.layers]
    right.plot(ns, scaled, "s-", color="tab:orange", label="exponent / l^(dn)")
    if report.mu is not None:
        right.axhline(float(report.mu), color="k", ls="--", lw=1, label=f"mu = {report.mu}")
    right.set_xlabel("layer n")
    right.legend(frameon=False)
    right.set_title("normalised growth")
    for ax in (left, right):
        ax.set_xticks(ns)
        ax.grid(alpha=0.3)
    fig.savefig(path, dpi=120)
    plt.close(fig)
