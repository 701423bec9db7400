"""Figure rendering for curve reports.

Presentation only: values are converted to floats for drawing and
carry no numeric contract.  The CSV next to the figure holds the exact
rationals.
"""

from __future__ import annotations

from .ratio import format_ratio
from .stochpath import ParetoSet

__all__ = ["write_curve_csv", "render_curve_svg"]


def write_curve_csv(curve: ParetoSet, k: int, path: str) -> None:
    """One row per curve member: k weight columns plus the value column,
    rationals as num/den."""
    header = ",".join([f"p{i + 1}" for i in range(k)] + ["value"])
    lines = [header]
    for member in curve:
        cells = [format_ratio(w) for w in member.weight]
        cells.append(format_ratio(member.value))
        lines.append(",".join(cells))
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("\n".join(lines) + "\n")


def render_curve_svg(curve: ParetoSet, k: int, path: str, title: str = "") -> None:
    """Scatter of the first two weight components, with the curve
    polyline when the instance is two-objective."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    xs = [float(m.weight[0]) for m in curve]
    ys = [float(m.weight[1]) for m in curve] if k >= 2 else [0.0] * len(curve)

    fig, ax = plt.subplots(figsize=(5, 4))
    if k == 2 and len(curve) > 1:
        ax.plot(xs, ys, color="tab:red", linewidth=1, zorder=1)
    ax.scatter(xs, ys, color="tab:red", zorder=2)
    ax.set_xlabel("first component")
    ax.set_ylabel("second component" if k >= 2 else "")
    if title:
        ax.set_title(title)
    ax.grid(True, linewidth=0.3, alpha=0.5)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
