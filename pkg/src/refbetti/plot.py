"""Static plane diagrams of configurations (SVG) plus a CSV table."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .configspace import Configuration  # noqa: E402
from .field import format_rational  # noqa: E402

_MARKERS = ("o", "s", "^", "D", "v", "P")


@dataclass(frozen=True)
class DiagramStyle:
    title: str = ""
    width: float = 5.0
    height: float = 5.0
    marker_size: float = 60.0
    label_all: bool = True  # annotate every point with its multiplicity


def _as_labeled(configs) -> dict[str, Configuration]:
    if isinstance(configs, Configuration):
        return {"": configs}
    return {str(k): v for k, v in configs.items()}


def _bounds(configs: Mapping[str, Configuration]) -> tuple[float, float]:
    xs = [float(v) for c in configs.values() for p in c for v in p]
    if not xs:
        return -1.0, 1.0
    lo, hi = min(xs), max(xs)
    pad = max((hi - lo) * 0.15, 0.5)
    return lo - pad, hi + pad


def diagram_csv(configs) -> bytes:
    labeled = _as_labeled(configs)
    single = list(labeled) == [""]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["a", "b", "multiplicity"] if single else ["label", "a", "b", "multiplicity"])
    for label, c in labeled.items():
        for (a, b), m in c.items():
            row = [format_rational(a), format_rational(b), m]
            w.writerow(row if single else [label, *row])
    return buf.getvalue().encode()


def diagram_svg(configs, style: DiagramStyle = DiagramStyle()) -> bytes:
    labeled = _as_labeled(configs)
    lo, hi = _bounds(labeled)
    with plt.rc_context({"svg.hashsalt": "refbetti", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(style.width, style.height))
        try:
            ax.plot([lo, hi], [lo, hi], color="0.5", linewidth=1, zorder=1, gid="diagonal")
            for n, (label, c) in enumerate(labeled.items()):
                marker = _MARKERS[n % len(_MARKERS)]
                above = [(p, m) for p, m in c.items() if p[1] >= p[0]]
                below = [(p, m) for p, m in c.items() if p[1] < p[0]]
                name = label or "points"
                if above:
                    ax.scatter([float(p[0]) for p, _ in above], [float(p[1]) for p, _ in above],
                               s=style.marker_size, marker=marker, color=f"C{n}", zorder=3,
                               label=f"{name} (b >= a)", gid=f"above-{n}")
                if below:
                    # below the diagonal: hollow markers
                    ax.scatter([float(p[0]) for p, _ in below], [float(p[1]) for p, _ in below],
                               s=style.marker_size, marker=marker, facecolors="none",
                               edgecolors=f"C{n}", linewidths=1.5, zorder=3, label=f"{name} (b < a)", gid=f"below-{n}")
                for p, m in c.items():
                    if style.label_all or m > 1:
                        ax.annotate(str(m), (float(p[0]), float(p[1])), textcoords="offset points",
                                    xytext=(6, 6), fontsize=9)
            ax.set_xlim(lo, hi)
            ax.set_ylim(lo, hi)
            ax.set_aspect("equal")
            ax.set_xlabel("a")
            ax.set_ylabel("b")
            if style.title:
                ax.set_title(style.title)
            if any(len(c) for c in labeled.values()):
                ax.legend(loc="lower right", fontsize=8)
            buf = io.BytesIO()
            fig.savefig(buf, format="svg", metadata={"Date": None})
        finally:
            plt.close(fig)
    return buf.getvalue()


def emit_diagram(configs, style: DiagramStyle = DiagramStyle()) -> tuple[bytes, bytes]:
    """SVG bytes and CSV bytes for one configuration or a label -> configuration map."""
    return diagram_svg(configs, style), diagram_csv(configs)


def support_coordinates(configs) -> list[tuple[str, Fraction, Fraction, int]]:
    return [(label, a, b, m) for label, c in _as_labeled(configs).items() for (a, b), m in c.items()]
