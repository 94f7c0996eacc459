"""Sampling and rendering of the monogamy / security-condition plane.

Curves live in the (beta_AB, f) plane where ``f`` is the largest CHSH score
Eve can share with Alice. The security boundary is ``f = (3 - h(beta)) / 4``;
a theory is secure wherever its monogamy curve sits strictly below it.
Point P is the boundary at the Tsirelson bound.

Writers are deterministic: no timestamps, ``.`` decimals, and CSV numbers
with 10 significant digits. JSON carries full ``repr`` precision so it
round-trips exactly.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
from matplotlib import rc_context
from matplotlib.backends.backend_svg import FigureCanvasSVG
from matplotlib.figure import Figure

from monogamy_qkd.entropy import binary_entropy
from monogamy_qkd.errors import UsageError
from monogamy_qkd.monogamy import CLASSICAL, TSIRELSON, MonogamyModel, f_nosignalling, f_quantum
from monogamy_qkd.security import Status, critical_beta

CSV_HEADER = ("beta", "f_qm", "f_ns", "f_cond")
X_RANGE = (0.75, 1.0)
Y_RANGE = (0.5, 0.85)

_STYLE = {
    "qm": {"color": "#1f77b4", "label": "quantum monogamy"},
    "ns": {"color": "#d62728", "label": "no-signalling monogamy"},
    "cond": {"color": "#2ca02c", "label": "security condition"},
}


def f_condition(beta: float) -> float:
    """Boundary of the security condition solved for the monogamy value."""
    return (3.0 - binary_entropy(beta)) / 4.0


@dataclass(frozen=True)
class CurveSample:
    beta: float
    f_quantum: float | None
    f_nosignalling: float
    f_condition: float


@dataclass(frozen=True)
class Intersection:
    theory: str
    beta: float
    f: float
    before_p: bool


@dataclass(frozen=True)
class FigureData:
    samples: tuple[CurveSample, ...]
    point_p: tuple[float, float]
    intersections: dict[str, Intersection] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "samples": [asdict(s) for s in self.samples],
            "point_p": {"beta": self.point_p[0], "f": self.point_p[1]},
            "intersections": {k: asdict(v) for k, v in self.intersections.items()},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FigureData":
        return cls(
            samples=tuple(CurveSample(**s) for s in data["samples"]),
            point_p=(data["point_p"]["beta"], data["point_p"]["f"]),
            intersections={k: Intersection(**v) for k, v in data["intersections"].items()},
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "FigureData":
        return cls.from_dict(json.loads(text))


def _intersection(model: MonogamyModel, key: str, tolerance: float) -> Intersection:
    result = critical_beta(model, tolerance)
    if result.status is not Status.ROOT:
        raise RuntimeError(f"{key} monogamy does not cross the security boundary ({result.status.value})")
    b = result.beta_star
    return Intersection(key, b, model.evaluate(b), b < TSIRELSON)


def sample_figure(grid_points: int = 201, tolerance: float = 1e-12) -> FigureData:
    """Sample both monogamy curves and the boundary on a uniform grid over [3/4, 1]."""
    if grid_points < 2:
        raise UsageError(f"grid_points must be at least 2, got {grid_points}")
    samples = []
    for b in np.linspace(CLASSICAL, 1.0, grid_points):
        b = float(b)
        samples.append(
            CurveSample(
                beta=b,
                f_quantum=f_quantum(b) if b <= TSIRELSON else None,
                f_nosignalling=f_nosignalling(b),
                f_condition=f_condition(b),
            )
        )
    intersections = {
        "qm": _intersection(MonogamyModel.quantum(), "qm", tolerance),
        "ns": _intersection(MonogamyModel.nosignalling(), "ns", tolerance),
    }
    return FigureData(tuple(samples), (TSIRELSON, f_condition(TSIRELSON)), intersections)


def _fmt(x: float | None) -> str:
    return "" if x is None else format(x, ".10g")


def figure_csv(data: FigureData) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for s in data.samples:
        writer.writerow([_fmt(s.beta), _fmt(s.f_quantum), _fmt(s.f_nosignalling), _fmt(s.f_condition)])
    return buf.getvalue()


def emit_csv(data: FigureData, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(figure_csv(data), encoding="utf-8")
    return path


def emit_json(data: FigureData, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(data.to_json(), encoding="utf-8")
    return path


def render_figure(data: FigureData) -> Figure:
    """Build the matplotlib figure. Artists carry ``gid`` values so the SVG
    groups can be located by id (``curve-qm``, ``marker-p``, ...)."""
    if not data.samples:
        raise UsageError("figure needs at least one sample")
    fig = Figure(figsize=(6.0, 4.5))
    ax = fig.add_subplot()
    betas = [s.beta for s in data.samples]
    qm = [(s.beta, s.f_quantum) for s in data.samples if s.f_quantum is not None]
    if qm:
        # close the quantum curve onto the Tsirelson endpoint
        if qm[-1][0] < TSIRELSON:
            qm.append((TSIRELSON, f_quantum(TSIRELSON)))
        ax.plot(*zip(*qm), gid="curve-qm", lw=1.6, **_STYLE["qm"])
    ax.plot(betas, [s.f_nosignalling for s in data.samples], gid="curve-ns", lw=1.6, **_STYLE["ns"])
    ax.plot(betas, [s.f_condition for s in data.samples], gid="curve-condition", lw=1.6, ls="--", **_STYLE["cond"])

    px, py = data.point_p
    ax.plot([px], [py], gid="marker-p", marker="o", ms=7, color="black", ls="none")
    ax.annotate("P", (px, py), xytext=(4, 6), textcoords="offset points")
    for key, inter in sorted(data.intersections.items()):
        ax.plot(
            [inter.beta], [inter.f], gid=f"marker-{key}", marker="s", ms=6, ls="none",
            color=_STYLE.get(key, {"color": "gray"})["color"],
        )
    ax.axvline(TSIRELSON, color="0.6", lw=0.8, ls=":", gid="tsirelson-line")

    ax.set_xlim(*X_RANGE)
    ax.set_ylim(*Y_RANGE)
    ax.set_xlabel(r"Alice-Bob CHSH score $\beta$")
    ax.set_ylabel(r"max Alice-Eve CHSH score $f(\beta)$")
    ax.legend(loc="upper right", frameon=False, fontsize=8)
    fig.tight_layout()
    return fig


def figure_svg(data: FigureData) -> str:
    fig = render_figure(data)
    buf = io.StringIO()
    with rc_context({"svg.hashsalt": "monogamy-qkd", "svg.fonttype": "path"}):
        FigureCanvasSVG(fig).print_svg(buf, metadata={"Date": None, "Creator": "monogamy-qkd"})
    return buf.getvalue()


def emit_svg(data: FigureData, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(figure_svg(data), encoding="utf-8")
    return path


def svg_marker_x(svg_text: str, gid: str) -> float:
    """Horizontal device coordinate of a single-point marker group in an SVG."""
    import xml.etree.ElementTree as ET

    root = ET.fromstring(svg_text)
    for el in root.iter():
        if el.get("id") == gid:
            for use in el.iter("{http://www.w3.org/2000/svg}use"):
                return float(use.get("x"))
    raise KeyError(gid)
