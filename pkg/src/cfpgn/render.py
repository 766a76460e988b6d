"""SVG drawings of combined graphs.

q runs horizontally and the value vertically, with one scale for both
axes so every segment is drawn at 45 degrees.  Output is deterministic:
all coordinates are printed with six decimals.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .envelope import CombinedGraph, PiecewiseLinear
from .exact import ZERO, rational_format
from .trajectory import Trajectory, breakpoint, evaluate

PRECISION = 6


class RenderError(ValueError):
    pass


@dataclass(frozen=True)
class RenderConfig:
    q_max: Optional[float] = None  # None: a little past the last q_n
    width: int = 640
    height: int = 400
    show_trajectories: bool = False
    show_q_labels: bool = True
    margin: int = 30

    def __post_init__(self):
        if self.q_max is not None and not self.q_max > 0:
            raise RenderError(f"q_max must be positive, got {self.q_max}")
        if self.width <= 0 or self.height <= 0:
            raise RenderError("width and height must be positive")


def _f(x: float) -> str:
    s = f"{x:.{PRECISION}f}"
    return "0.000000" if s == "-0.000000" else s


def curve_points(L: PiecewiseLinear, q_max: float) -> list[tuple[float, float]]:
    """Float polyline of ``L`` on ``[0, q_max]``."""
    slopes = L.slopes() + [L.tail_slope]
    pts = []
    for v in L.vertices:
        q = v.q.to_float()
        if q > q_max:
            break
        pts.append((q, v.v.to_float()))
    q_last, v_last = pts[-1]
    if q_last < q_max:
        slope = slopes[len(pts) - 1]
        if slope is None:
            raise RenderError(f"q_max {q_max} lies beyond the truncated graph end {q_last}")
        pts.append((q_max, v_last + slope * (q_max - q_last)))
    return pts


def trajectory_points(tr: Trajectory, q_max: float) -> list[tuple[float, float]]:
    pts = [(0.0, evaluate(tr, ZERO).to_float())]
    bp = breakpoint(tr)
    if tr.Q == 0:
        slope = 1
    elif bp is None:
        slope = -1
    elif bp <= ZERO:
        slope = 1
    elif bp.to_float() < q_max:
        pts.append((bp.to_float(), evaluate(tr, bp).to_float()))
        slope = 1
    else:
        slope = -1
    q0, v0 = pts[-1]
    pts.append((q_max, v0 + slope * (q_max - q0)))
    return pts


def _default_qmax(graph: CombinedGraph) -> float:
    last = graph.q_maxima[-1].to_float()
    if graph.truncated:
        return last if last > 0 else 1.0
    return max(1.0, last * 1.25 + 0.5)


def render_svg(graph: CombinedGraph, cfg: RenderConfig = RenderConfig()) -> str:
    q_max = cfg.q_max if cfg.q_max is not None else _default_qmax(graph)
    if graph.truncated and q_max > graph.L1.q_end.to_float() + 1e-12:
        raise RenderError(
            f"q_max {q_max} exceeds the truncated graph range {graph.L1.q_end.to_float()}"
        )
    l1 = curve_points(graph.L1, q_max)
    l2 = curve_points(graph.L2, q_max)
    trajs = []
    if cfg.show_trajectories:
        trajs = [trajectory_points(tr, q_max) for tr in graph.owner_trajectories()]

    ys = [y for _, y in l1 + l2] + [0.0]
    y_lo, y_hi = min(ys), max(ys)
    m = cfg.margin
    scale = min((cfg.width - 2 * m) / q_max, (cfg.height - 2 * m) / max(y_hi - y_lo, 1e-9))

    def X(q: float) -> float:
        return m + q * scale

    def Y(v: float) -> float:
        return cfg.height - m - (v - y_lo) * scale

    def poly(points, cls, extra=""):
        coords = " ".join(f"{_f(X(q))},{_f(Y(v))}" for q, v in points)
        return f'<polyline class="{cls}" points="{coords}" fill="none"{extra}/>'

    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        '<svg version="1.1" xmlns="http://www.w3.org/2000/svg" '
        f'width="{cfg.width}" height="{cfg.height}" viewBox="0 0 {cfg.width} {cfg.height}">',
        f"<title>combined graph, xi = {rational_format(graph.xi)}</title>",
        '<rect x="0" y="0" width="100%" height="100%" fill="white"/>',
        f'<clipPath id="plot"><rect x="{m}" y="{m}" width="{cfg.width - 2 * m}" '
        f'height="{cfg.height - 2 * m}"/></clipPath>',
        f'<line class="axis" x1="{_f(X(0))}" y1="{_f(Y(0))}" x2="{_f(X(q_max))}" y2="{_f(Y(0))}" '
        'stroke="black" stroke-width="0.8"/>',
        f'<line class="axis" x1="{_f(X(0))}" y1="{_f(Y(y_lo))}" x2="{_f(X(0))}" y2="{_f(Y(y_hi))}" '
        'stroke="black" stroke-width="0.8"/>',
    ]
    for pts in trajs:
        out.append(poly(pts, "trajectory", ' stroke="gray" stroke-width="0.6" stroke-dasharray="4,3" clip-path="url(#plot)"'))
    out.append(poly(l2, "L2", ' stroke="black" stroke-width="2"'))
    out.append(poly(l1, "L1", ' stroke="black" stroke-width="2"'))
    for n, q in enumerate(graph.q_maxima):
        qf = q.to_float()
        if qf > q_max:
            break
        out.append(f'<circle class="qmax" cx="{_f(X(qf))}" cy="{_f(Y(0))}" r="3" fill="black"/>')
        if cfg.show_q_labels:
            out.append(
                f'<text x="{_f(X(qf))}" y="{_f(Y(0) + 14)}" font-size="11" '
                f'text-anchor="middle">q{n}</text>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"
