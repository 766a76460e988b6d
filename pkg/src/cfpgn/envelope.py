"""Exact construction of the combined graph of the two successive minima.

``L1`` is the lower envelope of the convergent trajectories; on each
interval ``[q_{n-1}, q_n]`` between consecutive local maxima of ``L1``,
``L2`` is the lower envelope of the trajectories of ``x_{n,0}, ..., x_{n,a_n}``.
For rational xi both functions end in a ray: ``L1`` follows ``x_{s-1}`` down
and ``L2`` follows ``x_{s-2}`` up.
"""

from __future__ import annotations

import bisect
import os
from dataclasses import dataclass, field, replace
from functools import cached_property
from fractions import Fraction
from typing import Optional, Sequence, Union

from .cf import (
    CFExpansion,
    ConvergentTable,
    convergents,
    expand,
    reconstruct,
    semiconvergents,
)
from .exact import ZERO, LatticePoint, LogCoord, RationalLike, as_rational, rational_format
from .trajectory import Trajectory, breakpoint, crossing, evaluate

DEFAULT_DEPTH = 64
EXCEEDS_DEPTH = "exceeds depth"


class GraphError(ValueError):
    pass


def default_depth() -> int:
    env = os.environ.get("CFPGN_DEPTH")
    if env:
        depth = int(env)
        if depth < 0:
            raise GraphError(f"CFPGN_DEPTH must be >= 0, got {depth}")
        return depth
    return DEFAULT_DEPTH


@dataclass(frozen=True)
class Vertex:
    q: LogCoord
    v: LogCoord
    # owner of the segment that starts here (the tail ray for the last vertex)
    owner: Optional[LatticePoint]

    def to_json(self) -> dict:
        return {
            "q": self.q.to_json(),
            "v": self.v.to_json(),
            "owner": self.owner.to_json() if self.owner is not None else None,
        }


def segment_slope(a: Vertex, b: Vertex) -> int:
    """+1 or -1; anything else means the slope invariant is broken."""
    qa, qb, va, vb = a.q.ratio, b.q.ratio, a.v.ratio, b.v.ratio
    # v_b / v_a == (q_b / q_a) ** slope, cross-multiplied
    if vb.numerator * va.denominator * qa.numerator * qb.denominator == (
        va.numerator * vb.denominator * qb.numerator * qa.denominator
    ):
        return 1
    if vb.numerator * va.denominator * qb.numerator * qa.denominator == (
        va.numerator * vb.denominator * qa.numerator * qb.denominator
    ):
        return -1
    return 0


@dataclass(frozen=True)
class PiecewiseLinear:
    vertices: tuple[Vertex, ...]
    # slope of the ray after the last vertex; None when truncated there
    tail_slope: Optional[int]

    @property
    def truncated(self) -> bool:
        return self.tail_slope is None

    @property
    def q_end(self) -> LogCoord:
        return self.vertices[-1].q

    @cached_property
    def _slopes(self) -> tuple[int, ...]:
        return tuple(segment_slope(a, b) for a, b in zip(self.vertices, self.vertices[1:]))

    @cached_property
    def _ratios(self) -> list[Fraction]:
        return [v.q.ratio for v in self.vertices]

    def slopes(self) -> list[int]:
        return list(self._slopes)

    @property
    def initial_slope(self) -> Optional[int]:
        if len(self.vertices) > 1:
            return self._slopes[0]
        return self.tail_slope

    def abscissae(self) -> list[LogCoord]:
        return [v.q for v in self.vertices]

    def _locate(self, q: LogCoord) -> int:
        """Index of the last vertex with abscissa <= q."""
        i = bisect.bisect_right(self._ratios, q.ratio) - 1
        if i < 0:
            raise GraphError(f"{q} lies before the start of the graph")
        return i

    def index_range(self, lo: LogCoord, hi: LogCoord) -> range:
        """Indices of the vertices with ``lo < q < hi``."""
        return range(
            bisect.bisect_right(self._ratios, lo.ratio),
            bisect.bisect_left(self._ratios, hi.ratio),
        )

    def __call__(self, q: LogCoord) -> LogCoord:
        i = self._locate(q)
        a = self.vertices[i]
        if q == a.q:
            return a.v
        if i + 1 < len(self.vertices):
            slope = self._slopes[i]
        elif self.tail_slope is not None:
            slope = self.tail_slope
        else:
            raise GraphError(f"{q} lies beyond the truncated end {self.q_end}")
        step = q - a.q
        return a.v + step if slope > 0 else a.v - step

    def slope_right(self, q: LogCoord) -> Optional[int]:
        i = self._locate(q)
        if i + 1 < len(self.vertices):
            return self._slopes[i]
        return self.tail_slope

    def slope_left(self, q: LogCoord) -> Optional[int]:
        i = bisect.bisect_left(self._ratios, q.ratio)
        if i == 0:
            return None
        if i >= len(self.vertices):
            return self.tail_slope
        return self._slopes[i - 1]

    def owner_at(self, q: LogCoord) -> Optional[LatticePoint]:
        return self.vertices[self._locate(q)].owner

    def owners(self) -> list[LatticePoint]:
        return [v.owner for v in self.vertices if v.owner is not None]

    def to_json(self) -> list[dict]:
        return [v.to_json() for v in self.vertices]


# ---------------------------------------------------------------------------
# lower envelopes of trajectory families


def _takeover(new: Trajectory, old: Trajectory) -> Union[str, LogCoord]:
    """First q from which ``new <= old`` holds for good.

    Requires ``Q_new >= Q_old`` and ``Delta_new <= Delta_old``; then the
    rising branch of ``new`` never exceeds ``old`` and the set where
    ``new <= old`` is a ray ``[c, oo)``.  Returns ``"always"``, ``"never"``
    or ``c``.
    """
    if new.Q < old.Q or new.delta > old.delta:
        raise GraphError(f"trajectories out of order: {old.point} then {new.point}")
    if new.Q == old.Q:
        return "always"
    if not old.delta:
        return "never"
    return LogCoord(new.Q / old.delta)


def ordered_envelope(
    trajs: Sequence[Trajectory], lo: LogCoord, hi: Optional[LogCoord]
) -> list[tuple[LogCoord, Optional[LogCoord], Trajectory]]:
    """Lower envelope on ``[lo, hi]`` (``hi=None`` for infinity) of
    trajectories ordered by increasing Q and decreasing error.

    Returns pieces ``(start, end, owner)``.  Each new trajectory wins on a
    final ray, so pieces are popped off the right end like a stack.
    """
    env: list[list] = [[lo, hi, trajs[0]]]
    for new in trajs[1:]:
        start = None
        while env:
            a, b, old = env[-1]
            c = _takeover(new, old)
            if c == "always" or (c != "never" and c <= a):
                env.pop()
                start = a
                continue
            if c != "never" and (b is None or c < b):
                env[-1][1] = c
                start = c
            else:
                start = b
            break
        if not env:
            start = lo
        if start is not None and (hi is None or start < hi):
            env.append([start, hi, new])
    return [tuple(p) for p in env]


def pieces_to_vertices(
    pieces: Sequence[tuple[LogCoord, Optional[LogCoord], Trajectory]],
) -> tuple[list[Vertex], Optional[LogCoord]]:
    """Vertex list for consecutive pieces, splitting each piece at its
    owner's breakpoint.  Zero-length pieces collapse."""
    verts: list[Vertex] = []

    def push(q: LogCoord, tr: Optional[Trajectory]):
        owner = tr.point if tr is not None else None
        if verts and verts[-1].q == q:
            verts[-1] = Vertex(q, verts[-1].v, owner)
        else:
            value = evaluate(tr, q) if tr is not None else verts[-1].v
            verts.append(Vertex(q, value, owner))

    end = None
    for start, stop, tr in pieces:
        if stop is not None and not start < stop:
            continue
        push(start, tr)
        bp = breakpoint(tr)
        if bp is not None and start < bp and (stop is None or bp < stop):
            push(bp, tr)
        end = stop
    return verts, end


def _finish(verts: list[Vertex], end: Optional[LogCoord], last: Trajectory, tail: bool) -> PiecewiseLinear:
    if tail:
        return PiecewiseLinear(tuple(verts), last.final_slope())
    value = evaluate(last, end)
    if verts[-1].q == end:
        verts[-1] = Vertex(end, verts[-1].v, None)
    else:
        verts.append(Vertex(end, value, None))
    return PiecewiseLinear(tuple(verts), None)


# ---------------------------------------------------------------------------
# the combined graph


@dataclass(frozen=True)
class CombinedGraph:
    xi: Fraction
    L1: PiecewiseLinear
    L2: PiecewiseLinear
    q_maxima: tuple[LogCoord, ...]
    interval_max_counts: tuple[int, ...]
    s_detected: Union[int, str]
    truncated: bool
    table: ConvergentTable = field(repr=False)

    @property
    def intervals(self) -> int:
        return len(self.q_maxima) - 1

    def owner_trajectories(self) -> list[Trajectory]:
        seen: dict[LatticePoint, None] = {}
        for v in (*self.L1.vertices, *self.L2.vertices):
            if v.owner is not None:
                seen.setdefault(v.owner)
        return [Trajectory(p, self.xi) for p in seen]

    def to_json(self) -> dict:
        return {
            "xi": rational_format(self.xi),
            "L1": self.L1.to_json(),
            "L2": self.L2.to_json(),
            "q_maxima": [q.to_json() for q in self.q_maxima],
            "counts": list(self.interval_max_counts),
            "truncated": self.truncated,
            "s": self.s_detected,
            "trajectories": [tr.to_json() for tr in self.owner_trajectories()],
        }


def build_graph(xi: RationalLike, depth: Optional[int] = None) -> CombinedGraph:
    """Combined graph of ``xi`` in [0, 1/2], with at most ``depth`` intervals
    between local maxima of ``L1`` (default 64, or ``$CFPGN_DEPTH``)."""
    xi = as_rational(xi)
    if depth is None:
        depth = default_depth()
    if depth < 1:
        raise GraphError(f"depth must be at least 1, got {depth}")
    cf = expand(xi)
    table = convergents(cf)
    s = table.s
    n_int = min(s - 1, depth)
    truncated = s - 1 > depth

    def traj(n: int) -> Trajectory:
        return Trajectory(table.point(n), xi)

    q_max = [ZERO]
    for n in range(1, n_int + 1):
        q_max.append(crossing(traj(n - 1), traj(n))[0])

    l1_pieces = []
    l2_pieces = []
    for n in range(1, n_int + 1):
        lo, hi = q_max[n - 1], q_max[n]
        l1_pieces.append((lo, hi, traj(n - 1)))
        family = [Trajectory(sc.point, xi) for sc in semiconvergents(table, n)]
        l2_pieces.extend(ordered_envelope(family, lo, hi))

    if truncated:
        end = q_max[-1]
        v1, _ = pieces_to_vertices(l1_pieces)
        v2, _ = pieces_to_vertices(l2_pieces)
        L1 = _finish(v1, end, l1_pieces[-1][2], tail=False)
        L2 = _finish(v2, end, l2_pieces[-1][2], tail=False)
    else:
        last = q_max[-1]
        tail1, tail2 = traj(s - 1), traj(s - 2)
        v1, _ = pieces_to_vertices([*l1_pieces, (last, None, tail1)])
        v2, _ = pieces_to_vertices([*l2_pieces, (last, None, tail2)])
        L1 = _finish(v1, None, tail1, tail=True)
        L2 = _finish(v2, None, tail2, tail=True)

    graph = CombinedGraph(
        xi=xi,
        L1=L1,
        L2=L2,
        q_maxima=tuple(q_max),
        interval_max_counts=(),
        s_detected=EXCEEDS_DEPTH if truncated else s,
        truncated=truncated,
        table=table,
    )
    counts = tuple(len(interval_local_maxima(graph, n)) for n in range(1, n_int + 1))
    return replace(graph, interval_max_counts=counts)


# ---------------------------------------------------------------------------
# reading the graph back


def l1_local_maxima(graph: CombinedGraph) -> list[LogCoord]:
    """Local maxima of L1 on [0, oo), read off the vertex slopes alone.

    For a truncated graph the cut point, which is where the construction
    stopped on a maximum, is included.
    """
    L1 = graph.L1
    out = []
    if L1.initial_slope == -1:
        out.append(L1.vertices[0].q)
    slopes = L1.slopes()
    if L1.tail_slope is not None:
        slopes.append(L1.tail_slope)
    for i in range(1, len(L1.vertices)):
        left = slopes[i - 1]
        right = slopes[i] if i < len(slopes) else None
        if left == 1 and (right == -1 or (right is None and L1.truncated)):
            out.append(L1.vertices[i].q)
    return out


def interval_local_maxima(graph: CombinedGraph, n: int) -> list[tuple[LogCoord, LogCoord]]:
    """Local maxima of L2 restricted to ``[q_{n-1}, q_n]``.

    Slope rule: an interior vertex counts when the slope turns from +1 to
    -1, the left end when L2 leaves it with slope -1, the right end when L2
    arrives with slope +1.
    """
    if not 1 <= n <= graph.intervals:
        raise IndexError(f"interval {n} out of range 1..{graph.intervals}")
    lo, hi = graph.q_maxima[n - 1], graph.q_maxima[n]
    L2 = graph.L2
    out = []
    if L2.slope_right(lo) == -1:
        out.append((lo, L2(lo)))
    slopes = L2.slopes()
    for i in L2.index_range(lo, hi):
        if i == 0:
            continue
        right = slopes[i] if i < len(slopes) else L2.tail_slope
        if slopes[i - 1] == 1 and right == -1:
            v = L2.vertices[i]
            out.append((v.q, v.v))
    if L2.slope_left(hi) == 1:
        out.append((hi, L2(hi)))
    return out


class DecodeError(ValueError):
    pass


def decode(graph: CombinedGraph) -> CFExpansion:
    """Read ``[0; a_1, ..., a_{s-1}]`` off the combined graph.

    ``s`` is the number of local maxima of L1 and ``a_n`` the number of
    local maxima of L2 on ``[q_{n-1}, q_n]``.  A truncated graph yields the
    known prefix, flagged partial.
    """
    maxima = l1_local_maxima(graph)
    if not maxima or maxima[0] != ZERO:
        raise DecodeError("L1 has no local maximum at q = 0")
    view = replace(graph, q_maxima=tuple(maxima))
    counts = [len(interval_local_maxima(view, n)) for n in range(1, len(maxima))]
    if graph.truncated:
        return CFExpansion(tuple(counts), reconstruct(counts), partial=True)
    if counts and counts[-1] < 2:
        raise DecodeError(f"decoded expansion {counts} is not canonical")
    if any(a < 1 for a in counts):
        raise DecodeError(f"empty interval in decoded expansion {counts}")
    return CFExpansion(tuple(counts), reconstruct(counts))


def evaluate_graph(graph: CombinedGraph, q: LogCoord) -> tuple[LogCoord, LogCoord]:
    if q < ZERO:
        raise GraphError("the graph is defined for q >= 0 only")
    return graph.L1(q), graph.L2(q)
