"""Property checks over one xi and a differential fuzzer over many.

Every check produces a :class:`CheckReport`; a failing one carries a
concrete counterexample.  JSON output is deterministic: timings are kept
on the report object but left out of the serialized form.
"""

from __future__ import annotations

import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional

from .cf import (
    CheckReport,
    ConvergentTable,
    check_delta_formula,
    check_facts,
    check_semiconvergent_chains,
    convergents,
    expand,
    normalize,
    reconstruct,
    semiconvergents,
)
from .envelope import (
    CombinedGraph,
    DecodeError,
    build_graph,
    decode,
    evaluate_graph,
    interval_local_maxima,
    l1_local_maxima,
)
from .exact import ZERO, LogCoord, RationalLike, as_rational, rational_format
from .oracle import brute_minima, check_no_better_point, check_window_characterization
from .trajectory import Trajectory, dominates

BAND_LOW = Fraction(1, 4)
BAND_HIGH = Fraction(1)


@dataclass
class VerifyReport:
    xi: Fraction
    checks: list[CheckReport]
    seed: int = 0
    elapsed: float = 0.0
    decoded: Optional[tuple[int, ...]] = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[CheckReport]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {
            "xi": rational_format(self.xi),
            "normalized": rational_format(normalize(self.xi)),
            "seed": self.seed,
            "passed": self.passed,
            "decoded": None if self.decoded is None else [str(a) for a in self.decoded],
            "checks": [c.to_json() for c in self.checks],
        }

    def to_json_line(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))


def _lc(q: LogCoord) -> str:
    return rational_format(q.ratio)


def _all(name: str, reports: Iterable[CheckReport]) -> CheckReport:
    """Fold per-index reports into one, keeping the first counterexample."""
    out = CheckReport(name)
    for rep in reports:
        if not rep.passed:
            out.fail(where=rep.name, **(rep.failure or {}))
            out.notes.extend(rep.notes)
            return out
    return out


# ---------------------------------------------------------------------------
# individual checks


def check_cf_roundtrip(xi: Fraction) -> CheckReport:
    rep = CheckReport("cf_roundtrip")
    cf = expand(xi)
    if reconstruct(cf.quotients) != xi:
        return rep.fail(quotients=list(cf.quotients), value=rational_format(reconstruct(cf.quotients)))
    if cf.s >= 2 and (cf.quotients[-1] < 2 or cf.quotients[0] < 2):
        return rep.fail(quotients=list(cf.quotients), detail="not canonical")
    return rep


def check_chains(table: ConvergentTable) -> CheckReport:
    return _all("semiconvergent_chains", (check_semiconvergent_chains(table, n) for n in range(1, table.s)))


def check_characterizations(xi: Fraction, table: ConvergentTable) -> CheckReport:
    return _all(
        "window_characterization",
        (check_window_characterization(xi, n) for n in range(1, table.s)),
    )


def check_dominance(table: ConvergentTable) -> CheckReport:
    """Semiconvergent trajectories lie above the trajectory of x_{n-1}."""
    rep = CheckReport("dominance_semiconvergents")
    xi = table.xi
    for n in range(1, table.s):
        lower = Trajectory(table.point(n - 1), xi)
        for sc in semiconvergents(table, n)[1:-1]:
            if not dominates(Trajectory(sc.point, xi), lower):
                return rep.fail(n=n, t=sc.t, upper=sc.point.to_json(), lower=lower.point.to_json())
    if not dominates(Trajectory(table.point(-1), xi), Trajectory(table.point(0), xi)):
        return rep.fail(detail="x_{-1} does not dominate x_0")
    return rep


def sample_abscissae(graph: CombinedGraph, per_segment: int = 1) -> list[LogCoord]:
    """Every vertex abscissa of L1 and L2, ``per_segment`` interior points
    between consecutive ones, and points on the tail rays."""
    qs = sorted({v.q for v in (*graph.L1.vertices, *graph.L2.vertices)}, key=lambda c: c.ratio)
    out = list(qs)
    for a, b in zip(qs, qs[1:]):
        step = (b.ratio - a.ratio) / (per_segment + 1)
        out.extend(LogCoord(a.ratio + k * step) for k in range(1, per_segment + 1))
    if not graph.truncated:
        last = qs[-1].ratio
        out.extend(LogCoord(last * 2 ** k) for k in range(1, max(per_segment, 1) + 1))
    return sorted(out, key=lambda c: c.ratio)


def check_oracle_equivalence(graph: CombinedGraph, per_segment: int = 1) -> CheckReport:
    """Brute-force minima equal the graph values at every sample."""
    rep = CheckReport("oracle_equivalence")
    qs = sample_abscissae(graph, per_segment)
    for q in qs:
        w = brute_minima(graph.xi, q)
        l1, l2 = evaluate_graph(graph, q)
        if w.lambda1 != l1 or w.lambda2 != l2:
            return rep.fail(
                q=_lc(q), graph_L1=_lc(l1), graph_L2=_lc(l2),
                oracle_L1=_lc(w.lambda1), oracle_L2=_lc(w.lambda2),
                w1=w.w1.to_json(), w2=w.w2.to_json(),
            )
        if w.w1.det(w.w2) == 0:
            return rep.fail(q=_lc(q), detail="dependent witnesses")
    rep.notes.append(f"{len(qs)} samples")
    return rep


def check_owner_cover(graph: CombinedGraph) -> CheckReport:
    """Every segment of the graph lies on the trajectory of a convergent or
    a semiconvergent."""
    rep = CheckReport("owner_cover")
    table = graph.table
    allowed = set(table.points())
    for n in range(1, table.s):
        allowed.update(sc.point for sc in semiconvergents(table, n))
    for name, L in (("L1", graph.L1), ("L2", graph.L2)):
        for v in L.vertices:
            if v.owner is not None and v.owner not in allowed:
                return rep.fail(curve=name, q=_lc(v.q), owner=v.owner.to_json())
    return rep


def check_slopes(graph: CombinedGraph) -> CheckReport:
    rep = CheckReport("slope_invariant")
    for name, L in (("L1", graph.L1), ("L2", graph.L2)):
        qs = [v.q.ratio for v in L.vertices]
        if any(not a < b for a, b in zip(qs, qs[1:])):
            return rep.fail(curve=name, detail="abscissae not strictly increasing")
        for i, sl in enumerate(L.slopes()):
            if sl not in (1, -1):
                return rep.fail(curve=name, segment=i, q=_lc(L.vertices[i].q))
    return rep


def _union_abscissae(graph: CombinedGraph) -> list[LogCoord]:
    return sorted({v.q for v in (*graph.L1.vertices, *graph.L2.vertices)}, key=lambda c: c.ratio)


def check_order_and_band(graph: CombinedGraph) -> tuple[CheckReport, CheckReport]:
    """L1 <= L2, and L1 + L2 within [-log 2, 0] (ratios [1/4, 1])."""
    order = CheckReport("l1_below_l2")
    band = CheckReport("minkowski_band")
    qs = _union_abscissae(graph)
    if not graph.truncated:
        qs.append(LogCoord(qs[-1].ratio * 2))
    for q in qs:
        l1, l2 = evaluate_graph(graph, q)
        if l1 > l2:
            order.fail(q=_lc(q), L1=_lc(l1), L2=_lc(l2))
        total = (l1 + l2).ratio
        if not BAND_LOW <= total <= BAND_HIGH:
            band.fail(q=_lc(q), sum_ratio=rational_format(total))
    return order, band


def check_touch(graph: CombinedGraph) -> CheckReport:
    rep = CheckReport("touch_at_maxima")
    for n, q in enumerate(graph.q_maxima):
        l1, l2 = evaluate_graph(graph, q)
        if l1 != l2:
            return rep.fail(n=n, q=_lc(q), L1=_lc(l1), L2=_lc(l2))
    return rep


def check_qn_formula(graph: CombinedGraph) -> CheckReport:
    """q_n = (log Q_n - log Delta_{n-1}) / 2 and the maxima read off L1
    coincide with the constructed ones."""
    rep = CheckReport("q_n_formula")
    table = graph.table
    if graph.q_maxima[0] != ZERO:
        return rep.fail(n=0, q=_lc(graph.q_maxima[0]))
    for n in range(1, len(graph.q_maxima)):
        want = Fraction(table.Q(n)) / table.delta(n - 1)
        if graph.q_maxima[n].ratio != want:
            return rep.fail(n=n, q=_lc(graph.q_maxima[n]), expected=rational_format(want))
    seen = l1_local_maxima(graph)
    if list(seen) != list(graph.q_maxima):
        return rep.fail(detail="L1 maxima differ", read=[_lc(q) for q in seen],
                        built=[_lc(q) for q in graph.q_maxima])
    return rep


def check_middle_intervals(graph: CombinedGraph) -> CheckReport:
    """For 2 <= n <= s-2 all maxima of L2 on [q_{n-1}, q_n] are interior
    and q_n is a local minimum of L2."""
    rep = CheckReport("middle_interval_structure")
    s = graph.table.s
    last = graph.intervals if graph.truncated else s - 2
    for n in range(2, last + 1):
        lo, hi = graph.q_maxima[n - 1], graph.q_maxima[n]
        for q, _ in interval_local_maxima(graph, n):
            if not lo < q < hi:
                return rep.fail(n=n, q=_lc(q), detail="maximum at an interval end")
        if n < graph.intervals or not graph.truncated:
            if graph.L2.slope_left(hi) != -1 or graph.L2.slope_right(hi) != 1:
                return rep.fail(n=n, q=_lc(hi), detail="q_n is not a local minimum of L2")
    return rep


def check_decode(graph: CombinedGraph, xi: Fraction) -> tuple[CheckReport, Optional[tuple[int, ...]]]:
    rep = CheckReport("decode_roundtrip")
    try:
        got = decode(graph)
    except DecodeError as exc:
        return rep.fail(error=str(exc)), None
    want = expand(xi).quotients
    if graph.truncated:
        ok = got.quotients == want[: len(got.quotients)]
    else:
        ok = got.quotients == want and got.value == xi
    if not ok:
        rep.fail(decoded=list(got.quotients), expanded=list(want))
    return rep, got.quotients


# ---------------------------------------------------------------------------


def verify_one(
    xi: RationalLike,
    samples: int = 1,
    oracle_bound: Optional[int] = None,
    seed: int = 0,
    depth: Optional[int] = None,
) -> VerifyReport:
    """Run every check on ``||xi||``.

    ``samples`` is the number of interior oracle samples per segment and
    ``oracle_bound`` the |Q| range of the no-better-point scan (default
    ``10 * Q_{s-1}``).
    """
    t0 = time.perf_counter()
    raw = as_rational(xi)
    x = normalize(raw)
    table = convergents(expand(x))
    bound = oracle_bound if oracle_bound is not None else 10 * table.Q(table.s - 1)
    graph = build_graph(x, depth)

    checks = [
        check_cf_roundtrip(x),
        check_facts(table),
        check_delta_formula(table),
        check_chains(table),
        check_characterizations(x, table),
        check_no_better_point(x, max(bound, table.Q(table.s - 1))),
        check_dominance(table),
        check_oracle_equivalence(graph, samples),
        check_owner_cover(graph),
        check_slopes(graph),
        *check_order_and_band(graph),
        check_touch(graph),
        check_qn_formula(graph),
        check_middle_intervals(graph),
    ]
    dec, decoded = check_decode(graph, x)
    checks.append(dec)
    return VerifyReport(raw, checks, seed, time.perf_counter() - t0, decoded)


def reduced_population(max_den: int) -> list[Fraction]:
    """All reduced fractions in [0, 1/2] with denominator <= max_den, sorted."""
    out = {Fraction(p, q) for q in range(1, max_den + 1) for p in range(0, q // 2 + 1) if gcd(p, q) == 1}
    return sorted(out)


def sample_rationals(max_den: int, count: Optional[int], seed: int) -> list[Fraction]:
    """``count`` distinct reduced fractions in [0, 1/2], uniform by rejection,
    or the whole population when ``count`` is None or at least its size."""
    if max_den < 1:
        raise ValueError("max_den must be positive")
    population = reduced_population(max_den)
    if count is None or count >= len(population):
        return population
    rng = random.Random(seed)
    picked: set[Fraction] = set()
    while len(picked) < count:
        q = rng.randint(1, max_den)
        p = rng.randint(0, max_den // 2)
        if 2 * p > q or gcd(p, q) != 1:
            continue
        picked.add(Fraction(p, q))
    return sorted(picked)


@dataclass
class FuzzSummary:
    reports: list[VerifyReport] = field(default_factory=list)

    @property
    def total(self) -> int:
        return len(self.reports)

    @property
    def failed(self) -> list[VerifyReport]:
        return [r for r in self.reports if not r.passed]

    @property
    def exit_status(self) -> int:
        return 1 if self.failed else 0

    def failure_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for r in self.reports:
            for c in r.failures:
                counts[c.name] = counts.get(c.name, 0) + 1
        return dict(sorted(counts.items()))

    def table(self) -> str:
        lines = [f"{'xi':>12}  {'quotients':<28} status"]
        for r in self.reports:
            quot = "[0;" + ",".join(map(str, r.decoded)) + "]" if r.decoded else "[0]"
            status = "ok" if r.passed else "FAIL " + ",".join(c.name for c in r.failures)
            lines.append(f"{rational_format(r.xi):>12}  {quot:<28} {status}")
        lines.append(f"{self.total} rationals, {len(self.failed)} with failures")
        for name, k in self.failure_counts().items():
            lines.append(f"  {name}: {k}")
        return "\n".join(lines)


def _verify_task(args):
    xi, samples, seed = args
    return verify_one(xi, samples=samples, seed=seed)


def fuzz(
    max_den: int,
    count: Optional[int] = None,
    seed: int = 0,
    samples: int = 1,
    jobs: int = 1,
) -> FuzzSummary:
    xs = sample_rationals(max_den, count, seed)
    tasks = [(x, samples, seed) for x in xs]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_verify_task, tasks, chunksize=8))
    else:
        reports = [_verify_task(t) for t in tasks]
    return FuzzSummary(reports)
