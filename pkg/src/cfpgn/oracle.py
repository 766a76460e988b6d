"""Brute-force successive minima by lattice enumeration.

Nothing here touches the envelope construction: the minima are found by
scanning every integer point inside a self-certifying box and ranking the
points by their cost ``max(log|Q| - q, log|Q*xi - P| + q)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from .cf import CheckReport, convergents, expand, normalize, semiconvergents
from .exact import LatticePoint, LogCoord, RationalLike, as_rational


@dataclass(frozen=True)
class MinimaWitness:
    lambda1: LogCoord
    lambda2: LogCoord
    w1: LatticePoint
    w2: LatticePoint

    def to_json(self) -> dict:
        return {
            "lambda1": self.lambda1.to_json(),
            "lambda2": self.lambda2.to_json(),
            "w1": self.w1.to_json(),
            "w2": self.w2.to_json(),
        }


def _cost(Q: int, k: int, b: int, r: Fraction) -> Fraction:
    """Ratio of the cost of ``(Q, P)`` where ``k = Q*a - P*b`` for xi = a/b.

    Cost is ``0.5*log`` of ``max(Q**2 / r, (k/b)**2 * r)``.
    """
    fall = Fraction(Q * Q) / r
    rise = Fraction(k * k, b * b) * r
    return fall if fall >= rise else rise


def _points_within(xi: Fraction, r: Fraction, bound: Fraction) -> Iterator[tuple[Fraction, int, int]]:
    """All ``(cost, Q, P)`` with Q >= 0 (P > 0 when Q = 0) and cost <= bound."""
    a, b = xi.numerator, xi.denominator
    q_cap = math.isqrt(math.floor(r * bound))
    # (Q*a - P*b)**2 <= b**2 * bound / r
    w = math.isqrt(math.floor(Fraction(b * b) * bound / r))
    for Q in range(q_cap + 1):
        qa = Q * a
        p_lo = -((w - qa) // b)  # ceil((qa - w) / b)
        p_hi = (qa + w) // b
        if Q == 0:
            p_lo = max(p_lo, 1)
        for P in range(p_lo, p_hi + 1):
            c = _cost(Q, qa - P * b, b, r)
            if c <= bound:
                yield c, Q, P


def _rank_key(item):
    c, Q, P = item
    return (c, Q, abs(P), P)


def _seed_points(xi: Fraction, r: Fraction) -> list[LatticePoint]:
    table = convergents(expand(normalize(xi)))
    seeds = {LatticePoint(1, 0), LatticePoint(0, 1)}
    limit = 2 * r
    for n in range(-1, table.s):
        x = table.point(n)
        if x.Q <= limit:
            seeds.add(x)
    for n in range(1, table.s):
        for sc in semiconvergents(table, n):
            if sc.point.Q <= limit:
                seeds.add(sc.point)
    return sorted(seeds)


def _pick(cands: list[tuple[Fraction, int, int]]):
    cands.sort(key=_rank_key)
    c1, Q1, P1 = cands[0]
    w1 = LatticePoint(Q1, P1)
    for c, Q, P in cands[1:]:
        if w1.det(LatticePoint(Q, P)) != 0:
            return MinimaWitness(LogCoord(c1), LogCoord(c), w1, LatticePoint(Q, P))
    return None


def brute_minima(
    xi: RationalLike,
    q: LogCoord,
    hint: Optional[LogCoord] = None,
    bound_factor: Fraction = Fraction(1),
) -> MinimaWitness:
    """Exact ``log lambda_1`` and ``log lambda_2`` of the body at ``q``.

    An upper bound for ``lambda_2`` comes from two independent seed points
    (or from ``hint`` when it is large enough); every point of cost below the
    bound lies in a finite box, which is scanned in full.  ``bound_factor``
    enlarges the box, for checking that the answer does not depend on it.
    """
    xi = as_rational(xi)
    r = q.ratio
    if r < 1:
        raise ValueError("brute_minima needs q >= 0")
    a, b = xi.numerator, xi.denominator

    if hint is not None:
        bound = hint.ratio * bound_factor
        found = _pick(list(_points_within(xi, r, bound)))
        if found is not None:
            return found

    seeds = [(_cost(x.Q, x.Q * a - x.P * b, b, r), x.Q, x.P) for x in _seed_points(xi, r)]
    seed_pair = _pick(seeds)
    bound = seed_pair.lambda2.ratio * bound_factor
    found = _pick(list(_points_within(xi, r, bound)))
    assert found is not None, "seed pair lies inside its own bound"
    return found


def check_window_characterization(xi: RationalLike, n: int) -> CheckReport:
    """Scan every ``(Q, P)`` with ``Q, P >= 0``, ``Q_{n-2} <= Q <= Q_n``,
    ``|Q*xi - P| <= Delta_{n-2}`` and ``Q*P_{n-1} - Q_{n-1}*P != 0`` and
    compare with the points ``x_{n,t}``, t = 0..a_n."""
    xi = normalize(xi)
    table = convergents(expand(xi))
    rep = CheckReport(f"window_characterization[n={n}]")
    if not 1 <= n < table.s:
        raise IndexError(f"n={n} out of range 1..{table.s - 1}")
    a, b = xi.numerator, xi.denominator
    lo, hi = table.Q(n - 2), table.Q(n)
    window = table.delta(n - 2)
    w = math.floor(window * b)  # |Q*a - P*b| <= w
    pn1 = table.point(n - 1)
    found = set()
    for Q in range(lo, hi + 1):
        qa = Q * a
        p_lo = max(0, -((w - qa) // b))
        for P in range(p_lo, (qa + w) // b + 1):
            x = LatticePoint(Q, P)
            if x.det(pn1) != 0:
                found.add(x)
    expected = {sc.point for sc in semiconvergents(table, n)}
    if found != expected:
        rep.fail(
            xi=f"{xi.numerator}/{xi.denominator}",
            n=n,
            extra=[x.to_json() for x in sorted(found - expected)],
            missing=[x.to_json() for x in sorted(expected - found)],
        )
    return rep


def check_no_better_point(xi: RationalLike, q_bound: int) -> CheckReport:
    """Certify that no nonzero ``(Q, P)`` with ``|Q| <= q_bound`` has
    ``|Q*xi - P| < Delta_{s-2}`` while being independent of ``x_{s-1}``."""
    xi = normalize(xi)
    table = convergents(expand(xi))
    rep = CheckReport("no_better_point")
    s = table.s
    if s == 1:
        rep.notes.append("s = 1: scanned against Delta_{-1} = 1")
    if q_bound < table.Q(s - 1):
        raise ValueError(f"q_bound must be at least Q_(s-1) = {table.Q(s - 1)}")
    a, b = xi.numerator, xi.denominator
    window = table.delta(s - 2) * b  # strict: |Q*a - P*b| < window
    w = math.ceil(window) - 1
    last = table.point(s - 1)
    # (Q, P) and (-Q, -P) are symmetric
    for Q in range(0, q_bound + 1):
        qa = Q * a
        p_lo = -((w - qa) // b)
        p_hi = (qa + w) // b
        if Q == 0:
            p_lo = max(p_lo, 1)
        for P in range(p_lo, p_hi + 1):
            x = LatticePoint(Q, P)
            if x.det(last) != 0:
                return rep.fail(point=x.to_json(), error=str(x.error(xi)), bound=str(table.delta(s - 2)))
    return rep
