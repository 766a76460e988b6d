"""Trajectories of single lattice points.

For ``x = (Q, P)`` the trajectory is

    L_x(q) = max(log|Q| - q, log|Q*xi - P| + q),

the log of the smallest dilation of the body ``|x| <= e^q, |x*xi - y| <= e^-q``
that contains ``x``.  With ``q = 0.5*log(r)`` the falling branch is
``0.5*log(Q**2 / r)`` and the rising branch ``0.5*log(Delta**2 * r)``, so
every value is again a half-log coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .exact import LatticePoint, LogCoord, RationalLike, as_rational


class CrossingError(ValueError):
    pass


@dataclass(frozen=True)
class Trajectory:
    point: LatticePoint
    xi: Fraction
    delta: Fraction = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.point.is_zero():
            raise ValueError("the zero point has no trajectory")
        object.__setattr__(self, "point", self.point.normalized())
        object.__setattr__(self, "xi", as_rational(self.xi))
        object.__setattr__(self, "delta", self.point.error(self.xi))

    @classmethod
    def of(cls, Q: int, P: int, xi: RationalLike) -> "Trajectory":
        return cls(LatticePoint(Q, P), as_rational(xi))

    @property
    def Q(self) -> int:
        return self.point.Q

    @property
    def falling_level(self) -> Optional[LogCoord]:
        """``log|Q|``, absent when ``Q == 0``."""
        return LogCoord.log_of(self.Q) if self.Q else None

    @property
    def rising_level(self) -> Optional[LogCoord]:
        """``log|Q*xi - P|``, absent when the point lies on the line ``y = xi*x``."""
        d = self.delta
        return LogCoord.log_of(d) if d else None

    def falling_at(self, q: LogCoord) -> Optional[LogCoord]:
        return LogCoord(self.Q * self.Q / q.ratio) if self.Q else None

    def rising_at(self, q: LogCoord) -> Optional[LogCoord]:
        d = self.delta
        return LogCoord(d * d * q.ratio) if d else None

    def __call__(self, q: LogCoord) -> LogCoord:
        return evaluate(self, q)

    def final_slope(self) -> int:
        return 1 if self.delta else -1

    def to_json(self) -> dict:
        bp = breakpoint(self)
        return {
            "Q": str(self.point.Q),
            "P": str(self.point.P),
            "breakpoint": bp.to_json() if bp is not None else None,
        }


def evaluate(tr: Trajectory, q: LogCoord) -> LogCoord:
    f, r = tr.falling_at(q), tr.rising_at(q)
    if f is None:
        return r
    if r is None:
        return f
    return f if f >= r else r


def breakpoint(tr: Trajectory) -> Optional[LogCoord]:
    """Abscissa where the two branches meet: ``0.5*log(Q/Delta)``.

    The trajectory's minimum there is ``0.5*log(Q*Delta)``.
    """
    d = tr.delta
    if not tr.Q or not d:
        return None
    return LogCoord(tr.Q / d)


def breakpoint_value(tr: Trajectory) -> Optional[LogCoord]:
    d = tr.delta
    if not tr.Q or not d:
        return None
    return LogCoord(tr.Q * d)


def crossing(rising: Trajectory, falling: Trajectory) -> tuple[LogCoord, LogCoord]:
    """Meeting point of the rising branch of ``rising`` and the falling
    branch of ``falling``.

    ``log Delta_r + q = log Q_f - q`` gives ``q = 0.5*log(Q_f/Delta_r)`` and
    the common value ``0.5*log(Q_f*Delta_r)``.  Raises :class:`CrossingError`
    when a branch is missing or the meeting point is not on those branches.
    """
    d_r = rising.delta
    q_f = falling.Q
    if not d_r:
        raise CrossingError(f"{rising.point} has no rising branch")
    if not q_f:
        raise CrossingError(f"{falling.point} has no falling branch")
    q = LogCoord(q_f / d_r)
    bp_r, bp_f = breakpoint(rising), breakpoint(falling)
    if bp_r is not None and q < bp_r:
        raise CrossingError(f"crossing {q} lies before the breakpoint of {rising.point}")
    if bp_f is not None and q > bp_f:
        raise CrossingError(f"crossing {q} lies after the breakpoint of {falling.point}")
    return q, LogCoord(q_f * d_r)


def dominates(upper: Trajectory, lower: Trajectory) -> bool:
    """True iff ``upper(q) >= lower(q)`` for every ``q >= 0``.

    The difference of two trajectories is piecewise linear with kinks only
    at the two breakpoints, so it suffices to compare at q = 0, at every
    breakpoint with q >= 0, and the slopes at infinity.
    """
    zero = LogCoord(Fraction(1))
    probes = [zero]
    for tr in (upper, lower):
        bp = breakpoint(tr)
        if bp is not None and bp >= zero:
            probes.append(bp)
    if any(evaluate(upper, q) < evaluate(lower, q) for q in probes):
        return False
    return upper.final_slope() >= lower.final_slope()
