"""Continued fractions of numbers in [0, 1/2]: expansion, convergents,
semiconvergents and the monotone chains relating them."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .exact import LatticePoint, RationalLike, as_rational, rational_format

HALF = Fraction(1, 2)


class Unbounded:
    """Marker for ``Q_s`` when the expansion is finite (``Q_s = infinity``)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __gt__(self, other):
        return not isinstance(other, Unbounded)

    def __ge__(self, other):
        return True

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return isinstance(other, Unbounded)

    def __repr__(self):
        return "UNBOUNDED"


UNBOUNDED = Unbounded()


def normalize(xi: RationalLike) -> Fraction:
    """Distance from ``xi`` to the nearest integer.

    >>> normalize(Fraction(-4, 7))
    Fraction(3, 7)
    """
    xi = as_rational(xi)
    frac = xi - (xi.numerator // xi.denominator)
    return min(frac, 1 - frac)


def nearest_integer_decomposition(xi: RationalLike) -> tuple[int, int, Fraction]:
    """Return ``(m, eps, d)`` with ``xi = m + eps * d`` and ``d = ||xi||``.

    The lattice map ``(x, y) -> (x, eps * (y - m * x))`` sends the body for
    ``xi`` onto the body for ``d`` and preserves the integer lattice.
    """
    xi = as_rational(xi)
    d = normalize(xi)
    fl = xi.numerator // xi.denominator
    if xi - fl == d:
        return fl, 1, d
    return fl + 1, -1, d


@dataclass(frozen=True)
class CFExpansion:
    """``value = [0; a_1, ..., a_{s-1}]`` in canonical form."""

    quotients: tuple[int, ...]
    value: Fraction
    partial: bool = False

    @property
    def s(self) -> int:
        return len(self.quotients) + 1

    def a(self, n: int) -> int:
        if not 1 <= n <= len(self.quotients):
            raise IndexError(f"partial quotient a_{n} out of range 1..{len(self.quotients)}")
        return self.quotients[n - 1]

    def __str__(self):
        if not self.quotients:
            return "[0]"
        return "[0;" + ",".join(map(str, self.quotients)) + "]"

    def to_json(self) -> dict:
        return {
            "value": rational_format(self.value),
            "quotients": [str(a) for a in self.quotients],
            "s": self.s,
            "partial": self.partial,
        }


def reconstruct(quotients: Sequence[int]) -> Fraction:
    """Evaluate ``[0; a_1, ..., a_k]`` exactly."""
    x = Fraction(0)
    for a in reversed(quotients):
        x = 1 / (a + x)
    return x


def canonical_quotients(quotients: Sequence[int]) -> tuple[int, ...]:
    qs = [int(a) for a in quotients]
    if any(a < 1 for a in qs):
        raise ValueError(f"partial quotients must be positive: {qs}")
    if len(qs) >= 2 and qs[-1] == 1:
        qs[-2] += 1
        qs.pop()
    return tuple(qs)


def from_quotients(quotients: Sequence[int]) -> CFExpansion:
    """Build the expansion of the rational ``[0; a_1, ..., a_N]``.

    A trailing quotient 1 is merged into its predecessor.  The value must
    lie in [0, 1/2], which forces ``a_1 >= 2``.
    """
    qs = canonical_quotients(quotients)
    value = reconstruct(qs)
    if value > HALF:
        raise ValueError(f"[0;{','.join(map(str, qs))}] = {value} exceeds 1/2")
    return CFExpansion(qs, value)


def expand(xi_norm: RationalLike) -> CFExpansion:
    xi = as_rational(xi_norm)
    if not 0 <= xi <= HALF:
        raise ValueError(f"expand needs a value in [0, 1/2], got {xi}")
    qs = []
    num, den = xi.numerator, xi.denominator
    # Euclid on den/num: the integer part of xi is 0
    while num:
        a, r = divmod(den, num)
        qs.append(a)
        num, den = r, num
    return CFExpansion(canonical_quotients(qs), xi)


@dataclass(frozen=True)
class Semiconvergent:
    n: int
    t: int
    point: LatticePoint
    delta: Fraction


@dataclass(frozen=True)
class ConvergentTable:
    """Convergents ``x_n = (Q_n, P_n)`` and errors ``Delta_n`` for n = -1..s-1."""

    cf: CFExpansion
    Qs: tuple[int, ...]
    Ps: tuple[int, ...]
    deltas: tuple[Fraction, ...]

    @property
    def xi(self) -> Fraction:
        return self.cf.value

    @property
    def s(self) -> int:
        return self.cf.s

    def _idx(self, n: int) -> int:
        if not -1 <= n < self.s:
            raise IndexError(f"convergent index {n} out of range -1..{self.s - 1}")
        return n + 1

    def Q(self, n: int):
        if n == self.s:
            return UNBOUNDED
        return self.Qs[self._idx(n)]

    def P(self, n: int) -> int:
        return self.Ps[self._idx(n)]

    def point(self, n: int) -> LatticePoint:
        i = self._idx(n)
        return LatticePoint(self.Qs[i], self.Ps[i])

    def delta(self, n: int) -> Fraction:
        return self.deltas[self._idx(n)]

    def points(self) -> list[LatticePoint]:
        return [LatticePoint(q, p) for q, p in zip(self.Qs, self.Ps)]

    def to_json(self) -> dict:
        return {
            "xi": rational_format(self.xi),
            "quotients": [str(a) for a in self.cf.quotients],
            "convergents": [
                {"n": n, "Q": str(self.Qs[n + 1]), "P": str(self.Ps[n + 1]),
                 "delta": rational_format(self.deltas[n + 1])}
                for n in range(-1, self.s)
            ],
        }


def convergents(cf: CFExpansion) -> ConvergentTable:
    Qs, Ps = [0, 1], [1, 0]
    for a in cf.quotients:
        Qs.append(Qs[-2] + a * Qs[-1])
        Ps.append(Ps[-2] + a * Ps[-1])
    xi = cf.value
    deltas = tuple(abs(q * xi - p) for q, p in zip(Qs, Ps))
    return ConvergentTable(cf, tuple(Qs), tuple(Ps), deltas)


def table_for(xi: RationalLike) -> ConvergentTable:
    """Convergent table of ``||xi||``."""
    return convergents(expand(normalize(xi)))


def semiconvergents(table: ConvergentTable, n: int) -> list[Semiconvergent]:
    """``x_{n,t} = x_{n-2} + t x_{n-1}`` for t = 0..a_n, with their errors.

    The errors come from ``Delta_{n,t} = Delta_{n-2} - t Delta_{n-1}``.
    """
    if not 1 <= n < table.s:
        raise IndexError(f"semiconvergent index n={n} out of range 1..{table.s - 1}")
    a_n = table.cf.a(n)
    x2, x1 = table.point(n - 2), table.point(n - 1)
    d2, d1 = table.delta(n - 2), table.delta(n - 1)
    return [
        Semiconvergent(n, t, LatticePoint(x2.Q + t * x1.Q, x2.P + t * x1.P), d2 - t * d1)
        for t in range(a_n + 1)
    ]


@dataclass
class CheckReport:
    name: str
    passed: bool = True
    failure: Optional[dict] = None
    notes: list[str] = field(default_factory=list)

    def fail(self, **payload) -> "CheckReport":
        if self.passed:
            self.passed = False
            self.failure = payload
        return self

    def to_json(self) -> dict:
        out = {"name": self.name, "passed": self.passed}
        if self.failure is not None:
            out["counterexample"] = self.failure
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def check_facts(table: ConvergentTable) -> CheckReport:
    """Basic convergent facts: Q_n increasing, errors alternating and shrinking,
    and the determinant identity ``Q_n P_{n-1} - Q_{n-1} P_n = (-1)^n``."""
    rep = CheckReport("convergent_facts")
    xi, s = table.xi, table.s
    if (table.Q(-1), table.P(-1), table.Q(0), table.P(0)) != (0, 1, 1, 0):
        return rep.fail(fact="initial", values=[table.Q(-1), table.P(-1), table.Q(0), table.P(0)])
    for n in range(1, s):
        if not table.Q(n) > table.Q(n - 1):
            return rep.fail(fact="i", n=n, Q_prev=str(table.Q(n - 1)), Q=str(table.Q(n)))
    signed = [table.Q(n) * xi - table.P(n) for n in range(-1, s)]
    for i in range(1, len(signed)):
        prev, cur = signed[i - 1], signed[i]
        last = i == len(signed) - 1
        if not abs(cur) < abs(prev):
            return rep.fail(fact="ii", n=i - 1, detail="not strictly decreasing")
        if cur == 0 and not last:
            return rep.fail(fact="ii", n=i - 1, detail="zero before the last term")
        if cur != 0 and (cur > 0) == (prev > 0):
            return rep.fail(fact="ii", n=i - 1, detail="signs do not alternate")
    if signed[-1] != 0:
        return rep.fail(fact="ii", detail="last error of a rational is not zero")
    for n in range(0, s):
        d = table.Q(n) * table.P(n - 1) - table.Q(n - 1) * table.P(n)
        if d != (-1) ** n:
            return rep.fail(fact="iii", n=n, det=d)
    return rep


def check_delta_formula(table: ConvergentTable) -> CheckReport:
    rep = CheckReport("delta_linear_formula")
    for n in range(1, table.s):
        for sc in semiconvergents(table, n):
            direct = sc.point.error(table.xi)
            if sc.delta != direct or sc.delta < 0:
                return rep.fail(n=n, t=sc.t, formula=str(sc.delta), direct=str(direct))
    return rep


def check_semiconvergent_chains(table: ConvergentTable, n: int) -> CheckReport:
    """Check the chains

        Q_{n,0} = Q_{n-2} < Q_{n-1} <= Q_{n,1} < ... < Q_{n,a_n} = Q_n
        Delta_{n,a_n} = Delta_n < Delta_{n-1} <= Delta_{n,a_n-1} < ... < Delta_{n,0} = Delta_{n-2}

    together with the equality cases: ``Q_{n,1} = Q_{n-1}`` iff n = 1, and
    ``Delta_{n-1} = Delta_{n,a_n-1}`` iff n = s-1 (finite expansion).
    """
    rep = CheckReport(f"semiconvergent_chains[n={n}]")
    sc = semiconvergents(table, n)
    a = len(sc) - 1
    Qt = [x.point.Q for x in sc]
    Dt = [x.delta for x in sc]

    if Qt[0] != table.Q(n - 2) or Qt[a] != table.Q(n):
        return rep.fail(chain="Q", detail="endpoints")
    if not table.Q(n - 2) < table.Q(n - 1):
        return rep.fail(chain="Q", detail="Q_{n-2} < Q_{n-1}")
    if not table.Q(n - 1) <= Qt[1]:
        return rep.fail(chain="Q", detail="Q_{n-1} <= Q_{n,1}")
    for t in range(1, a):
        if not Qt[t] < Qt[t + 1]:
            return rep.fail(chain="Q", detail=f"Q_{{n,{t}}} < Q_{{n,{t + 1}}}")
    q_eq = table.Q(n - 1) == Qt[1]
    if q_eq != (n == 1):
        return rep.fail(chain="Q", detail="equality Q_{n,1} = Q_{n-1} iff n = 1")
    if q_eq:
        rep.notes.append("Q_{n,1} = Q_{n-1}")

    if Dt[a] != table.delta(n) or Dt[0] != table.delta(n - 2):
        return rep.fail(chain="Delta", detail="endpoints")
    if not table.delta(n) < table.delta(n - 1):
        return rep.fail(chain="Delta", detail="Delta_n < Delta_{n-1}")
    if not table.delta(n - 1) <= Dt[a - 1]:
        return rep.fail(chain="Delta", detail="Delta_{n-1} <= Delta_{n,a_n-1}")
    for t in range(0, a - 1):
        if not Dt[t + 1] < Dt[t]:
            return rep.fail(chain="Delta", detail=f"Delta_{{n,{t + 1}}} < Delta_{{n,{t}}}")
    d_eq = table.delta(n - 1) == Dt[a - 1]
    if d_eq != (n == table.s - 1):
        return rep.fail(chain="Delta", detail="equality Delta_{n-1} = Delta_{n,a_n-1} iff n = s-1")
    if d_eq:
        rep.notes.append("Delta_{n-1} = Delta_{n,a_n-1}")
    return rep
