"""Show the lattice point that sits on the edge of the first window for xi = 1/a.

For n = 1 the window is ``0 <= Q <= Q_1 = a`` and ``|Q xi - P| <= Delta_{-1} = 1``.
Besides the semiconvergents (t, 1), t = 0..a, it holds (a, 2) = x_1 + x_{-1},
whose error is exactly 1 and which is independent of x_0 = (1, 0).
"""

import argparse
from fractions import Fraction

from cfpgn.cf import semiconvergents, table_for
from cfpgn.exact import LatticePoint
from cfpgn.oracle import check_window_characterization


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("a", type=int, nargs="*", default=[2, 3, 5, 10])
    args = ap.parse_args()
    for a in args.a:
        xi = Fraction(1, a)
        table = table_for(xi)
        extra = LatticePoint(a, 2)
        semis = [sc.point for sc in semiconvergents(table, 1)]
        rep = check_window_characterization(xi, 1)
        print(f"xi = 1/{a}: semiconvergents {[tuple(p) for p in semis]}")
        print(f"  (a, 2): error {extra.error(xi)}, det with x_0 {extra.det(table.point(0))}, "
              f"scan extra {rep.failure['extra'] if rep.failure else []}")


if __name__ == "__main__":
    main()
