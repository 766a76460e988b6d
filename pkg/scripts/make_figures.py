"""Render the combined graphs of 0, 1/2, 3/7 (and 16/113 with trajectories) to SVG."""

import argparse
from fractions import Fraction
from pathlib import Path

from cfpgn.envelope import build_graph
from cfpgn.render import RenderConfig, render_svg

CASES = [
    ("zero", Fraction(0), RenderConfig(q_max=2.0)),
    ("half", Fraction(1, 2), RenderConfig()),
    ("three_sevenths", Fraction(3, 7), RenderConfig()),
    ("three_sevenths_trajectories", Fraction(3, 7), RenderConfig(show_trajectories=True)),
    ("pi_tail_trajectories", Fraction(16, 113), RenderConfig(show_trajectories=True)),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="figures", help="output directory")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, xi, cfg in CASES:
        path = out / f"{name}.svg"
        path.write_text(render_svg(build_graph(xi), cfg))
        print(f"{path}  xi={xi}")


if __name__ == "__main__":
    main()
