"""Continued fractions of rationals recovered from the parametric geometry
of numbers: the combined graph of the two successive minima of the body
``C_xi(e^q)`` and its decoding back into partial quotients."""

from .cf import CFExpansion, ConvergentTable, convergents, expand, normalize, semiconvergents
from .envelope import CombinedGraph, build_graph, decode
from .exact import LatticePoint, LogCoord, Rational, rational_format, rational_parse
from .oracle import brute_minima
from .render import RenderConfig, render_svg
from .trajectory import Trajectory, breakpoint, crossing
from .verify import VerifyReport, fuzz, verify_one

__all__ = [
    "CFExpansion", "ConvergentTable", "convergents", "expand", "normalize", "semiconvergents",
    "CombinedGraph", "build_graph", "decode",
    "LatticePoint", "LogCoord", "Rational", "rational_format", "rational_parse",
    "brute_minima", "RenderConfig", "render_svg",
    "Trajectory", "breakpoint", "crossing",
    "VerifyReport", "fuzz", "verify_one",
]
