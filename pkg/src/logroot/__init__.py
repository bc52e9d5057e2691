"""Solutions of p(z) log|z| + q(z) = 0 and their topological bookkeeping.

The equation is studied through g(z) = log|z|^2 + 2 q(z)/p(z): every
solution of g = w lies on a level curve of q/p, sign changes along those
curves locate the solutions, and winding numbers check the count against
the degree d = max(deg p, deg q).
"""
from __future__ import annotations

from .corpus import ExampleSpec, build_example, example, extremal_example, lower_extremal
from .curves import TraceParams, certificate, junctions, trace
from .dynamics import FixedPointRecord, attracting_fixed_points, iterate_to_fixed_point, singular_values
from .equation import Orientation, Problem, eval_g, jet_g, new_problem, orientation
from .errors import LogRootError
from .poly import ComplexPoly, gcd_degree, roots
from .solver import Solution, SolveParams, SolveReport, refine_newton, solve, winding_number

__all__ = [
    "ComplexPoly",
    "ExampleSpec",
    "FixedPointRecord",
    "LogRootError",
    "Orientation",
    "Problem",
    "Solution",
    "SolveParams",
    "SolveReport",
    "TraceParams",
    "attracting_fixed_points",
    "build_example",
    "certificate",
    "eval_g",
    "example",
    "extremal_example",
    "gcd_degree",
    "iterate_to_fixed_point",
    "jet_g",
    "junctions",
    "lower_extremal",
    "new_problem",
    "orientation",
    "refine_newton",
    "roots",
    "singular_values",
    "solve",
    "trace",
    "winding_number",
]
