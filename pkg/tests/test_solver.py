from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.optimize import root
from scipy.special import lambertw

from logroot.corpus import build_example, example
from logroot.equation import Orientation, eval_g, new_problem
from logroot.errors import Diverged, HitSingularity
from logroot.report import emit_report
from logroot.solver import SolveParams, circle, refine_newton, solve, winding_number

LN2 = math.log(2)
EX1 = new_problem([1], [2 * LN2, -2 * LN2])


def test_newton_polishes_a_rough_guess():
    sol = refine_newton(EX1, 0.48 + 0.01j)
    assert sol.z == pytest.approx(0.5, abs=1e-12)
    assert sol.residual < 1e-10
    assert sol.orientation == Orientation.NEGATIVE


def test_newton_refuses_singular_start():
    with pytest.raises(HitSingularity):
        refine_newton(EX1, 0j)
    assert issubclass(HitSingularity, Diverged)


def test_winding_numbers_match_orientation():
    assert winding_number(EX1, circle(1.0, 0.05)) == 1
    assert winding_number(EX1, circle(0.5, 0.05)) == -1
    assert winding_number(EX1, circle(3.0 + 3j, 0.5)) == 0
    # a polygon works as well as a parametrised curve
    square = [0.45 - 0.05j, 0.55 - 0.05j, 0.55 + 0.05j, 0.45 + 0.05j]
    assert winding_number(EX1, square) == -1


def test_omega_constant():
    # log|z| + z = 0 has the single solution W(1)
    rep = solve(new_problem([1], [0, 1]))
    assert rep.N == 1
    assert rep.solutions[0].z == pytest.approx(complex(lambertw(1).real), abs=1e-12)


def test_report_fields_for_fourth_example():
    rep = solve(build_example(example("ex4")), strict=True)
    assert rep.ok
    assert (rep.N, rep.N_plus, rep.N_minus, rep.N_degenerate) == (8, 5, 3, 0)
    assert rep.degree_winding == rep.d == 2
    assert rep.bounds_ok == (True, True)
    assert rep.certificate_count >= 2
    assert all(s.winding in (1, -1) for s in rep.solutions)
    assert rep.box_radius > max(abs(s.z) for s in rep.solutions)


def _brute_force(prob, box, n=24):
    """Independent oracle: scipy's hybrid root finder from a grid of starts."""

    def fun(v):
        z = complex(v[0], v[1])
        try:
            g = eval_g(prob, z) - prob.w
        except Exception:
            return [1e6, 1e6]
        return [g.real, g.imag]

    found = []
    for x in np.linspace(-box, box, n):
        for y in np.linspace(-box, box, n):
            res = root(fun, [x, y], method="hybr", tol=1e-14)
            z = complex(*res.x)
            if res.success and abs(z) > 1e-6 and abs(complex(*fun(res.x))) < 1e-10:
                if all(abs(z - f) > 1e-6 for f in found):
                    found.append(z)
    return found


@pytest.mark.parametrize("seed", range(4))
def test_no_solution_missed_against_brute_force(seed):
    rng = np.random.default_rng(seed)
    m, n = 2, 2
    p = rng.uniform(-1, 1, m + 1) + 1j * rng.uniform(-1, 1, m + 1)
    q = rng.uniform(-1, 1, n + 1) + 1j * rng.uniform(-1, 1, n + 1)
    prob = new_problem(p, q, w=complex(*rng.uniform(-0.5, 0.5, 2)))
    rep = solve(prob)
    assert rep.ok
    mine = [s.z for s in rep.solutions]
    for z in _brute_force(prob, 3.0):
        assert min(abs(z - s) for s in mine) < 1e-7


def test_jittered_seeds_give_the_same_solutions():
    prob = build_example(example("ex5"))
    base = solve(prob)
    shaken = solve(prob, SolveParams(seed_jitter=1e-4, jitter_seed=3))
    assert shaken.N == base.N
    for a, b in zip(base.solutions, shaken.solutions):
        assert abs(a.z - b.z) < 1e-10 * (1 + abs(a.z))


def test_thread_count_does_not_change_the_report():
    prob = build_example(example("ex4", m=2))
    one = emit_report(solve(prob, SolveParams(threads=1)))
    four = emit_report(solve(prob, SolveParams(threads=4)))
    assert one == four


def test_degenerate_solution_is_flagged():
    # |1 + z f'(z)| = 1 makes the jacobian vanish; aim w at such a point
    z0 = (1 + 1j) / (4 * LN2)
    prob = EX1.with_w(eval_g(EX1, z0))
    rep = solve(prob)
    assert rep.N_degenerate == 1
    # a double root is only resolvable to about sqrt(eps) in z
    assert rep.solutions[0].z == pytest.approx(z0, abs=1e-5)
    assert rep.perturbed_counts is not None
    pc = rep.perturbed_counts
    assert pc["N_degenerate"] == 0
    assert pc["N_plus"] - pc["N_minus"] == prob.d


def test_escalation_grid_is_harmless():
    prob = build_example(example("ex2"))
    rep = solve(prob, SolveParams(escalations=0))
    assert rep.ok and rep.escalations == 0 and rep.N == 5
