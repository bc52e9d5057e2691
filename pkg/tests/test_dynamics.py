from __future__ import annotations

import math

import pytest

from logroot.corpus import build_example, example
from logroot.dynamics import attracting_fixed_points, cross_check, iterate_to_fixed_point, singular_values
from logroot.equation import eval_h, h_critical_points, new_problem
from logroot.solver import SolveParams, solve

LN2 = math.log(2)
EX1 = new_problem([1], [2 * LN2, -2 * LN2])


def test_singular_value_of_first_example():
    c = 1 / (4 * LN2)
    assert h_critical_points(EX1) == pytest.approx([c])
    (v,) = singular_values(EX1)
    assert v == pytest.approx(math.exp(-4 * LN2 * (1 - c)) / c)
    assert v == pytest.approx(eval_h(EX1, c))


def test_first_example_has_one_attracting_fixed_point():
    fps = attracting_fixed_points(EX1)
    assert len(fps) == 1
    assert fps[0].z == pytest.approx(0.5, abs=1e-9)
    # |h'(1/2)| = |1 - 2 ln 2| / 1
    assert fps[0].multiplier_modulus == pytest.approx(abs(1 - 2 * LN2) * 2 * 0.5, rel=1e-6)


def test_second_example_counts():
    prob = build_example(example("ex2"))
    assert len(singular_values(prob)) == prob.d + prob.m
    fps = sorted(f.z.real for f in attracting_fixed_points(prob))
    negatives = sorted(s.z.real for s in solve(prob).solutions if s.orientation.name == "NEGATIVE")
    assert fps == pytest.approx(negatives, abs=1e-8)
    assert len(fps) == 2


def test_repelling_fixed_point_is_not_reached():
    # z = 1 repels: inside it the orbit falls to 1/2, outside it escapes
    assert iterate_to_fixed_point(EX1, 1.0 - 1e-4).z == pytest.approx(0.5, abs=1e-9)
    assert iterate_to_fixed_point(EX1, 1.0 + 1e-4j).z == pytest.approx(0.5, abs=1e-9)
    assert iterate_to_fixed_point(EX1, 1.0 + 1e-4) is None


def test_start_on_fixed_point_stops_at_once():
    rec = iterate_to_fixed_point(EX1, 0.5 + 0j)
    assert rec.z == pytest.approx(0.5)
    assert rec.iterations == 0


def test_escaping_orbit_returns_none():
    assert iterate_to_fixed_point(EX1, 50.0 + 0j, escape_radius=100.0) is None


def test_fifth_example_negative_multiplier_is_recovered():
    # the fixed point near -17.8 has a negative real multiplier; orbits
    # alternate sides while converging and must not be taken for a 2-cycle
    prob = build_example(example("ex5"))
    fps = [f.z for f in attracting_fixed_points(prob)]
    assert min(abs(z + 17.8054) for z in fps) < 1e-3


@pytest.mark.parametrize("id_", ["ex1", "ex2", "ex3-explicit", "ex4", "ex5"])
def test_cross_check_passes_on_corpus(id_):
    prob = build_example(example(id_))
    rep = solve(prob, SolveParams(dynamics=False))
    dc = cross_check(prob, rep)
    assert dc.fatou_ok, dc.notes
    assert all(dc.recovered)
    assert dc.n_minus <= prob.d + prob.m
    assert rep.N == 2 * rep.N_minus + prob.d


def test_seeded_runs_are_reproducible():
    prob = build_example(example("ex4"))
    a = [f.z for f in attracting_fixed_points(prob, seed=7)]
    b = [f.z for f in attracting_fixed_points(prob, seed=7)]
    assert a == b
