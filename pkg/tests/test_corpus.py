from __future__ import annotations

import math

import mpmath as mp
import numpy as np
import pytest

from logroot.corpus import (
    IDS,
    build_example,
    example,
    extremal_example,
    lower_extremal,
    perturbed_example,
    search_phi,
)
from logroot.errors import BadParams, BothConstant, HypothesisFailed
from logroot.poly import ComplexPoly
from logroot.solver import solve


@pytest.mark.parametrize("id_", ["ex1", "ex2", "ex3-explicit", "ex4", "ex5"])
def test_base_cases_match_expected_points(id_):
    spec = example(id_)
    rep = solve(build_example(spec))
    assert rep.N == spec.expected_count
    zs = [s.z for s in rep.solutions]
    for z, tol in spec.expected_points:
        assert min(abs(z - s) for s in zs) < tol


def test_fifth_example_roots_against_mpmath():
    # the stored points, including the two sign-corrected ones, are genuine roots
    a, b = 0.015, 0.00185
    ln2 = mp.log(2)

    def g(x, y):
        z = mp.mpc(x, y)
        q = -3 * ln2 * (1 - a * (z - 1)) * (z - 1) * (1 + b * (z - 1))
        val = (z + 1) * mp.log(abs(z)) + q
        return [mp.re(val), mp.im(val)]

    for z0 in (-0.08289, complex(-8.6167, 10.2654)):
        z0 = complex(z0)
        root = mp.findroot(g, (z0.real, z0.imag))
        assert abs(complex(root[0], root[1]) - z0) < 1e-3


@pytest.mark.parametrize("id_,key,base_id", [("ex1", "n", "ex1"), ("ex3-explicit", "n", "ex3-explicit"), ("ex2", "m", "ex2")])
@pytest.mark.parametrize("k", [2, 3])
def test_substitution_law(id_, key, base_id, k):
    # the k-family solves the base equation in u = z^k, so each base root has k preimages
    base = [s.z for s in solve(build_example(example(base_id))).solutions]
    zs = [s.z for s in solve(build_example(example(id_, **{key: k}))).solutions]
    assert len(zs) == k * len(base)
    images = [z**k for z in zs]
    for u in base:
        hits = sum(1 for v in images if abs(v - u) < 1e-8 * (1 + abs(u)))
        assert hits == k


def test_bad_params():
    with pytest.raises(BadParams):
        example("ex7")
    with pytest.raises(BadParams):
        example("ex1", n=0)
    with pytest.raises(BadParams):
        example("ex2", m=1.5)
    with pytest.raises(BadParams):
        example("ex3", m=1, n=2)
    with pytest.raises(BadParams):
        example("ex6", p0=[1, 1])
    assert set(IDS) >= {"ex1", "ex6"}


def test_perturbed_family_keeps_five_m():
    for m, n in ((1, 1), (2, 1)):
        spec, prob = perturbed_example(m, n, seed=3)
        assert solve(prob).N == 5 * m
        assert spec.params["eta"] <= 1e-3


def test_hypothesis_failure_reports_location():
    # p0 has a root inside the unit disk
    with pytest.raises(HypothesisFailed) as info:
        lower_extremal(ComplexPoly([0.5, -1]), ComplexPoly([1j]), 1.0, 0.0, 1.0)
    assert info.value.z == pytest.approx(0.5)
    # a real ratio is as bad as it gets
    with pytest.raises(HypothesisFailed) as info:
        lower_extremal(ComplexPoly([1, 0.1]), ComplexPoly([2, 0.1]), 1.0, 0.0, 1.0)
    assert info.value.z is not None


def test_both_constant_is_rejected():
    with pytest.raises((BothConstant, BadParams)):
        lower_extremal(ComplexPoly([1]), ComplexPoly([1j]), 1.0, 0.0, 1.0)


def test_large_c_gives_d_solutions():
    p0 = ComplexPoly([1, 1])
    q0 = ComplexPoly([1j, 1])
    phi, margin = search_phi(p0, q0, 0.1)
    assert margin > 1e-2
    prob = lower_extremal(p0, q0, 0.1, phi, 100.0)
    assert solve(prob).N == prob.d == 1


def test_extremal_example_is_stable_in_c():
    spec = extremal_example(ComplexPoly([1, 0.3j, 0.2]), ComplexPoly([0.5j, -0.2, 0.1]))
    d = spec.expected_count
    for mult in (1, 2, 4):
        prm = dict(spec.params, c=spec.params["c"] * mult)
        assert solve(build_example(example("ex6", **prm))).N == d


def test_ex6_spec_round_trips_through_build():
    rng = np.random.default_rng(5)
    p0 = ComplexPoly(rng.uniform(-1, 1, 3) + 1j * rng.uniform(-1, 1, 3))
    q0 = ComplexPoly(rng.uniform(-1, 1, 2) + 1j * rng.uniform(-1, 1, 2))
    spec = extremal_example(p0, q0)
    prob = build_example(spec)
    assert prob.d == spec.expected_count == 2
    assert math.isfinite(spec.params["phi"])
