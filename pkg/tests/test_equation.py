from __future__ import annotations

import cmath
import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from logroot.equation import (
    F_critical_points,
    Orientation,
    eval_g,
    eval_g_array,
    eval_h,
    h_critical_points,
    h_prime,
    jet_g,
    new_problem,
    orientation,
)
from logroot.errors import AtSingularity, BothConstant, NotCoprime, ZeroPolynomial
from logroot.poly import ComplexPoly

LN2 = math.log(2)
EX1 = new_problem([1], [2 * LN2, -2 * LN2])
EX2 = new_problem([1, 8], [6 * LN2])
EX4 = new_problem([1, 1], (ComplexPoly([1.015, -0.015]) * ComplexPoly([-1, 1])) * (-3 * LN2))


def test_validation_errors():
    with pytest.raises(ZeroPolynomial):
        new_problem([0], [1, 1])
    with pytest.raises(ZeroPolynomial):
        new_problem([1, 1], [])
    with pytest.raises(BothConstant):
        new_problem([2], [1j])
    with pytest.raises(NotCoprime):
        new_problem([0, 1], [0, 2])
    with pytest.raises(NotCoprime):
        new_problem(ComplexPoly.from_roots([1, 2]), ComplexPoly.from_roots([2, 3j]))


def test_problem_fields():
    assert (EX4.m, EX4.n, EX4.d) == (1, 2, 2)
    assert EX4.pole_list == pytest.approx([-1])
    assert EX4.real_coefficients
    assert EX1.F_at_infinity is None
    assert new_problem([1, 2], [3, 4]).F_at_infinity == pytest.approx(2)
    assert new_problem([1, 2], [3]).F_at_infinity == 0


def test_known_solutions_of_first_example():
    for z in (1.0, 0.5, -0.191666):
        assert abs(eval_g(EX1, z)) < 1e-4
    assert abs(eval_g(EX1, 1.0)) < 1e-15


def test_singularities_are_rejected():
    with pytest.raises(AtSingularity):
        eval_g(EX1, 0j)
    with pytest.raises(AtSingularity):
        eval_g(EX4, -1 + 1e-12)
    with pytest.raises(AtSingularity):
        eval_h(EX2, -0.125)


def test_array_evaluation_matches_scalar():
    z = np.array([0.3 + 1j, -2 - 0.5j, 4j])
    assert np.allclose(eval_g_array(EX4, z), [eval_g(EX4, complex(x)) for x in z])


def test_orientation_of_first_example():
    assert orientation(EX1, 1.0) == Orientation.POSITIVE
    assert orientation(EX1, 0.5) == Orientation.NEGATIVE
    # at z = 1 the jacobian is (|1 + z f'|^2 - 1)/|z|^2 with f' = -4 ln 2
    jet = jet_g(EX1, 1.0)
    assert jet.jacobian == pytest.approx((1 - 4 * LN2) ** 2 - 1)


finite = st.floats(-3, 3, allow_nan=False)


@settings(max_examples=150, deadline=None)
@given(finite, finite)
def test_wirtinger_jet_matches_finite_differences(x, y):
    z = complex(x, y)
    assume(abs(z) > 0.05 and abs(z + 1) > 0.05)
    jet = jet_g(EX4, z)
    h = 1e-6 * (1 + abs(z))
    gx = (eval_g(EX4, z + h) - eval_g(EX4, z - h)) / (2 * h)
    gy = (eval_g(EX4, z + 1j * h) - eval_g(EX4, z - 1j * h)) / (2 * h)
    scale = abs(jet.dz) + abs(jet.dzbar)
    assert abs(jet.dz - (gx - 1j * gy) / 2) <= 1e-5 * scale
    assert abs(jet.dzbar - (gx + 1j * gy) / 2) <= 1e-5 * scale


@settings(max_examples=100, deadline=None)
@given(finite, finite)
def test_jacobian_identity(x, y):
    z = complex(x, y)
    assume(abs(z) > 0.05 and abs(z + 1) > 0.05)
    jet = jet_g(EX4, z)
    fp = EX4.f_prime(z)
    assert jet.jacobian * abs(z) ** 2 == pytest.approx(abs(1 + z * fp) ** 2 - 1, rel=1e-9, abs=1e-9)


def test_h_is_fixed_at_solutions():
    # g(z) = 0 exactly when conj(h(z)) = z
    assert eval_h(EX1, 0.5).conjugate() == pytest.approx(0.5)
    assert eval_h(EX1, 1.0).conjugate() == pytest.approx(1.0)


def test_h_prime_matches_difference_quotient():
    for z in (0.4 + 0.3j, -2 + 1j, 3 - 0.5j):
        h = 1e-6
        approx = (eval_h(EX4, z + h) - eval_h(EX4, z - h)) / (2 * h)
        assert h_prime(EX4, z) == pytest.approx(approx, rel=1e-6)


def test_h_critical_points_against_sympy():
    z = sp.Symbol("z")
    # ex1: 1 + z f'(z) with f = 4 ln2 (1 - z)
    want = sp.nsolve(1 + z * sp.diff(4 * sp.log(2) * (1 - z), z), z, 0.3)
    assert h_critical_points(EX1) == pytest.approx([complex(want)])
    got = sorted(c.real for c in h_critical_points(EX2))
    f = 12 * sp.log(2) / (8 * z + 1)
    want = sorted(float(r) for r in sp.Poly(sp.numer(sp.together(1 + z * sp.diff(f, z))), z).nroots())
    assert got == pytest.approx(want, rel=1e-10)
    assert got == pytest.approx([0.0203, 0.7694], abs=1e-4)
    # never more than d + m of them
    assert len(h_critical_points(EX4)) <= EX4.d + EX4.m


def test_F_critical_points_of_fourth_example():
    crit = sorted(c.real for c, _ in F_critical_points(EX4))
    assert crit == pytest.approx([-12.718930, 10.718930], abs=1e-5)
    z = sp.Symbol("z")
    F = -3 * sp.log(2) * (1 - sp.Rational(15, 1000) * (z - 1)) * (z - 1) / (z + 1)
    want = sorted(float(r) for r in sp.solve(sp.diff(F, z), z))
    assert crit == pytest.approx(want, rel=1e-12)


def test_eval_h_overflow_is_not_finite():
    prob = new_problem([1, 1], [-500])
    val = eval_h(prob, -1 + 1e-3)
    assert not cmath.isfinite(val)
