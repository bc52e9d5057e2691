"""The log-rational map g(z) = log|z|^2 + 2 q(z)/p(z) and its companions.

A :class:`Problem` is an immutable, validated pair of coprime polynomials
together with the target value ``w``.  Everything downstream (curve tracing,
the solver and the fixed-point dynamics) reads its maps from here.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AtSingularity, BothConstant, NotCoprime, ZeroPolynomial
from .poly import GCD_TOL, ComplexPoly, cluster_roots, gcd_degree, roots

EXCLUSION = 1e-9
DEGENERATE_TOL = 1e-8


class Orientation(str, enum.Enum):
    POSITIVE = "Positive"
    NEGATIVE = "Negative"
    DEGENERATE = "Degenerate"


@dataclass(frozen=True)
class Jet:
    value: complex
    dz: complex
    dzbar: complex
    jacobian: float


@dataclass(frozen=True)
class Problem:
    p: ComplexPoly
    q: ComplexPoly
    w: complex = 0j
    m: int = field(init=False)
    n: int = field(init=False)
    d: int = field(init=False)
    pole_list: tuple = field(init=False)
    distinct_poles: tuple = field(init=False)
    real_coefficients: bool = field(init=False)
    dF_num: ComplexPoly = field(init=False, repr=False)
    h_crit_num: ComplexPoly = field(init=False, repr=False)

    def __post_init__(self):
        m, n = self.p.degree, self.q.degree
        set_ = lambda k, v: object.__setattr__(self, k, v)  # noqa: E731
        set_("w", complex(self.w))
        set_("m", m)
        set_("n", n)
        set_("d", max(m, n))
        poles = tuple(roots(self.p)) if m >= 1 else ()
        set_("pole_list", poles)
        set_("distinct_poles", tuple(cluster_roots(poles)))
        set_("real_coefficients", self.p.is_real and self.q.is_real)
        dq, dp = self.q.derivative(), self.p.derivative()
        # F' = dF_num / p^2 with F = q/p
        dF_num = dq * self.p - self.q * dp
        set_("dF_num", dF_num)
        z = ComplexPoly([0, 1])
        set_("h_crit_num", self.p * self.p + z * dF_num * 2.0)

    # --- scalar maps -------------------------------------------------------

    def check_admissible(self, z: complex) -> None:
        if abs(z) <= EXCLUSION:
            raise AtSingularity(f"z={z!r} is within the exclusion radius of 0")
        for a in self.pole_list:
            if abs(z - a) <= EXCLUSION * (1.0 + abs(a)):
                raise AtSingularity(f"z={z!r} is within the exclusion radius of pole {a!r}")

    def F(self, z):
        return self.q(z) / self.p(z)

    def f(self, z):
        return 2.0 * self.q(z) / self.p(z)

    def f_prime(self, z):
        pz = self.p(z)
        return 2.0 * self.dF_num(z) / (pz * pz)

    @property
    def F_at_infinity(self) -> complex | None:
        """Limit of q/p at infinity, None when it is infinite."""
        if self.n > self.m:
            return None
        if self.n < self.m:
            return 0j
        return self.q.lead / self.p.lead

    def with_w(self, w: complex) -> "Problem":
        return Problem(self.p, self.q, w)


def new_problem(p, q, w: complex = 0j, gcd_tol: float = GCD_TOL) -> Problem:
    """Validate (p, q) and build a Problem."""
    p = p if isinstance(p, ComplexPoly) else ComplexPoly(p)
    q = q if isinstance(q, ComplexPoly) else ComplexPoly(q)
    if p.is_zero:
        raise ZeroPolynomial("p is the zero polynomial; the equation degenerates")
    if q.is_zero:
        raise ZeroPolynomial("q is the zero polynomial")
    if p.degree == 0 and q.degree == 0:
        raise BothConstant("p and q are both constant")
    g = gcd_degree(p, q, gcd_tol)
    if g > 0:
        raise NotCoprime(f"p and q share a common factor of degree {g}")
    return Problem(p, q, w)


def eval_g(prob: Problem, z: complex) -> complex:
    prob.check_admissible(z)
    return 2.0 * math.log(abs(z)) + 2.0 * prob.q(z) / prob.p(z)


def eval_g_array(prob: Problem, z: np.ndarray) -> np.ndarray:
    """Vectorised g without admissibility checks (non-finite near singularities)."""
    with np.errstate(all="ignore"):
        return 2.0 * np.log(np.abs(z)) + 2.0 * prob.q(z) / prob.p(z)


def jet_g(prob: Problem, z: complex) -> Jet:
    prob.check_admissible(z)
    pz = prob.p(z)
    value = 2.0 * math.log(abs(z)) + 2.0 * prob.q(z) / pz - prob.w
    dz = 1.0 / z + 2.0 * prob.dF_num(z) / (pz * pz)
    dzbar = 1.0 / z.conjugate()
    jac = abs(dz) ** 2 - abs(dzbar) ** 2
    return Jet(value, dz, dzbar, jac)


def orientation(prob: Problem, z: complex, degenerate_tol: float = DEGENERATE_TOL) -> Orientation:
    jet = jet_g(prob, z)
    return classify_jet(jet, degenerate_tol)


def classify_jet(jet: Jet, degenerate_tol: float = DEGENERATE_TOL) -> Orientation:
    scale = abs(jet.dz) ** 2 + abs(jet.dzbar) ** 2
    if jet.jacobian > degenerate_tol * scale:
        return Orientation.POSITIVE
    if jet.jacobian < -degenerate_tol * scale:
        return Orientation.NEGATIVE
    return Orientation.DEGENERATE


def eval_h(prob: Problem, z: complex) -> complex:
    """h(z) = exp(-f(z) + w) / z; non-finite on overflow."""
    prob.check_admissible(z)
    expo = -prob.f(z) + prob.w
    if expo.real > 700.0:
        return complex(math.inf, math.inf)
    return cmath.exp(expo) / z


def h_prime(prob: Problem, z: complex) -> complex:
    prob.check_admissible(z)
    expo = -prob.f(z) + prob.w
    if expo.real > 700.0:
        return complex(math.inf, math.inf)
    return -cmath.exp(expo) / (z * z) * (1.0 + z * prob.f_prime(z))


def h_critical_points(prob: Problem) -> list[complex]:
    """Zeros of 1 + z f'(z), i.e. roots of p^2 + 2z(q'p - qp') away from the poles."""
    num = prob.h_crit_num
    if num.is_zero or num.degree == 0:
        return []
    out = []
    for c in roots(num):
        if any(abs(c - a) <= 1e-8 * (1.0 + abs(a)) for a in prob.pole_list):
            continue
        out.append(c)
    return sorted(out, key=lambda c: (round(c.real, 12), round(c.imag, 12)))


def F_critical_points(prob: Problem) -> list[tuple[complex, int]]:
    """Critical points of F = q/p in the plane as (location, multiplicity of F')."""
    num = prob.dF_num
    if num.is_zero or num.degree == 0:
        return []
    return cluster_roots(roots(num))
