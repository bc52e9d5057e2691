"""Dense complex polynomials in ascending-power form.

Only what the solver needs: Horner evaluation (scalar and vectorised),
derivatives, ring operations, a numerical gcd degree used to validate
coprimality, and an Aberth-Ehrlich all-roots solver.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import BothZero, NoConvergence

ZERO_TRIM = 1e-12
GCD_TOL = 1e-8
ROOT_TOL = 1e-10
ROOT_MAX_ITERS = 500
NEWTON_POLISH_STEPS = 3


def _trim(coeffs: Sequence[complex], rel: float) -> tuple[complex, ...]:
    coeffs = [complex(c) for c in coeffs]
    if not coeffs:
        return ()
    scale = max(abs(c) for c in coeffs)
    if scale == 0.0:
        return ()
    cut = rel * scale
    end = len(coeffs)
    while end > 0 and abs(coeffs[end - 1]) <= cut:
        end -= 1
    return tuple(coeffs[:end])


@dataclass(frozen=True, init=False)
class ComplexPoly:
    """Polynomial sum(coeffs[k] * z**k); the zero polynomial has no coefficients."""

    coeffs: tuple[complex, ...]

    def __init__(self, coeffs: Iterable[complex] = (), trim: float = ZERO_TRIM):
        object.__setattr__(self, "coeffs", _trim(list(coeffs), trim))

    @classmethod
    def constant(cls, c: complex) -> "ComplexPoly":
        return cls([c])

    @classmethod
    def from_roots(cls, roots: Iterable[complex], lead: complex = 1.0) -> "ComplexPoly":
        out = cls([lead])
        for r in roots:
            out = out * cls([-r, 1.0])
        return out

    @property
    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    @property
    def degree(self) -> int:
        # the zero polynomial reports 0 and is told apart through is_zero
        return max(len(self.coeffs) - 1, 0)

    @property
    def lead(self) -> complex:
        return self.coeffs[-1] if self.coeffs else 0j

    @property
    def norm(self) -> float:
        return max((abs(c) for c in self.coeffs), default=0.0)

    @property
    def is_real(self) -> bool:
        scale = self.norm
        return all(abs(c.imag) <= 1e-14 * max(scale, 1e-300) for c in self.coeffs)

    def __call__(self, z):
        if isinstance(z, np.ndarray):
            return _horner_array(self.coeffs, z)
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def value_and_derivative(self, z: complex) -> tuple[complex, complex]:
        p = 0j
        dp = 0j
        for c in reversed(self.coeffs):
            dp = dp * z + p
            p = p * z + c
        return p, dp

    def derivative(self) -> "ComplexPoly":
        return ComplexPoly([k * c for k, c in enumerate(self.coeffs)][1:], trim=0.0)

    def taylor(self, a: complex, order: int | None = None) -> list[complex]:
        """Coefficients of s -> self(a + s), truncated after `order`."""
        work = list(self.coeffs)
        n = len(work)
        out = []
        limit = n if order is None else min(n, order + 1)
        for k in range(limit):
            acc = 0j
            for j in range(n - 1, k - 1, -1):
                acc = acc * a + work[j]
                work[j] = acc
            out.append(work[k])
        if order is not None:
            out.extend([0j] * (order + 1 - len(out)))
        return out

    def compose_power(self, k: int) -> "ComplexPoly":
        """Return z -> self(z**k)."""
        if k < 1:
            raise ValueError("power must be positive")
        out = [0j] * (k * self.degree + 1) if self.coeffs else []
        for j, c in enumerate(self.coeffs):
            out[j * k] = c
        return ComplexPoly(out, trim=0.0)

    def scale_variable(self, delta: complex) -> "ComplexPoly":
        """Return z -> self(delta * z)."""
        return ComplexPoly([c * delta**j for j, c in enumerate(self.coeffs)], trim=0.0)

    def reversed(self, degree: int | None = None) -> "ComplexPoly":
        """Return u -> u**degree * self(1/u)."""
        degree = self.degree if degree is None else degree
        padded = list(self.coeffs) + [0j] * (degree + 1 - len(self.coeffs))
        return ComplexPoly(padded[::-1], trim=0.0)

    def __add__(self, other):
        other = _coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0j] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0j] * (n - len(other.coeffs))
        return ComplexPoly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return ComplexPoly([-c for c in self.coeffs], trim=0.0)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return ComplexPoly([c * other for c in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return ComplexPoly()
        out = [0j] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return ComplexPoly(out, trim=0.0)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"ComplexPoly({list(self.coeffs)!r})"


def _coerce(x) -> ComplexPoly:
    if isinstance(x, ComplexPoly):
        return x
    return ComplexPoly([x])


def _horner_array(coeffs: Sequence[complex], z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if not coeffs:
        return np.zeros_like(z)
    acc = np.full_like(z, coeffs[-1])
    for c in reversed(coeffs[:-1]):
        acc = acc * z + c
    return acc


def derivative(poly: ComplexPoly) -> ComplexPoly:
    return poly.derivative()


def divmod_poly(a: ComplexPoly, b: ComplexPoly) -> tuple[ComplexPoly, ComplexPoly]:
    if b.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    rem = list(a.coeffs)
    db = b.degree
    quot = [0j] * max(len(rem) - db, 1)
    for k in range(len(rem) - 1 - db, -1, -1):
        c = rem[k + db] / b.lead
        quot[k] = c
        for j, bj in enumerate(b.coeffs):
            rem[k + j] -= c * bj
    return ComplexPoly(quot, trim=0.0), ComplexPoly(rem[:db], trim=0.0)


def gcd_degree(a: ComplexPoly, b: ComplexPoly, tol: float = GCD_TOL) -> int:
    """Degree of the numerical gcd via a normalised Euclidean remainder sequence."""
    if a.is_zero and b.is_zero:
        raise BothZero("gcd of two zero polynomials is undefined")
    if a.is_zero:
        return b.degree
    if b.is_zero:
        return a.degree
    a = ComplexPoly([c / a.norm for c in a.coeffs])
    b = ComplexPoly([c / b.norm for c in b.coeffs])
    if a.degree < b.degree:
        a, b = b, a
    while True:
        if b.degree == 0:
            return 0
        _, r = divmod_poly(a, b)
        r = ComplexPoly(r.coeffs, trim=0.0)
        # remainder small relative to the (unit-norm) dividend counts as zero
        r = ComplexPoly(r.coeffs, trim=tol) if r.norm > tol else ComplexPoly()
        if r.is_zero:
            return b.degree
        a, b = b, ComplexPoly([c / r.norm for c in r.coeffs])


def _backward_scale(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    return _horner_array(list(np.abs(coeffs).astype(complex)), np.abs(z)).real


def roots(poly: ComplexPoly, tol: float = ROOT_TOL, max_iters: int = ROOT_MAX_ITERS) -> list[complex]:
    """All `degree` roots by Aberth-Ehrlich simultaneous iteration plus Newton polishing.

    Multiple roots come back as tight clusters of copies.
    """
    if poly.is_zero or poly.degree < 1:
        raise ValueError("roots needs a polynomial of degree >= 1")
    coeffs = list(poly.coeffs)
    zeros_at_origin = 0
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
        zeros_at_origin += 1
    found = [0j] * zeros_at_origin
    n = len(coeffs) - 1
    if n == 0:
        return found
    a = np.array(coeffs, dtype=complex) / coeffs[-1]
    if n == 1:
        return found + [complex(-a[0])]
    da = a[1:] * np.arange(1, n + 1)

    radius = abs(a[0]) ** (1.0 / n)
    if radius == 0.0:
        radius = 1.0
    z = radius * np.exp(1j * (2 * np.pi * np.arange(n) / n + 0.4))
    active = np.ones(n, dtype=bool)
    eps = np.finfo(float).eps
    for _ in range(max_iters):
        p = _horner_array(list(a), z)
        dp = _horner_array(list(da), z)
        bound = 4 * eps * _backward_scale(a, z)
        active &= np.abs(p) > bound
        if not active.any():
            break
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p / dp
            step = ratio / (1.0 - ratio * inv.sum(axis=1))
        step = np.where(np.isfinite(step), step, 0.0)
        small = np.abs(step) <= 1e-16 * np.maximum(np.abs(z), 1e-300)
        step[~active] = 0.0
        z = z - step
        active &= ~small
        if not active.any():
            break

    poly_a = ComplexPoly(list(a), trim=0.0)
    out = []
    for r in z:
        r = complex(r)
        for _ in range(NEWTON_POLISH_STEPS):
            pv, dv = poly_a.value_and_derivative(r)
            if dv == 0:
                break
            cand = r - pv / dv
            if abs(poly_a(cand)) < abs(pv):
                r = cand
            else:
                break
        out.append(r)
    res = np.abs(_horner_array(list(a), np.array(out)))
    scale = _backward_scale(a, np.array(out))
    if np.any(res > tol * np.maximum(scale, 1e-300)):
        raise NoConvergence(f"Aberth iteration did not reach tol={tol} in {max_iters} iterations")
    return found + out


def cluster_roots(values: Sequence[complex], rtol: float = 1e-5) -> list[tuple[complex, int]]:
    """Group numerically coincident roots into (centre, multiplicity) pairs."""
    groups: list[list[complex]] = []
    for v in sorted(values, key=lambda c: (c.real, c.imag)):
        for g in groups:
            centre = sum(g) / len(g)
            if abs(v - centre) <= rtol * (1.0 + abs(centre)) * len(g):
                g.append(v)
                break
        else:
            groups.append([v])
    return [(complex(sum(g) / len(g)), len(g)) for g in groups]


def series_divide(num: Sequence[complex], den: Sequence[complex], order: int) -> list[complex]:
    """Power-series coefficients of num/den up to s**order; den[0] must be nonzero."""
    out = []
    for k in range(order + 1):
        acc = num[k] if k < len(num) else 0j
        for j in range(1, k + 1):
            if j < len(den):
                acc -= den[j] * out[k - j]
        out.append(acc / den[0])
    return out


def unit_phase(c: complex) -> float:
    return math.atan2(c.imag, c.real) if c != 0 else 0.0


__all__ = [
    "ComplexPoly",
    "derivative",
    "divmod_poly",
    "gcd_degree",
    "roots",
    "cluster_roots",
    "series_divide",
    "unit_phase",
]
